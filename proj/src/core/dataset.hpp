#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "core/stats.hpp"

namespace misfire {

struct Instance {
    std::vector<double> values;  // one per dataset feature, schema order
    std::size_t label = 0;       // index into class_names
};

// An ordered feature-vector collection sharing one feature schema. Class
// names are interned in first-appearance order; instances keep that order.
struct Dataset {
    std::vector<std::string> feature_names;
    std::vector<std::string> class_names;
    std::vector<Instance> instances;

    std::size_t n_features() const { return feature_names.size(); }
    std::size_t n_instances() const { return instances.size(); }

    std::size_t feature_index(std::string_view name) const;  // fails if unknown
    // Index of name in class_names, interning it if new.
    std::size_t intern_class(std::string_view name);
    std::vector<std::size_t> class_counts() const;

    // Appends an extracted window under the 13-feature schema.
    void append(const FeatureVector& fv);
};

// Empty dataset carrying the 13-feature schema.
Dataset make_feature_dataset();

// Comma-separated text with a header whose last column is `label`.
// With engine_labels_only, every label must be one of the five conditions.
Dataset read_dataset(const std::filesystem::path& path, bool engine_labels_only = false);
void write_dataset(const Dataset& d, const std::filesystem::path& path);

// Keeps the named features (in `keep` order); labels and instance order
// are untouched.
Dataset project(const Dataset& d, const std::vector<std::string>& keep);

struct FoldAssignment {
    std::size_t k = 0;
    std::vector<std::size_t> fold_of;  // per instance, in [0, k)
};

// Within each class, instances are shuffled by a seed-determined permutation
// and dealt round-robin, so per-class fold sizes differ by at most one.
FoldAssignment stratified_folds(const Dataset& d, std::size_t k, std::uint64_t seed);

} // namespace misfire

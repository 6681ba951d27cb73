#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "core/dataset.hpp"
#include "core/kstar.hpp"
#include "core/tree.hpp"

namespace misfire {

// Prediction counts, rows = true class, columns = predicted class.
struct ConfusionMatrix {
    std::vector<std::string> class_names;
    std::vector<std::vector<std::uint64_t>> counts;

    std::uint64_t total() const;
    std::uint64_t diagonal() const;
};

ConfusionMatrix make_confusion(std::vector<std::string> class_names);

double accuracy(const ConfusionMatrix& cm);                      // percent
std::vector<double> per_class_recall(const ConfusionMatrix& cm); // percent, row-wise

// Merges every non-normal class into a single "Fault" class (row/column 0;
// the normal class keeps its name at index 1).
ConfusionMatrix fault_vs_normal_collapse(const ConfusionMatrix& cm,
                                         std::string_view normal_class);

// Stratified k-fold cross-validation of a K* model; folds run concurrently
// and counts accumulate in fold order, so a fixed seed fixes the result.
ConfusionMatrix cross_validate(const Dataset& d, std::size_t k, double blend,
                               std::uint64_t seed);

// Train and test on the full dataset (debugging baseline).
ConfusionMatrix resubstitute(const Dataset& d, double blend);

struct SweepRow {
    std::size_t feature_count = 0;
    double accuracy = 0.0;  // percent
    std::vector<std::string> features;
};

struct SweepResult {
    std::vector<SweepRow> rows;
};

// Cross-validates the top-m ranked features for m = 1..|features|, reusing
// one fold seed so rows differ only in the feature subset.
SweepResult feature_sweep(const Dataset& d, const FeatureRanking& ranking,
                          std::size_t k, double blend, std::uint64_t seed);

} // namespace misfire

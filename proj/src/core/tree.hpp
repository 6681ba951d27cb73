#pragma once

#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "core/dataset.hpp"

namespace misfire {

// Class entropy in bits over nonzero counts; total must be >= 1.
double entropy(std::span<const std::size_t> class_counts);

struct SplitResult {
    double threshold = 0.0;
    double gain_ratio = 0.0;
    double info_gain = 0.0;
};

// Best binary split on one numeric feature: candidate thresholds are the
// midpoints between consecutive distinct sorted values, the winner maximizes
// information gain, ties break to the smaller threshold. A constant feature
// yields gain 0 with the constant value as sentinel threshold.
SplitResult best_split(const Dataset& d, std::string_view feature);

// Binary tree over numeric features: internal nodes test value <= threshold.
struct TreeNode {
    std::unique_ptr<TreeNode> left;   // null for leaves
    std::unique_ptr<TreeNode> right;
    std::size_t feature = 0;          // internal nodes only
    double threshold = 0.0;
    double info_gain = 0.0;           // gain of this split on the node's subset
    std::vector<std::size_t> class_counts;

    bool is_leaf() const { return left == nullptr; }
};

struct TreeConfig {
    std::size_t min_leaf = 2;
    std::size_t max_depth = 20;
};

// Top-down induction choosing the feature with maximum gain ratio among
// positive-information-gain splits. Stops on purity, depth, the absence of a
// positive-gain split, or a child smaller than min_leaf.
std::unique_ptr<TreeNode> build_tree(const Dataset& d, const TreeConfig& config = {});

// Majority class of the reached leaf; ties break to the lower class index.
std::size_t predict(const TreeNode& root, std::span<const double> values);

struct RankedFeature {
    std::string feature;
    double score_bits = 0.0;
};

struct FeatureRanking {
    std::vector<RankedFeature> entries;
};

// Features used by the tree come first, ordered by first appearance in
// breadth-first order and scored with the gain at that node; unused features
// follow, ordered by standalone root-level gain (descending, then schema
// order). The result is a permutation of the dataset's features.
FeatureRanking rank_features(const TreeNode& root, const Dataset& d);

// feature,score_bits rows under a two-column header.
FeatureRanking read_ranking(const std::filesystem::path& path);
void write_ranking(const FeatureRanking& ranking, const std::filesystem::path& path);

} // namespace misfire

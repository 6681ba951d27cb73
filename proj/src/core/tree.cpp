#include "core/tree.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <numeric>
#include <sstream>

#include "core/error.hpp"

namespace misfire {

namespace {

double entropy_of(double total, std::span<const std::size_t> counts) {
    double h = 0.0;
    for (std::size_t c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / total;
        h -= p * std::log2(p);
    }
    return h;
}

struct Scan {
    bool splittable = false;  // false when the feature is constant on the subset
    double threshold = 0.0;
    double info_gain = 0.0;
    double gain_ratio = 0.0;
};

// Exhaustive midpoint scan over one feature restricted to `subset`.
Scan scan_feature(const Dataset& d, std::size_t feature,
                  std::span<const std::size_t> subset) {
    const std::size_t n = subset.size();
    std::vector<std::pair<double, std::size_t>> order;  // (value, label)
    order.reserve(n);
    for (std::size_t idx : subset)
        order.emplace_back(d.instances[idx].values[feature], d.instances[idx].label);
    std::sort(order.begin(), order.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    Scan best;
    best.threshold = order.front().first;
    if (order.front().first == order.back().first) return best;  // constant

    const std::size_t n_classes = d.class_names.size();
    std::vector<std::size_t> total(n_classes, 0), left(n_classes, 0);
    for (const auto& [v, label] : order) ++total[label];
    const double h_parent = entropy_of(static_cast<double>(n), total);

    std::vector<std::size_t> right = total;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const auto& [v, label] = order[i];
        ++left[label];
        --right[label];
        if (v == order[i + 1].first) continue;
        double threshold = (v + order[i + 1].first) / 2.0;
        if (threshold >= order[i + 1].first) threshold = v;  // adjacent doubles

        const double nl = static_cast<double>(i + 1);
        const double nr = static_cast<double>(n - i - 1);
        const double gain = std::max(
            0.0, h_parent - (nl / static_cast<double>(n)) * entropy_of(nl, left) -
                     (nr / static_cast<double>(n)) * entropy_of(nr, right));
        if (!best.splittable || gain > best.info_gain) {
            const double pl = nl / static_cast<double>(n);
            const double pr = nr / static_cast<double>(n);
            const double split_entropy = -pl * std::log2(pl) - pr * std::log2(pr);
            best.splittable = true;
            best.threshold = threshold;
            best.info_gain = gain;
            best.gain_ratio = split_entropy > 0.0 ? gain / split_entropy : 0.0;
        }
    }
    return best;
}

std::unique_ptr<TreeNode> build_node(const Dataset& d, std::vector<std::size_t> subset,
                                     std::size_t depth, const TreeConfig& config) {
    auto node = std::make_unique<TreeNode>();
    node->class_counts.assign(d.class_names.size(), 0);
    for (std::size_t idx : subset) ++node->class_counts[d.instances[idx].label];

    const std::size_t present =
        static_cast<std::size_t>(std::count_if(node->class_counts.begin(),
                                               node->class_counts.end(),
                                               [](std::size_t c) { return c > 0; }));
    if (present <= 1 || depth >= config.max_depth || subset.size() < 2) return node;

    // Best gain-ratio split among features with positive information gain;
    // ties keep the earlier schema index, so induction is independent of
    // instance order.
    bool found = false;
    Scan best;
    std::size_t best_feature = 0;
    for (std::size_t f = 0; f < d.n_features(); ++f) {
        const Scan s = scan_feature(d, f, subset);
        if (!s.splittable || s.info_gain <= 0.0) continue;
        if (!found || s.gain_ratio > best.gain_ratio) {
            found = true;
            best = s;
            best_feature = f;
        }
    }
    if (!found) return node;

    std::vector<std::size_t> left_subset, right_subset;
    for (std::size_t idx : subset) {
        if (d.instances[idx].values[best_feature] <= best.threshold)
            left_subset.push_back(idx);
        else
            right_subset.push_back(idx);
    }
    if (left_subset.size() < config.min_leaf || right_subset.size() < config.min_leaf)
        return node;

    node->feature = best_feature;
    node->threshold = best.threshold;
    node->info_gain = best.info_gain;
    node->left = build_node(d, std::move(left_subset), depth + 1, config);
    node->right = build_node(d, std::move(right_subset), depth + 1, config);
    return node;
}

} // namespace

double entropy(std::span<const std::size_t> class_counts) {
    std::size_t total = 0;
    for (std::size_t c : class_counts) total += c;
    if (total == 0) fail(errc::invalid_argument, "entropy of all-zero counts");
    return entropy_of(static_cast<double>(total), class_counts);
}

SplitResult best_split(const Dataset& d, std::string_view feature) {
    const std::size_t f = d.feature_index(feature);
    if (d.n_instances() < 2)
        fail(errc::invalid_argument, "best_split needs at least 2 instances");
    std::vector<std::size_t> all(d.n_instances());
    std::iota(all.begin(), all.end(), 0);
    const Scan s = scan_feature(d, f, all);
    return {s.threshold, s.gain_ratio, s.info_gain};
}

std::unique_ptr<TreeNode> build_tree(const Dataset& d, const TreeConfig& config) {
    if (d.instances.empty()) fail(errc::invalid_argument, "cannot build a tree on an empty dataset");
    std::vector<std::size_t> all(d.n_instances());
    std::iota(all.begin(), all.end(), 0);
    return build_node(d, std::move(all), 0, config);
}

std::size_t predict(const TreeNode& root, std::span<const double> values) {
    const TreeNode* node = &root;
    while (!node->is_leaf())
        node = values[node->feature] <= node->threshold ? node->left.get()
                                                        : node->right.get();
    std::size_t best = 0;
    for (std::size_t c = 1; c < node->class_counts.size(); ++c)
        if (node->class_counts[c] > node->class_counts[best]) best = c;
    return best;
}

FeatureRanking rank_features(const TreeNode& root, const Dataset& d) {
    FeatureRanking ranking;
    std::vector<bool> ranked(d.n_features(), false);

    std::deque<const TreeNode*> queue{&root};
    while (!queue.empty()) {
        const TreeNode* node = queue.front();
        queue.pop_front();
        if (node->is_leaf()) continue;
        if (!ranked[node->feature]) {
            ranked[node->feature] = true;
            ranking.entries.push_back({d.feature_names[node->feature], node->info_gain});
        }
        queue.push_back(node->left.get());
        queue.push_back(node->right.get());
    }

    std::vector<std::pair<double, std::size_t>> rest;  // (standalone gain, index)
    for (std::size_t f = 0; f < d.n_features(); ++f) {
        if (ranked[f]) continue;
        std::vector<std::size_t> all(d.n_instances());
        std::iota(all.begin(), all.end(), 0);
        rest.emplace_back(scan_feature(d, f, all).info_gain, f);
    }
    std::stable_sort(rest.begin(), rest.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (const auto& [gain, f] : rest)
        ranking.entries.push_back({d.feature_names[f], gain});
    return ranking;
}

FeatureRanking read_ranking(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(errc::io, "cannot open ranking: " + path.string());
    std::string line;
    if (!std::getline(in, line)) fail(errc::parse, "empty ranking file: " + path.string());
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "feature,score_bits")
        fail(errc::parse, path.string() + ": expected header 'feature,score_bits'");

    FeatureRanking ranking;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            if (in.peek() == std::ifstream::traits_type::eof()) break;
            fail(errc::parse, path.string() + ": blank line " + std::to_string(line_no));
        }
        const auto comma = line.rfind(',');
        if (comma == std::string::npos || comma == 0)
            fail(errc::parse, path.string() + ": malformed line " + std::to_string(line_no));
        RankedFeature entry;
        entry.feature = line.substr(0, comma);
        const std::string score = line.substr(comma + 1);
        char* end = nullptr;
        entry.score_bits = std::strtod(score.c_str(), &end);
        if (end == score.c_str() || *end != '\0')
            fail(errc::parse, path.string() + ": bad score on line " + std::to_string(line_no));
        ranking.entries.push_back(std::move(entry));
    }
    if (ranking.entries.empty())
        fail(errc::parse, path.string() + ": ranking has no entries");
    return ranking;
}

void write_ranking(const FeatureRanking& ranking, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) fail(errc::io, "cannot write ranking: " + path.string());
    out << "feature,score_bits\n";
    char buf[64];
    for (const RankedFeature& entry : ranking.entries) {
        std::snprintf(buf, sizeof buf, "%.12g", entry.score_bits);
        out << entry.feature << ',' << buf << '\n';
    }
    if (!out) fail(errc::io, "write failed: " + path.string());
}

} // namespace misfire

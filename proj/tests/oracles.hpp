#pragma once

// Brute-force reference implementations used to cross-check the library.
// Everything here is deliberately written from the definitions, independent
// of the code under src/core.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <vector>

#include "core/dataset.hpp"

namespace oracle {

inline double mean(const std::vector<double>& x) {
    double total = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) total += x[i];
    return total / static_cast<double>(x.size());
}

inline double sample_std_dev(const std::vector<double>& x) {
    const double m = mean(x);
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) ss += (x[i] - m) * (x[i] - m);
    return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

inline double standard_error(const std::vector<double>& x) {
    return sample_std_dev(x) / std::sqrt(static_cast<double>(x.size()));
}

inline double median(const std::vector<double>& x) {
    std::vector<double> s = x;
    std::sort(s.begin(), s.end());
    const std::size_t n = s.size();
    return n % 2 == 1 ? s[n / 2] : 0.5 * (s[n / 2 - 1] + s[n / 2]);
}

inline double mode(const std::vector<double>& x) {
    std::map<double, std::size_t> freq;
    for (double v : x) ++freq[v];
    double best = x[0];
    std::size_t best_count = 0;
    for (const auto& [value, count] : freq) {
        if (count > best_count) {  // map iterates ascending: first max is smallest
            best_count = count;
            best = value;
        }
    }
    return best;
}

inline double kurtosis(const std::vector<double>& x) {
    const double n = static_cast<double>(x.size());
    const double m = mean(x);
    const double s = sample_std_dev(x);
    double sum4 = 0.0;
    for (double v : x) sum4 += std::pow((v - m) / s, 4.0);
    return n * (n + 1.0) / ((n - 1.0) * (n - 2.0) * (n - 3.0)) * sum4 -
           3.0 * (n - 1.0) * (n - 1.0) / ((n - 2.0) * (n - 3.0));
}

inline double skewness(const std::vector<double>& x) {
    const double n = static_cast<double>(x.size());
    const double m = mean(x);
    const double s = sample_std_dev(x);
    double sum3 = 0.0;
    for (double v : x) sum3 += std::pow((v - m) / s, 3.0);
    return n / ((n - 1.0) * (n - 2.0)) * sum3;
}

inline double minimum(const std::vector<double>& x) {
    return *std::min_element(x.begin(), x.end());
}

inline double maximum(const std::vector<double>& x) {
    return *std::max_element(x.begin(), x.end());
}

inline double sum(const std::vector<double>& x) {
    double total = 0.0;
    for (double v : x) total += v;
    return total;
}

// All 13 features in dataset schema order.
inline std::vector<double> feature_row(const std::vector<double>& x) {
    return {mean(x),
            standard_error(x),
            median(x),
            mode(x),
            sample_std_dev(x),
            sample_std_dev(x) * sample_std_dev(x),
            kurtosis(x),
            skewness(x),
            maximum(x) - minimum(x),
            minimum(x),
            maximum(x),
            sum(x),
            static_cast<double>(x.size())};
}

inline double class_entropy(const std::vector<std::size_t>& counts) {
    double total = 0.0;
    for (std::size_t c : counts) total += static_cast<double>(c);
    double h = 0.0;
    for (std::size_t c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / total;
        h -= p * std::log2(p);
    }
    return h;
}

struct SplitOracle {
    bool splittable = false;
    double threshold = 0.0;
    double info_gain = 0.0;
};

// Exhaustive scan over every midpoint between consecutive distinct sorted
// values, evaluating each candidate by a full recount.
inline SplitOracle best_split(const misfire::Dataset& d, std::size_t feature) {
    std::vector<double> values;
    for (const auto& inst : d.instances) values.push_back(inst.values[feature]);
    std::vector<double> distinct = values;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

    const std::size_t n_classes = d.class_names.size();
    std::vector<std::size_t> total(n_classes, 0);
    for (const auto& inst : d.instances) ++total[inst.label];
    const double h_parent = class_entropy(total);

    SplitOracle best;
    for (std::size_t i = 0; i + 1 < distinct.size(); ++i) {
        const double threshold = (distinct[i] + distinct[i + 1]) / 2.0;
        std::vector<std::size_t> left(n_classes, 0), right(n_classes, 0);
        std::size_t nl = 0, nr = 0;
        for (const auto& inst : d.instances) {
            if (inst.values[feature] <= threshold) {
                ++left[inst.label];
                ++nl;
            } else {
                ++right[inst.label];
                ++nr;
            }
        }
        const double gain = h_parent -
                            (static_cast<double>(nl) / static_cast<double>(values.size())) *
                                class_entropy(left) -
                            (static_cast<double>(nr) / static_cast<double>(values.size())) *
                                class_entropy(right);
        if (!best.splittable || gain > best.info_gain) {
            best.splittable = true;
            best.threshold = threshold;
            best.info_gain = gain;
        }
    }
    return best;
}

// Information gain of one explicit threshold, by full recount.
inline double gain_at(const misfire::Dataset& d, std::size_t feature, double threshold) {
    const std::size_t n_classes = d.class_names.size();
    std::vector<std::size_t> total(n_classes, 0), left(n_classes, 0), right(n_classes, 0);
    std::size_t nl = 0, nr = 0;
    for (const auto& inst : d.instances) {
        ++total[inst.label];
        if (inst.values[feature] <= threshold) {
            ++left[inst.label];
            ++nl;
        } else {
            ++right[inst.label];
            ++nr;
        }
    }
    if (nl == 0 || nr == 0) return 0.0;
    const double n = static_cast<double>(d.instances.size());
    return class_entropy(total) - (static_cast<double>(nl) / n) * class_entropy(left) -
           (static_cast<double>(nr) / n) * class_entropy(right);
}

// Index of the nearest training instance under the per-attribute-scaled L1
// distance sum_i |q_i - b_i| / x0_i (the monotone image of the K* weight).
inline std::size_t scaled_nearest(const misfire::Dataset& training,
                                  const std::vector<double>& query,
                                  const std::vector<double>& scales) {
    std::size_t best = 0;
    double best_distance = 0.0;
    for (std::size_t b = 0; b < training.instances.size(); ++b) {
        double distance = 0.0;
        for (std::size_t f = 0; f < query.size(); ++f)
            distance += std::abs(query[f] - training.instances[b].values[f]) / scales[f];
        if (b == 0 || distance < best_distance) {
            best = b;
            best_distance = distance;
        }
    }
    return best;
}

} // namespace oracle

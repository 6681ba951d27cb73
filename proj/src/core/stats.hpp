#pragma once

#include <span>
#include <string>
#include <vector>

#include "core/condition.hpp"
#include "core/signal.hpp"

namespace misfire {

// The 13 descriptive statistics of a window, fields in dataset column order.
// All spread-based statistics use the n-1 sample convention, matching the
// coefficient structure of the kurtosis/skewness formulas.
struct FeatureVector {
    double mean = 0.0;
    double standard_error = 0.0;
    double median = 0.0;
    double mode = 0.0;
    double standard_deviation = 0.0;
    double sample_variance = 0.0;
    double kurtosis = 0.0;
    double skewness = 0.0;
    double range = 0.0;
    double minimum = 0.0;
    double maximum = 0.0;
    double sum = 0.0;
    std::size_t count = 0;
    Condition condition = Condition::Unlabeled;

    // The 13 values in schema order (count cast to double).
    std::vector<double> values() const;
};

// Schema order: mean, standard_error, median, mode, standard_deviation,
// sample_variance, kurtosis, skewness, range, minimum, maximum, sum, count.
const std::vector<std::string>& feature_names();

double mean(std::span<const double> x);               // n >= 1
double sample_std_dev(std::span<const double> x);     // n >= 2
double standard_error(std::span<const double> x);     // n >= 2
double median(std::span<const double> x);             // n >= 1
// Most frequent exact value; ties (including all-distinct) break to the
// smallest value, so the statistic is total on continuous data.
double mode(std::span<const double> x);               // n >= 1
double kurtosis(std::span<const double> x);           // n >= 4, non-constant
double skewness(std::span<const double> x);           // n >= 3, non-constant

// Window must have length >= 4 and must not be constant valued.
FeatureVector extract_features(const SignalWindow& window);

} // namespace misfire

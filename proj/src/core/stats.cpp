#include "core/stats.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"

namespace misfire {

namespace {

double sum_of(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
}

// Mean-subtracted power sum; a raw power sum loses the low-order moments at
// window length 8192 under large offsets.
double centered_power_sum(std::span<const double> x, double center, int power) {
    double s = 0.0;
    for (double v : x) {
        const double d = v - center;
        double term = d;
        for (int p = 1; p < power; ++p) term *= d;
        s += term;
    }
    return s;
}

bool is_constant(std::span<const double> x) {
    for (double v : x)
        if (v != x.front()) return false;
    return true;
}

} // namespace

const std::vector<std::string>& feature_names() {
    static const std::vector<std::string> names = {
        "mean",        "standard_error",     "median",   "mode",
        "standard_deviation", "sample_variance", "kurtosis", "skewness",
        "range",       "minimum",            "maximum",  "sum",
        "count"};
    return names;
}

std::vector<double> FeatureVector::values() const {
    return {mean,     standard_error, median,   mode,
            standard_deviation, sample_variance, kurtosis, skewness,
            range,    minimum,        maximum,  sum,
            static_cast<double>(count)};
}

double mean(std::span<const double> x) {
    if (x.empty()) fail(errc::invalid_argument, "mean of empty sequence");
    return sum_of(x) / static_cast<double>(x.size());
}

double sample_std_dev(std::span<const double> x) {
    if (x.size() < 2) fail(errc::invalid_argument, "sample_std_dev needs n >= 2");
    const double m = mean(x);
    const double ss = centered_power_sum(x, m, 2);
    return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

double standard_error(std::span<const double> x) {
    if (x.size() < 2) fail(errc::invalid_argument, "standard_error needs n >= 2");
    return sample_std_dev(x) / std::sqrt(static_cast<double>(x.size()));
}

double median(std::span<const double> x) {
    if (x.empty()) fail(errc::invalid_argument, "median of empty sequence");
    std::vector<double> sorted(x.begin(), x.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    if (n % 2 == 1) return sorted[n / 2];
    return (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;
}

double mode(std::span<const double> x) {
    if (x.empty()) fail(errc::invalid_argument, "mode of empty sequence");
    std::vector<double> sorted(x.begin(), x.end());
    std::sort(sorted.begin(), sorted.end());
    double best_value = sorted.front();
    std::size_t best_count = 0;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        // strict > keeps the first (smallest) value among equal frequencies
        if (j - i > best_count) {
            best_count = j - i;
            best_value = sorted[i];
        }
        i = j;
    }
    return best_value;
}

double kurtosis(std::span<const double> x) {
    if (x.size() < 4) fail(errc::invalid_argument, "kurtosis needs n >= 4");
    if (is_constant(x)) fail(errc::invalid_argument, "kurtosis of constant sequence");
    const double n = static_cast<double>(x.size());
    const double m = mean(x);
    const double s = sample_std_dev(x);
    double sum4 = 0.0;
    for (double v : x) {
        const double z = (v - m) / s;
        sum4 += z * z * z * z;
    }
    return n * (n + 1.0) / ((n - 1.0) * (n - 2.0) * (n - 3.0)) * sum4 -
           3.0 * (n - 1.0) * (n - 1.0) / ((n - 2.0) * (n - 3.0));
}

double skewness(std::span<const double> x) {
    if (x.size() < 3) fail(errc::invalid_argument, "skewness needs n >= 3");
    if (is_constant(x)) fail(errc::invalid_argument, "skewness of constant sequence");
    const double n = static_cast<double>(x.size());
    const double m = mean(x);
    const double s = sample_std_dev(x);
    double sum3 = 0.0;
    for (double v : x) {
        const double z = (v - m) / s;
        sum3 += z * z * z;
    }
    return n / ((n - 1.0) * (n - 2.0)) * sum3;
}

FeatureVector extract_features(const SignalWindow& window) {
    std::span<const double> x(window.samples);
    if (x.size() < 4)
        fail(errc::invalid_argument, "window too short for feature extraction (need >= 4 samples)");
    if (is_constant(x))
        fail(errc::invalid_argument, "constant window: spread statistics are undefined");

    FeatureVector f;
    f.count = x.size();
    f.sum = sum_of(x);
    f.mean = f.sum / static_cast<double>(f.count);
    f.standard_deviation = sample_std_dev(x);
    f.sample_variance = f.standard_deviation * f.standard_deviation;
    f.standard_error = f.standard_deviation / std::sqrt(static_cast<double>(f.count));
    f.median = median(x);
    f.mode = mode(x);
    f.kurtosis = kurtosis(x);
    f.skewness = skewness(x);
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    f.minimum = *lo;
    f.maximum = *hi;
    f.range = f.maximum - f.minimum;
    f.condition = window.condition;
    return f;
}

} // namespace misfire

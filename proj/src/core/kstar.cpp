#include "core/kstar.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"

namespace misfire {

namespace {

// exp(-30) ~ 9e-14: weights this far below the leading one cannot move the
// effective count at the 1e-6 * N tolerance.
constexpr double kNegligibleExponent = 30.0;

// Distances |query - b| sorted ascending, shifted so the smallest is zero.
struct DistanceProfile {
    std::vector<double> sorted;  // ascending
    double d_min = 0.0;
    std::size_t n_min = 0;       // count at minimal distance
    double spread = 0.0;         // largest gap between consecutive distinct distances
};

DistanceProfile profile_distances(double query, std::span<const double> values) {
    DistanceProfile p;
    p.sorted.reserve(values.size());
    for (double v : values) p.sorted.push_back(std::abs(query - v));
    std::sort(p.sorted.begin(), p.sorted.end());
    p.d_min = p.sorted.front();
    p.n_min = 0;
    while (p.n_min < p.sorted.size() && p.sorted[p.n_min] == p.d_min) ++p.n_min;
    for (std::size_t i = 0; i + 1 < p.sorted.size(); ++i)
        p.spread = std::max(p.spread, p.sorted[i + 1] - p.sorted[i]);
    return p;
}

double effective_count_of(const DistanceProfile& p, double x0) {
    double sw = 0.0, sw2 = 0.0;
    for (double d : p.sorted) {
        const double e = (d - p.d_min) / x0;
        if (e > kNegligibleExponent) break;  // sorted: the rest are smaller still
        const double w = std::exp(-e);
        sw += w;
        sw2 += w * w;
    }
    return sw * sw / sw2;
}

double log_sum_exp(std::span<const double> v) {
    const double m = *std::max_element(v.begin(), v.end());
    double s = 0.0;
    for (double x : v) s += std::exp(x - m);
    return m + std::log(s);
}

// log of the unnormalized transformation weight of each training instance.
std::vector<double> log_weights(const KStarModel& model, std::span<const double> query,
                                std::span<const AttributeScale> scales) {
    const Dataset& train = model.training();
    std::vector<double> logw(train.n_instances(), 0.0);
    for (std::size_t f = 0; f < train.n_features(); ++f) {
        const double x0 = scales[f].x0;
        const double log_density = std::log(2.0 * x0);
        const auto column = model.column(f);
        for (std::size_t b = 0; b < logw.size(); ++b)
            logw[b] -= std::abs(query[f] - column[b]) / x0 + log_density;
    }
    return logw;
}

void check_query(const KStarModel& model, std::span<const double> query) {
    if (query.size() != model.training().n_features())
        fail(errc::invalid_argument, "query has " + std::to_string(query.size()) +
                                         " values, model expects " +
                                         std::to_string(model.training().n_features()));
    for (double v : query)
        if (!std::isfinite(v)) fail(errc::invalid_argument, "query value is not finite");
}

} // namespace

double effective_count(double query_value, std::span<const double> training_values,
                       double x0) {
    if (training_values.empty())
        fail(errc::invalid_argument, "effective_count needs training values");
    if (!(x0 > 0.0)) fail(errc::invalid_argument, "x0 must be positive");
    return effective_count_of(profile_distances(query_value, training_values), x0);
}

AttributeScale attribute_scale(double query_value, std::span<const double> training_values,
                               double blend_percent, const ScaleSearch& search) {
    if (training_values.empty())
        fail(errc::invalid_argument, "attribute_scale needs training values");
    if (!(blend_percent >= 0.0 && blend_percent <= 100.0))
        fail(errc::invalid_argument, "blend must be in [0, 100]");

    const DistanceProfile p = profile_distances(query_value, training_values);
    const std::size_t n = p.sorted.size();

    AttributeScale result;
    if (p.n_min == n) {
        // All training values sit at one distance, so every x0 weights them
        // equally and n_eff == n_target == N.
        result.degenerate = (p.d_min == 0.0);
        result.x0 = result.degenerate ? 1e-10 : p.d_min;
        result.converged = true;
        return result;
    }

    const double n_target = static_cast<double>(p.n_min) +
                            (static_cast<double>(n) - static_cast<double>(p.n_min)) *
                                blend_percent / 100.0;
    const double tol = search.tolerance * static_cast<double>(n);
    double lo = 1e-10 * p.spread;
    double hi = 1e10 * p.spread;
    double mid = 0.5 * (lo + hi);
    for (std::size_t it = 0; it < search.max_iterations; ++it) {
        mid = 0.5 * (lo + hi);
        const double n_eff = effective_count_of(p, mid);
        result.iterations = it + 1;
        if (std::abs(n_eff - n_target) <= tol) {
            result.converged = true;
            break;
        }
        // n_eff is monotone nondecreasing in x0
        if (n_eff > n_target)
            hi = mid;
        else
            lo = mid;
    }
    result.x0 = mid;
    return result;
}

KStarModel::KStarModel(Dataset training, double blend_percent, ScaleSearch search)
    : training_(std::move(training)), blend_(blend_percent), search_(search) {
    if (training_.instances.empty())
        fail(errc::invalid_argument, "K* training set must be non-empty");
    if (!(blend_ >= 0.0 && blend_ <= 100.0))
        fail(errc::invalid_argument, "blend must be in [0, 100]");
    columns_.assign(training_.n_features(), {});
    for (std::size_t f = 0; f < training_.n_features(); ++f) {
        columns_[f].reserve(training_.n_instances());
        for (const Instance& inst : training_.instances) {
            if (inst.values.size() != training_.n_features())
                fail(errc::invalid_argument, "training instance width mismatch");
            if (!std::isfinite(inst.values[f]))
                fail(errc::invalid_argument, "training value is not finite");
            columns_[f].push_back(inst.values[f]);
        }
    }
}

std::vector<AttributeScale> KStarModel::scales_for(std::span<const double> query) const {
    check_query(*this, query);
    std::vector<AttributeScale> scales;
    scales.reserve(training_.n_features());
    for (std::size_t f = 0; f < training_.n_features(); ++f)
        scales.push_back(attribute_scale(query[f], columns_[f], blend_, search_));
    return scales;
}

double transform_probability(const KStarModel& model, std::span<const double> query,
                             std::size_t training_index,
                             std::span<const AttributeScale> scales) {
    check_query(model, query);
    if (training_index >= model.training().n_instances())
        fail(errc::invalid_argument, "training index out of range");
    const std::vector<double> logw = log_weights(model, query, scales);
    return std::exp(logw[training_index] - log_sum_exp(logw));
}

double kstar_distance(const KStarModel& model, std::span<const double> query,
                      std::size_t training_index,
                      std::span<const AttributeScale> scales) {
    check_query(model, query);
    if (training_index >= model.training().n_instances())
        fail(errc::invalid_argument, "training index out of range");
    const std::vector<double> logw = log_weights(model, query, scales);
    return -(logw[training_index] - log_sum_exp(logw)) / std::log(2.0);
}

QueryEvaluation classify(const KStarModel& model, std::span<const double> query) {
    check_query(model, query);
    QueryEvaluation ev;
    ev.scales = model.scales_for(query);
    const std::vector<double> logw = log_weights(model, query, ev.scales);
    const double lse = log_sum_exp(logw);

    const Dataset& train = model.training();
    ev.probabilities.resize(logw.size());
    ev.class_scores.assign(train.class_names.size(), 0.0);
    for (std::size_t b = 0; b < logw.size(); ++b) {
        ev.probabilities[b] = std::exp(logw[b] - lse);
        ev.class_scores[train.instances[b].label] += ev.probabilities[b];
    }
    ev.predicted = static_cast<std::size_t>(
        std::max_element(ev.class_scores.begin(), ev.class_scores.end()) -
        ev.class_scores.begin());
    return ev;
}

std::vector<Prediction> predict_dataset(const KStarModel& model, const Dataset& test) {
    if (test.feature_names != model.training().feature_names)
        fail(errc::invalid_argument, "test schema does not match the training schema");
    std::vector<Prediction> out;
    out.reserve(test.n_instances());
    for (const Instance& inst : test.instances) {
        QueryEvaluation ev = classify(model, inst.values);
        out.push_back({ev.predicted, std::move(ev.class_scores)});
    }
    return out;
}

} // namespace misfire

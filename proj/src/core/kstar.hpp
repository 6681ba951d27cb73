#pragma once

#include <span>
#include <vector>

#include "core/dataset.hpp"

namespace misfire {

// K* instance-based classifier. The distance from query a to training
// instance b is -log2 of the probability of transforming a into b, realized
// for numeric attributes as a normalized product of per-attribute
// exponential-kernel weights. Each attribute's kernel scale x0 is chosen per
// query so that the effective number of neighbours matches a blend-controlled
// target between n0 (nearest only) and N (all of training).

struct ScaleSearch {
    std::size_t max_iterations = 100;
    double tolerance = 1e-6;  // on |n_eff - n_target|, relative to N
};

struct AttributeScale {
    double x0 = 0.0;
    bool degenerate = false;  // every training value equals the query value
    bool converged = false;
    std::size_t iterations = 0;
};

// Effective count (sum w)^2 / sum w^2 of the weights w_b = exp(-|q - b|/x0);
// monotone nondecreasing in x0, from the minimal-distance count up to N.
double effective_count(double query_value, std::span<const double> training_values,
                       double x0);

// Bisection for the x0 whose effective count hits
// n_target = n0 + (N - n0) * blend/100, over [1e-10, 1e10] times the largest
// gap between distinct distances. Returns the midpoint on non-convergence.
AttributeScale attribute_scale(double query_value, std::span<const double> training_values,
                               double blend_percent, const ScaleSearch& search = {});

class KStarModel {
public:
    // Training data must be non-empty with finite values; blend in [0, 100].
    KStarModel(Dataset training, double blend_percent = 20.0, ScaleSearch search = {});

    const Dataset& training() const { return training_; }
    double blend() const { return blend_; }
    const ScaleSearch& search() const { return search_; }
    std::span<const double> column(std::size_t feature) const { return columns_[feature]; }

    std::vector<AttributeScale> scales_for(std::span<const double> query) const;

private:
    Dataset training_;
    double blend_;
    ScaleSearch search_;
    std::vector<std::vector<double>> columns_;  // per-feature training values
};

struct QueryEvaluation {
    std::vector<double> probabilities;  // P*(b|a) per training instance, sums to 1
    std::vector<double> class_scores;   // per class, sums to 1
    std::size_t predicted = 0;          // class index; ties break to class order
    std::vector<AttributeScale> scales;
};

// P*(b|a): normalized product over attributes of exp(-|a_i - b_i|/x0_i) / (2 x0_i).
double transform_probability(const KStarModel& model, std::span<const double> query,
                             std::size_t training_index,
                             std::span<const AttributeScale> scales);

// K*(b|a) = -log2 P*(b|a); nonnegative, and not symmetric in general.
double kstar_distance(const KStarModel& model, std::span<const double> query,
                      std::size_t training_index,
                      std::span<const AttributeScale> scales);

QueryEvaluation classify(const KStarModel& model, std::span<const double> query);

struct Prediction {
    std::size_t predicted = 0;
    std::vector<double> class_scores;
};

// Element-wise classify; test schema must match the training schema.
std::vector<Prediction> predict_dataset(const KStarModel& model, const Dataset& test);

} // namespace misfire

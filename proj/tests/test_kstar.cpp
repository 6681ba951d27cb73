#include <doctest.h>

#include <cmath>
#include <numeric>

#include "core/error.hpp"
#include "core/kstar.hpp"
#include "core/rng.hpp"
#include "oracles.hpp"

using namespace misfire;

namespace {

Dataset one_dim(const std::vector<double>& values, const std::vector<std::string>& labels) {
    Dataset d;
    d.feature_names = {"x"};
    for (std::size_t i = 0; i < values.size(); ++i) {
        Instance inst;
        inst.values = {values[i]};
        inst.label = d.intern_class(labels[i]);
        d.instances.push_back(std::move(inst));
    }
    return d;
}

Dataset random_training(Rng& rng, std::size_t n, std::size_t n_features,
                        std::size_t n_classes) {
    Dataset d;
    for (std::size_t f = 0; f < n_features; ++f)
        d.feature_names.push_back("f" + std::to_string(f));
    for (std::size_t c = 0; c < n_classes; ++c)
        d.class_names.push_back("K" + std::to_string(c));
    for (std::size_t i = 0; i < n; ++i) {
        Instance inst;
        inst.label = rng.bounded(n_classes);
        for (std::size_t f = 0; f < n_features; ++f)
            inst.values.push_back(rng.uniform(-10.0, 10.0));
        d.instances.push_back(std::move(inst));
    }
    return d;
}

} // namespace

TEST_CASE("attribute_scale at blend 100 gives near-uniform weights") {
    const std::vector<double> values = {0.0, 1.0, 2.5, 7.0, 40.0};
    const AttributeScale scale = attribute_scale(3.0, values, 100.0);
    CHECK(scale.converged);
    double w_min = 1e300, w_max = 0.0;
    for (double v : values) {
        const double w = std::exp(-std::abs(3.0 - v) / scale.x0);
        w_min = std::min(w_min, w);
        w_max = std::max(w_max, w);
    }
    CHECK(w_max / w_min <= 1.0 + 1e-3);
}

TEST_CASE("attribute_scale at blend 0 concentrates on the nearest value") {
    const std::vector<double> values = {0.0, 1.0, 10.0};
    const AttributeScale scale = attribute_scale(0.0, values, 0.0);
    CHECK(scale.converged);
    const double w0 = std::exp(-0.0 / scale.x0);
    const double w1 = std::exp(-1.0 / scale.x0);
    const double w10 = std::exp(-10.0 / scale.x0);
    CHECK(w0 / (w1 + w10) >= 1e3);
}

TEST_CASE("attribute_scale degenerate cases") {
    // all training values identical and equal to the query
    const AttributeScale flagged = attribute_scale(5.0, std::vector<double>{5, 5, 5}, 20.0);
    CHECK(flagged.degenerate);
    CHECK(flagged.converged);
    CHECK(flagged.x0 > 0.0);

    // all values at one nonzero distance: every x0 is equivalent
    const AttributeScale even = attribute_scale(5.0, std::vector<double>{0.0, 10.0}, 20.0);
    CHECK(!even.degenerate);
    CHECK(even.converged);
    CHECK(even.x0 == 5.0);

    CHECK_THROWS_AS((void)attribute_scale(0.0, std::vector<double>{}, 20.0), Error);
    CHECK_THROWS_AS((void)attribute_scale(0.0, std::vector<double>{1.0, 2.0}, 101.0),
                    Error);
}

TEST_CASE("scale search converges on random configurations") {
    Rng rng(41);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng.bounded(60);
        std::vector<double> values(n);
        for (double& v : values) v = rng.uniform(-50.0, 50.0);
        if (trial % 3 == 0)  // exercise duplicates
            for (std::size_t i = 0; i + 1 < n; i += 2) values[i + 1] = values[i];
        const double query = rng.uniform(-60.0, 60.0);
        const double blend = rng.uniform(0.0, 100.0);
        const AttributeScale scale = attribute_scale(query, values, blend);
        CHECK(scale.converged);
        CHECK(scale.iterations <= 100);
        CHECK(scale.x0 > 0.0);
    }
}

TEST_CASE("effective count is monotone in x0") {
    Rng rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 3 + rng.bounded(20);
        std::vector<double> values(n);
        for (double& v : values) v = rng.uniform(-5.0, 5.0);
        const double query = rng.uniform(-6.0, 6.0);
        double previous = 0.0;
        for (int g = -8; g <= 8; ++g) {
            const double ne = effective_count(query, values, std::pow(10.0, g));
            CHECK(ne >= previous - 1e-9);
            CHECK(ne <= static_cast<double>(n) + 1e-9);
            previous = ne;
        }
    }
}

TEST_CASE("transform probability fixtures") {
    const Dataset single = one_dim({4.0}, {"A"});
    const KStarModel model(single, 20.0);
    const std::vector<double> query = {1.0};
    const auto scales = model.scales_for(query);
    CHECK(transform_probability(model, query, 0, scales) == 1.0);
    CHECK(kstar_distance(model, query, 0, scales) == 0.0);

    // equidistant pair: each transformation probability is exactly one half
    const Dataset pair = one_dim({0.0, 2.0}, {"A", "B"});
    const KStarModel pair_model(pair, 20.0);
    const std::vector<double> middle = {1.0};
    const auto pair_scales = pair_model.scales_for(middle);
    CHECK(transform_probability(pair_model, middle, 0, pair_scales) ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK(transform_probability(pair_model, middle, 1, pair_scales) ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK(kstar_distance(pair_model, middle, 0, pair_scales) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("K* is not symmetric") {
    // from the end instance the middle is the lone neighbour; from the middle
    // there are two equidistant neighbours, so the scales differ by direction
    const Dataset d = one_dim({0.0, 1.0, 2.0}, {"A", "A", "B"});
    const KStarModel model(d, 20.0);

    const std::vector<double> a = {0.0};
    const std::vector<double> b = {1.0};
    const double ab = kstar_distance(model, a, 1, model.scales_for(a));  // a -> instance 1
    const double ba = kstar_distance(model, b, 0, model.scales_for(b));  // b -> instance 0
    CHECK(std::abs(ab - ba) > 0.01);
}

TEST_CASE("probabilities form a distribution over the training set") {
    Rng rng(43);
    for (int trial = 0; trial < 30; ++trial) {
        const Dataset d =
            random_training(rng, 5 + rng.bounded(25), 1 + rng.bounded(5), 2 + rng.bounded(3));
        const KStarModel model(d, rng.uniform(0.0, 100.0));
        std::vector<double> query(d.n_features());
        for (double& v : query) v = rng.uniform(-12.0, 12.0);

        const QueryEvaluation ev = classify(model, query);
        const double sum =
            std::accumulate(ev.probabilities.begin(), ev.probabilities.end(), 0.0);
        CHECK(std::abs(sum - 1.0) <= 1e-9);
        for (double p : ev.probabilities) {
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
        }
        const double score_sum =
            std::accumulate(ev.class_scores.begin(), ev.class_scores.end(), 0.0);
        CHECK(std::abs(score_sum - 1.0) <= 1e-9);
    }
}

TEST_CASE("classify nearest-neighbour limit") {
    const Dataset d = one_dim({0.0, 0.3, 100.0, 101.0}, {"A", "A", "B", "B"});
    const KStarModel model(d, 0.01);
    const QueryEvaluation ev = classify(model, std::vector<double>{0.0});
    CHECK(model.training().class_names[ev.predicted] == "A");
    CHECK(ev.probabilities[0] > 0.9);
}

TEST_CASE("classify majority limit at blend 100") {
    Rng rng(44);
    Dataset d;
    d.feature_names = {"x"};
    d.class_names = {"A", "B"};
    for (int i = 0; i < 70; ++i) d.instances.push_back({{rng.uniform(-10.0, 10.0)}, 0});
    for (int i = 0; i < 30; ++i) d.instances.push_back({{rng.uniform(-10.0, 10.0)}, 1});
    const KStarModel model(d, 100.0);
    const QueryEvaluation ev = classify(model, std::vector<double>{2.0});
    CHECK(model.training().class_names[ev.predicted] == "A");
    CHECK(ev.class_scores[0] == doctest::Approx(0.7).epsilon(1e-3));
}

TEST_CASE("classify blends neighbours, not just the nearest") {
    // both near instances vote A even though the query sits between them
    const Dataset d = one_dim({0.0, 1.0, 10.0}, {"A", "A", "B"});
    const KStarModel model(d, 20.0);
    const QueryEvaluation ev = classify(model, std::vector<double>{0.5});
    CHECK(model.training().class_names[ev.predicted] == "A");
}

TEST_CASE("training order does not change predictions") {
    Rng rng(45);
    Dataset d = random_training(rng, 40, 3, 3);
    Dataset permuted = d;
    Rng perm(46);
    perm.shuffle(permuted.instances);

    const KStarModel model(d, 20.0);
    const KStarModel model2(permuted, 20.0);
    for (int probe = 0; probe < 50; ++probe) {
        std::vector<double> q(3);
        for (double& v : q) v = rng.uniform(-12.0, 12.0);
        CHECK(classify(model, q).predicted == classify(model2, q).predicted);
    }
}

TEST_CASE("classification is deterministic") {
    Rng rng(47);
    const Dataset d = random_training(rng, 25, 4, 3);
    const KStarModel model(d, 20.0);
    std::vector<double> q = {0.1, -3.0, 5.5, 2.0};
    const QueryEvaluation a = classify(model, q);
    const QueryEvaluation b = classify(model, q);
    CHECK(a.predicted == b.predicted);
    CHECK(a.probabilities == b.probabilities);
    CHECK(a.class_scores == b.class_scores);
}

TEST_CASE("predict_dataset") {
    Rng rng(48);
    const Dataset d = random_training(rng, 30, 2, 3);

    Dataset empty;
    empty.feature_names = d.feature_names;
    empty.class_names = d.class_names;
    const KStarModel model(d, 1.0);
    CHECK(predict_dataset(model, empty).empty());

    // resubstitution with a small blend: the self weight dominates, so every
    // class keeps at least one correct prediction
    const auto predictions = predict_dataset(model, d);
    REQUIRE(predictions.size() == d.n_instances());
    std::vector<std::size_t> correct(d.class_names.size(), 0);
    for (std::size_t i = 0; i < predictions.size(); ++i)
        if (predictions[i].predicted == d.instances[i].label)
            ++correct[d.instances[i].label];
    for (std::size_t c = 0; c < correct.size(); ++c) CHECK(correct[c] >= 1);

    Dataset wrong;
    wrong.feature_names = {"other"};
    CHECK_THROWS_AS((void)predict_dataset(model, wrong), Error);
}

TEST_CASE("model construction validates its inputs") {
    Dataset empty;
    empty.feature_names = {"x"};
    CHECK_THROWS_AS((void)KStarModel(empty, 20.0), Error);

    const Dataset d = one_dim({1.0, 2.0}, {"A", "B"});
    CHECK_THROWS_AS((void)KStarModel(d, -1.0), Error);
    CHECK_THROWS_AS((void)KStarModel(d, 100.5), Error);
    const KStarModel model(d, 20.0);
    CHECK_THROWS_AS((void)classify(model, std::vector<double>{1.0, 2.0}), Error);
}

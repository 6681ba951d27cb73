#include "core/eval.hpp"

#include <algorithm>
#include <future>
#include <set>

#include "core/error.hpp"

namespace misfire {

std::uint64_t ConfusionMatrix::total() const {
    std::uint64_t t = 0;
    for (const auto& row : counts)
        for (std::uint64_t c : row) t += c;
    return t;
}

std::uint64_t ConfusionMatrix::diagonal() const {
    std::uint64_t t = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) t += counts[i][i];
    return t;
}

ConfusionMatrix make_confusion(std::vector<std::string> class_names) {
    ConfusionMatrix cm;
    cm.counts.assign(class_names.size(), std::vector<std::uint64_t>(class_names.size(), 0));
    cm.class_names = std::move(class_names);
    return cm;
}

double accuracy(const ConfusionMatrix& cm) {
    const std::uint64_t total = cm.total();
    if (total == 0) fail(errc::invalid_argument, "accuracy of an empty confusion matrix");
    return 100.0 * static_cast<double>(cm.diagonal()) / static_cast<double>(total);
}

std::vector<double> per_class_recall(const ConfusionMatrix& cm) {
    std::vector<double> recalls;
    recalls.reserve(cm.counts.size());
    for (std::size_t i = 0; i < cm.counts.size(); ++i) {
        std::uint64_t row_sum = 0;
        for (std::uint64_t c : cm.counts[i]) row_sum += c;
        if (row_sum == 0)
            fail(errc::invalid_argument,
                 "per_class_recall: class " + cm.class_names[i] + " has no instances");
        recalls.push_back(100.0 * static_cast<double>(cm.counts[i][i]) /
                          static_cast<double>(row_sum));
    }
    return recalls;
}

ConfusionMatrix fault_vs_normal_collapse(const ConfusionMatrix& cm,
                                         std::string_view normal_class) {
    const auto it = std::find(cm.class_names.begin(), cm.class_names.end(), normal_class);
    if (it == cm.class_names.end())
        fail(errc::invalid_argument, "unknown class: " + std::string(normal_class));
    const std::size_t normal = static_cast<std::size_t>(it - cm.class_names.begin());

    ConfusionMatrix out = make_confusion({"Fault", std::string(normal_class)});
    for (std::size_t i = 0; i < cm.counts.size(); ++i)
        for (std::size_t j = 0; j < cm.counts.size(); ++j)
            out.counts[i == normal ? 1 : 0][j == normal ? 1 : 0] += cm.counts[i][j];
    return out;
}

ConfusionMatrix cross_validate(const Dataset& d, std::size_t k, double blend,
                               std::uint64_t seed) {
    const FoldAssignment fa = stratified_folds(d, k, seed);

    auto run_fold = [&](std::size_t fold) {
        Dataset train;
        train.feature_names = d.feature_names;
        train.class_names = d.class_names;
        std::vector<const Instance*> test;
        for (std::size_t i = 0; i < d.instances.size(); ++i) {
            if (fa.fold_of[i] == fold)
                test.push_back(&d.instances[i]);
            else
                train.instances.push_back(d.instances[i]);
        }
        const KStarModel model(std::move(train), blend);
        ConfusionMatrix cm = make_confusion(d.class_names);
        for (const Instance* inst : test) {
            const QueryEvaluation ev = classify(model, inst->values);
            ++cm.counts[inst->label][ev.predicted];
        }
        return cm;
    };

    std::vector<std::future<ConfusionMatrix>> futures;
    futures.reserve(k);
    for (std::size_t fold = 0; fold < k; ++fold)
        futures.push_back(std::async(std::launch::async, run_fold, fold));

    ConfusionMatrix cm = make_confusion(d.class_names);
    for (auto& f : futures) {
        const ConfusionMatrix part = f.get();
        for (std::size_t i = 0; i < cm.counts.size(); ++i)
            for (std::size_t j = 0; j < cm.counts.size(); ++j)
                cm.counts[i][j] += part.counts[i][j];
    }
    return cm;
}

ConfusionMatrix resubstitute(const Dataset& d, double blend) {
    const KStarModel model(d, blend);
    ConfusionMatrix cm = make_confusion(d.class_names);
    for (const Instance& inst : d.instances) {
        const QueryEvaluation ev = classify(model, inst.values);
        ++cm.counts[inst.label][ev.predicted];
    }
    return cm;
}

SweepResult feature_sweep(const Dataset& d, const FeatureRanking& ranking,
                          std::size_t k, double blend, std::uint64_t seed) {
    if (ranking.entries.size() != d.n_features())
        fail(errc::invalid_argument, "ranking has " + std::to_string(ranking.entries.size()) +
                                         " entries for " + std::to_string(d.n_features()) +
                                         " dataset features");
    std::set<std::string> names;
    for (const RankedFeature& e : ranking.entries) {
        d.feature_index(e.feature);  // fails on unknown
        if (!names.insert(e.feature).second)
            fail(errc::invalid_argument, "duplicate feature in ranking: " + e.feature);
    }

    SweepResult result;
    std::vector<std::string> keep;
    for (const RankedFeature& e : ranking.entries) {
        keep.push_back(e.feature);
        const ConfusionMatrix cm = cross_validate(project(d, keep), k, blend, seed);
        result.rows.push_back({keep.size(), accuracy(cm), keep});
    }
    return result;
}

} // namespace misfire

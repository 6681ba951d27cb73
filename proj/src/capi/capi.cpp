#include "misfire/misfire.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/condition.hpp"
#include "core/dataset.hpp"
#include "core/error.hpp"
#include "core/eval.hpp"
#include "core/kstar.hpp"
#include "core/pipeline.hpp"
#include "core/report.hpp"
#include "core/signal.hpp"
#include "core/stats.hpp"
#include "core/tree.hpp"

struct mf_signal {
    misfire::RawSignal value;
    std::string condition_name;
};
struct mf_dataset {
    misfire::Dataset value;
};
struct mf_ranking {
    misfire::FeatureRanking value;
};
struct mf_model {
    misfire::KStarModel value;
};
struct mf_confusion {
    misfire::ConfusionMatrix value;
};
struct mf_sweep {
    misfire::SweepResult value;
};

namespace {

thread_local std::string g_last_error;

mf_status map_code(misfire::errc code) {
    switch (code) {
        case misfire::errc::invalid_argument: return MF_ERROR_INVALID_ARGUMENT;
        case misfire::errc::io: return MF_ERROR_IO;
        case misfire::errc::parse: return MF_ERROR_PARSE;
        case misfire::errc::internal: return MF_ERROR_INTERNAL;
    }
    return MF_ERROR_INTERNAL;
}

template <typename F>
mf_status guarded(F&& body) noexcept {
    try {
        body();
        g_last_error.clear();
        return MF_OK;
    } catch (const misfire::Error& e) {
        g_last_error = e.what();
        return map_code(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return MF_ERROR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return MF_ERROR_INTERNAL;
    }
}

void require(bool ok, const char* what) {
    if (!ok) misfire::fail(misfire::errc::invalid_argument, what);
}

misfire::Condition parse_condition_arg(const char* name) {
    if (name == nullptr || *name == '\0') return misfire::Condition::Unlabeled;
    const auto c = misfire::parse_condition(name);
    if (!c)
        misfire::fail(misfire::errc::invalid_argument,
                      std::string("unknown condition: '") + name + "'");
    return *c;
}

misfire::EngineSimConfig to_core(const mf_sim_config& c) {
    misfire::EngineSimConfig out;
    out.rpm = c.rpm;
    out.sample_rate_hz = c.sample_rate_hz;
    out.n_samples = c.n_samples;
    out.burst_amplitude = c.burst_amplitude;
    out.burst_decay_s = c.burst_decay_s;
    out.burst_freq_hz = c.burst_freq_hz;
    out.misfire_attenuation = c.misfire_attenuation;
    out.noise_sigma = c.noise_sigma;
    for (std::size_t i = 0; i < 4; ++i) out.cylinder_gains[i] = c.cylinder_gains[i];
    out.seed = c.seed;
    return out;
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out == nullptr)
        misfire::fail(misfire::errc::internal, "out of memory");
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

} // namespace

extern "C" {

const char* mf_status_name(mf_status status) {
    switch (status) {
        case MF_OK: return "ok";
        case MF_ERROR_INVALID_ARGUMENT: return "invalid argument";
        case MF_ERROR_IO: return "io error";
        case MF_ERROR_PARSE: return "parse error";
        case MF_ERROR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* mf_last_error(void) { return g_last_error.c_str(); }

void mf_string_free(char* s) { std::free(s); }

/* ---------------- signals ---------------- */

void mf_sim_config_defaults(mf_sim_config* config) {
    if (config == nullptr) return;
    const misfire::EngineSimConfig d;
    config->rpm = d.rpm;
    config->sample_rate_hz = d.sample_rate_hz;
    config->n_samples = d.n_samples;
    config->burst_amplitude = d.burst_amplitude;
    config->burst_decay_s = d.burst_decay_s;
    config->burst_freq_hz = d.burst_freq_hz;
    config->misfire_attenuation = d.misfire_attenuation;
    config->noise_sigma = d.noise_sigma;
    for (std::size_t i = 0; i < 4; ++i) config->cylinder_gains[i] = d.cylinder_gains[i];
    config->seed = d.seed;
}

mf_status mf_signal_synth(const mf_sim_config* config, const char* condition,
                          mf_signal** out) {
    return guarded([&] {
        require(config != nullptr && out != nullptr, "null argument");
        auto handle = std::make_unique<mf_signal>();
        handle->value = misfire::synth_engine_signal(to_core(*config),
                                                     parse_condition_arg(condition));
        handle->condition_name = misfire::condition_name(handle->value.condition);
        *out = handle.release();
    });
}

mf_status mf_signal_load(const char* path, const char* condition,
                         double sample_rate_hz, mf_signal** out) {
    return guarded([&] {
        require(path != nullptr && out != nullptr, "null argument");
        auto handle = std::make_unique<mf_signal>();
        handle->value =
            misfire::load_signal(path, parse_condition_arg(condition), sample_rate_hz);
        handle->condition_name = misfire::condition_name(handle->value.condition);
        *out = handle.release();
    });
}

mf_status mf_signal_save(const mf_signal* signal, const char* path) {
    return guarded([&] {
        require(signal != nullptr && path != nullptr, "null argument");
        misfire::save_signal(signal->value, path);
    });
}

size_t mf_signal_length(const mf_signal* signal) {
    return signal == nullptr ? 0 : signal->value.samples.size();
}

const double* mf_signal_samples(const mf_signal* signal) {
    return signal == nullptr ? nullptr : signal->value.samples.data();
}

const char* mf_signal_condition(const mf_signal* signal) {
    return signal == nullptr ? "" : signal->condition_name.c_str();
}

void mf_signal_free(mf_signal* signal) { delete signal; }

/* ---------------- datasets ---------------- */

mf_status mf_dataset_create(mf_dataset** out) {
    return guarded([&] {
        require(out != nullptr, "null argument");
        *out = new mf_dataset{misfire::make_feature_dataset()};
    });
}

mf_status mf_dataset_append_signal(mf_dataset* dataset, const mf_signal* signal,
                                   size_t window_len, size_t hop,
                                   size_t* windows_added) {
    return guarded([&] {
        require(dataset != nullptr && signal != nullptr, "null argument");
        const auto windows = misfire::window_signal(signal->value, window_len, hop);
        for (const misfire::SignalWindow& w : windows)
            dataset->value.append(misfire::extract_features(w));
        if (windows_added != nullptr) *windows_added = windows.size();
    });
}

mf_status mf_dataset_read(const char* path, int engine_labels_only, mf_dataset** out) {
    return guarded([&] {
        require(path != nullptr && out != nullptr, "null argument");
        *out = new mf_dataset{misfire::read_dataset(path, engine_labels_only != 0)};
    });
}

mf_status mf_dataset_write(const mf_dataset* dataset, const char* path) {
    return guarded([&] {
        require(dataset != nullptr && path != nullptr, "null argument");
        misfire::write_dataset(dataset->value, path);
    });
}

mf_status mf_dataset_project(const mf_dataset* dataset, const char* const* features,
                             size_t n_features, mf_dataset** out) {
    return guarded([&] {
        require(dataset != nullptr && features != nullptr && out != nullptr,
                "null argument");
        std::vector<std::string> keep;
        keep.reserve(n_features);
        for (size_t i = 0; i < n_features; ++i) {
            require(features[i] != nullptr, "null feature name");
            keep.emplace_back(features[i]);
        }
        *out = new mf_dataset{misfire::project(dataset->value, keep)};
    });
}

size_t mf_dataset_n_features(const mf_dataset* dataset) {
    return dataset == nullptr ? 0 : dataset->value.n_features();
}

size_t mf_dataset_n_instances(const mf_dataset* dataset) {
    return dataset == nullptr ? 0 : dataset->value.n_instances();
}

size_t mf_dataset_n_classes(const mf_dataset* dataset) {
    return dataset == nullptr ? 0 : dataset->value.class_names.size();
}

const char* mf_dataset_feature_name(const mf_dataset* dataset, size_t index) {
    if (dataset == nullptr || index >= dataset->value.n_features()) return nullptr;
    return dataset->value.feature_names[index].c_str();
}

const char* mf_dataset_class_name(const mf_dataset* dataset, size_t index) {
    if (dataset == nullptr || index >= dataset->value.class_names.size()) return nullptr;
    return dataset->value.class_names[index].c_str();
}

void mf_dataset_free(mf_dataset* dataset) { delete dataset; }

/* ---------------- ranking ---------------- */

mf_status mf_ranking_build(const mf_dataset* dataset, mf_ranking** out) {
    return guarded([&] {
        require(dataset != nullptr && out != nullptr, "null argument");
        const auto tree = misfire::build_tree(dataset->value);
        *out = new mf_ranking{misfire::rank_features(*tree, dataset->value)};
    });
}

mf_status mf_ranking_read(const char* path, mf_ranking** out) {
    return guarded([&] {
        require(path != nullptr && out != nullptr, "null argument");
        *out = new mf_ranking{misfire::read_ranking(path)};
    });
}

mf_status mf_ranking_write(const mf_ranking* ranking, const char* path) {
    return guarded([&] {
        require(ranking != nullptr && path != nullptr, "null argument");
        misfire::write_ranking(ranking->value, path);
    });
}

size_t mf_ranking_size(const mf_ranking* ranking) {
    return ranking == nullptr ? 0 : ranking->value.entries.size();
}

const char* mf_ranking_feature(const mf_ranking* ranking, size_t index) {
    if (ranking == nullptr || index >= ranking->value.entries.size()) return nullptr;
    return ranking->value.entries[index].feature.c_str();
}

double mf_ranking_score(const mf_ranking* ranking, size_t index) {
    if (ranking == nullptr || index >= ranking->value.entries.size()) return 0.0;
    return ranking->value.entries[index].score_bits;
}

void mf_ranking_free(mf_ranking* ranking) { delete ranking; }

/* ---------------- K* ---------------- */

mf_status mf_model_create(const mf_dataset* training, double blend_percent,
                          mf_model** out) {
    return guarded([&] {
        require(training != nullptr && out != nullptr, "null argument");
        *out = new mf_model{misfire::KStarModel(training->value, blend_percent)};
    });
}

mf_status mf_model_classify(const mf_model* model, const double* values,
                            size_t n_values, size_t* predicted_class,
                            double* class_scores) {
    return guarded([&] {
        require(model != nullptr && values != nullptr && predicted_class != nullptr,
                "null argument");
        const misfire::QueryEvaluation ev =
            misfire::classify(model->value, std::span<const double>(values, n_values));
        *predicted_class = ev.predicted;
        if (class_scores != nullptr)
            for (std::size_t c = 0; c < ev.class_scores.size(); ++c)
                class_scores[c] = ev.class_scores[c];
    });
}

size_t mf_model_n_classes(const mf_model* model) {
    return model == nullptr ? 0 : model->value.training().class_names.size();
}

const char* mf_model_class_name(const mf_model* model, size_t index) {
    if (model == nullptr || index >= model->value.training().class_names.size())
        return nullptr;
    return model->value.training().class_names[index].c_str();
}

void mf_model_free(mf_model* model) { delete model; }

/* ---------------- evaluation ---------------- */

mf_status mf_cross_validate(const mf_dataset* dataset, size_t folds,
                            double blend_percent, uint64_t seed, mf_confusion** out) {
    return guarded([&] {
        require(dataset != nullptr && out != nullptr, "null argument");
        *out = new mf_confusion{
            misfire::cross_validate(dataset->value, folds, blend_percent, seed)};
    });
}

mf_status mf_feature_sweep(const mf_dataset* dataset, const mf_ranking* ranking,
                           size_t folds, double blend_percent, uint64_t seed,
                           mf_sweep** out) {
    return guarded([&] {
        require(dataset != nullptr && ranking != nullptr && out != nullptr,
                "null argument");
        *out = new mf_sweep{misfire::feature_sweep(dataset->value, ranking->value,
                                                   folds, blend_percent, seed)};
    });
}

mf_status mf_confusion_read(const char* path, mf_confusion** out) {
    return guarded([&] {
        require(path != nullptr && out != nullptr, "null argument");
        *out = new mf_confusion{misfire::read_confusion(path)};
    });
}

mf_status mf_confusion_write(const mf_confusion* confusion, const char* path) {
    return guarded([&] {
        require(confusion != nullptr && path != nullptr, "null argument");
        misfire::write_confusion(confusion->value, path);
    });
}

size_t mf_confusion_n_classes(const mf_confusion* confusion) {
    return confusion == nullptr ? 0 : confusion->value.class_names.size();
}

const char* mf_confusion_class_name(const mf_confusion* confusion, size_t index) {
    if (confusion == nullptr || index >= confusion->value.class_names.size())
        return nullptr;
    return confusion->value.class_names[index].c_str();
}

uint64_t mf_confusion_count(const mf_confusion* confusion, size_t true_class,
                            size_t predicted_class) {
    if (confusion == nullptr || true_class >= confusion->value.counts.size() ||
        predicted_class >= confusion->value.counts.size())
        return 0;
    return confusion->value.counts[true_class][predicted_class];
}

mf_status mf_confusion_accuracy(const mf_confusion* confusion, double* out) {
    return guarded([&] {
        require(confusion != nullptr && out != nullptr, "null argument");
        *out = misfire::accuracy(confusion->value);
    });
}

mf_status mf_confusion_recall(const mf_confusion* confusion, size_t class_index,
                              double* out) {
    return guarded([&] {
        require(confusion != nullptr && out != nullptr, "null argument");
        require(class_index < confusion->value.class_names.size(),
                "class index out of range");
        *out = misfire::per_class_recall(confusion->value)[class_index];
    });
}

mf_status mf_confusion_collapse(const mf_confusion* confusion,
                                const char* normal_class, mf_confusion** out) {
    return guarded([&] {
        require(confusion != nullptr && normal_class != nullptr && out != nullptr,
                "null argument");
        *out = new mf_confusion{
            misfire::fault_vs_normal_collapse(confusion->value, normal_class)};
    });
}

void mf_confusion_free(mf_confusion* confusion) { delete confusion; }

size_t mf_sweep_size(const mf_sweep* sweep) {
    return sweep == nullptr ? 0 : sweep->value.rows.size();
}

size_t mf_sweep_feature_count(const mf_sweep* sweep, size_t row) {
    if (sweep == nullptr || row >= sweep->value.rows.size()) return 0;
    return sweep->value.rows[row].feature_count;
}

double mf_sweep_accuracy(const mf_sweep* sweep, size_t row) {
    if (sweep == nullptr || row >= sweep->value.rows.size()) return 0.0;
    return sweep->value.rows[row].accuracy;
}

const char* mf_sweep_feature(const mf_sweep* sweep, size_t row, size_t index) {
    if (sweep == nullptr || row >= sweep->value.rows.size()) return nullptr;
    const auto& features = sweep->value.rows[row].features;
    return index < features.size() ? features[index].c_str() : nullptr;
}

void mf_sweep_free(mf_sweep* sweep) { delete sweep; }

/* ---------------- pipeline and reports ---------------- */

mf_status mf_generate_corpus(const mf_sim_config* config, const char* out_dir,
                             size_t per_condition, const char* only_condition) {
    return guarded([&] {
        require(config != nullptr && out_dir != nullptr, "null argument");
        std::optional<misfire::Condition> only;
        if (only_condition != nullptr && *only_condition != '\0') {
            const misfire::Condition c = parse_condition_arg(only_condition);
            require(c != misfire::Condition::Unlabeled,
                    "only_condition must be a concrete condition");
            only = c;
        }
        misfire::generate_corpus(to_core(*config), out_dir, per_condition, only);
    });
}

mf_status mf_extract_corpus(const char* manifest_path, size_t window_len,
                            size_t hop, double sample_rate_override,
                            mf_dataset** out, size_t* skipped, char** warnings) {
    return guarded([&] {
        require(manifest_path != nullptr && out != nullptr, "null argument");
        misfire::ExtractResult result =
            misfire::extract_corpus(manifest_path, window_len, hop, sample_rate_override);
        if (skipped != nullptr) *skipped = result.skipped;
        if (warnings != nullptr) {
            std::string joined;
            for (const std::string& w : result.warnings) {
                joined += w;
                joined += '\n';
            }
            *warnings = dup_string(joined);
        }
        *out = new mf_dataset{std::move(result.dataset)};
    });
}

mf_status mf_report_eval_json(const mf_confusion* confusion,
                              const char* normal_class, char** out) {
    return guarded([&] {
        require(confusion != nullptr && out != nullptr, "null argument");
        std::optional<std::string> normal;
        if (normal_class != nullptr) normal = normal_class;
        *out = dup_string(misfire::eval_report_json(confusion->value, normal));
    });
}

mf_status mf_report_eval_text(const mf_confusion* confusion,
                              const char* normal_class, char** out) {
    return guarded([&] {
        require(confusion != nullptr && out != nullptr, "null argument");
        std::optional<std::string> normal;
        if (normal_class != nullptr) normal = normal_class;
        *out = dup_string(misfire::eval_report_text(confusion->value, normal));
    });
}

mf_status mf_report_sweep_json(const mf_sweep* sweep, char** out) {
    return guarded([&] {
        require(sweep != nullptr && out != nullptr, "null argument");
        *out = dup_string(misfire::sweep_report_json(sweep->value));
    });
}

mf_status mf_report_sweep_text(const mf_sweep* sweep, char** out) {
    return guarded([&] {
        require(sweep != nullptr && out != nullptr, "null argument");
        *out = dup_string(misfire::sweep_report_text(sweep->value));
    });
}

} // extern "C"

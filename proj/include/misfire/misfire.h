/* misfire: engine misfire detection from vibration-signal statistics.
 *
 * C interface over the C++ core. Objects are opaque handles created and
 * destroyed through this API; every fallible call returns mf_status and
 * leaves a human-readable message in mf_last_error() (thread local) on
 * failure. Strings returned through char** out-parameters are heap
 * allocated and must be released with mf_string_free(); const char*
 * accessor results point into the handle and stay valid until it is freed.
 */
#ifndef MISFIRE_H
#define MISFIRE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mf_status {
    MF_OK = 0,
    MF_ERROR_INVALID_ARGUMENT = 1, /* bad parameter or violated precondition */
    MF_ERROR_IO = 2,               /* filesystem failure */
    MF_ERROR_PARSE = 3,            /* malformed file content */
    MF_ERROR_INTERNAL = 4
} mf_status;

const char* mf_status_name(mf_status status);
const char* mf_last_error(void);
void mf_string_free(char* s);

/* ------------------------------------------------------------------ */
/* Signals                                                             */
/* ------------------------------------------------------------------ */

/* Four-stroke four-cylinder simulator parameters. cylinder_gains is the
 * per-cylinder transmission gain; with uniform gains all four firing
 * signatures are identical. */
typedef struct mf_sim_config {
    double rpm;                /* 1500 */
    double sample_rate_hz;     /* 24000 */
    size_t n_samples;          /* 8192 */
    double burst_amplitude;    /* 1.0 */
    double burst_decay_s;      /* 0.002 */
    double burst_freq_hz;      /* 3000 */
    double misfire_attenuation;/* 0.1, in [0,1) */
    double noise_sigma;        /* 0.15, >= 0 */
    double cylinder_gains[4];  /* {2.2, 1.7, 1.25, 0.95} */
    uint64_t seed;
} mf_sim_config;

void mf_sim_config_defaults(mf_sim_config* config);

typedef struct mf_signal mf_signal;

/* condition is one of "C1mis".."C4mis", "Normal", or "Unlabeled"/NULL. */
mf_status mf_signal_synth(const mf_sim_config* config, const char* condition,
                          mf_signal** out);
mf_status mf_signal_load(const char* path, const char* condition,
                         double sample_rate_hz, mf_signal** out);
mf_status mf_signal_save(const mf_signal* signal, const char* path);
size_t mf_signal_length(const mf_signal* signal);
const double* mf_signal_samples(const mf_signal* signal);
const char* mf_signal_condition(const mf_signal* signal);
void mf_signal_free(mf_signal* signal);

/* ------------------------------------------------------------------ */
/* Datasets and feature extraction                                     */
/* ------------------------------------------------------------------ */

typedef struct mf_dataset mf_dataset;

/* Empty dataset carrying the 13-feature schema. */
mf_status mf_dataset_create(mf_dataset** out);
/* Slices the signal into windows (offsets 0, hop, 2*hop, ...) and appends
 * one feature row per window; windows_added may be null. A signal shorter
 * than the window adds nothing and succeeds. */
mf_status mf_dataset_append_signal(mf_dataset* dataset, const mf_signal* signal,
                                   size_t window_len, size_t hop,
                                   size_t* windows_added);
mf_status mf_dataset_read(const char* path, int engine_labels_only, mf_dataset** out);
mf_status mf_dataset_write(const mf_dataset* dataset, const char* path);
mf_status mf_dataset_project(const mf_dataset* dataset, const char* const* features,
                             size_t n_features, mf_dataset** out);
size_t mf_dataset_n_features(const mf_dataset* dataset);
size_t mf_dataset_n_instances(const mf_dataset* dataset);
size_t mf_dataset_n_classes(const mf_dataset* dataset);
const char* mf_dataset_feature_name(const mf_dataset* dataset, size_t index);
const char* mf_dataset_class_name(const mf_dataset* dataset, size_t index);
void mf_dataset_free(mf_dataset* dataset);

/* ------------------------------------------------------------------ */
/* Decision-tree feature ranking                                       */
/* ------------------------------------------------------------------ */

typedef struct mf_ranking mf_ranking;

/* Builds the ranking tree (min_leaf 2, max_depth 20) and ranks every
 * dataset feature. */
mf_status mf_ranking_build(const mf_dataset* dataset, mf_ranking** out);
mf_status mf_ranking_read(const char* path, mf_ranking** out);
mf_status mf_ranking_write(const mf_ranking* ranking, const char* path);
size_t mf_ranking_size(const mf_ranking* ranking);
const char* mf_ranking_feature(const mf_ranking* ranking, size_t index);
double mf_ranking_score(const mf_ranking* ranking, size_t index);
void mf_ranking_free(mf_ranking* ranking);

/* ------------------------------------------------------------------ */
/* K* classification                                                   */
/* ------------------------------------------------------------------ */

typedef struct mf_model mf_model;

/* blend_percent in [0, 100]; 20 is the conventional default. */
mf_status mf_model_create(const mf_dataset* training, double blend_percent,
                          mf_model** out);
/* values: one per training feature. class_scores (nullable) receives one
 * score per training class; scores sum to 1. */
mf_status mf_model_classify(const mf_model* model, const double* values,
                            size_t n_values, size_t* predicted_class,
                            double* class_scores);
size_t mf_model_n_classes(const mf_model* model);
const char* mf_model_class_name(const mf_model* model, size_t index);
void mf_model_free(mf_model* model);

/* ------------------------------------------------------------------ */
/* Evaluation                                                          */
/* ------------------------------------------------------------------ */

typedef struct mf_confusion mf_confusion;
typedef struct mf_sweep mf_sweep;

/* Stratified k-fold cross-validation; deterministic for a fixed seed. */
mf_status mf_cross_validate(const mf_dataset* dataset, size_t folds,
                            double blend_percent, uint64_t seed,
                            mf_confusion** out);
/* Cross-validates the top-m ranked features for m = 1..n, one shared fold
 * seed. The ranking must cover the dataset's features exactly. */
mf_status mf_feature_sweep(const mf_dataset* dataset, const mf_ranking* ranking,
                           size_t folds, double blend_percent, uint64_t seed,
                           mf_sweep** out);

mf_status mf_confusion_read(const char* path, mf_confusion** out);
mf_status mf_confusion_write(const mf_confusion* confusion, const char* path);
size_t mf_confusion_n_classes(const mf_confusion* confusion);
const char* mf_confusion_class_name(const mf_confusion* confusion, size_t index);
uint64_t mf_confusion_count(const mf_confusion* confusion, size_t true_class,
                            size_t predicted_class);
mf_status mf_confusion_accuracy(const mf_confusion* confusion, double* out);
mf_status mf_confusion_recall(const mf_confusion* confusion, size_t class_index,
                              double* out);
/* Merges all non-normal classes into "Fault" (index 0); normal keeps its
 * name at index 1. */
mf_status mf_confusion_collapse(const mf_confusion* confusion,
                                const char* normal_class, mf_confusion** out);
void mf_confusion_free(mf_confusion* confusion);

size_t mf_sweep_size(const mf_sweep* sweep);
size_t mf_sweep_feature_count(const mf_sweep* sweep, size_t row);
double mf_sweep_accuracy(const mf_sweep* sweep, size_t row);
const char* mf_sweep_feature(const mf_sweep* sweep, size_t row, size_t index);
void mf_sweep_free(mf_sweep* sweep);

/* ------------------------------------------------------------------ */
/* Batch pipeline and reports                                          */
/* ------------------------------------------------------------------ */

/* Writes <condition>_<index>.sig files plus manifest.json under out_dir;
 * per-file seeds are config->seed + canonical-condition-index *
 * per_condition + index. only_condition (nullable) restricts generation
 * to one condition. */
mf_status mf_generate_corpus(const mf_sim_config* config, const char* out_dir,
                             size_t per_condition, const char* only_condition);
/* manifest_path may be the manifest file or the directory holding it.
 * Signals shorter than the window are skipped (count in *skipped, nullable;
 * one warning line per skip in *warnings, nullable, newline separated).
 * sample_rate_override <= 0 keeps the manifest's rate. */
mf_status mf_extract_corpus(const char* manifest_path, size_t window_len,
                            size_t hop, double sample_rate_override,
                            mf_dataset** out, size_t* skipped, char** warnings);

/* normal_class is nullable; when given, reports include the fault-vs-normal
 * collapse. JSON keeps full precision; text rounds accuracies to one
 * decimal. */
mf_status mf_report_eval_json(const mf_confusion* confusion,
                              const char* normal_class, char** out);
mf_status mf_report_eval_text(const mf_confusion* confusion,
                              const char* normal_class, char** out);
mf_status mf_report_sweep_json(const mf_sweep* sweep, char** out);
mf_status mf_report_sweep_text(const mf_sweep* sweep, char** out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* MISFIRE_H */

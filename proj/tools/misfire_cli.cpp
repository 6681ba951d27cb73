// misfire: batch pipeline driver over the misfire C API.
//
//   gen      synthesize a labeled signal corpus
//   extract  turn signals into a 13-feature dataset
//   rank     decision-tree feature ranking
//   sweep    accuracy vs number of top-ranked features
//   eval     cross-validated confusion matrix and metrics
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "misfire/misfire.h"

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct CliError {
    int code;
    std::string message;
};

void check(mf_status status, const std::string& context = {}) {
    if (status == MF_OK) return;
    std::string message = context.empty() ? "" : context + ": ";
    message += mf_last_error()[0] != '\0' ? mf_last_error() : mf_status_name(status);
    throw CliError{kExitData, message};
}

template <typename F>
std::string report_string(F&& fill, const std::string& context) {
    char* raw = nullptr;
    check(fill(&raw), context);
    std::string out(raw);
    mf_string_free(raw);
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw CliError{kExitData, "cannot write " + path};
    out << content;
    if (!out) throw CliError{kExitData, "write failed: " + path};
}

// Run metadata appended to the library's machine-readable report.
std::string with_run_metadata(const std::string& report_json, const ordered_json& run) {
    ordered_json doc = ordered_json::parse(report_json);
    doc["run"] = run;
    return doc.dump(2) + "\n";
}

struct GenOptions {
    std::string out_dir;
    std::size_t windows = 100;
    std::string condition;
    mf_sim_config config{};
};

struct ExtractOptions {
    std::string in_path;
    std::string out_path;
    std::size_t window = 8192;
    std::size_t hop = 0;  // 0: same as window
    double sample_rate = 0.0;
};

struct RankOptions {
    std::string in_path;
    std::string out_path;
};

struct SweepOptions {
    std::string in_path;
    std::string ranking_path;
    std::string out_path;
    std::size_t folds = 10;
    double blend = 20.0;
    std::uint64_t seed = 42;
};

struct EvalOptions {
    std::string in_path;
    std::string from_confusion;
    std::string out_path;
    std::vector<std::string> features;
    std::size_t folds = 10;
    double blend = 20.0;
    std::uint64_t seed = 42;
};

int cmd_gen(const GenOptions& opt) {
    check(mf_generate_corpus(&opt.config, opt.out_dir.c_str(), opt.windows,
                             opt.condition.empty() ? nullptr : opt.condition.c_str()),
          "gen");
    return 0;
}

int cmd_extract(const ExtractOptions& opt) {
    mf_dataset* dataset = nullptr;
    size_t skipped = 0;
    char* warnings = nullptr;
    const std::size_t hop = opt.hop == 0 ? opt.window : opt.hop;
    check(mf_extract_corpus(opt.in_path.c_str(), opt.window, hop, opt.sample_rate,
                            &dataset, &skipped, &warnings),
          "extract");
    if (warnings != nullptr && warnings[0] != '\0') std::cerr << warnings;
    mf_string_free(warnings);
    const mf_status status = mf_dataset_write(dataset, opt.out_path.c_str());
    mf_dataset_free(dataset);
    check(status, "extract");
    if (skipped > 0)
        std::cerr << "extract: skipped " << skipped << " signal(s) shorter than the window\n";
    return 0;
}

int cmd_rank(const RankOptions& opt) {
    mf_dataset* dataset = nullptr;
    check(mf_dataset_read(opt.in_path.c_str(), 0, &dataset), "rank");
    mf_ranking* ranking = nullptr;
    mf_status status = mf_ranking_build(dataset, &ranking);
    mf_dataset_free(dataset);
    check(status, "rank");
    status = mf_ranking_write(ranking, opt.out_path.c_str());
    mf_ranking_free(ranking);
    check(status, "rank");
    return 0;
}

int cmd_sweep(const SweepOptions& opt) {
    mf_dataset* dataset = nullptr;
    check(mf_dataset_read(opt.in_path.c_str(), 0, &dataset), "sweep");
    mf_ranking* ranking = nullptr;
    mf_status status = mf_ranking_read(opt.ranking_path.c_str(), &ranking);
    if (status != MF_OK) mf_dataset_free(dataset);
    check(status, "sweep");

    mf_sweep* sweep = nullptr;
    status = mf_feature_sweep(dataset, ranking, opt.folds, opt.blend, opt.seed, &sweep);
    mf_ranking_free(ranking);
    mf_dataset_free(dataset);
    check(status, "sweep");

    const std::string text_report = report_string(
        [&](char** out) { return mf_report_sweep_text(sweep, out); }, "sweep");
    const std::string json_report = report_string(
        [&](char** out) { return mf_report_sweep_json(sweep, out); }, "sweep");
    mf_sweep_free(sweep);

    ordered_json run;
    run["command"] = "sweep";
    run["folds"] = opt.folds;
    run["blend"] = opt.blend;
    run["seed"] = opt.seed;
    if (!opt.out_path.empty())
        write_file(opt.out_path, with_run_metadata(json_report, run));
    std::cout << text_report;
    return 0;
}

int cmd_eval(const EvalOptions& opt) {
    mf_confusion* confusion = nullptr;
    ordered_json run;
    run["command"] = "eval";

    if (!opt.from_confusion.empty()) {
        check(mf_confusion_read(opt.from_confusion.c_str(), &confusion), "eval");
        run["from_confusion"] = opt.from_confusion;
    } else {
        mf_dataset* dataset = nullptr;
        check(mf_dataset_read(opt.in_path.c_str(), 0, &dataset), "eval");
        if (!opt.features.empty()) {
            std::vector<const char*> names;
            names.reserve(opt.features.size());
            for (const std::string& f : opt.features) names.push_back(f.c_str());
            mf_dataset* projected = nullptr;
            const mf_status status =
                mf_dataset_project(dataset, names.data(), names.size(), &projected);
            if (status != MF_OK) {
                mf_dataset_free(dataset);
                check(status, "eval --features");
            }
            mf_dataset_free(dataset);
            dataset = projected;
        }
        const mf_status status =
            mf_cross_validate(dataset, opt.folds, opt.blend, opt.seed, &confusion);
        mf_dataset_free(dataset);
        check(status, "eval");
        run["folds"] = opt.folds;
        run["blend"] = opt.blend;
        run["seed"] = opt.seed;
        if (!opt.features.empty()) run["features"] = opt.features;
    }

    // Collapse to fault-vs-normal only when a Normal class is present.
    const char* normal = nullptr;
    for (size_t i = 0; i < mf_confusion_n_classes(confusion); ++i)
        if (std::string(mf_confusion_class_name(confusion, i)) == "Normal")
            normal = "Normal";

    const std::string text_report = report_string(
        [&](char** out) { return mf_report_eval_text(confusion, normal, out); }, "eval");
    const std::string json_report = report_string(
        [&](char** out) { return mf_report_eval_json(confusion, normal, out); }, "eval");
    mf_confusion_free(confusion);

    if (!opt.out_path.empty())
        write_file(opt.out_path, with_run_metadata(json_report, run));
    std::cout << text_report;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Misfire-detection pipeline: synthetic engine vibration signals, "
                 "statistical features, decision-tree feature ranking, K* "
                 "classification, cross-validated evaluation."};
    app.require_subcommand(1);

    GenOptions gen;
    mf_sim_config_defaults(&gen.config);
    gen.config.seed = 42;
    CLI::App* gen_cmd = app.add_subcommand("gen", "Generate a labeled signal corpus");
    gen_cmd->add_option("--out", gen.out_dir, "Output directory")->required();
    gen_cmd->add_option("--windows", gen.windows, "Signals per condition (default 100)");
    gen_cmd->add_option("--seed", gen.config.seed, "Base seed (default 42)");
    gen_cmd->add_option("--window", gen.config.n_samples,
                        "Samples per signal (default 8192)");
    gen_cmd->add_option("--rpm", gen.config.rpm, "Engine speed (default 1500)");
    gen_cmd->add_option("--sample-rate", gen.config.sample_rate_hz,
                        "Sampling frequency in Hz (default 24000)");
    gen_cmd->add_option("--noise", gen.config.noise_sigma,
                        "Gaussian noise sigma (default 0.15)");
    gen_cmd->add_option("--attenuation", gen.config.misfire_attenuation,
                        "Misfiring-cylinder burst multiplier (default 0.1)");
    gen_cmd->add_option("--condition", gen.condition,
                        "Generate only this condition (default: all five)");

    ExtractOptions extract;
    CLI::App* extract_cmd =
        app.add_subcommand("extract", "Extract the 13-feature dataset from a corpus");
    extract_cmd->add_option("--in", extract.in_path, "Manifest file or corpus directory")
        ->required();
    extract_cmd->add_option("--out", extract.out_path, "Dataset CSV path")->required();
    extract_cmd->add_option("--window", extract.window, "Window length (default 8192)");
    extract_cmd->add_option("--hop", extract.hop, "Hop between windows (default: window)");
    extract_cmd->add_option("--sample-rate", extract.sample_rate,
                            "Override the manifest sample rate");

    RankOptions rank;
    CLI::App* rank_cmd = app.add_subcommand("rank", "Rank features with a decision tree");
    rank_cmd->add_option("--in", rank.in_path, "Dataset CSV path")->required();
    rank_cmd->add_option("--out", rank.out_path, "Ranking CSV path")->required();

    SweepOptions sweep;
    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "Accuracy vs number of top-ranked features");
    sweep_cmd->add_option("--in", sweep.in_path, "Dataset CSV path")->required();
    sweep_cmd->add_option("--ranking", sweep.ranking_path, "Ranking CSV path")->required();
    sweep_cmd->add_option("--out", sweep.out_path, "Report JSON path");
    sweep_cmd->add_option("--folds", sweep.folds, "Cross-validation folds (default 10)");
    sweep_cmd->add_option("--blend", sweep.blend, "K* blend percent (default 20)");
    sweep_cmd->add_option("--seed", sweep.seed, "Fold seed (default 42)");

    EvalOptions eval;
    CLI::App* eval_cmd =
        app.add_subcommand("eval", "Cross-validated confusion matrix and metrics");
    eval_cmd->add_option("--in", eval.in_path, "Dataset CSV path");
    eval_cmd->add_option("--features", eval.features,
                         "Comma-separated feature subset to evaluate")
        ->delimiter(',');
    eval_cmd->add_option("--from-confusion", eval.from_confusion,
                         "Replay a stored confusion matrix instead of running CV");
    eval_cmd->add_option("--out", eval.out_path, "Report JSON path");
    eval_cmd->add_option("--folds", eval.folds, "Cross-validation folds (default 10)");
    eval_cmd->add_option("--blend", eval.blend, "K* blend percent (default 20)");
    eval_cmd->add_option("--seed", eval.seed, "Fold seed (default 42)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (gen_cmd->parsed()) return cmd_gen(gen);
        if (extract_cmd->parsed()) return cmd_extract(extract);
        if (rank_cmd->parsed()) return cmd_rank(rank);
        if (sweep_cmd->parsed()) return cmd_sweep(sweep);
        if (eval_cmd->parsed()) {
            if (eval.in_path.empty() && eval.from_confusion.empty()) {
                std::cerr << "eval: either --in or --from-confusion is required\n";
                return kExitUsage;
            }
            return cmd_eval(eval);
        }
    } catch (const CliError& e) {
        std::cerr << "error: " << e.message << '\n';
        return e.code;
    }
    return kExitUsage;
}

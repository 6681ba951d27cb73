#include "core/pipeline.hpp"

#include <fstream>

#include <json.hpp>

#include "core/error.hpp"

namespace misfire {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json config_json(const EngineSimConfig& c) {
    ordered_json j;
    j["rpm"] = c.rpm;
    j["sample_rate_hz"] = c.sample_rate_hz;
    j["n_samples"] = c.n_samples;
    j["burst_amplitude"] = c.burst_amplitude;
    j["burst_decay_s"] = c.burst_decay_s;
    j["burst_freq_hz"] = c.burst_freq_hz;
    j["misfire_attenuation"] = c.misfire_attenuation;
    j["noise_sigma"] = c.noise_sigma;
    j["cylinder_gains"] = c.cylinder_gains;
    j["seed"] = c.seed;
    return j;
}

} // namespace

GenResult generate_corpus(const EngineSimConfig& base,
                          const std::filesystem::path& out_dir,
                          std::size_t per_condition,
                          std::optional<Condition> only_condition) {
    validate(base);
    if (per_condition == 0)
        fail(errc::invalid_argument, "per_condition must be positive");
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) fail(errc::io, "cannot create output directory: " + out_dir.string());

    GenResult result;
    ordered_json signals = ordered_json::object();
    for (std::size_t ci = 0; ci < kEngineConditions.size(); ++ci) {
        const Condition condition = kEngineConditions[ci];
        if (only_condition && condition != *only_condition) continue;
        for (std::size_t i = 0; i < per_condition; ++i) {
            EngineSimConfig cfg = base;
            cfg.seed = base.seed + ci * per_condition + i;
            const RawSignal signal = synth_engine_signal(cfg, condition);
            const std::string name =
                std::string(condition_name(condition)) + "_" + std::to_string(i) + ".sig";
            save_signal(signal, out_dir / name);
            signals[name] = {{"condition", condition_name(condition)}, {"seed", cfg.seed}};
            result.files.push_back(name);
        }
    }

    ordered_json manifest;
    manifest["config"] = config_json(base);
    manifest["windows_per_condition"] = per_condition;
    manifest["signals"] = std::move(signals);

    result.manifest_path = out_dir / "manifest.json";
    std::ofstream out(result.manifest_path);
    if (!out) fail(errc::io, "cannot write manifest: " + result.manifest_path.string());
    out << manifest.dump(2) << '\n';
    if (!out) fail(errc::io, "write failed: " + result.manifest_path.string());
    return result;
}

ExtractResult extract_corpus(const std::filesystem::path& manifest_path,
                             std::size_t window_len, std::size_t hop,
                             double sample_rate_override) {
    std::filesystem::path path = manifest_path;
    if (std::filesystem::is_directory(path)) path /= "manifest.json";
    std::ifstream in(path);
    if (!in) fail(errc::io, "cannot open manifest: " + path.string());

    ordered_json manifest;
    try {
        manifest = ordered_json::parse(in);
    } catch (const std::exception& e) {
        fail(errc::parse, path.string() + ": " + e.what());
    }
    if (!manifest.contains("signals") || !manifest["signals"].is_object())
        fail(errc::parse, path.string() + ": manifest has no 'signals' object");

    double sample_rate = 24000.0;
    if (manifest.contains("config") && manifest["config"].contains("sample_rate_hz"))
        sample_rate = manifest["config"]["sample_rate_hz"].get<double>();
    if (sample_rate_override > 0.0) sample_rate = sample_rate_override;

    const std::filesystem::path dir = path.parent_path();
    ExtractResult result;
    result.dataset = make_feature_dataset();
    for (const auto& [name, entry] : manifest["signals"].items()) {
        if (!entry.contains("condition"))
            fail(errc::parse, path.string() + ": signal '" + name + "' has no condition");
        const auto condition = parse_condition(entry["condition"].get<std::string>());
        if (!condition)
            fail(errc::parse, path.string() + ": signal '" + name + "' has unknown condition '" +
                                  entry["condition"].get<std::string>() + "'");
        const RawSignal signal = load_signal(dir / name, *condition, sample_rate);
        const std::vector<SignalWindow> windows = window_signal(signal, window_len, hop);
        if (windows.empty()) {
            ++result.skipped;
            result.warnings.push_back("skipping " + name + ": " +
                                      std::to_string(signal.samples.size()) +
                                      " samples is shorter than the window");
            continue;
        }
        for (const SignalWindow& w : windows)
            result.dataset.append(extract_features(w));
    }
    return result;
}

} // namespace misfire

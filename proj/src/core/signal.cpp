#include "core/signal.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "core/error.hpp"
#include "core/rng.hpp"

namespace misfire {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool parse_double(const std::string& line, double& out) {
    const char* begin = line.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    if (end == begin) return false;
    while (*end == ' ' || *end == '\t') ++end;
    return *end == '\0' && std::isfinite(out);
}

} // namespace

double samples_per_firing(const EngineSimConfig& config) {
    const double firings_per_second = config.rpm / 60.0 * 2.0;
    return config.sample_rate_hz / firings_per_second;
}

void validate(const EngineSimConfig& config) {
    if (config.rpm <= 0.0) fail(errc::invalid_argument, "rpm must be positive");
    if (config.sample_rate_hz <= 0.0)
        fail(errc::invalid_argument, "sample_rate_hz must be positive");
    if (config.n_samples == 0) fail(errc::invalid_argument, "n_samples must be positive");
    if (config.burst_decay_s <= 0.0)
        fail(errc::invalid_argument, "burst_decay_s must be positive");
    if (!(config.misfire_attenuation >= 0.0 && config.misfire_attenuation < 1.0))
        fail(errc::invalid_argument, "misfire_attenuation must be in [0, 1)");
    if (config.noise_sigma < 0.0)
        fail(errc::invalid_argument, "noise_sigma must be >= 0");
    for (double g : config.cylinder_gains)
        if (!(g > 0.0))
            fail(errc::invalid_argument, "cylinder gains must be positive");
}

RawSignal load_signal(const std::filesystem::path& path, Condition condition,
                      double sample_rate_hz) {
    if (sample_rate_hz <= 0.0)
        fail(errc::invalid_argument, "sample_rate_hz must be positive");
    std::ifstream in(path);
    if (!in) fail(errc::io, "cannot open signal file: " + path.string());

    RawSignal out;
    out.sample_rate_hz = sample_rate_hz;
    out.condition = condition;
    out.source_id = path.string();

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            if (in.peek() == std::ifstream::traits_type::eof()) break;
            fail(errc::parse, path.string() + ": blank line " + std::to_string(line_no));
        }
        double value = 0.0;
        if (!parse_double(line, value))
            fail(errc::parse, path.string() + ": not a number at line " +
                                  std::to_string(line_no) + ": '" + line + "'");
        out.samples.push_back(value);
    }
    if (out.samples.empty()) fail(errc::parse, "empty signal file: " + path.string());
    return out;
}

void save_signal(const RawSignal& signal, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) fail(errc::io, "cannot write signal file: " + path.string());
    char buf[64];
    for (double s : signal.samples) {
        std::snprintf(buf, sizeof buf, "%.17g\n", s);
        out << buf;
    }
    if (!out) fail(errc::io, "write failed: " + path.string());
}

std::vector<SignalWindow> window_signal(const RawSignal& signal,
                                        std::size_t window_len, std::size_t hop) {
    if (window_len < 2) fail(errc::invalid_argument, "window_len must be >= 2");
    if (hop < 1) fail(errc::invalid_argument, "hop must be >= 1");

    std::vector<SignalWindow> windows;
    const std::size_t n = signal.samples.size();
    if (n < window_len) return windows;
    for (std::size_t start = 0; start + window_len <= n; start += hop) {
        SignalWindow w;
        w.samples.assign(signal.samples.begin() + static_cast<std::ptrdiff_t>(start),
                         signal.samples.begin() + static_cast<std::ptrdiff_t>(start + window_len));
        w.condition = signal.condition;
        windows.push_back(std::move(w));
    }
    return windows;
}

RawSignal synth_engine_signal(const EngineSimConfig& config, Condition condition) {
    validate(config);
    if (condition == Condition::Unlabeled)
        fail(errc::invalid_argument, "synth_engine_signal needs a concrete condition");

    RawSignal out;
    out.sample_rate_hz = config.sample_rate_hz;
    out.condition = condition;
    out.source_id = std::string("synth:") + std::string(condition_name(condition));
    out.samples.assign(config.n_samples, 0.0);

    const double interval = samples_per_firing(config);
    const int misfire_cyl = misfiring_cylinder(condition);

    for (std::size_t firing = 0;; ++firing) {
        const auto onset =
            static_cast<std::size_t>(std::llround(static_cast<double>(firing) * interval));
        if (onset >= config.n_samples) break;
        const int cylinder = kFiringOrder[firing % kFiringOrder.size()];
        double amplitude =
            config.burst_amplitude * config.cylinder_gains[static_cast<std::size_t>(cylinder - 1)];
        if (cylinder == misfire_cyl) amplitude *= config.misfire_attenuation;
        for (std::size_t n = onset; n < config.n_samples; ++n) {
            const double t = static_cast<double>(n - onset) / config.sample_rate_hz;
            out.samples[n] += amplitude * std::exp(-t / config.burst_decay_s) *
                              std::sin(2.0 * kPi * config.burst_freq_hz * t);
        }
    }

    if (config.noise_sigma > 0.0) {
        Rng rng(config.seed);
        for (double& s : out.samples) s += config.noise_sigma * rng.gaussian();
    }
    return out;
}

} // namespace misfire

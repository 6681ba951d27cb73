#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "core/condition.hpp"

namespace misfire {

// A labeled acceleration time series.
struct RawSignal {
    std::vector<double> samples;
    double sample_rate_hz = 24000.0;
    Condition condition = Condition::Unlabeled;
    std::string source_id;
};

// A fixed-length slice of a signal; trailing partial windows are never kept.
struct SignalWindow {
    std::vector<double> samples;
    Condition condition = Condition::Unlabeled;
};

// Four-stroke four-cylinder simulator parameters. Every firing adds a damped
// sinusoid burst; the misfiring cylinder's bursts are scaled by
// misfire_attenuation and gaussian noise rides on every sample.
//
// cylinder_gains is the per-cylinder transmission gain between combustion and
// the accelerometer. With uniform gains the four firing signatures are
// identical, which leaves the misfire classes indistinguishable to
// order-free window statistics; the staggered defaults give each class a
// distinct energy footprint.
struct EngineSimConfig {
    double rpm = 1500.0;
    double sample_rate_hz = 24000.0;
    std::size_t n_samples = 8192;
    double burst_amplitude = 1.0;
    double burst_decay_s = 0.002;
    double burst_freq_hz = 3000.0;
    double misfire_attenuation = 0.1;  // in [0, 1)
    double noise_sigma = 0.15;         // >= 0
    std::array<double, 4> cylinder_gains = {2.2, 1.7, 1.25, 0.95};
    std::uint64_t seed = 0;
};

// Cylinders fire every half crankshaft revolution in the fixed order 1-3-4-2.
inline constexpr std::array<int, 4> kFiringOrder = {1, 3, 4, 2};

// Samples between consecutive firings (480 at the 1500 rpm / 24 kHz defaults).
double samples_per_firing(const EngineSimConfig& config);

void validate(const EngineSimConfig& config);

// Headerless one-column text, one real per line.
RawSignal load_signal(const std::filesystem::path& path, Condition condition,
                      double sample_rate_hz = 24000.0);
void save_signal(const RawSignal& signal, const std::filesystem::path& path);

// Windows at offsets 0, hop, 2*hop, ...; a signal shorter than window_len
// yields no windows.
std::vector<SignalWindow> window_signal(const RawSignal& signal,
                                        std::size_t window_len, std::size_t hop);

// Deterministic for a fixed (config, condition): the seed drives only the
// noise stream.
RawSignal synth_engine_signal(const EngineSimConfig& config, Condition condition);

} // namespace misfire

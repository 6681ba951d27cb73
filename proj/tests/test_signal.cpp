#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "core/error.hpp"
#include "core/signal.hpp"

using namespace misfire;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "misfire_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

// Full 480-sample firing segments grouped by cylinder, defaults assumed.
struct Segments {
    std::vector<std::vector<double>> by_cylinder{4};  // concatenated samples
    std::vector<std::vector<double>> peak_per_segment{4};
};

Segments split_segments(const RawSignal& s, std::size_t from_firing = 0) {
    const std::size_t interval = 480;
    Segments segs;
    for (std::size_t k = from_firing;; ++k) {
        const std::size_t onset = k * interval;
        if (onset + interval > s.samples.size()) break;
        const int cyl = kFiringOrder[k % 4];
        double peak = 0.0;
        for (std::size_t i = onset; i < onset + interval; ++i) {
            segs.by_cylinder[cyl - 1].push_back(s.samples[i]);
            peak = std::max(peak, std::abs(s.samples[i]));
        }
        segs.peak_per_segment[cyl - 1].push_back(peak);
    }
    return segs;
}

double rms(const std::vector<double>& x) {
    double ss = 0.0;
    for (double v : x) ss += v * v;
    return std::sqrt(ss / static_cast<double>(x.size()));
}

EngineSimConfig uniform_quiet_config() {
    EngineSimConfig cfg;
    cfg.noise_sigma = 0.0;
    cfg.cylinder_gains = {1.0, 1.0, 1.0, 1.0};
    return cfg;
}

} // namespace

TEST_CASE("load_signal parses one value per line") {
    const auto path = temp_file("ok.sig");
    write_text(path, "1.0\n-2.5\n0.0\n");
    const RawSignal s = load_signal(path, Condition::Normal);
    CHECK(s.samples == std::vector<double>{1.0, -2.5, 0.0});
    CHECK(s.condition == Condition::Normal);
    CHECK(s.sample_rate_hz == 24000.0);
}

TEST_CASE("load_signal error contract") {
    const auto bad = temp_file("bad.sig");
    write_text(bad, "1.0\nabc\n2.0\n");
    CHECK_THROWS_WITH_AS((void)load_signal(bad, Condition::Unlabeled),
                         doctest::Contains("line 2"), Error);

    const auto empty = temp_file("empty.sig");
    write_text(empty, "");
    CHECK_THROWS_AS((void)load_signal(empty, Condition::Unlabeled), Error);

    CHECK_THROWS_AS((void)load_signal(temp_file("missing.sig"), Condition::Unlabeled),
                    Error);
}

TEST_CASE("signal save/load round trip at 8192 samples") {
    EngineSimConfig cfg;
    cfg.seed = 7;
    const RawSignal s = synth_engine_signal(cfg, Condition::C1mis);
    REQUIRE(s.samples.size() == 8192);
    const auto path = temp_file("roundtrip.sig");
    save_signal(s, path);
    const RawSignal back = load_signal(path, Condition::C1mis);
    CHECK(back.samples.size() == 8192);
    CHECK(back.samples == s.samples);  // %.17g is lossless for doubles
}

TEST_CASE("window_signal counts and offsets") {
    RawSignal s;
    s.condition = Condition::C2mis;

    s.samples.assign(8192, 1.5);
    CHECK(window_signal(s, 8192, 8192).size() == 1);

    s.samples.assign(8191, 1.5);
    CHECK(window_signal(s, 8192, 8192).empty());

    s.samples.resize(20000);
    for (std::size_t i = 0; i < s.samples.size(); ++i)
        s.samples[i] = static_cast<double>(i);
    const auto windows = window_signal(s, 8192, 4096);
    REQUIRE(windows.size() == 3);
    CHECK(windows[0].samples.front() == 0.0);
    CHECK(windows[1].samples.front() == 4096.0);
    CHECK(windows[2].samples.front() == 8192.0);
    CHECK(windows[2].condition == Condition::C2mis);

    CHECK_THROWS_AS((void)window_signal(s, 1, 1), Error);
    CHECK_THROWS_AS((void)window_signal(s, 8192, 0), Error);
}

TEST_CASE("windowing never fabricates samples") {
    RawSignal s;
    s.samples.resize(10000);
    for (std::size_t i = 0; i < s.samples.size(); ++i)
        s.samples[i] = std::sin(static_cast<double>(i));
    const auto windows = window_signal(s, 3000, 3000);
    REQUIRE(windows.size() == 3);
    std::vector<double> concat;
    for (const auto& w : windows)
        concat.insert(concat.end(), w.samples.begin(), w.samples.end());
    CHECK(std::equal(concat.begin(), concat.end(), s.samples.begin()));
}

TEST_CASE("generator determinism") {
    EngineSimConfig cfg;
    cfg.seed = 99;
    const RawSignal a = synth_engine_signal(cfg, Condition::C3mis);
    const RawSignal b = synth_engine_signal(cfg, Condition::C3mis);
    CHECK(a.samples == b.samples);

    cfg.seed = 100;
    const RawSignal c = synth_engine_signal(cfg, Condition::C3mis);
    CHECK(a.samples != c.samples);
}

TEST_CASE("uniform gains: normal firing is symmetric across cylinders") {
    EngineSimConfig cfg = uniform_quiet_config();
    const RawSignal s = synth_engine_signal(cfg, Condition::Normal);
    // skip the first engine cycle: the very first bursts carry no tails yet
    const Segments segs = split_segments(s, 4);
    double reference = segs.peak_per_segment[0].front();
    for (const auto& peaks : segs.peak_per_segment)
        for (double p : peaks)
            CHECK(p == doctest::Approx(reference).epsilon(1e-9));
}

TEST_CASE("staggered gains scale the per-cylinder peaks") {
    EngineSimConfig cfg;
    cfg.noise_sigma = 0.0;
    const RawSignal s = synth_engine_signal(cfg, Condition::Normal);
    const Segments segs = split_segments(s, 4);
    const double base = segs.peak_per_segment[0].front() / cfg.cylinder_gains[0];
    // neighbouring-burst tails perturb each peak at the exp(-10) scale
    for (int cyl = 0; cyl < 4; ++cyl)
        CHECK(segs.peak_per_segment[cyl].front() / cfg.cylinder_gains[cyl] ==
              doctest::Approx(base).epsilon(1e-4));
}

TEST_CASE("misfire attenuates exactly the misfiring cylinder's segments") {
    EngineSimConfig cfg = uniform_quiet_config();
    const RawSignal s = synth_engine_signal(cfg, Condition::C2mis);
    const Segments segs = split_segments(s);
    const double ratio = rms(segs.by_cylinder[1]) / rms(segs.by_cylinder[0]);
    // neighbouring-burst tails enter at exp(-10), hence the 1e-3 width
    CHECK(ratio == doctest::Approx(cfg.misfire_attenuation).epsilon(1e-3));
}

TEST_CASE("fully suppressed misfire leaves only bounded tails") {
    EngineSimConfig cfg = uniform_quiet_config();
    cfg.misfire_attenuation = 0.0;
    const RawSignal s = synth_engine_signal(cfg, Condition::C3mis);
    const Segments segs = split_segments(s);
    const double bound =
        cfg.burst_amplitude *
        std::exp(-480.0 / (cfg.sample_rate_hz * cfg.burst_decay_s));
    double peak = 0.0;
    for (double v : segs.by_cylinder[2]) peak = std::max(peak, std::abs(v));
    CHECK(peak > 0.0);
    CHECK(peak <= bound);
}

TEST_CASE("config validation") {
    EngineSimConfig cfg;
    cfg.misfire_attenuation = 1.0;
    CHECK_THROWS_AS((void)synth_engine_signal(cfg, Condition::C1mis), Error);
    cfg = EngineSimConfig{};
    cfg.noise_sigma = -0.1;
    CHECK_THROWS_AS((void)synth_engine_signal(cfg, Condition::C1mis), Error);
    cfg = EngineSimConfig{};
    cfg.rpm = 0.0;
    CHECK_THROWS_AS((void)synth_engine_signal(cfg, Condition::C1mis), Error);
    cfg = EngineSimConfig{};
    CHECK_THROWS_AS((void)synth_engine_signal(cfg, Condition::Unlabeled), Error);
}

TEST_CASE("firing cadence matches the four-stroke model") {
    const EngineSimConfig cfg;
    CHECK(samples_per_firing(cfg) == 480.0);  // 1500 rpm, 24 kHz
}

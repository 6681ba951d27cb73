#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "core/dataset.hpp"
#include "core/signal.hpp"

namespace misfire {

struct GenResult {
    std::vector<std::string> files;       // relative names, generation order
    std::filesystem::path manifest_path;
};

// Writes <condition>_<index>.sig per condition plus manifest.json. Each
// file's seed is base seed + canonical condition index * per_condition +
// index, so a run restricted to one condition reproduces the same files as a
// full run.
GenResult generate_corpus(const EngineSimConfig& base,
                          const std::filesystem::path& out_dir,
                          std::size_t per_condition,
                          std::optional<Condition> only_condition = {});

struct ExtractResult {
    Dataset dataset;
    std::size_t skipped = 0;              // signals shorter than the window
    std::vector<std::string> warnings;
};

// Reads every signal listed in the manifest (path may be the manifest file
// or its directory), windows it and extracts one feature row per window.
// sample_rate_override <= 0 keeps the manifest's rate.
ExtractResult extract_corpus(const std::filesystem::path& manifest_path,
                             std::size_t window_len, std::size_t hop,
                             double sample_rate_override = 0.0);

} // namespace misfire

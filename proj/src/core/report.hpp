#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "core/eval.hpp"

namespace misfire {

// Machine-readable evaluation report: class names, confusion counts, overall
// accuracy, per-class recall and (when a normal class is given) the
// fault-vs-normal collapse. Accuracies keep full precision here; the text
// rendering rounds them to one decimal.
std::string eval_report_json(const ConfusionMatrix& cm,
                             std::optional<std::string> normal_class);
std::string eval_report_text(const ConfusionMatrix& cm,
                             std::optional<std::string> normal_class);

std::string sweep_report_json(const SweepResult& sweep);
std::string sweep_report_text(const SweepResult& sweep);

// Confusion fixture: JSON object with "class_names" and "counts".
ConfusionMatrix read_confusion(const std::filesystem::path& path);
void write_confusion(const ConfusionMatrix& cm, const std::filesystem::path& path);

} // namespace misfire

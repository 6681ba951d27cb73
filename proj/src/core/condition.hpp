#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace misfire {

// Engine condition labels. The first five are the closed label set used for
// classification, listed in the row/column order of every confusion matrix.
enum class Condition { C1mis, C2mis, C3mis, C4mis, Normal, Unlabeled };

inline constexpr std::array<Condition, 5> kEngineConditions = {
    Condition::C1mis, Condition::C2mis, Condition::C3mis,
    Condition::C4mis, Condition::Normal};

std::string_view condition_name(Condition c);
std::optional<Condition> parse_condition(std::string_view name);

// 1..4 for CKmis, 0 for Normal/Unlabeled.
int misfiring_cylinder(Condition c);

} // namespace misfire

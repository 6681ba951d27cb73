#include "core/condition.hpp"

namespace misfire {

std::string_view condition_name(Condition c) {
    switch (c) {
        case Condition::C1mis: return "C1mis";
        case Condition::C2mis: return "C2mis";
        case Condition::C3mis: return "C3mis";
        case Condition::C4mis: return "C4mis";
        case Condition::Normal: return "Normal";
        case Condition::Unlabeled: return "Unlabeled";
    }
    return "Unlabeled";
}

std::optional<Condition> parse_condition(std::string_view name) {
    for (Condition c : kEngineConditions)
        if (name == condition_name(c)) return c;
    if (name == "Unlabeled") return Condition::Unlabeled;
    return std::nullopt;
}

int misfiring_cylinder(Condition c) {
    switch (c) {
        case Condition::C1mis: return 1;
        case Condition::C2mis: return 2;
        case Condition::C3mis: return 3;
        case Condition::C4mis: return 4;
        default: return 0;
    }
}

} // namespace misfire

#include "core/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "core/error.hpp"

namespace misfire {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string percent1(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", value);
    return buf;
}

ordered_json confusion_json(const ConfusionMatrix& cm) {
    ordered_json j;
    j["class_names"] = cm.class_names;
    j["counts"] = cm.counts;
    return j;
}

void render_grid(std::ostringstream& out, const ConfusionMatrix& cm) {
    std::size_t width = 7;
    for (const std::string& name : cm.class_names) width = std::max(width, name.size() + 2);

    out << "TESTING";
    for (std::size_t i = 0; i < 7; ++i) out << ' ';  // pad the corner cell
    for (const std::string& name : cm.class_names) {
        out << std::string(width - name.size(), ' ') << name;
    }
    out << '\n';
    for (std::size_t i = 0; i < cm.counts.size(); ++i) {
        const std::string& name = cm.class_names[i];
        out << name << std::string(14 - std::min<std::size_t>(14, name.size()), ' ');
        for (std::uint64_t c : cm.counts[i]) {
            const std::string cell = std::to_string(c);
            out << std::string(width - cell.size(), ' ') << cell;
        }
        out << '\n';
    }
}

} // namespace

std::string eval_report_json(const ConfusionMatrix& cm,
                             std::optional<std::string> normal_class) {
    ordered_json j;
    j["kind"] = "eval";
    j["class_names"] = cm.class_names;
    j["confusion"] = cm.counts;
    j["overall_accuracy"] = accuracy(cm);
    j["per_class_recall"] = per_class_recall(cm);
    if (normal_class) {
        const ConfusionMatrix collapsed = fault_vs_normal_collapse(cm, *normal_class);
        ordered_json c = confusion_json(collapsed);
        c["accuracy"] = accuracy(collapsed);
        j["collapse"] = c;
    }
    return j.dump(2) + "\n";
}

std::string eval_report_text(const ConfusionMatrix& cm,
                             std::optional<std::string> normal_class) {
    std::ostringstream out;
    render_grid(out, cm);
    out << "Overall accuracy: " << percent1(accuracy(cm)) << "%\n";
    const std::vector<double> recalls = per_class_recall(cm);
    out << "Per-class recall:";
    for (std::size_t i = 0; i < recalls.size(); ++i)
        out << ' ' << cm.class_names[i] << ' ' << percent1(recalls[i]) << '%';
    out << '\n';
    if (normal_class) {
        const ConfusionMatrix collapsed = fault_vs_normal_collapse(cm, *normal_class);
        out << "Fault vs " << *normal_class << ": Fault->Fault " << collapsed.counts[0][0]
            << ", Fault->" << *normal_class << ' ' << collapsed.counts[0][1] << ", "
            << *normal_class << "->Fault " << collapsed.counts[1][0] << ", " << *normal_class
            << "->" << *normal_class << ' ' << collapsed.counts[1][1] << " (accuracy "
            << percent1(accuracy(collapsed)) << "%)\n";
    }
    return out.str();
}

std::string sweep_report_json(const SweepResult& sweep) {
    ordered_json j;
    j["kind"] = "sweep";
    j["rows"] = ordered_json::array();
    for (const SweepRow& row : sweep.rows) {
        ordered_json r;
        r["n_features"] = row.feature_count;
        r["accuracy"] = row.accuracy;
        r["features"] = row.features;
        j["rows"].push_back(std::move(r));
    }
    return j.dump(2) + "\n";
}

std::string sweep_report_text(const SweepResult& sweep) {
    std::ostringstream out;
    out << "No. of features    Accuracy (%)\n";
    for (const SweepRow& row : sweep.rows) {
        const std::string n = std::to_string(row.feature_count);
        out << n << std::string(19 - n.size(), ' ') << percent1(row.accuracy) << '\n';
    }
    return out.str();
}

ConfusionMatrix read_confusion(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(errc::io, "cannot open confusion file: " + path.string());
    ordered_json j;
    try {
        j = ordered_json::parse(in);
    } catch (const std::exception& e) {
        fail(errc::parse, path.string() + ": " + e.what());
    }
    if (!j.contains("class_names") || !j.contains("counts"))
        fail(errc::parse, path.string() + ": expected 'class_names' and 'counts'");

    ConfusionMatrix cm;
    try {
        cm.class_names = j["class_names"].get<std::vector<std::string>>();
        cm.counts = j["counts"].get<std::vector<std::vector<std::uint64_t>>>();
    } catch (const std::exception& e) {
        fail(errc::parse, path.string() + ": " + e.what());
    }
    if (cm.class_names.empty() || cm.counts.size() != cm.class_names.size())
        fail(errc::parse, path.string() + ": counts must be square over class_names");
    for (const auto& row : cm.counts)
        if (row.size() != cm.class_names.size())
            fail(errc::parse, path.string() + ": counts must be square over class_names");
    return cm;
}

void write_confusion(const ConfusionMatrix& cm, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) fail(errc::io, "cannot write confusion file: " + path.string());
    out << confusion_json(cm).dump(2) << '\n';
    if (!out) fail(errc::io, "write failed: " + path.string());
}

} // namespace misfire

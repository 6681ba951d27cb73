#include "core/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "core/error.hpp"
#include "core/rng.hpp"

namespace misfire {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_value(const std::string& text, const std::string& where) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || !std::isfinite(v))
        fail(errc::parse, where + ": not a finite number: '" + text + "'");
    return v;
}

} // namespace

std::size_t Dataset::feature_index(std::string_view name) const {
    for (std::size_t i = 0; i < feature_names.size(); ++i)
        if (feature_names[i] == name) return i;
    fail(errc::invalid_argument, "unknown feature: " + std::string(name));
}

std::size_t Dataset::intern_class(std::string_view name) {
    for (std::size_t i = 0; i < class_names.size(); ++i)
        if (class_names[i] == name) return i;
    class_names.emplace_back(name);
    return class_names.size() - 1;
}

std::vector<std::size_t> Dataset::class_counts() const {
    std::vector<std::size_t> counts(class_names.size(), 0);
    for (const Instance& inst : instances) ++counts[inst.label];
    return counts;
}

void Dataset::append(const FeatureVector& fv) {
    if (fv.condition == Condition::Unlabeled)
        fail(errc::invalid_argument, "cannot append an unlabeled feature vector");
    if (feature_names != misfire::feature_names())
        fail(errc::invalid_argument, "dataset does not carry the 13-feature schema");
    Instance inst;
    inst.values = fv.values();
    inst.label = intern_class(condition_name(fv.condition));
    instances.push_back(std::move(inst));
}

Dataset make_feature_dataset() {
    Dataset d;
    d.feature_names = feature_names();
    return d;
}

Dataset read_dataset(const std::filesystem::path& path, bool engine_labels_only) {
    std::ifstream in(path);
    if (!in) fail(errc::io, "cannot open dataset: " + path.string());

    std::string line;
    if (!std::getline(in, line)) fail(errc::parse, "empty dataset file: " + path.string());
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::vector<std::string> header = split_csv(line);
    if (header.size() < 2 || header.back() != "label")
        fail(errc::parse, path.string() + ": header must end with 'label'");

    Dataset d;
    d.feature_names.assign(header.begin(), header.end() - 1);
    std::set<std::string> seen;
    for (const std::string& name : d.feature_names) {
        if (name.empty()) fail(errc::parse, path.string() + ": empty feature name in header");
        if (!seen.insert(name).second)
            fail(errc::parse, path.string() + ": duplicate feature name: " + name);
    }

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            if (in.peek() == std::ifstream::traits_type::eof()) break;
            fail(errc::parse, path.string() + ": blank line " + std::to_string(line_no));
        }
        std::vector<std::string> fields = split_csv(line);
        if (fields.size() != header.size())
            fail(errc::parse, path.string() + ": line " + std::to_string(line_no) + " has " +
                                  std::to_string(fields.size()) + " fields, expected " +
                                  std::to_string(header.size()));
        Instance inst;
        inst.values.reserve(d.n_features());
        for (std::size_t i = 0; i < d.n_features(); ++i)
            inst.values.push_back(
                parse_value(fields[i], path.string() + ": line " + std::to_string(line_no)));
        const std::string& label = fields.back();
        if (engine_labels_only) {
            const auto cond = parse_condition(label);
            if (!cond || *cond == Condition::Unlabeled)
                fail(errc::parse, path.string() + ": line " + std::to_string(line_no) +
                                      ": unknown condition label: '" + label + "'");
        }
        inst.label = d.intern_class(label);
        d.instances.push_back(std::move(inst));
    }
    return d;
}

void write_dataset(const Dataset& d, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) fail(errc::io, "cannot write dataset: " + path.string());
    for (std::size_t i = 0; i < d.feature_names.size(); ++i)
        out << d.feature_names[i] << ',';
    out << "label\n";
    char buf[64];
    for (const Instance& inst : d.instances) {
        for (double v : inst.values) {
            std::snprintf(buf, sizeof buf, "%.12g", v);
            out << buf << ',';
        }
        out << d.class_names.at(inst.label) << '\n';
    }
    if (!out) fail(errc::io, "write failed: " + path.string());
}

Dataset project(const Dataset& d, const std::vector<std::string>& keep) {
    if (keep.empty()) fail(errc::invalid_argument, "projection needs at least one feature");
    std::vector<std::size_t> indices;
    indices.reserve(keep.size());
    for (const std::string& name : keep) indices.push_back(d.feature_index(name));

    Dataset out;
    out.feature_names = keep;
    out.class_names = d.class_names;
    out.instances.reserve(d.n_instances());
    for (const Instance& inst : d.instances) {
        Instance p;
        p.label = inst.label;
        p.values.reserve(indices.size());
        for (std::size_t idx : indices) p.values.push_back(inst.values[idx]);
        out.instances.push_back(std::move(p));
    }
    return out;
}

FoldAssignment stratified_folds(const Dataset& d, std::size_t k, std::uint64_t seed) {
    if (k < 2) fail(errc::invalid_argument, "fold count must be >= 2");
    if (d.instances.empty()) fail(errc::invalid_argument, "cannot fold an empty dataset");
    std::vector<std::vector<std::size_t>> per_class(d.class_names.size());
    for (std::size_t i = 0; i < d.instances.size(); ++i)
        per_class[d.instances[i].label].push_back(i);
    for (std::size_t c = 0; c < per_class.size(); ++c)
        if (!per_class[c].empty() && per_class[c].size() < k)
            fail(errc::invalid_argument, "fold count " + std::to_string(k) +
                                             " exceeds the " + std::to_string(per_class[c].size()) +
                                             " instances of class " + d.class_names[c]);

    FoldAssignment fa;
    fa.k = k;
    fa.fold_of.assign(d.n_instances(), 0);
    Rng rng(seed);
    for (auto& group : per_class) {
        rng.shuffle(group);
        for (std::size_t pos = 0; pos < group.size(); ++pos)
            fa.fold_of[group[pos]] = pos % k;
    }
    return fa;
}

} // namespace misfire

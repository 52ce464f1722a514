#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace geodlab {

// Shortest decimal that round-trips the double exactly.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

enum class TolKind { Absolute, Relative };

struct ReportRow {
    std::string label;
    double measured = 0.0;
    double target = 0.0;
    double tolerance = 0.0;
    TolKind kind = TolKind::Absolute;
    bool pass = false;
};

inline bool row_passes(double measured, double target, double tolerance, TolKind kind) {
    const double err = std::abs(measured - target);
    if (!std::isfinite(err)) return false;
    return kind == TolKind::Absolute ? err <= tolerance : err <= tolerance * std::abs(target);
}

inline ReportRow make_row(std::string label, double measured, double target, double tolerance,
                          TolKind kind = TolKind::Absolute) {
    ReportRow r{std::move(label), measured, target, tolerance, kind, false};
    r.pass = row_passes(measured, target, tolerance, kind);
    return r;
}

struct ExperimentReport {
    std::string name;
    std::vector<ReportRow> rows;
    std::vector<std::string> artifacts;

    bool all_pass() const {
        for (const auto& r : rows)
            if (!r.pass) return false;
        return true;
    }

    void add(std::string label, double measured, double target, double tolerance,
             TolKind kind = TolKind::Absolute) {
        rows.push_back(make_row(std::move(label), measured, target, tolerance, kind));
    }

    // Re-judge rows whose label matches an override tolerance.
    void override_tolerance(const std::string& label, double tolerance) {
        for (auto& r : rows) {
            if (r.label == label) {
                r.tolerance = tolerance;
                r.pass = row_passes(r.measured, r.target, r.tolerance, r.kind);
            }
        }
    }
};

inline std::string sanitize_label(std::string label) {
    for (char& c : label)
        if (c == ',') c = ';';
    return label;
}

inline std::string to_csv(const ExperimentReport& rep) {
    std::string out = "label,measured,target,tolerance,pass\n";
    for (const auto& r : rep.rows) {
        out += sanitize_label(r.label);
        out += ',';
        out += format_double(r.measured);
        out += ',';
        out += format_double(r.target);
        out += ',';
        out += format_double(r.tolerance);
        out += ',';
        out += r.pass ? "true" : "false";
        out += '\n';
    }
    return out;
}

inline void emit_csv(const ExperimentReport& rep, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("emit_csv: cannot open " + path);
    f << to_csv(rep);
    if (!f) throw std::runtime_error("emit_csv: write failed for " + path);
}

// Parses a CSV produced by to_csv back into rows (the absolute/relative
// declaration is runtime metadata and is not part of the file format; the
// pass verdict is taken as recorded).
inline ExperimentReport parse_csv(const std::string& csv, std::string name = "") {
    ExperimentReport rep;
    rep.name = std::move(name);
    std::istringstream in(csv);
    std::string line;
    if (!std::getline(in, line) || line != "label,measured,target,tolerance,pass")
        throw std::runtime_error("parse_csv: bad header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> parts;
        std::size_t pos = 0;
        for (int k = 0; k < 4; ++k) {
            const std::size_t comma = line.find(',', pos);
            if (comma == std::string::npos) throw std::runtime_error("parse_csv: bad row");
            parts.push_back(line.substr(pos, comma - pos));
            pos = comma + 1;
        }
        parts.push_back(line.substr(pos));
        ReportRow r;
        r.label = parts[0];
        r.measured = std::stod(parts[1]);
        r.target = std::stod(parts[2]);
        r.tolerance = std::stod(parts[3]);
        r.pass = parts[4] == "true";
        rep.rows.push_back(r);
    }
    return rep;
}

inline ExperimentReport parse_csv_file(const std::string& path, std::string name = "") {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("parse_csv_file: cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_csv(ss.str(), std::move(name));
}

}  // namespace geodlab

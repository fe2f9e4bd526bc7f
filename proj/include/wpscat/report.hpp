#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "config.hpp"

namespace wpscat {

inline constexpr const char* artifact_version = "0.1.0";
inline constexpr int report_schema_version = 1;

// 17 significant digits: enough for bitwise-reproducible round trips.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Report {
    json config_echo;
    std::vector<DiagnosticSeries> series;
    std::vector<std::pair<std::string, ConvergenceTable>> tables;
    json results = json::object();
    json provenance = json::object();
    std::vector<std::string> failures; // unmet expectations

    bool ok() const { return failures.empty(); }
};

inline json series_to_json(const DiagnosticSeries& s) {
    json j = json::object();
    j["region"] = s.region;
    j["sheared"] = s.sheared;
    j["times"] = s.times;
    j["values"] = s.values;
    j["shears"] = s.shears;
    j["fit_exponent"] = s.fit_exponent;
    j["fit_window"] = {s.fit_lo, s.fit_hi};
    j["verdict"] = verdict_name(s.verdict);
    return j;
}

inline json table_to_json(const std::string& label, const ConvergenceTable& t) {
    json j = json::object();
    j["label"] = label;
    j["horizons"] = t.horizons;
    j["differences"] = t.differences;
    j["fitted_tail_exponent"] = t.fitted_tail_exponent;
    return j;
}

inline json report_to_json(const Report& r) {
    json j = json::object();
    j["schema_version"] = report_schema_version;
    j["config"] = r.config_echo;
    j["results"] = r.results;
    j["series"] = json::array();
    for (const DiagnosticSeries& s : r.series) j["series"].push_back(series_to_json(s));
    j["tables"] = json::array();
    for (const auto& [label, t] : r.tables) j["tables"].push_back(table_to_json(label, t));
    j["provenance"] = r.provenance;
    j["failures"] = r.failures;
    return j;
}

namespace detail {
inline std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw IoFailure("cannot open '" + p.string() + "' for writing");
    return out;
}
} // namespace detail

// One row per (series, time); an empty report still yields the bare header.
inline void write_series_csv(const Report& r, const std::filesystem::path& path) {
    std::ofstream out = detail::open_out(path);
    out << "t,value,region,shear\n";
    for (const DiagnosticSeries& s : r.series)
        for (std::size_t i = 0; i < s.times.size(); ++i)
            out << format_double(s.times[i]) << ',' << format_double(s.values[i]) << ','
                << s.region << ',' << format_double(s.shears[i]) << '\n';
    if (!out) throw IoFailure("failed writing '" + path.string() + "'");
}

// Cauchy differences, attributed to the later horizon of each rung.
inline void write_table_csv(const Report& r, const std::filesystem::path& path) {
    std::ofstream out = detail::open_out(path);
    out << "T,diff,fitted_exponent\n";
    for (const auto& [label, t] : r.tables)
        for (std::size_t i = 0; i < t.differences.size(); ++i)
            out << format_double(t.horizons[i + 1]) << ',' << format_double(t.differences[i])
                << ',' << format_double(t.fitted_tail_exponent) << '\n';
    if (!out) throw IoFailure("failed writing '" + path.string() + "'");
}

inline void write_json_report(const Report& r, const std::filesystem::path& path) {
    std::ofstream out = detail::open_out(path);
    out << report_to_json(r).dump(2) << '\n';
    if (!out) throw IoFailure("failed writing '" + path.string() + "'");
}

// Emit the report files under output_dir, named after the experiment.
inline void emit_report(const Report& r, const std::string& name,
                        const std::filesystem::path& output_dir, bool csv = true,
                        bool json_out = true) {
    std::error_code ec;
    std::filesystem::create_directories(output_dir, ec);
    if (ec) throw IoFailure("cannot create output dir '" + output_dir.string() + "'");
    if (csv) {
        write_series_csv(r, output_dir / (name + "_series.csv"));
        write_table_csv(r, output_dir / (name + "_table.csv"));
    }
    if (json_out) write_json_report(r, output_dir / (name + ".json"));
}

} // namespace wpscat

#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"

#include "sideband/config.hpp"
#include "sideband/protocol.hpp"
#include "sideband/version.hpp"

namespace sideband {

inline constexpr const char* kSeriesHeader =
    "t,C12,EN_AB,Pgg,w2_plus,w2_minus,EN_2plus,EN_2minus,edge_leakage,norm_drift";

namespace detail {

inline std::string file_preamble(const RunConfig& cfg) {
    std::string out = "# ";
    out += kProgramName;
    out += " v";
    out += kVersion;
    out += "\n";
    const std::string echo = echo_config(cfg);
    std::size_t pos = 0;
    while (pos < echo.size()) {
        const std::size_t nl = echo.find('\n', pos);
        out += "# config: " + echo.substr(pos, nl - pos) + "\n";
        pos = nl + 1;
    }
    return out;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + path.string() + " for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw IoError("short write to " + path.string());
}

inline void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw ValidationError(std::string(what) + " is not finite");
}

}  // namespace detail

/// Stable 10-column CSV; absent observables are written as empty fields.
inline void emit_series(const ScenarioResult& result, const RunConfig& cfg,
                        const std::filesystem::path& path) {
    std::string out = detail::file_preamble(cfg);
    out += kSeriesHeader;
    out += "\n";
    double prev_t = -1.0;
    for (const ObservableRow& r : result.series) {
        if (!(r.t > prev_t) && prev_t >= 0.0)
            throw ValidationError("series rows must be strictly increasing in t");
        prev_t = r.t;
        out += format_double(r.t);
        out += ',';
        out += format_double(r.C12);
        out += ',';
        out += format_double(r.EN_AB);
        out += ',';
        out += format_double(r.Pgg);
        out += ',';
        out += format_double(r.w2_plus);
        out += ',';
        out += format_double(r.w2_minus);
        out += ',';
        if (r.EN_2plus) out += format_double(*r.EN_2plus);
        out += ',';
        if (r.EN_2minus) out += format_double(*r.EN_2minus);
        out += ',';
        out += format_double(r.edge_leakage);
        out += ',';
        out += format_double(r.norm_drift);
        out += '\n';
    }
    detail::write_file(path, out);
}

/// Companion grid table (transfer.csv, detuning.csv, ...).
inline void emit_table(const Table& table, const RunConfig& cfg,
                       const std::filesystem::path& path) {
    std::string out = detail::file_preamble(cfg);
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out += ',';
        out += table.columns[i];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_double(row[i]);
        }
        out += '\n';
    }
    detail::write_file(path, out);
}

/// Scalar outcomes as sorted-key JSON.
inline void emit_summary(const std::map<std::string, double>& summary,
                         const std::string& scenario_id, const std::filesystem::path& path) {
    nlohmann::json j;
    j["program"] = std::string(kProgramName);
    j["version"] = std::string(kVersion);
    j["scenario"] = scenario_id;
    for (const auto& [k, v] : summary) {
        detail::require_finite(v, k.c_str());
        j["summary"][k] = v;
    }
    detail::write_file(path, j.dump(2) + "\n");
}

}  // namespace sideband

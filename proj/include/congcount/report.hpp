#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "congcount/errors.hpp"
#include "congcount/sweep.hpp"

namespace congcount {

enum class ReportFormat { Csv, Json };

inline constexpr const char* kReportHeader =
    "theorem,p,H,K,M,N,h,u,v,S,T,set_size,delta,exact_count,main_term_num,main_term_den,"
    "abs_error,envelope_new,envelope_old,ratio_new,ratio_old,seed";

// 12 significant digits, shortest form ("%.12g").
inline std::string format_real(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

namespace detail {

inline std::string opt_cell(const std::optional<int64_t>& v) {
    return v ? std::to_string(*v) : std::string();
}

inline std::string opt_cell(const std::optional<double>& v) {
    return v ? format_real(*v) : std::string();
}

// JSON numbers are int64 at most; sweep main terms always fit
inline int64_t narrow_main_term(__int128 v) {
    if (v > INT64_MAX || v < INT64_MIN)
        throw std::overflow_error("records_to_json: main term exceeds the JSON integer range");
    return static_cast<int64_t>(v);
}

} // namespace detail

inline std::string to_csv(const std::vector<SweepRecord>& records) {
    std::string out = kReportHeader;
    out += '\n';
    for (const auto& r : records) {
        out += to_string(r.theorem);
        out += ',';
        out += std::to_string(r.p);
        for (const auto* f : {&r.H, &r.K, &r.M, &r.N, &r.h, &r.u, &r.v, &r.S, &r.T, &r.set_size}) {
            out += ',';
            out += detail::opt_cell(*f);
        }
        out += ',';
        out += detail::opt_cell(r.delta);
        out += ',';
        out += std::to_string(r.exact_count);
        out += ',';
        out += detail::i128_str(r.main_term.num);
        out += ',';
        out += detail::i128_str(r.main_term.den);
        out += ',';
        out += format_real(r.abs_error.to_double());
        out += ',';
        out += format_real(r.envelope_new);
        out += ',';
        out += format_real(r.envelope_old);
        out += ',';
        out += format_real(r.ratio_new);
        out += ',';
        out += format_real(r.ratio_old);
        out += ',';
        out += std::to_string(r.seed);
        out += '\n';
    }
    return out;
}

inline nlohmann::json records_to_json(const std::vector<SweepRecord>& records) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : records) {
        nlohmann::json o;
        o["theorem"] = to_string(r.theorem);
        o["p"] = r.p;
        auto put = [&o](const char* name, const std::optional<int64_t>& v) {
            if (v) o[name] = *v; else o[name] = nullptr;
        };
        put("H", r.H);
        put("K", r.K);
        put("M", r.M);
        put("N", r.N);
        put("h", r.h);
        put("u", r.u);
        put("v", r.v);
        put("S", r.S);
        put("T", r.T);
        put("set_size", r.set_size);
        if (r.delta) o["delta"] = *r.delta; else o["delta"] = nullptr;
        o["exact_count"] = r.exact_count;
        o["main_term_num"] = detail::narrow_main_term(r.main_term.num);
        o["main_term_den"] = detail::narrow_main_term(r.main_term.den);
        o["abs_error"] = r.abs_error.to_double();
        o["envelope_new"] = r.envelope_new;
        o["envelope_old"] = r.envelope_old;
        o["ratio_new"] = r.ratio_new;
        o["ratio_old"] = r.ratio_old;
        o["seed"] = r.seed;
        arr.push_back(std::move(o));
    }
    return arr;
}

inline void write_report(const std::vector<SweepRecord>& records, const std::string& path, ReportFormat fmt) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open report for writing", path);
    if (fmt == ReportFormat::Csv) {
        out << to_csv(records);
    } else {
        out << records_to_json(records).dump(2) << '\n';
    }
    out.flush();
    if (!out) throw io_error("failed writing report", path);
}

namespace detail {

struct RawReportRow {
    SweepRecord record;
    double stored_abs_error = 0;
};

inline std::vector<RawReportRow> parse_report_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open report", path);
    std::string line;
    auto chomp = [](std::string& s) {
        if (!s.empty() && s.back() == '\r') s.pop_back();
    };
    if (!std::getline(in, line)) throw io_error("empty report", path);
    chomp(line);
    if (line != kReportHeader) throw io_error("unrecognized report header", path);
    std::vector<RawReportRow> rows;
    while (std::getline(in, line)) {
        chomp(line);
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ss(line);
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (line.back() == ',') cells.push_back("");
        if (cells.size() != 22) throw io_error("malformed report row", path);
        RawReportRow row;
        SweepRecord& r = row.record;
        const auto kind = envelope_kind_from(cells[0]);
        if (!kind) throw io_error("unknown theorem tag " + cells[0], path);
        r.theorem = *kind;
        r.p = std::stoull(cells[1]);
        auto opt_i = [](const std::string& s) -> std::optional<int64_t> {
            if (s.empty()) return std::nullopt;
            return std::stoll(s);
        };
        r.H = opt_i(cells[2]);
        r.K = opt_i(cells[3]);
        r.M = opt_i(cells[4]);
        r.N = opt_i(cells[5]);
        r.h = opt_i(cells[6]);
        r.u = opt_i(cells[7]);
        r.v = opt_i(cells[8]);
        r.S = opt_i(cells[9]);
        r.T = opt_i(cells[10]);
        r.set_size = opt_i(cells[11]);
        if (!cells[12].empty()) r.delta = std::stod(cells[12]);
        r.exact_count = std::stoll(cells[13]);
        r.main_term = Rational(i128_parse(cells[14]), i128_parse(cells[15]));
        r.abs_error = exact_abs_error(r.exact_count, r.main_term);
        row.stored_abs_error = std::stod(cells[16]);
        r.envelope_new = std::stod(cells[17]);
        r.envelope_old = std::stod(cells[18]);
        r.ratio_new = std::stod(cells[19]);
        r.ratio_old = std::stod(cells[20]);
        r.seed = std::stoull(cells[21]);
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace detail

// Reads back a CSV produced by write_report. The exact rational error is
// recomputed from the integer columns.
inline std::vector<SweepRecord> read_report_csv(const std::string& path) {
    std::vector<SweepRecord> records;
    for (auto& row : detail::parse_report_csv(path)) records.push_back(std::move(row.record));
    return records;
}

// Internal-consistency audit. The abs_error column is reconstructible
// exactly from the integer columns, so it must re-format to the identical
// 12-digit string. The ratio columns are checked against abs_error divided
// by the stored envelopes; since every stored real carries up to ~5e-12
// relative rounding from the 12-significant-digit format, those checks use a
// 1e-10 relative tolerance.
inline std::vector<std::string> verify_report_csv(const std::string& path) {
    std::vector<std::string> problems;
    const auto rows = detail::parse_report_csv(path);
    auto close = [](double a, double b) {
        const double scale = std::max(std::abs(a), std::abs(b));
        return std::abs(a - b) <= 1e-10 * std::max(scale, 1.0);
    };
    for (size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i].record;
        const double err = r.abs_error.to_double();
        if (format_real(rows[i].stored_abs_error) != format_real(err))
            problems.push_back("row " + std::to_string(i) + ": abs_error mismatch");
        if (!close(r.ratio_new, err / r.envelope_new))
            problems.push_back("row " + std::to_string(i) + ": ratio_new mismatch");
        if (!close(r.ratio_old, err / r.envelope_old))
            problems.push_back("row " + std::to_string(i) + ": ratio_old mismatch");
    }
    return problems;
}

} // namespace congcount

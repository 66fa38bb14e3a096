// io.hpp
// CSV and JSON emission for every result type, plus the minimal parsers the
// tests use to round-trip emitted files. Doubles go to CSV as %.17g so they
// round-trip exactly; JSON uses nlohmann's shortest-round-trip encoding.

#pragma once

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "circleverify/circle.hpp"
#include "circleverify/repcount.hpp"
#include "circleverify/verify.hpp"

namespace circleverify {

using json = nlohmann::json;

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// RepWindow: CSV `n,value` rows; JSON summary.
// ---------------------------------------------------------------------------
inline void repwindow_to_csv(const RepWindow& w, std::ostream& out) {
    out << "n,value\n";
    for (uint64_t i = 0; i < w.H; ++i)
        out << (w.N + 1 + i) << ',' << format_double(w.values[i]) << '\n';
}

inline std::vector<std::pair<uint64_t, double>> parse_repwindow_csv(std::istream& in) {
    std::vector<std::pair<uint64_t, double>> rows;
    std::string line;
    if (!std::getline(in, line) || line != "n,value")
        throw std::invalid_argument("parse_repwindow_csv: bad header");
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        size_t comma = line.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("parse_repwindow_csv: bad row: " + line);
        rows.emplace_back(std::stoull(line.substr(0, comma)),
                          std::stod(line.substr(comma + 1)));
    }
    return rows;
}

inline json repwindow_summary_json(const RepWindow& w, double wall_time_s) {
    return json{{"kind", rep_kind_name(w.kind)},
                {"N", w.N},
                {"H", w.H},
                {"plain_sum", w.plain_sum},
                {"exp_weighted_sum", w.exp_weighted_sum},
                {"wall_time_s", wall_time_s}};
}

// ---------------------------------------------------------------------------
// Series evaluation grid: CSV `alpha,re,im,tail_bound`.
// ---------------------------------------------------------------------------
struct ExpsumRow {
    double alpha, re, im, tail_bound;
};

inline void expsum_to_csv(const std::vector<ExpsumRow>& rows, std::ostream& out) {
    out << "alpha,re,im,tail_bound\n";
    for (const auto& r : rows)
        out << format_double(r.alpha) << ',' << format_double(r.re) << ','
            << format_double(r.im) << ',' << format_double(r.tail_bound) << '\n';
}

inline std::vector<ExpsumRow> parse_expsum_csv(std::istream& in) {
    std::vector<ExpsumRow> rows;
    std::string line;
    if (!std::getline(in, line) || line != "alpha,re,im,tail_bound")
        throw std::invalid_argument("parse_expsum_csv: bad header");
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        ExpsumRow r{};
        std::istringstream ss(line);
        std::string field;
        double* slots[4] = {&r.alpha, &r.re, &r.im, &r.tail_bound};
        for (int i = 0; i < 4; ++i) {
            if (!std::getline(ss, field, ','))
                throw std::invalid_argument("parse_expsum_csv: bad row: " + line);
            *slots[i] = std::stod(field);
        }
        rows.push_back(r);
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Identity check and decomposition: JSON.
// ---------------------------------------------------------------------------
inline json identity_json(const IdentityCheck& c) {
    return json{{"lhs", c.lhs}, {"rhs", c.rhs}, {"abs_diff", c.abs_diff},
                {"rel_diff", c.rel_diff}};
}

inline json decomposition_json(const ArcDecomposition& d) {
    json pieces = json::array();
    for (const auto& piece : d.I)
        pieces.push_back(json{{"re", piece.real()}, {"im", piece.imag()}});
    json out{{"theorem", theorem_name(d.theorem)},
             {"N", d.N},
             {"H", d.H},
             {"c_or_A", d.c_or_A},
             {"B", d.B},
             {"arc_cut", d.arc_cut},
             {"I", pieces},
             {"main_term", d.main_term},
             {"weighted_sum", d.weighted_sum},
             {"reconstruction", d.reconstruction},
             {"closure_error", d.closure_error}};
    if (d.J) out["J"] = json{{"J1", d.J->first}, {"J2", d.J->second}};
    return out;
}

// ---------------------------------------------------------------------------
// Theorem runs and scans: CSV schema
//   theorem,N,H,exact_sum,main_term,residual,relative_error,range_diag
// with the fit appended as a `# fit ...` comment row.
// ---------------------------------------------------------------------------
inline void scan_to_csv(const ScanResult& res, std::ostream& out) {
    out << "theorem,N,H,exact_sum,main_term,residual,relative_error,range_diag\n";
    for (const auto& r : res.runs)
        out << theorem_name(r.theorem) << ',' << r.N << ',' << r.H << ','
            << format_double(r.exact_sum) << ',' << format_double(r.main_term) << ','
            << format_double(r.residual) << ',' << format_double(r.relative_error) << ','
            << format_double(r.range_diag) << '\n';
    if (res.fit.valid)
        out << "# fit slope=" << format_double(res.fit.slope)
            << " intercept=" << format_double(res.fit.intercept)
            << " r_squared=" << format_double(res.fit.r_squared) << '\n';
}

inline std::vector<TheoremRun> parse_scan_csv(std::istream& in) {
    std::vector<TheoremRun> rows;
    std::string line;
    if (!std::getline(in, line) ||
        line != "theorem,N,H,exact_sum,main_term,residual,relative_error,range_diag")
        throw std::invalid_argument("parse_scan_csv: bad header");
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string field;
        TheoremRun r;
        std::getline(ss, field, ',');
        r.theorem = theorem_from_name(field);
        std::getline(ss, field, ',');
        r.N = std::stoull(field);
        std::getline(ss, field, ',');
        r.H = std::stoull(field);
        double* slots[5] = {&r.exact_sum, &r.main_term, &r.residual, &r.relative_error,
                            &r.range_diag};
        for (double* s : slots) {
            if (!std::getline(ss, field, ','))
                throw std::invalid_argument("parse_scan_csv: bad row: " + line);
            *s = std::stod(field);
        }
        rows.push_back(r);
    }
    return rows;
}

inline json theorem_run_json(const TheoremRun& r) {
    return json{{"theorem", theorem_name(r.theorem)},
                {"N", r.N},
                {"H", r.H},
                {"exact_sum", r.exact_sum},
                {"main_term", r.main_term},
                {"residual", r.residual},
                {"relative_error", r.relative_error},
                {"range_diag", r.range_diag}};
}

// ---------------------------------------------------------------------------
// Bound suite: JSON array of checks.
// ---------------------------------------------------------------------------
inline json lemma_suite_json(const std::vector<BoundCheck>& checks) {
    json arr = json::array();
    for (const auto& c : checks) {
        json item{{"name", c.name},
                  {"grid_size", c.grid_size},
                  {"max_ratio", c.max_ratio},
                  {"pass", c.pass}};
        item["threshold"] = std::isinf(c.threshold) ? json("none") : json(c.threshold);
        arr.push_back(item);
    }
    return arr;
}

}  // namespace circleverify

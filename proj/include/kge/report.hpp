#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "kge/study.hpp"

namespace kge {

// Report schema (CSV columns, mirrored by the JSON emitter):
//   problem,eps,beta,h,tau_or_k,T0,lambda,error_H0,error_H1,order,
//   stable_flag,wall_seconds,steps,reference_hash
// Rows are sorted eps descending, then step (or h) descending; doubles
// are emitted with %.17g so a parse round-trips bit-exactly.

inline const char* kReportHeader =
    "problem,eps,beta,h,tau_or_k,T0,lambda,error_H0,error_H1,order,stable_flag,wall_seconds,"
    "steps,reference_hash";

namespace detail {

inline std::string fmt_full(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string fmt_wall(double v, bool timings) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", timings ? v : 0.0);
  return buf;
}

inline std::vector<const ConvergenceRecord*> sorted_view(const std::vector<ConvergenceRecord>& rs) {
  std::vector<const ConvergenceRecord*> v;
  v.reserve(rs.size());
  for (const auto& r : rs) v.push_back(&r);
  std::stable_sort(v.begin(), v.end(), [](const ConvergenceRecord* a, const ConvergenceRecord* b) {
    if (a->eps != b->eps) return a->eps > b->eps;
    if (a->step != b->step) return a->step > b->step;
    return a->h > b->h;
  });
  return v;
}

}  // namespace detail

inline std::string render_csv(const std::vector<ConvergenceRecord>& records, bool timings = true) {
  std::ostringstream os;
  os << kReportHeader << "\n";
  for (const ConvergenceRecord* r : detail::sorted_view(records)) {
    os << to_string(r->problem) << ',' << detail::fmt_full(r->eps) << ','
       << detail::fmt_full(r->beta) << ',' << detail::fmt_full(r->h) << ','
       << detail::fmt_full(r->step) << ',' << detail::fmt_full(r->t0) << ',' << r->lambda << ','
       << detail::fmt_full(r->error_h0) << ',' << detail::fmt_full(r->error_h1) << ','
       << detail::fmt_full(r->order) << ',' << r->flag << ','
       << detail::fmt_wall(r->wall_seconds, timings) << ',' << r->steps << ','
       << r->reference_hash << "\n";
  }
  return os.str();
}

inline nlohmann::json render_json(const std::vector<ConvergenceRecord>& records,
                                  bool timings = true) {
  nlohmann::json rows = nlohmann::json::array();
  for (const ConvergenceRecord* r : detail::sorted_view(records)) {
    nlohmann::json row;
    row["problem"] = to_string(r->problem);
    row["eps"] = r->eps;
    row["beta"] = r->beta;
    row["h"] = r->h;
    row["tau_or_k"] = r->step;
    row["T0"] = r->t0;
    row["lambda"] = r->lambda;
    row["error_H0"] = std::isnan(r->error_h0) ? nlohmann::json() : nlohmann::json(r->error_h0);
    row["error_H1"] = std::isnan(r->error_h1) ? nlohmann::json() : nlohmann::json(r->error_h1);
    row["order"] = std::isnan(r->order) ? nlohmann::json() : nlohmann::json(r->order);
    row["stable_flag"] = r->flag;
    row["wall_seconds"] = timings ? r->wall_seconds : 0.0;
    row["steps"] = r->steps;
    row["reference_hash"] = r->reference_hash;
    rows.push_back(std::move(row));
  }
  return rows;
}

// Parses a CSV produced by render_csv back into records (round-trip).
inline std::vector<ConvergenceRecord> parse_csv(const std::string& text) {
  std::vector<ConvergenceRecord> out;
  std::istringstream is(text);
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line != kReportHeader) throw std::runtime_error("report: unexpected CSV header");
      continue;
    }
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    while (cells.size() < 14) cells.emplace_back();
    ConvergenceRecord r;
    r.problem = parse_problem(cells[0]);
    auto num = [](const std::string& s) {
      return s.empty() ? std::numeric_limits<double>::quiet_NaN() : std::stod(s);
    };
    r.eps = num(cells[1]);
    r.beta = num(cells[2]);
    r.h = num(cells[3]);
    r.step = num(cells[4]);
    r.t0 = num(cells[5]);
    r.lambda = std::stoi(cells[6]);
    r.error_h0 = num(cells[7]);
    r.error_h1 = num(cells[8]);
    r.order = num(cells[9]);
    r.flag = cells[10];
    r.wall_seconds = num(cells[11]);
    r.steps = std::stol(cells[12]);
    r.reference_hash = cells[13];
    out.push_back(std::move(r));
  }
  return out;
}

// Writes the report; refuses to overwrite an existing file unless forced.
inline void emit_report(const std::vector<ConvergenceRecord>& records,
                        const std::filesystem::path& path, const std::string& format,
                        bool force = false, bool timings = true) {
  if (std::filesystem::exists(path) && !force)
    throw std::runtime_error("emit_report: " + path.string() +
                             " exists; pass --force to overwrite");
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw std::runtime_error("emit_report: cannot open " + path.string());
  if (format == "csv")
    os << render_csv(records, timings);
  else if (format == "json")
    os << render_json(records, timings).dump(2) << "\n";
  else
    throw std::invalid_argument("emit_report: unknown format '" + format + "'");
}

}  // namespace kge

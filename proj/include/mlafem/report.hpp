#ifndef MLAFEM_REPORT_HPP
#define MLAFEM_REPORT_HPP

#include "algorithm.hpp"
#include "errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace mlafem {

/// One line of levels.csv.
struct CsvRow {
  int level = 0;
  int dofs = 0;
  int elements = 0;
  int eig_index = 0;
  double lambda = 0.0;
  double err_vs_ref = std::numeric_limits<double>::quiet_NaN();
  double eta_total = 0.0;
  double osc_total = 0.0;
  double t_solve = 0.0;
  double t_eig = 0.0;
  double t_estimate = 0.0;
  double t_mark = 0.0;
  double t_refine = 0.0;
};

inline constexpr const char* csv_header =
    "level,dofs,elements,eig_index,lambda,err_vs_ref,eta_total,osc_total,t_solve,t_eig,t_estimate,t_mark,t_refine";

namespace detail {

inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline double parse_double(const std::string& s, int line) {
  if (s == "nan" || s == "NaN") return std::numeric_limits<double>::quiet_NaN();
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("csv line " + std::to_string(line) + ": bad number '" + s + "'");
  }
}

} // namespace detail

/// Rows for an eigenvalue run, one per (level, eigenpair). With
/// `zero_timings` the timing columns are written as 0 so reruns are
/// byte-identical.
inline std::vector<CsvRow> csv_rows(const AdaptiveResult& result, bool zero_timings = false) {
  std::vector<CsvRow> rows;
  for (const LevelRecord& l : result.levels) {
    for (std::size_t i = 0; i < l.eigenvalues.size(); ++i) {
      CsvRow r;
      r.level = l.level;
      r.dofs = l.dofs;
      r.elements = l.elements;
      r.eig_index = static_cast<int>(i);
      r.lambda = l.eigenvalues[i];
      r.err_vs_ref = l.errors[i];
      r.eta_total = l.eta[i];
      r.osc_total = l.osc;
      if (!zero_timings) {
        r.t_solve = l.times.solve;
        r.t_eig = l.times.eig;
        r.t_estimate = l.times.estimate;
        r.t_mark = l.times.mark;
        r.t_refine = l.times.refine;
      }
      rows.push_back(r);
    }
  }
  return rows;
}

/// Rows for a source-problem run: `lambda` carries a(u_h, u_h) and
/// `err_vs_ref` the energy error when the exact solution is known.
inline std::vector<CsvRow> csv_rows(const BvpResult& result, bool zero_timings = false) {
  std::vector<CsvRow> rows;
  for (const BvpLevelRecord& l : result.levels) {
    CsvRow r;
    r.level = l.level;
    r.dofs = l.dofs;
    r.elements = l.elements;
    r.lambda = l.energy;
    r.err_vs_ref = l.error;
    r.eta_total = l.eta;
    r.osc_total = l.osc;
    if (!zero_timings) {
      r.t_solve = l.times.solve;
      r.t_eig = l.times.eig;
      r.t_estimate = l.times.estimate;
      r.t_mark = l.times.mark;
      r.t_refine = l.times.refine;
    }
    rows.push_back(r);
  }
  return rows;
}

inline void write_csv(std::ostream& os, const std::vector<CsvRow>& rows) {
  using detail::format_double;
  os << csv_header << '\n';
  for (const CsvRow& r : rows) {
    os << r.level << ',' << r.dofs << ',' << r.elements << ',' << r.eig_index << ',' << format_double(r.lambda) << ','
       << format_double(r.err_vs_ref) << ',' << format_double(r.eta_total) << ',' << format_double(r.osc_total) << ','
       << format_double(r.t_solve) << ',' << format_double(r.t_eig) << ',' << format_double(r.t_estimate) << ','
       << format_double(r.t_mark) << ',' << format_double(r.t_refine) << '\n';
  }
}

inline std::vector<CsvRow> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError("csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != csv_header) throw ParseError("csv: unexpected header '" + line + "'");
  std::vector<CsvRow> rows;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 13) throw ParseError("csv line " + std::to_string(lineno) + ": expected 13 fields");
    auto integer = [&](const std::string& s) {
      const double v = detail::parse_double(s, lineno);
      if (v != std::floor(v)) throw ParseError("csv line " + std::to_string(lineno) + ": expected integer '" + s + "'");
      return static_cast<int>(v);
    };
    CsvRow r;
    r.level = integer(cells[0]);
    r.dofs = integer(cells[1]);
    r.elements = integer(cells[2]);
    r.eig_index = integer(cells[3]);
    double* fields[] = {&r.lambda, &r.err_vs_ref, &r.eta_total, &r.osc_total, &r.t_solve,
                        &r.t_eig,  &r.t_estimate, &r.t_mark,    &r.t_refine};
    for (int k = 0; k < 9; ++k) *fields[k] = detail::parse_double(cells[4 + k], lineno);
    rows.push_back(r);
  }
  return rows;
}

inline void write_csv_file(const std::string& path, const std::vector<CsvRow>& rows) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  write_csv(out, rows);
}

inline std::vector<CsvRow> read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return read_csv(in);
}

/// Least-squares fit of log(y) = slope * log(x) + intercept.
struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
  int points = 0;
};

inline RateFit fit_loglog(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionError("fit_loglog: size mismatch");
  const int n = static_cast<int>(x.size());
  if (n < 2) throw ConfigurationError("fit_loglog: need at least 2 points");
  double sx = 0, sy = 0;
  for (int i = 0; i < n; ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) throw ConfigurationError("fit_loglog: values must be positive");
    sx += std::log(x[i]);
    sy += std::log(y[i]);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (int i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx, dy = std::log(y[i]) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0)) throw ConfigurationError("fit_loglog: x values are all equal");
  RateFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  f.points = n;
  return f;
}

/// Fitted rates of one eigenpair index over the trailing window.
struct RateReport {
  int eig_index = 0;
  std::optional<RateFit> error; // absent when err_vs_ref is unavailable
  RateFit eta;
};

inline std::vector<RateReport> fit_rates(const std::vector<CsvRow>& rows, int window = 8) {
  if (window < 4) throw ConfigurationError("rate: window must be at least 4");
  std::map<int, std::vector<const CsvRow*>> by_index;
  for (const CsvRow& r : rows) by_index[r.eig_index].push_back(&r);
  if (by_index.empty()) throw ConfigurationError("rate: no rows");
  std::vector<RateReport> out;
  for (auto& [index, list] : by_index) {
    std::sort(list.begin(), list.end(), [](const CsvRow* a, const CsvRow* b) { return a->level < b->level; });
    if (static_cast<int>(list.size()) < 4) {
      throw ConfigurationError("rate: eig_index " + std::to_string(index) + " has " + std::to_string(list.size()) +
                               " rows, need at least 4");
    }
    const std::size_t first = list.size() > static_cast<std::size_t>(window) ? list.size() - window : 0;
    std::vector<double> dofs, eta, err_dofs, err;
    for (std::size_t k = first; k < list.size(); ++k) {
      dofs.push_back(list[k]->dofs);
      eta.push_back(list[k]->eta_total);
      if (std::isfinite(list[k]->err_vs_ref) && list[k]->err_vs_ref > 0) {
        err_dofs.push_back(list[k]->dofs);
        err.push_back(list[k]->err_vs_ref);
      }
    }
    RateReport rep;
    rep.eig_index = index;
    rep.eta = fit_loglog(dofs, eta);
    if (err.size() >= 4) rep.error = fit_loglog(err_dofs, err);
    out.push_back(rep);
  }
  return out;
}

/// One matched pair of levels from two runs.
struct CompareEntry {
  int eig_index = 0;
  int level_a = 0, level_b = 0;
  int dofs_a = 0, dofs_b = 0;
  double err_a = 0.0, err_b = 0.0;
  double error_ratio = std::numeric_limits<double>::quiet_NaN(); // err_a / err_b
  double eig_time_ratio = std::numeric_limits<double>::quiet_NaN();   // t_eig a / b
  double total_time_ratio = std::numeric_limits<double>::quiet_NaN(); // sum of phases a / b
};

namespace detail {

inline double total_time(const CsvRow& r) { return r.t_solve + r.t_eig + r.t_estimate + r.t_mark + r.t_refine; }

inline double ratio(double a, double b) {
  if (a == b) return 1.0;
  return b != 0.0 ? a / b : std::numeric_limits<double>::quiet_NaN();
}

} // namespace detail

/// Matches every row of `a` to the row of `b` (same eig_index) with the
/// nearest dof count, provided the counts are within a factor of 2.
inline std::vector<CompareEntry> compare_runs(const std::vector<CsvRow>& a, const std::vector<CsvRow>& b) {
  std::vector<CompareEntry> out;
  for (const CsvRow& ra : a) {
    const CsvRow* best = nullptr;
    double best_gap = std::log(2.0) + 1e-12;
    for (const CsvRow& rb : b) {
      if (rb.eig_index != ra.eig_index || ra.dofs <= 0 || rb.dofs <= 0) continue;
      const double gap = std::abs(std::log(static_cast<double>(ra.dofs) / rb.dofs));
      if (gap <= best_gap && (!best || gap < best_gap)) {
        best = &rb;
        best_gap = gap;
      }
    }
    if (!best) continue;
    CompareEntry e;
    e.eig_index = ra.eig_index;
    e.level_a = ra.level;
    e.level_b = best->level;
    e.dofs_a = ra.dofs;
    e.dofs_b = best->dofs;
    e.err_a = ra.err_vs_ref;
    e.err_b = best->err_vs_ref;
    e.error_ratio = detail::ratio(ra.err_vs_ref, best->err_vs_ref);
    e.eig_time_ratio = detail::ratio(ra.t_eig, best->t_eig);
    e.total_time_ratio = detail::ratio(detail::total_time(ra), detail::total_time(*best));
    out.push_back(e);
  }
  if (out.empty()) throw ConfigurationError("compare: dof ranges of the two runs do not overlap");
  return out;
}

} // namespace mlafem

#endif

#pragma once

#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "kge/problem.hpp"
#include "kge/reference.hpp"

namespace kge {

// H^lambda error of a numeric field against a reference living on the
// same interval, with the reference spectrally restricted to the study
// grid's resolved modes. A grid mismatch is an error, never a silent
// resample.
inline double error_norm(const SpectralField& reference, const SpectralField& numeric,
                         int lambda) {
  if (!reference.grid->same_domain(*numeric.grid))
    throw std::invalid_argument("error_norm: fields cover different intervals");
  if (reference.grid->modes < numeric.grid->modes)
    throw std::invalid_argument("error_norm: reference is coarser than the numeric field");
  const int m = numeric.grid->modes;
  double s = 0.0;
  for (int l = -m / 2; l < m / 2; ++l) {
    const std::complex<double> d = reference.at(l) - numeric.at(l);
    const double mu = numeric.grid->mu(l);
    s += std::pow(1.0 + mu * mu, lambda) * std::norm(d);
  }
  return std::sqrt(s);
}

enum class StudyKind { temporal, spatial, eps_scaling };

inline std::string to_string(StudyKind k) {
  switch (k) {
    case StudyKind::temporal: return "temporal";
    case StudyKind::spatial: return "spatial";
    case StudyKind::eps_scaling: return "eps-scaling";
  }
  return "?";
}

// One study cell: (eps, beta, h, tau-or-k) -> errors, order, diagnostics.
struct ConvergenceRecord {
  Problem problem = Problem::weak;
  double eps = 1.0;
  double beta = 0.0;
  double h = 0.0;
  double step = 0.0;  // tau (weak time) or k (s time)
  double t0 = 1.0;
  int lambda = 1;
  double error_h0 = std::numeric_limits<double>::quiet_NaN();
  double error_h1 = std::numeric_limits<double>::quiet_NaN();
  double order = std::numeric_limits<double>::quiet_NaN();  // blank for the first ladder cell
  std::string flag = "STABLE";  // STABLE | UNSTABLE | SKIPPED | EXACT | FLOOR
  double wall_seconds = 0.0;
  long steps = 0;
  std::string reference_hash;
  int modes = 0;

  double error(int lam) const { return lam == 0 ? error_h0 : error_h1; }
};

struct StudySpec {
  Problem problem = Problem::weak;
  StudyKind kind = StudyKind::temporal;
  std::vector<double> eps_ladder;  // strictly decreasing
  double beta = 0.0;

  std::vector<double> step_ladder;  // temporal studies; strictly decreasing
  std::vector<double> h_ladder;     // spatial studies; strictly decreasing
  double fixed_step = 5e-4;         // spatial / eps-scaling studies
  int fixed_modes = 64;             // torus problems
  double fixed_h = 1.0 / 16.0;      // whole-space problems (target mesh)

  double t0 = 1.0;   // weak: horizon T0/eps^beta; s-time problems: horizon in s
  int lambda = 1;

  double ref_step = 5e-4;       // reference step in the problem's own time variable
  int ref_modes = 64;           // torus reference grid
  double ref_h = 1.0 / 16.0;    // whole-space reference target mesh

  double cell_budget_seconds = 600.0;
  double floor_hint = 0.0;  // reference self-convergence gate; 0 = no gate
  int jobs = 1;
  bool dealias = false;

  void validate() const {
    auto strictly_decreasing = [](const std::vector<double>& v) {
      for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] < v[i - 1])) return false;
      return true;
    };
    if (eps_ladder.empty()) throw std::invalid_argument("study: empty eps ladder");
    if (!strictly_decreasing(eps_ladder))
      throw std::invalid_argument("study: eps ladder must strictly decrease");
    if (kind == StudyKind::temporal) {
      if (step_ladder.empty() || !strictly_decreasing(step_ladder))
        throw std::invalid_argument("study: step ladder must be non-empty and strictly decrease");
      if (ref_step > step_ladder.back() / 8.0 + 1e-15)
        throw std::invalid_argument(
            "study: reference step must be at least 8x finer than the finest study step");
    }
    if (kind == StudyKind::spatial) {
      if (h_ladder.empty() || !strictly_decreasing(h_ladder))
        throw std::invalid_argument("study: h ladder must be non-empty and strictly decrease");
      if (ref_step > fixed_step / 8.0 + 1e-15)
        throw std::invalid_argument(
            "study: reference step must be at least 8x finer than the study step");
    }
  }
};

struct StudyTable {
  StudySpec spec;
  std::vector<ConvergenceRecord> records;  // row-major: eps rows, ladder columns
  std::size_t columns = 0;

  const ConvergenceRecord& at(std::size_t eps_row, std::size_t col) const {
    return records[eps_row * columns + col];
  }
  ConvergenceRecord& at(std::size_t eps_row, std::size_t col) {
    return records[eps_row * columns + col];
  }
};

namespace detail {

inline void parallel_for(int jobs, std::size_t n, const std::function<void(std::size_t)>& fn) {
  jobs = std::max(1, jobs);
  if (jobs == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  const int workers = static_cast<int>(std::min<std::size_t>(jobs, n));
  std::vector<std::exception_ptr> errors(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
        next.store(n);
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// study grid for one cell
inline GridPtr study_grid(const StudySpec& spec, double eps, double h_or_zero) {
  if (spec.problem == Problem::whole_space) {
    const double target = spec.kind == StudyKind::spatial ? h_or_zero : spec.fixed_h;
    return truncate_domain(eps, spec.beta, target).grid;
  }
  if (spec.kind == StudyKind::spatial) {
    const double two_pi = 2.0 * std::numbers::pi;
    int m = static_cast<int>(std::lround(two_pi / h_or_zero));
    if (m % 2 != 0) ++m;
    return make_grid(0.0, two_pi, std::max(m, 4));
  }
  return make_grid(0.0, 2.0 * std::numbers::pi, spec.fixed_modes);
}

// reference request for one eps (shared across the eps row)
inline ReferenceSpec reference_spec_for(const StudySpec& spec, double eps) {
  ReferenceSpec r;
  r.problem = spec.problem;
  r.eps = eps;
  r.beta = spec.beta;
  GridPtr g = spec.problem == Problem::whole_space
                  ? truncate_domain(eps, spec.beta, spec.ref_h).grid
                  : make_grid(0.0, 2.0 * std::numbers::pi, spec.ref_modes);
  r.a = g->a;
  r.b = g->b;
  r.modes = g->modes;
  const double scale = problem_in_s_time(spec.problem) ? std::pow(eps, -spec.beta) : 1.0;
  r.tau_e = spec.ref_step * scale;  // s-time step mapped to weak time
  const double t_final =
      problem_in_s_time(spec.problem) ? spec.t0 * scale : SolverParams(eps, spec.beta, 1.0, spec.t0).horizon();
  r.times = {t_final};
  return r;
}

}  // namespace detail

// Runs one study cell against a prebuilt reference.
inline ConvergenceRecord run_study_cell(const StudySpec& spec, double eps, double step,
                                        const GridPtr& grid, const ReferenceSolution& ref) {
  ConvergenceRecord rec;
  rec.problem = spec.problem;
  rec.eps = eps;
  rec.beta = spec.beta;
  rec.h = grid->h;
  rec.modes = grid->modes;
  rec.step = step;
  rec.t0 = spec.t0;
  rec.lambda = spec.lambda;
  rec.reference_hash = ref.hash;

  RunOptions opts;
  opts.dealias = spec.dealias;
  opts.deadline_seconds = spec.cell_budget_seconds;

  const InitialData data = problem_data(spec.problem);
  try {
    RunResult res;
    if (spec.problem == Problem::weak) {
      SolverParams p(eps, spec.beta, step, spec.t0);
      rec.steps = p.steps();
      res = run(p, grid, initial_phi(data), initial_gamma(data), opts);
    } else {
      if (eps == 0.0) throw std::invalid_argument("oscillatory study requires eps > 0");
      OscParams p(eps, spec.beta, step, spec.t0);
      rec.steps = p.steps();
      res = run_oscillatory(p, grid, initial_phi(data), initial_gamma(data), opts);
    }
    const auto& snap = ref.snaps.back();
    rec.error_h0 = error_norm(snap.u, res.final, 0);
    rec.error_h1 = error_norm(snap.u, res.final, 1);
    rec.wall_seconds = res.diag.wall_seconds;
    if (eps == 0.0)
      rec.flag = "EXACT";
    else if (res.diag.stability_violated)
      rec.flag = "UNSTABLE";
    else if (ref.residual > 0.0 && rec.error(spec.lambda) < 5.0 * ref.residual)
      rec.flag = "FLOOR";  // the reference's own error is no longer negligible here
  } catch (const BudgetExceeded&) {
    rec.flag = "SKIPPED";
  } catch (const InstabilityError&) {
    rec.flag = "UNSTABLE";  // ran anyway and blew up; errors stay NaN
  }
  return rec;
}

namespace detail {

inline std::vector<ReferenceSolution> build_references(const StudySpec& spec,
                                                       const std::filesystem::path& cache_dir) {
  std::vector<ReferenceSolution> refs(spec.eps_ladder.size());
  parallel_for(spec.jobs, spec.eps_ladder.size(), [&](std::size_t i) {
    refs[i] = reference_solution(reference_spec_for(spec, spec.eps_ladder[i]), cache_dir,
                                 spec.floor_hint);
  });
  return refs;
}

inline void fill_orders(StudyTable& table) {
  for (std::size_t row = 0; row < table.spec.eps_ladder.size(); ++row) {
    for (std::size_t col = 1; col < table.columns; ++col) {
      auto& cur = table.at(row, col);
      const auto& prev = table.at(row, col - 1);
      const double x_prev = table.spec.kind == StudyKind::spatial ? prev.h : prev.step;
      const double x_cur = table.spec.kind == StudyKind::spatial ? cur.h : cur.step;
      const double e_prev = prev.error(table.spec.lambda);
      const double e_cur = cur.error(table.spec.lambda);
      if (std::isfinite(e_prev) && std::isfinite(e_cur) && e_prev > 0.0 && e_cur > 0.0 &&
          x_prev > x_cur)
        cur.order = std::log(e_prev / e_cur) / std::log(x_prev / x_cur);
    }
  }
}

}  // namespace detail

// Temporal convergence: fixed spatial resolution, step ladder per eps row.
inline StudyTable temporal_study(const StudySpec& spec, const std::filesystem::path& cache_dir) {
  spec.validate();
  StudyTable table;
  table.spec = spec;
  table.columns = spec.step_ladder.size();
  table.records.resize(spec.eps_ladder.size() * table.columns);

  auto refs = detail::build_references(spec, cache_dir);
  detail::parallel_for(spec.jobs, table.records.size(), [&](std::size_t idx) {
    const std::size_t row = idx / table.columns, col = idx % table.columns;
    const double eps = spec.eps_ladder[row];
    GridPtr grid = detail::study_grid(spec, eps, 0.0);
    table.records[idx] = run_study_cell(spec, eps, spec.step_ladder[col], grid, refs[row]);
  });
  detail::fill_orders(table);
  return table;
}

// Spatial convergence: fixed fine step, h ladder per eps row.
inline StudyTable spatial_study(const StudySpec& spec, const std::filesystem::path& cache_dir) {
  spec.validate();
  StudyTable table;
  table.spec = spec;
  table.columns = spec.h_ladder.size();
  table.records.resize(spec.eps_ladder.size() * table.columns);

  auto refs = detail::build_references(spec, cache_dir);
  detail::parallel_for(spec.jobs, table.records.size(), [&](std::size_t idx) {
    const std::size_t row = idx / table.columns, col = idx % table.columns;
    const double eps = spec.eps_ladder[row];
    GridPtr grid = detail::study_grid(spec, eps, spec.h_ladder[col]);
    table.records[idx] = run_study_cell(spec, eps, spec.fixed_step, grid, refs[row]);
  });
  detail::fill_orders(table);
  return table;
}

struct EpsScalingReport {
  StudyTable table;          // one column per eps (fixed h, fixed step)
  double fitted_slope = 0.0; // least-squares slope of log e vs log eps
  double expected_slope = 0.0;
};

// Error-vs-eps scaling at fixed fine h and fixed step; the fitted
// log-log slope is expected to approach 2 - beta.
inline EpsScalingReport eps_scaling_study(const StudySpec& spec,
                                          const std::filesystem::path& cache_dir) {
  spec.validate();
  EpsScalingReport rep;
  rep.expected_slope = 2.0 - spec.beta;
  rep.table.spec = spec;
  rep.table.columns = 1;
  rep.table.records.resize(spec.eps_ladder.size());

  auto refs = detail::build_references(spec, cache_dir);
  detail::parallel_for(spec.jobs, spec.eps_ladder.size(), [&](std::size_t row) {
    const double eps = spec.eps_ladder[row];
    GridPtr grid = detail::study_grid(spec, eps, 0.0);
    rep.table.records[row] = run_study_cell(spec, eps, spec.fixed_step, grid, refs[row]);
  });

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t row = 0; row < spec.eps_ladder.size(); ++row) {
    const double e = rep.table.records[row].error(spec.lambda);
    if (!std::isfinite(e) || e <= 0.0) continue;
    const double x = std::log(spec.eps_ladder[row]);
    const double y = std::log(e);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n >= 2) rep.fitted_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return rep;
}

}  // namespace kge

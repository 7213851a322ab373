#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "kge/ewi.hpp"
#include "kge/grid.hpp"
#include "kge/initial_data.hpp"

namespace kge {

// Parameters of the rescaled oscillatory equation
//   eps^{2 beta} v_ss - v_xx + v + eps^2 v^3 = 0,  v(0)=phi, v_s(0)=eps^{-beta} gamma,
// integrated to the fixed horizon t0 in the fast time s.
struct OscParams {
  double eps = 1.0;
  double beta = 0.0;
  double k = 0.1;   // time step in s
  double t0 = 1.0;  // horizon in s

  OscParams() = default;
  OscParams(double eps_, double beta_, double k_, double t0_)
      : eps(eps_), beta(beta_), k(k_), t0(t0_) {
    if (eps <= 0.0 || eps > 1.0) throw std::invalid_argument("OscParams: eps must be in (0,1]");
    if (beta < 0.0 || beta > 2.0) throw std::invalid_argument("OscParams: beta must be in [0,2]");
    if (k <= 0.0 || t0 <= 0.0) throw std::invalid_argument("OscParams: k, t0 must be > 0");
  }

  double zeta_bar(double zeta) const { return std::pow(eps, -beta) * zeta; }
  long steps() const { return std::lround(t0 / k); }
};

// Coefficient tables for the oscillatory recurrence:
//   pbar = cos(k zbar), qbar = sin(k zbar)/(eps^beta zbar),
//   rbar = eps^2 (cos(k zbar)-1)/(eps^beta zbar)^2.
// Note eps^beta zbar = zeta, so the table reduces to ewi_coefficients
// when beta = 0 (bitwise: pow(eps,0) = 1 exactly).
inline EwiCoefficients bar_coefficients(double k, const GridSpec& grid, double eps, double beta) {
  if (k <= 0.0) throw std::invalid_argument("bar_coefficients: k must be > 0");
  if (eps <= 0.0 || eps > 1.0) throw std::invalid_argument("bar_coefficients: eps must be in (0,1]");
  if (beta < 0.0 || beta > 2.0) throw std::invalid_argument("bar_coefficients: beta must be in [0,2]");
  EwiCoefficients c;
  c.tau = k;
  c.eps = eps;
  const int m = grid.modes;
  c.p.resize(m);
  c.q.resize(m);
  c.r.resize(m);
  const double eps_beta = std::pow(eps, beta);
  const double eps_mbeta = std::pow(eps, -beta);
  const double eps2 = eps * eps;
  for (int kk = 0; kk < m; ++kk) {
    const double zbar = eps_mbeta * grid.frequencies[kk];
    const double den = eps_beta * zbar;
    const double cz = std::cos(k * zbar);
    c.p[kk] = cz;
    c.q[kk] = std::sin(k * zbar) / den;
    c.r[kk] = eps2 * (cz - 1.0) / (den * den);
  }
  return c;
}

// Sufficient stability bound of the oscillatory recurrence; equals
// eps^beta times the weak-regime bound.
inline double osc_stability_bound(double h, double eps, double beta, double sigma_max) {
  return std::pow(eps, beta) * stability_bound(h, eps, sigma_max);
}

// First level of the oscillatory recurrence. gamma_hat holds the
// coefficients of gamma itself: the eps^{-beta} of the initial velocity
// is already inside qbar.
inline SpectralField osc_first_step(const SpectralField& phi_hat, const SpectralField& gamma_hat,
                                    const EwiCoefficients& bar, bool dealias = false) {
  return first_step(phi_hat, gamma_hat, bar, dealias);
}

// The stepping kernel is shared with the weak regime; one kernel, two
// coefficient builders.
inline void osc_leapfrog_step(EwiState& s, double blowup_threshold = 1e6) {
  leapfrog_step(s, blowup_threshold);
}

inline RunResult run_oscillatory(const OscParams& params, const GridPtr& grid,
                                 const std::function<double(double)>& phi,
                                 const std::function<double(double)>& gamma,
                                 const RunOptions& opts = {}) {
  SpectralField phi_hat = opts.init == InitKind::projection ? project_initial(phi, grid)
                                                            : interpolate_initial(phi, grid);
  SpectralField gamma_hat = opts.init == InitKind::projection ? project_initial(gamma, grid)
                                                              : interpolate_initial(gamma, grid);
  EwiCoefficients c = bar_coefficients(params.k, *grid, params.eps, params.beta);
  return detail::run_leapfrog(phi_hat, gamma_hat, c, params.steps(), opts);
}

// s = eps^beta t relabeling between the weak-regime and oscillatory
// formulations; field values are untouched.
struct TimedField {
  double t = 0.0;
  SpectralField field;
};

inline std::vector<TimedField> rescale_time(std::vector<TimedField> traj, double eps,
                                            double beta, bool to_oscillatory = true) {
  if (eps <= 0.0) throw std::invalid_argument("rescale_time: eps must be > 0");
  const double fac = to_oscillatory ? std::pow(eps, beta) : std::pow(eps, -beta);
  for (auto& tf : traj) tf.t *= fac;
  return traj;
}

// eps-dependent truncation of the whole-space problem onto
// [-4 - eps^{-beta}, 4 + eps^{-beta}] with periodic closure; M is the
// smallest even integer giving h <= target_h.
struct TruncatedDomain {
  GridPtr grid;
  double eps = 1.0;
  double beta = 0.0;
  double boundary_zone = 1.0;  // width used by the mass-leak report
};

inline TruncatedDomain truncate_domain(double eps, double beta, double target_h) {
  if (eps <= 0.0 || eps > 1.0) throw std::invalid_argument("truncate_domain: eps must be in (0,1]");
  if (beta < 0.0 || beta > 2.0) throw std::invalid_argument("truncate_domain: beta must be in [0,2]");
  if (target_h <= 0.0) throw std::invalid_argument("truncate_domain: target_h must be > 0");
  const double half = 4.0 + std::pow(eps, -beta);
  const double length = 2.0 * half;
  int m = static_cast<int>(std::ceil(length / target_h));
  if (m % 2 != 0) ++m;
  m = std::max(m, 4);
  TruncatedDomain d;
  d.grid = make_grid(-half, half, m);
  d.eps = eps;
  d.beta = beta;
  return d;
}

// Fraction of the discrete squared mass sum |v_j|^2 sitting within
// `zone` of either boundary; > 1e-8 means the truncated domain is about
// to be polluted by the periodic wrap.
inline double boundary_mass_fraction(const NodalField& f, double zone = 1.0) {
  double total = 0.0, near = 0.0;
  const auto& g = *f.grid;
  for (int j = 0; j < g.modes; ++j) {
    const double w = f.values[j] * f.values[j];
    total += w;
    const double x = g.nodes[j];
    if (x - g.a < zone || g.b - x < zone) near += w;
  }
  return total > 0.0 ? near / total : 0.0;
}

inline double boundary_mass_fraction(const SpectralField& f, double zone = 1.0) {
  return boundary_mass_fraction(inverse_transform(f), zone);
}

// Meshing rule of the eps-scalability result: h = O(1),
// k = k_coeff * eps^{alpha*} with alpha* = max{0, 3 beta/2 - 1}; the
// constants are calibrated from a pilot run (Richardson in k, grid
// halving in h); the scaling law fixes only the exponents.
struct MeshingPlan {
  double alpha_star = 0.0;
  double h = 0.0;        // recommended mesh size, eps-independent
  double k_coeff = 0.0;  // k(eps) = k_coeff * eps^{alpha*}
  double temporal_const = 0.0;  // fitted C_t of C_t eps^{2-3beta} k^2
  double spatial_error = 0.0;   // pilot spatial residual at the recommended h

  double k_for(double eps) const { return k_coeff * std::pow(eps, alpha_star); }
};

inline double meshing_alpha_star(double beta) { return std::max(0.0, 1.5 * beta - 1.0); }

struct MeshingPilot {
  double eps = 0.5;  // pilot nonlinearity strength
  double t0 = 1.0;   // pilot horizon in s
  int modes = 16;    // pilot grid on (0, 2pi)
  double k = 0.05;   // pilot step in s
  std::function<double(double)> phi = initial_phi(InitialData::torus);
  std::function<double(double)> gamma = initial_gamma(InitialData::torus);
};

// Pilot-calibrated realization of the meshing rule: the temporal
// constant comes from a Richardson pair in k, the spatial rule from
// grid halving at the finer k, both without a reference solution.
inline MeshingPlan meshing_plan(double beta, double delta0, const MeshingPilot& pilot = {}) {
  if (beta < 0.0 || beta > 2.0) throw std::invalid_argument("meshing_plan: beta must be in [0,2]");
  if (delta0 <= 0.0) throw std::invalid_argument("meshing_plan: delta0 must be > 0");
  MeshingPlan plan;
  plan.alpha_star = meshing_alpha_star(beta);

  const double two_pi = 2.0 * std::numbers::pi;
  auto run_cell = [&](int modes, double k) {
    GridPtr g = make_grid(0.0, two_pi, modes);
    OscParams p(pilot.eps, beta, k, pilot.t0);
    return run_oscillatory(p, g, pilot.phi, pilot.gamma).final;
  };

  // temporal constant from ||u_k - u_{k/2}|| ~ (3/4) C_t eps^{2-3beta} k^2
  SpectralField coarse_k = run_cell(pilot.modes, pilot.k);
  SpectralField fine_k = run_cell(pilot.modes, pilot.k / 2.0);
  const double d_t = coefficient_distance(coarse_k, fine_k, 1);
  const double eps_pow = std::pow(pilot.eps, 2.0 - 3.0 * beta);
  plan.temporal_const = d_t / (0.75 * eps_pow * pilot.k * pilot.k);
  plan.k_coeff = std::sqrt(delta0 / (2.0 * std::max(plan.temporal_const, 1e-300)));

  // spatial rule: halve h until the grid-refinement residual clears delta0/2
  int modes = pilot.modes;
  double k_fine = pilot.k / 2.0;
  SpectralField at_m = run_cell(modes, k_fine);
  for (int iter = 0; iter < 4; ++iter) {
    SpectralField at_2m = run_cell(2 * modes, k_fine);
    plan.spatial_error = coefficient_distance(at_m, at_2m, 1);
    if (plan.spatial_error <= 0.5 * delta0) break;
    modes *= 2;
    at_m = std::move(at_2m);
  }
  plan.h = two_pi / modes;
  return plan;
}

}  // namespace kge

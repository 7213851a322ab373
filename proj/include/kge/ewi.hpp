#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>

#include "kge/grid.hpp"
#include "kge/transforms.hpp"

namespace kge {

struct InstabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Problem parameters for the weak-nonlinearity equation
//   u_tt - u_xx + u + eps^2 u^3 = 0
// integrated to the horizon T0/eps^beta. The cubic nonlinearity is fixed.
struct SolverParams {
  double eps = 1.0;   // in (0,1]; eps = 0 admitted for linear-limit tests
  double beta = 0.0;  // in [0,2]
  double tau = 0.1;   // time step
  double t0 = 1.0;    // base horizon

  SolverParams() = default;
  SolverParams(double eps_, double beta_, double tau_, double t0_)
      : eps(eps_), beta(beta_), tau(tau_), t0(t0_) {
    if (eps < 0.0 || eps > 1.0) throw std::invalid_argument("SolverParams: eps must be in [0,1]");
    if (beta < 0.0 || beta > 2.0) throw std::invalid_argument("SolverParams: beta must be in [0,2]");
    if (eps == 0.0 && beta != 0.0)
      throw std::invalid_argument("SolverParams: eps = 0 requires beta = 0");
    if (tau <= 0.0 || t0 <= 0.0) throw std::invalid_argument("SolverParams: tau, t0 must be > 0");
  }

  double horizon() const { return t0 * std::pow(eps, -beta); }
  // horizon snapped to a whole number of steps; reported final time is steps()*tau
  long steps() const { return std::lround(horizon() / tau); }
};

// Per-mode tables of the Gautschi-type update; exact closed forms, no
// series approximations. Immutable after construction and shareable.
struct EwiCoefficients {
  std::vector<double> p;  // cos(tau zeta_l)
  std::vector<double> q;  // sin(tau zeta_l)/zeta_l
  std::vector<double> r;  // eps^2 (cos(tau zeta_l)-1)/zeta_l^2
  double tau = 0.0;
  double eps = 0.0;

  bool linear() const { return eps == 0.0; }
};

inline EwiCoefficients ewi_coefficients(double tau, const GridSpec& grid, double eps) {
  if (tau <= 0.0) throw std::invalid_argument("ewi_coefficients: tau must be > 0");
  if (eps < 0.0 || eps > 1.0) throw std::invalid_argument("ewi_coefficients: eps must be in [0,1]");
  EwiCoefficients c;
  c.tau = tau;
  c.eps = eps;
  const int m = grid.modes;
  c.p.resize(m);
  c.q.resize(m);
  c.r.resize(m);
  const double eps2 = eps * eps;
  for (int k = 0; k < m; ++k) {
    const double zeta = grid.frequencies[k];
    const double cz = std::cos(tau * zeta);
    c.p[k] = cz;
    c.q[k] = std::sin(tau * zeta) / zeta;
    c.r[k] = eps2 * (cz - 1.0) / (zeta * zeta);
  }
  return c;
}

// Maximum admissible tau of the von Neumann sufficient condition.
inline double stability_bound(double h, double eps, double sigma_max) {
  if (h <= 0.0) throw std::invalid_argument("stability_bound: h must be > 0");
  const double pi = std::numbers::pi;
  return 2.0 * h / std::sqrt(pi * pi + h * h * (1.0 + eps * eps * sigma_max));
}

namespace detail {

// Pseudospectral evaluation of (u^3)~ from the coefficients of u.
// Records the nodal sup-norm and imaginary residue seen on the way.
// With dealias=true the cube is evaluated alias-free on a 2M grid and
// truncated back (this changes the method; off by default).
struct CubeEvaluator {
  std::vector<std::complex<double>> buf;
  double last_sup = 0.0;
  double last_imag = 0.0;

  void eval(const SpectralField& u, std::vector<std::complex<double>>& fhat, bool dealias) {
    const int m = u.grid->modes;
    const int work = dealias ? 2 * m : m;
    buf.assign(work, std::complex<double>(0.0, 0.0));
    if (dealias) {
      // embed T_M into T_{2M}
      for (int k = 0; k < m; ++k) buf[k + m / 2] = u.coeffs[k];
    } else {
      buf = u.coeffs;
    }
    inverse_inplace(buf);
    double sup = 0.0, imag = 0.0;
    for (auto& z : buf) {
      const double v = z.real();
      sup = std::max(sup, std::abs(v));
      imag = std::max(imag, std::abs(z.imag()));
      z = v * v * v;
    }
    last_sup = sup;
    last_imag = imag;
    forward_inplace(buf);
    fhat.resize(m);
    if (dealias) {
      for (int k = 0; k < m; ++k) fhat[k] = buf[k + m / 2];
    } else {
      fhat = buf;
    }
  }

  // nodal sup-norm without the cube (diagnostics for the linear path)
  double sup_only(const SpectralField& u) {
    buf = u.coeffs;
    inverse_inplace(buf);
    double sup = 0.0;
    for (const auto& z : buf) sup = std::max(sup, std::abs(z.real()));
    last_sup = sup;
    return sup;
  }
};

}  // namespace detail

// First level: u^1_l = p_l phi_l + q_l gamma_l + r_l (phi^3)~_l.
inline SpectralField first_step(const SpectralField& phi_hat, const SpectralField& gamma_hat,
                                const EwiCoefficients& c, bool dealias = false) {
  if (!phi_hat.grid->same_domain(*gamma_hat.grid) || phi_hat.grid->modes != gamma_hat.grid->modes)
    throw std::invalid_argument("first_step: phi and gamma must share a grid");
  SpectralField out(phi_hat.grid);
  const int m = phi_hat.grid->modes;
  if (c.linear()) {
    for (int k = 0; k < m; ++k)
      out.coeffs[k] = c.p[k] * phi_hat.coeffs[k] + c.q[k] * gamma_hat.coeffs[k];
    return out;
  }
  detail::CubeEvaluator cube;
  std::vector<std::complex<double>> fhat;
  cube.eval(phi_hat, fhat, dealias);
  for (int k = 0; k < m; ++k)
    out.coeffs[k] = c.p[k] * phi_hat.coeffs[k] + c.q[k] * gamma_hat.coeffs[k] + c.r[k] * fhat[k];
  return out;
}

// Two-level leapfrog state: levels n-1 and n plus the shared tables.
struct EwiState {
  SpectralField prev;  // level n-1
  SpectralField curr;  // level n
  long n = 1;
  EwiCoefficients coeffs;
  double sigma_running = 0.0;  // max over completed steps of ||u^k||_{l^inf}^2
  double imag_residue = 0.0;   // worst nodal imaginary residue seen
  bool dealias = false;

  detail::CubeEvaluator cube;
  std::vector<std::complex<double>> fhat;
};

// Running maximum of the squared nodal sup-norm (sigma_max of the
// stability condition, over the levels visited so far).
inline double sigma_max_running(const EwiState& s) { return s.sigma_running; }

inline EwiState make_ewi_state(const SpectralField& phi_hat, const SpectralField& gamma_hat,
                               const EwiCoefficients& c, bool dealias = false) {
  EwiState s;
  s.coeffs = c;
  s.dealias = dealias;
  s.prev = phi_hat;
  s.curr = first_step(phi_hat, gamma_hat, c, dealias);
  s.n = 1;
  s.sigma_running = [&] {
    detail::CubeEvaluator tmp;
    double s0 = tmp.sup_only(phi_hat);
    double s1 = tmp.sup_only(s.curr);
    return std::max(s0 * s0, s1 * s1);
  }();
  return s;
}

// One leapfrog update n -> n+1:
//   u^{n+1}_l = -u^{n-1}_l + 2 p_l u^n_l + 2 r_l (f(u^n))~_l.
// Cost: two transforms plus O(M) fused multiply-adds; O(M) memory.
inline void leapfrog_step(EwiState& s, double blowup_threshold = 1e6) {
  const int m = s.curr.grid->modes;
  const EwiCoefficients& c = s.coeffs;
  if (c.linear()) {
    for (int k = 0; k < m; ++k) {
      const std::complex<double> next = -s.prev.coeffs[k] + 2.0 * c.p[k] * s.curr.coeffs[k];
      s.prev.coeffs[k] = s.curr.coeffs[k];
      s.curr.coeffs[k] = next;
    }
    ++s.n;
    return;
  }
  s.cube.eval(s.curr, s.fhat, s.dealias);
  const double sup = s.cube.last_sup;
  s.sigma_running = std::max(s.sigma_running, sup * sup);
  s.imag_residue = std::max(s.imag_residue, s.cube.last_imag);
  if (sup > blowup_threshold) {
    const double h = s.curr.grid->h;
    throw InstabilityError(
        "leapfrog_step: nodal sup-norm " + std::to_string(sup) + " exceeds " +
        std::to_string(blowup_threshold) + " at step " + std::to_string(s.n) +
        "; tau = " + std::to_string(c.tau) + " against the stability bound 2h/sqrt(pi^2+h^2(1+eps^2 sigma_max)) = " +
        std::to_string(stability_bound(h, c.eps, s.sigma_running)));
  }
  for (int k = 0; k < m; ++k) {
    const std::complex<double> next =
        -s.prev.coeffs[k] + 2.0 * c.p[k] * s.curr.coeffs[k] + 2.0 * c.r[k] * s.fhat[k];
    s.prev.coeffs[k] = s.curr.coeffs[k];
    s.curr.coeffs[k] = next;
  }
  ++s.n;
}

// The update is an algebraic involution: advancing the swapped pair
// (u^{n+1}, u^n) returns u^{n-1} exactly in exact arithmetic.
inline void reverse_state(EwiState& s) {
  std::swap(s.prev, s.curr);
}

// Energy functional E = int |u_t|^2 + |u_x|^2 + |u|^2 + (eps^2/2)|u|^4 dx.
// Quadratic terms summed exactly in Fourier space (with the (b-a)
// Parseval factor); the quartic term by the nodal trapezoid rule.
inline double energy(const SpectralField& u, const SpectralField& u_t, double eps) {
  if (!u.grid->same_domain(*u_t.grid) || u.grid->modes != u_t.grid->modes)
    throw std::invalid_argument("energy: fields must share a grid");
  const int m = u.grid->modes;
  double quad = 0.0;
  for (int k = 0; k < m; ++k) {
    const double mu = u.grid->wavenumbers[k];
    quad += std::norm(u_t.coeffs[k]) + (1.0 + mu * mu) * std::norm(u.coeffs[k]);
  }
  quad *= u.grid->length();
  double quart = 0.0;
  if (eps != 0.0) {
    NodalField nodal = inverse_transform(u);
    for (double v : nodal.values) quart += v * v * v * v;
    quart *= 0.5 * eps * eps * u.grid->h;
  }
  return quad + quart;
}

// Energy series along a leapfrog trajectory. The scheme carries no
// velocity, so E(t_n) uses the centered difference
// (u^{n+1} - u^{n-1})/(2 tau), second-order consistent with the scheme;
// the series therefore trails the run by one level. Wire it up as an
// observer with stride 1.
struct EnergyTracker {
  double tau = 0.0;
  double eps = 0.0;
  std::vector<std::pair<double, double>> series;  // (t_n, E(t_n))

  EnergyTracker(double tau_, double eps_) : tau(tau_), eps(eps_) {}

  void operator()(long n, double t, const SpectralField& curr, const SpectralField& prev) {
    // needs consecutive levels: the call at step n carries (u^n, u^{n-1}),
    // and before_ must hold u^{n-2}
    if (n == last_n_ + 1 && have_) {
      SpectralField v(curr.grid);
      const double inv = 1.0 / (2.0 * tau);
      for (std::size_t k = 0; k < v.coeffs.size(); ++k)
        v.coeffs[k] = (curr.coeffs[k] - before_.coeffs[k]) * inv;
      series.emplace_back(t - tau, energy(prev, v, eps));
    }
    before_ = prev;
    have_ = n >= 1;  // the n = 0 call carries no distinct lower level
    last_n_ = n;
  }

 private:
  SpectralField before_;  // u^{n-2} at the time of the call
  bool have_ = false;
  long last_n_ = -10;
};

// w = eps * u maps the weak-nonlinearity solution onto the small-initial-
// data form; pointwise coefficient scaling.
inline SpectralField amplitude_rescale(const SpectralField& u, double eps) {
  if (eps <= 0.0) throw std::invalid_argument("amplitude_rescale: eps must be > 0");
  return scaled(u, eps);
}

inline std::vector<SpectralField> amplitude_rescale(const std::vector<SpectralField>& traj,
                                                    double eps) {
  std::vector<SpectralField> out;
  out.reserve(traj.size());
  for (const auto& f : traj) out.push_back(amplitude_rescale(f, eps));
  return out;
}

enum class InitKind { interpolation, projection };  // EWI-FP vs EWI-FS initial data

struct RunOptions {
  InitKind init = InitKind::interpolation;
  bool dealias = false;
  double blowup_threshold = 1e6;
  long observer_stride = 0;  // 0: observers disabled
  std::function<void(long n, double t, const SpectralField& curr, const SpectralField& prev)>
      observer;
  double deadline_seconds = 0.0;  // 0: no budget guard
};

struct RunDiagnostics {
  long steps = 0;
  double final_time = 0.0;
  double sigma_max = 0.0;
  double imag_residue = 0.0;
  bool stability_violated = false;  // stability bound violated a priori or during the run
  double stability_tau_bound = 0.0; // bound at the a-priori sigma estimate
  double wall_seconds = 0.0;
};

struct RunResult {
  SpectralField final;
  RunDiagnostics diag;
};

namespace detail {

inline RunResult run_leapfrog(const SpectralField& phi_hat, const SpectralField& gamma_hat,
                              const EwiCoefficients& coeffs, long nsteps, const RunOptions& opts) {
  const auto t_start = std::chrono::steady_clock::now();
  RunResult res;
  res.diag.steps = nsteps;

  // a-priori stability check, warn-only: sigma estimated as (1+||phi||_inf)^2
  {
    CubeEvaluator tmp;
    const double sup0 = tmp.sup_only(phi_hat);
    const double sigma_est = (1.0 + sup0) * (1.0 + sup0);
    res.diag.stability_tau_bound = stability_bound(phi_hat.grid->h, coeffs.eps, sigma_est);
    res.diag.stability_violated = coeffs.tau > res.diag.stability_tau_bound;
  }

  if (nsteps == 0) {
    res.final = phi_hat;
    res.diag.final_time = 0.0;
    res.diag.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return res;
  }

  EwiState state = make_ewi_state(phi_hat, gamma_hat, coeffs, opts.dealias);
  if (opts.observer && opts.observer_stride > 0) {
    opts.observer(0, 0.0, phi_hat, phi_hat);
    if (1 % opts.observer_stride == 0 || nsteps == 1)
      opts.observer(1, coeffs.tau, state.curr, state.prev);
  }
  long budget_check = 0;
  while (state.n < nsteps) {
    leapfrog_step(state, opts.blowup_threshold);
    if (opts.observer && opts.observer_stride > 0 &&
        (state.n % opts.observer_stride == 0 || state.n == nsteps))
      opts.observer(state.n, state.n * coeffs.tau, state.curr, state.prev);
    if (opts.deadline_seconds > 0.0 && ++budget_check % 64 == 0) {
      const double elapsed =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
      if (elapsed > opts.deadline_seconds)
        throw BudgetExceeded("run: cell exceeded its wall-clock budget of " +
                             std::to_string(opts.deadline_seconds) + " s at step " +
                             std::to_string(state.n) + "/" + std::to_string(nsteps));
    }
  }
  res.diag.sigma_max = state.sigma_running;
  res.diag.imag_residue = state.imag_residue;
  if (coeffs.tau > stability_bound(state.curr.grid->h, coeffs.eps, state.sigma_running))
    res.diag.stability_violated = true;
  res.final = std::move(state.curr);
  res.diag.final_time = nsteps * coeffs.tau;
  res.diag.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return res;
}

}  // namespace detail

// Full weak-regime run: N = round((T0/eps^beta)/tau) leapfrog steps from
// the given initial data. Propagates the blow-up abort.
inline RunResult run(const SolverParams& params, const GridPtr& grid,
                     const std::function<double(double)>& phi,
                     const std::function<double(double)>& gamma, const RunOptions& opts = {}) {
  SpectralField phi_hat = opts.init == InitKind::projection ? project_initial(phi, grid)
                                                            : interpolate_initial(phi, grid);
  SpectralField gamma_hat = opts.init == InitKind::projection ? project_initial(gamma, grid)
                                                              : interpolate_initial(gamma, grid);
  EwiCoefficients c = ewi_coefficients(params.tau, *grid, params.eps);
  return detail::run_leapfrog(phi_hat, gamma_hat, c, params.steps(), opts);
}

}  // namespace kge

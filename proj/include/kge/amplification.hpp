#pragma once

#include <cmath>
#include <limits>

#include "kge/ewi.hpp"
#include "kge/oscillatory.hpp"

namespace kge {

// Linearized per-mode recurrence (f(u) replaced by sigma_max * u):
//   x_{n+1} = 2 theta_l x_n - x_{n-1},  theta_l = p_l + sigma * r_l.
// |xi_l| <= 1 for all modes iff |theta_l| <= 1.

inline double linearized_theta(const EwiCoefficients& c, double sigma, int k) {
  return c.p[k] + sigma * c.r[k];
}

// max over modes of the companion-matrix spectral radius
inline double max_amplification_factor(const EwiCoefficients& c, double sigma) {
  double worst = 0.0;
  for (std::size_t k = 0; k < c.p.size(); ++k) {
    const double th = linearized_theta(c, sigma, static_cast<int>(k));
    const double xi = std::abs(th) <= 1.0 ? 1.0 : std::abs(th) + std::sqrt(th * th - 1.0);
    worst = std::max(worst, xi);
  }
  return worst;
}

// First tau at which some mode leaves the unit circle:
//   (1 - cos(tau zeta_l)) (1 + delta_l) = 2,  delta_l = eps^2 sigma / zeta_l^2,
// i.e. tau_c(l) = arccos((delta_l - 1)/(delta_l + 1)) / zeta_l. Infinite
// when eps^2 sigma = 0 (the linear scheme is exact, hence stable).
inline double exact_stability_threshold(const GridSpec& g, double eps, double sigma) {
  const double g2 = eps * eps * sigma;
  if (g2 <= 0.0) return std::numeric_limits<double>::infinity();
  double tmin = std::numeric_limits<double>::infinity();
  for (double zeta : g.frequencies) {
    const double delta = g2 / (zeta * zeta);
    const double tc = std::acos((delta - 1.0) / (delta + 1.0)) / zeta;
    tmin = std::min(tmin, tc);
  }
  return tmin;
}

// oscillatory variant: thresholds scale exactly as eps^beta
inline double osc_exact_stability_threshold(const GridSpec& g, double eps, double beta,
                                            double sigma) {
  return std::pow(eps, beta) * exact_stability_threshold(g, eps, sigma);
}

// Dynamic check: iterate the two-term recurrence per mode from (1,1)
// with periodic renormalization; returns the worst per-step geometric
// growth factor over all modes.
inline double linearized_growth_per_step(const EwiCoefficients& c, double sigma, long nsteps) {
  double worst = 0.0;
  for (std::size_t k = 0; k < c.p.size(); ++k) {
    const double th = linearized_theta(c, sigma, static_cast<int>(k));
    double xm = 1.0, x = 1.0;
    double logsum = 0.0;
    for (long n = 0; n < nsteps; ++n) {
      const double xp = 2.0 * th * x - xm;
      xm = x;
      x = xp;
      const double amp = std::max(std::abs(x), std::abs(xm));
      if (amp > 1e100 || (amp < 1e-100 && amp > 0.0)) {
        logsum += std::log(amp);
        xm /= amp;
        x /= amp;
      }
    }
    const double amp = std::max(std::abs(x), std::abs(xm));
    logsum += std::log(std::max(amp, 1e-300));
    worst = std::max(worst, std::exp(logsum / nsteps));
  }
  return worst;
}

struct StabilityProbeResult {
  double sufficient_bound = 0.0;      // sufficient condition (certified stable below it)
  double exact_threshold = 0.0;  // onset of |xi| > 1 for the linearized scheme
  double growth_below = 0.0;     // per-step growth at 0.99 * exact threshold
  double growth_above = 0.0;     // per-step growth at 1.01 * exact threshold
  double amplification_at_bound = 0.0;  // max |xi| at the sufficient bound itself
};

inline StabilityProbeResult stability_probe(const GridSpec& g, double eps, double sigma,
                                            double beta = 0.0, long nsteps = 10000) {
  StabilityProbeResult r;
  r.sufficient_bound = osc_stability_bound(g.h, eps, beta, sigma);
  r.exact_threshold = osc_exact_stability_threshold(g, eps, beta, sigma);
  auto coeffs_at = [&](double step) {
    return beta == 0.0 ? ewi_coefficients(step, g, eps) : bar_coefficients(step, g, eps, beta);
  };
  r.amplification_at_bound = max_amplification_factor(coeffs_at(r.sufficient_bound), sigma);
  if (std::isfinite(r.exact_threshold)) {
    r.growth_below = linearized_growth_per_step(coeffs_at(0.99 * r.exact_threshold), sigma, nsteps);
    r.growth_above = linearized_growth_per_step(coeffs_at(1.01 * r.exact_threshold), sigma, nsteps);
  } else {
    r.growth_below = r.growth_above = 1.0;
  }
  return r;
}

}  // namespace kge

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "kge/cache.hpp"
#include "kge/problem.hpp"
#include "kge/splitting.hpp"
#include "kge/transforms.hpp"

namespace kge {

struct ReferenceGateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A reference trajectory request. Times are weak-regime times t; the
// study layer converts s-times of the oscillatory problems via
// t = s * eps^{-beta} (the two formulations share trajectories exactly).
struct ReferenceSpec {
  Problem problem = Problem::weak;
  double eps = 1.0;
  double beta = 0.0;
  double a = 0.0;
  double b = 2.0 * std::numbers::pi;
  int modes = 64;
  double tau_e = 5e-4;  // weak-time step of the splitting integrator
  std::vector<double> times;  // weak-time snapshot instants, ascending

  std::string canonical_key() const {
    char buf[640];
    std::string times_part;
    for (double t : times) {
      char tb[40];
      std::snprintf(tb, sizeof tb, "%a,", t);
      times_part += tb;
    }
    std::snprintf(buf, sizeof buf, "kgeref|v1|problem=%s|data=%s|eps=%a|beta=%a|a=%a|b=%a|M=%d|taue=%a|times=",
                  to_string(problem).c_str(), to_string(problem_data(problem)).c_str(), eps, beta,
                  a, b, modes, tau_e);
    return std::string(buf) + times_part;
  }
};

struct ReferenceSolution {
  ReferenceSpec spec;
  std::vector<CachedSnapshot> snaps;  // (t, u-hat, v-hat) at the requested times
  double residual = 0.0;              // H1 distance to the 2*tau_e companion at final time
  std::string key;
  std::string hash;

  const CachedSnapshot& at_time(double t, double rel_tol = 1e-9) const {
    for (const auto& s : snaps)
      if (std::abs(s.t - t) <= rel_tol * std::max(1.0, std::abs(t))) return s;
    throw std::out_of_range("reference: no snapshot at t = " + std::to_string(t));
  }
};

inline std::filesystem::path default_cache_dir() {
  if (const char* env = std::getenv("KGE_CACHE_DIR"); env && *env)
    return std::filesystem::path(env);
  return std::filesystem::path("kge_cache");
}

namespace detail {

// integrate with the Strang splitting, grabbing snapshots on the way
inline std::vector<CachedSnapshot> splitting_trajectory(const ReferenceSpec& spec, double tau_e) {
  GridPtr grid = make_grid(spec.a, spec.b, spec.modes);
  const InitialData data = problem_data(spec.problem);
  PhaseState st(interpolate_initial(initial_phi(data), grid),
                interpolate_initial(initial_gamma(data), grid), 0.0);

  std::vector<CachedSnapshot> snaps;
  double prev_t = 0.0;
  for (double t : spec.times) {
    if (t < prev_t) throw std::invalid_argument("reference: snapshot times must ascend");
    const double span = t - prev_t;
    const long n = std::lround(span / tau_e);
    if (std::abs(n * tau_e - span) > 1e-9 * std::max(1.0, span))
      throw std::invalid_argument("reference: snapshot spacing " + std::to_string(span) +
                                  " is not a multiple of tau_e = " + std::to_string(tau_e));
    strang_run(st, tau_e, n, spec.eps);
    snaps.push_back({t, st.u, st.v});
    prev_t = t;
  }
  return snaps;
}

}  // namespace detail

// Build (or load) the oracle trajectory. The self-convergence gate
// integrates a second trajectory at 2*tau_e (or tau_e/2 when the step
// count is odd) and records the H1 distance at the final snapshot;
// callers supply floor_hint = the smallest error they intend to resolve,
// and the build refuses when the residual is not below 1% of it.
inline ReferenceSolution reference_solution(const ReferenceSpec& spec,
                                            const std::filesystem::path& cache_dir,
                                            double floor_hint = 0.0) {
  if (spec.times.empty()) throw std::invalid_argument("reference: no snapshot times requested");
  ReferenceSolution sol;
  sol.spec = spec;
  sol.key = spec.canonical_key();
  sol.hash = hash_hex(fnv1a64(sol.key));

  CachedReference cached;
  if (load_reference(cache_dir, sol.key, cached)) {
    sol.snaps = std::move(cached.snaps);
    sol.residual = cached.residual;
  } else {
    sol.snaps = detail::splitting_trajectory(spec, spec.tau_e);
    const double t_final = spec.times.back();
    const long n_total = std::lround(t_final / spec.tau_e);
    ReferenceSpec companion = spec;
    companion.times = {t_final};
    const double tau_c = (n_total % 2 == 0) ? 2.0 * spec.tau_e : 0.5 * spec.tau_e;
    auto other = detail::splitting_trajectory(companion, tau_c);
    sol.residual = coefficient_distance(sol.snaps.back().u, other.back().u, 1);

    CachedReference to_store;
    to_store.key = sol.key;
    to_store.residual = sol.residual;
    to_store.snaps = sol.snaps;
    store_reference(cache_dir, to_store);
  }

  if (floor_hint > 0.0 && sol.residual > 0.01 * floor_hint)
    throw ReferenceGateError(
        "reference self-convergence residual " + std::to_string(sol.residual) +
        " is not below 1% of the requested error floor " + std::to_string(floor_hint) +
        "; refine tau_e = " + std::to_string(spec.tau_e));
  return sol;
}

}  // namespace kge

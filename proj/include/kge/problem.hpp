#pragma once

#include <numbers>
#include <stdexcept>
#include <string>

#include "kge/initial_data.hpp"
#include "kge/oscillatory.hpp"

namespace kge {

// The three study problems:
//  weak         — u_tt - u_xx + u + eps^2 u^3 = 0 on (0,2pi), horizon T0/eps^beta
//  oscillatory  — the s-rescaled form on (0,2pi), fixed horizon T0 in s
//  whole_space  — the s-rescaled form truncated onto Omega_eps, fixed horizon in s
enum class Problem { weak, oscillatory, whole_space };

inline std::string to_string(Problem p) {
  switch (p) {
    case Problem::weak: return "weak";
    case Problem::oscillatory: return "oscillatory";
    case Problem::whole_space: return "whole-space-oscillatory";
  }
  return "?";
}

inline Problem parse_problem(const std::string& s) {
  if (s == "weak") return Problem::weak;
  if (s == "oscillatory") return Problem::oscillatory;
  if (s == "whole-space-oscillatory" || s == "whole-space" || s == "whole_space")
    return Problem::whole_space;
  throw std::invalid_argument("unknown problem '" + s + "'");
}

inline InitialData problem_data(Problem p) {
  return p == Problem::whole_space ? InitialData::whole_space : InitialData::torus;
}

inline bool problem_in_s_time(Problem p) { return p != Problem::weak; }

// Grid for a problem at a requested mode count (torus problems) or mesh
// target (whole-space, where the domain depends on eps and beta).
inline GridPtr problem_grid(Problem p, double eps, double beta, int modes_or_zero,
                            double target_h_or_zero) {
  if (p == Problem::whole_space) {
    if (target_h_or_zero <= 0.0)
      throw std::invalid_argument("problem_grid: whole-space problem needs a target h");
    return truncate_domain(eps, beta, target_h_or_zero).grid;
  }
  int m = modes_or_zero;
  if (m <= 0) {
    if (target_h_or_zero <= 0.0)
      throw std::invalid_argument("problem_grid: need a mode count or a target h");
    m = static_cast<int>(std::ceil(2.0 * std::numbers::pi / target_h_or_zero));
    if (m % 2 != 0) ++m;
    m = std::max(m, 4);
  }
  return make_grid(0.0, 2.0 * std::numbers::pi, m);
}

}  // namespace kge

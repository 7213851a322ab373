#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace kge {

// Benchmark initial data on the periodic torus (0, 2pi).
inline double torus_phi(double x) {
  const double c = std::cos(x);
  return 1.0 / (2.0 + c * c);
}
inline double torus_gamma(double x) { return std::sin(x); }

// Whole-space initial data (fast-decaying); used with the truncated
// eps-dependent domain. exp overflow at the far field is harmless:
// 1/inf -> 0, exp(-x^2) underflows to 0.
inline double wholespace_phi(double x) {
  const double e = std::exp(x * x);
  return 1.0 / (e + 1.0 / e);
}
inline double wholespace_gamma(double x) { return 2.0 * std::exp(-x * x); }

enum class InitialData { torus, whole_space };

inline std::function<double(double)> initial_phi(InitialData d) {
  return d == InitialData::torus ? std::function<double(double)>(torus_phi)
                                 : std::function<double(double)>(wholespace_phi);
}
inline std::function<double(double)> initial_gamma(InitialData d) {
  return d == InitialData::torus ? std::function<double(double)>(torus_gamma)
                                 : std::function<double(double)>(wholespace_gamma);
}

inline std::string to_string(InitialData d) {
  return d == InitialData::torus ? "torus" : "whole_space";
}

}  // namespace kge

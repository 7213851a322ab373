#pragma once

#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace kge {

// Periodic grid on (a,b) with M equispaced nodes and the centered Fourier
// index set T_M = {-M/2, ..., M/2-1}. Values are immutable after
// construction and safe to share across threads.
struct GridSpec {
  double a = 0.0;
  double b = 1.0;
  int modes = 0;                    // M, even, >= 4
  double h = 0.0;                   // (b-a)/M
  std::vector<double> nodes;        // x_j = a + j*h, j = 0..M (closing node kept)
  std::vector<double> wavenumbers;  // mu_l = 2*pi*l/(b-a), l = -M/2..M/2-1
  std::vector<double> frequencies;  // zeta_l = sqrt(1 + mu_l^2)

  int index_min() const { return -modes / 2; }
  int index_max() const { return modes / 2 - 1; }
  double length() const { return b - a; }

  // array position of mode l in coefficient storage
  int slot(int l) const { return l + modes / 2; }

  double mu(int l) const { return wavenumbers[slot(l)]; }
  double zeta(int l) const { return frequencies[slot(l)]; }

  bool same_domain(const GridSpec& o) const { return a == o.a && b == o.b; }
};

using GridPtr = std::shared_ptr<const GridSpec>;

inline GridPtr make_grid(double a, double b, int modes) {
  if (!(b > a)) throw std::invalid_argument("make_grid: requires b > a");
  if (modes < 4 || modes % 2 != 0)
    throw std::invalid_argument("make_grid: mode count must be even and >= 4");

  auto g = std::make_shared<GridSpec>();
  g->a = a;
  g->b = b;
  g->modes = modes;
  g->h = (b - a) / modes;
  g->nodes.resize(modes + 1);
  for (int j = 0; j <= modes; ++j) g->nodes[j] = a + j * g->h;
  g->wavenumbers.resize(modes);
  g->frequencies.resize(modes);
  for (int l = -modes / 2; l < modes / 2; ++l) {
    const double mu = 2.0 * std::numbers::pi * l / (b - a);
    g->wavenumbers[g->slot(l)] = mu;
    g->frequencies[g->slot(l)] = std::sqrt(1.0 + mu * mu);
  }
  return g;
}

// One time level of a (usually real) field as M complex coefficients in
// index order l = -M/2..M/2-1.
struct SpectralField {
  GridPtr grid;
  std::vector<std::complex<double>> coeffs;

  SpectralField() = default;
  explicit SpectralField(GridPtr g)
      : grid(std::move(g)), coeffs(grid->modes, std::complex<double>(0.0, 0.0)) {}

  std::complex<double>& at(int l) { return coeffs[grid->slot(l)]; }
  const std::complex<double>& at(int l) const { return coeffs[grid->slot(l)]; }
};

// Nodal values u_j, j = 0..M-1; the closing value u_M equals u_0 by
// periodicity and is not materialized.
struct NodalField {
  GridPtr grid;
  std::vector<double> values;

  NodalField() = default;
  explicit NodalField(GridPtr g) : grid(std::move(g)), values(grid->modes, 0.0) {}

  double sup_norm() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
};

}  // namespace kge

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "kge/fft.hpp"
#include "kge/grid.hpp"

namespace kge {

struct SymmetryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

// per-thread reorder scratch; avoids an allocation on every transform
inline std::vector<std::complex<double>>& reorder_scratch() {
  thread_local std::vector<std::complex<double>> s;
  return s;
}

// centered order l=-M/2..M/2-1  ->  DFT order k=0..M-1 (k = l mod M)
inline void centered_to_dft(const std::vector<std::complex<double>>& c,
                            std::vector<std::complex<double>>& out) {
  const int m = static_cast<int>(c.size());
  out.resize(m);
  const int half = m / 2;
  for (int k = 0; k < half; ++k) out[k] = c[k + half];   // l = 0..M/2-1
  for (int k = half; k < m; ++k) out[k] = c[k - half];   // l = -M/2..-1
}

inline void dft_to_centered(const std::vector<std::complex<double>>& d,
                            std::vector<std::complex<double>>& out) {
  const int m = static_cast<int>(d.size());
  out.resize(m);
  const int half = m / 2;
  for (int k = 0; k < half; ++k) out[k + half] = d[k];
  for (int k = half; k < m; ++k) out[k - half] = d[k];
}

// coefficients (centered order) of complex nodal samples, the plain
// (1/M) sum_j u_j e^{-i mu_l (x_j - a)} evaluated by FFT
inline void forward_inplace(std::vector<std::complex<double>>& nodal_to_coeffs) {
  const int m = static_cast<int>(nodal_to_coeffs.size());
  FftEngine::instance().forward(nodal_to_coeffs.data(), m);
  auto& tmp = reorder_scratch();
  dft_to_centered(nodal_to_coeffs, tmp);
  const double inv = 1.0 / m;
  for (int k = 0; k < m; ++k) nodal_to_coeffs[k] = tmp[k] * inv;
}

// nodal samples (complex) of a coefficient vector in centered order
inline void inverse_inplace(std::vector<std::complex<double>>& coeffs_to_nodal) {
  const int m = static_cast<int>(coeffs_to_nodal.size());
  auto& tmp = reorder_scratch();
  centered_to_dft(coeffs_to_nodal, tmp);
  coeffs_to_nodal.swap(tmp);
  FftEngine::instance().inverse(coeffs_to_nodal.data(), m);
}

}  // namespace detail

inline SpectralField forward_coefficients(const NodalField& f) {
  SpectralField out(f.grid);
  std::vector<std::complex<double>> buf(f.values.begin(), f.values.end());
  detail::forward_inplace(buf);
  out.coeffs = std::move(buf);
  return out;
}

// Synthesis at the nodes. A conjugate-symmetric input yields real values;
// a larger imaginary residue signals a symmetry bug upstream and is
// reported instead of silently dropped.
inline NodalField inverse_transform(const SpectralField& c, double imag_rel_tol = 1e-12) {
  std::vector<std::complex<double>> buf = c.coeffs;
  detail::inverse_inplace(buf);

  double scale = 0.0, imag = 0.0;
  for (const auto& z : buf) {
    scale = std::max(scale, std::abs(z));
    imag = std::max(imag, std::abs(z.imag()));
  }
  if (imag > imag_rel_tol * std::max(scale, 1e-300))
    throw SymmetryError("inverse_transform: imaginary residue " + std::to_string(imag) +
                        " exceeds tolerance on a field of scale " + std::to_string(scale));

  NodalField out(c.grid);
  for (int j = 0; j < c.grid->modes; ++j) out.values[j] = buf[j].real();
  return out;
}

// L^2-projection coefficients of a smooth periodic function, with the
// integral of eq for hat-u_l approximated by interpolation on a grid
// refined by `refine` (aliasing then sits below ~1e-12 for analytic data).
inline SpectralField project_initial(const std::function<double(double)>& phi,
                                     const GridPtr& grid, int refine = 16) {
  const int m = grid->modes;
  const int fine = m * std::max(refine, 1);
  std::vector<std::complex<double>> buf(fine);
  const double h = (grid->b - grid->a) / fine;
  for (int j = 0; j < fine; ++j) buf[j] = phi(grid->a + j * h);
  detail::forward_inplace(buf);
  SpectralField out(grid);
  for (int l = -m / 2; l < m / 2; ++l) out.at(l) = buf[l + fine / 2];
  return out;
}

// Interpolation coefficients (I_M phi) on the solver grid itself.
inline SpectralField interpolate_initial(const std::function<double(double)>& phi,
                                         const GridPtr& grid) {
  NodalField f(grid);
  for (int j = 0; j < grid->modes; ++j) f.values[j] = phi(grid->nodes[j]);
  return forward_coefficients(f);
}

// Coefficient-weighted Sobolev norm sqrt(sum (1+mu_l^2)^lambda |c_l|^2).
// Carries no (b-a) factor relative to the integral L^2 norm.
inline double sobolev_norm(const SpectralField& c, int lambda) {
  if (lambda < 0) throw std::invalid_argument("sobolev_norm: lambda must be >= 0");
  double s = 0.0;
  const int m = c.grid->modes;
  for (int k = 0; k < m; ++k) {
    const double mu = c.grid->wavenumbers[k];
    const double w = std::pow(1.0 + mu * mu, lambda);
    s += w * std::norm(c.coeffs[k]);
  }
  return std::sqrt(s);
}

inline SpectralField scaled(const SpectralField& f, double factor) {
  SpectralField out = f;
  for (auto& z : out.coeffs) z *= factor;
  return out;
}

// Spectral truncation onto a coarser grid over the same interval:
// modes with |l| >= M_coarse/2 are dropped.
inline SpectralField restrict_to(const SpectralField& f, const GridPtr& coarse) {
  if (!f.grid->same_domain(*coarse))
    throw std::invalid_argument("restrict_to: grids cover different intervals");
  if (coarse->modes > f.grid->modes)
    throw std::invalid_argument("restrict_to: target grid is finer than the source");
  SpectralField out(coarse);
  for (int l = coarse->index_min(); l <= coarse->index_max(); ++l) out.at(l) = f.at(l);
  return out;
}

// Exact H^lambda distance between two trigonometric polynomials on one
// interval: the coarser coefficient set is zero-padded into the finer
// index set and the coefficient norm of the difference taken. Unresolved
// modes of the finer field therefore count in full.
inline double coefficient_distance(const SpectralField& x, const SpectralField& y, int lambda) {
  if (lambda < 0) throw std::invalid_argument("coefficient_distance: lambda must be >= 0");
  if (!x.grid->same_domain(*y.grid))
    throw std::invalid_argument("coefficient_distance: grids cover different intervals");
  const SpectralField& fine = x.grid->modes >= y.grid->modes ? x : y;
  const SpectralField& coarse = x.grid->modes >= y.grid->modes ? y : x;
  const int lo = coarse.grid->index_min(), hi = coarse.grid->index_max();
  double s = 0.0;
  for (int l = fine.grid->index_min(); l <= fine.grid->index_max(); ++l) {
    std::complex<double> d = fine.at(l);
    if (l >= lo && l <= hi) d -= coarse.at(l);
    const double mu = fine.grid->mu(l);
    s += std::pow(1.0 + mu * mu, lambda) * std::norm(d);
  }
  return std::sqrt(s);
}

}  // namespace kge

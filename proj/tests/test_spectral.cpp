#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <numbers>
#include <random>

#include "kge/grid.hpp"
#include "kge/transforms.hpp"

using namespace kge;
using Catch::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

// independent O(M^2) evaluation of the defining coefficient sum
std::vector<std::complex<double>> dft_oracle(const NodalField& f) {
  const auto& g = *f.grid;
  const int m = g.modes;
  std::vector<std::complex<double>> out(m);
  for (int l = -m / 2; l < m / 2; ++l) {
    std::complex<double> acc(0.0, 0.0);
    for (int j = 0; j < m; ++j) {
      const double arg = -g.mu(l) * (g.nodes[j] - g.a);
      acc += f.values[j] * std::complex<double>(std::cos(arg), std::sin(arg));
    }
    out[g.slot(l)] = acc / static_cast<double>(m);
  }
  return out;
}

// direct synthesis sum at the nodes
std::vector<double> synthesis_oracle(const SpectralField& c) {
  const auto& g = *c.grid;
  const int m = g.modes;
  std::vector<double> out(m);
  for (int j = 0; j < m; ++j) {
    std::complex<double> acc(0.0, 0.0);
    for (int l = -m / 2; l < m / 2; ++l) {
      const double arg = g.mu(l) * (g.nodes[j] - g.a);
      acc += c.at(l) * std::complex<double>(std::cos(arg), std::sin(arg));
    }
    out[j] = acc.real();
  }
  return out;
}

// periodic trapezoid (= rectangle) quadrature of the projection integral
std::complex<double> projection_quadrature(const std::function<double(double)>& f, double a,
                                           double b, double mu, int n = 10000) {
  std::complex<double> acc(0.0, 0.0);
  const double h = (b - a) / n;
  for (int j = 0; j < n; ++j) {
    const double x = a + j * h;
    const double arg = -mu * (x - a);
    acc += f(x) * std::complex<double>(std::cos(arg), std::sin(arg));
  }
  return acc * (h / (b - a));
}

NodalField random_real_field(const GridPtr& g, std::mt19937& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  NodalField f(g);
  for (auto& v : f.values) v = dist(rng);
  return f;
}

}  // namespace

TEST_CASE("make_grid populates nodes, wavenumbers and frequencies") {
  auto g = make_grid(0.0, 2.0 * kPi, 8);
  for (int j = 0; j <= 8; ++j) CHECK(g->nodes[j] == Approx(j * kPi / 4.0));
  for (int l = -4; l < 4; ++l) CHECK(g->mu(l) == Approx(static_cast<double>(l)).margin(1e-15));
  CHECK(g->zeta(0) == Approx(1.0));
  CHECK(g->zeta(1) == Approx(std::sqrt(2.0)));
  CHECK(g->zeta(-1) == Approx(std::sqrt(2.0)));
  CHECK(g->zeta(2) == Approx(std::sqrt(5.0)));

  auto g2 = make_grid(-5.0, 5.0, 16);
  CHECK(g2->mu(1) == Approx(kPi / 5.0));
  CHECK(g2->h == Approx(0.625));
}

TEST_CASE("make_grid invariants") {
  auto g = make_grid(-3.0, 7.0, 32);
  CHECK(g->h * g->modes == Approx(g->length()));
  for (int l = 1; l < 16; ++l) CHECK(g->mu(-l) == Approx(-g->mu(l)));
  for (int l = -16; l < 16; ++l) {
    CHECK(g->zeta(l) >= 1.0);
    if (l != 0) CHECK(g->zeta(l) > 1.0);
  }
}

TEST_CASE("make_grid rejects bad input") {
  CHECK_THROWS_AS(make_grid(0.0, 1.0, 7), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(0.0, 1.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(1.0, 1.0, 8), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(2.0, 1.0, 8), std::invalid_argument);
}

TEST_CASE("forward_coefficients on closed forms") {
  auto g = make_grid(0.0, 2.0 * kPi, 8);

  NodalField ones(g);
  for (auto& v : ones.values) v = 1.0;
  auto c = forward_coefficients(ones);
  CHECK(c.at(0).real() == Approx(1.0));
  for (int l = -4; l < 4; ++l)
    if (l != 0) CHECK(std::abs(c.at(l)) < 1e-14);

  NodalField cosx(g);
  for (int j = 0; j < 8; ++j) cosx.values[j] = std::cos(g->nodes[j] - g->a);
  auto cc = forward_coefficients(cosx);
  CHECK(cc.at(1).real() == Approx(0.5));
  CHECK(cc.at(-1).real() == Approx(0.5));
  for (int l = -4; l < 4; ++l)
    if (l != 1 && l != -1) CHECK(std::abs(cc.at(l)) < 1e-14);
}

TEST_CASE("forward_coefficients matches the direct DFT sum") {
  std::mt19937 rng(12345);
  auto g = make_grid(-1.0, 3.0, 8);
  auto f = random_real_field(g, rng);
  auto fast = forward_coefficients(f);
  auto slow = dft_oracle(f);
  for (int k = 0; k < 8; ++k) CHECK(std::abs(fast.coeffs[k] - slow[k]) < 1e-13);
}

TEST_CASE("inverse_transform on closed forms") {
  auto g = make_grid(0.0, 2.0 * kPi, 8);
  SpectralField c(g);
  c.at(0) = 3.0;
  auto f = inverse_transform(c);
  for (double v : f.values) CHECK(v == Approx(3.0));

  SpectralField d(g);
  d.at(1) = 0.5;
  d.at(-1) = 0.5;
  auto fd = inverse_transform(d);
  for (int j = 0; j < 8; ++j) CHECK(fd.values[j] == Approx(std::cos(g->nodes[j])).margin(1e-14));
}

TEST_CASE("inverse_transform reports symmetry violations") {
  auto g = make_grid(0.0, 2.0 * kPi, 8);
  SpectralField c(g);
  c.at(2) = {0.0, 1.0};  // no conjugate partner
  CHECK_THROWS_AS(inverse_transform(c), SymmetryError);
}

TEST_CASE("roundtrip identity against both direct sums") {
  std::mt19937 rng(777);
  auto g = make_grid(0.0, 2.0 * kPi, 16);
  auto f = random_real_field(g, rng);
  auto c = forward_coefficients(f);
  auto back = inverse_transform(c);
  auto direct = synthesis_oracle(c);
  for (int j = 0; j < 16; ++j) {
    CHECK(back.values[j] == Approx(f.values[j]).epsilon(1e-13));
    CHECK(direct[j] == Approx(f.values[j]).epsilon(1e-12).margin(1e-12));
  }
}

TEST_CASE("transform roundtrip property across grid sizes") {
  std::mt19937 rng(2024);
  for (int m = 4; m <= 256; m *= 2) {
    auto g = make_grid(0.0, 2.0 * kPi, m);
    for (int rep = 0; rep < 100; ++rep) {
      auto f = random_real_field(g, rng);
      auto back = inverse_transform(forward_coefficients(f));
      double worst = 0.0, scale = 0.0;
      for (int j = 0; j < m; ++j) {
        worst = std::max(worst, std::abs(back.values[j] - f.values[j]));
        scale = std::max(scale, std::abs(f.values[j]));
      }
      REQUIRE(worst <= 1e-13 * std::max(scale, 1.0));
    }
  }
}

TEST_CASE("forward_coefficients preserves conjugate symmetry on real fields") {
  std::mt19937 rng(5150);
  for (int m : {8, 32, 96}) {
    auto g = make_grid(-2.0, 2.0, m);
    auto f = random_real_field(g, rng);
    auto c = forward_coefficients(f);
    CHECK(std::abs(c.at(0).imag()) < 1e-13);
    for (int l = 1; l < m / 2; ++l)
      CHECK(std::abs(c.at(-l) - std::conj(c.at(l))) < 1e-13);
  }
}

TEST_CASE("project_initial on closed forms") {
  auto g = make_grid(0.0, 2.0 * kPi, 16);

  auto s = project_initial([](double x) { return std::sin(x); }, g);
  CHECK(s.at(1).imag() == Approx(-0.5));
  CHECK(s.at(-1).imag() == Approx(0.5));
  CHECK(std::abs(s.at(1).real()) < 1e-14);
  for (int l = -8; l < 8; ++l)
    if (l != 1 && l != -1) CHECK(std::abs(s.at(l)) < 1e-14);

  auto c = project_initial([](double) { return 2.5; }, g);
  CHECK(c.at(0).real() == Approx(2.5));
}

TEST_CASE("project_initial matches the quadrature oracle") {
  auto phi = [](double x) {
    const double cx = std::cos(x);
    return 1.0 / (2.0 + cx * cx);
  };
  auto g = make_grid(0.0, 2.0 * kPi, 16);
  auto c = project_initial(phi, g);
  for (int l = -8; l < 8; ++l) {
    auto exact = projection_quadrature(phi, 0.0, 2.0 * kPi, g->mu(l));
    CHECK(std::abs(c.at(l) - exact) < 1e-10);
  }
}

TEST_CASE("sobolev_norm on closed forms") {
  auto g = make_grid(0.0, 2.0 * kPi, 8);
  SpectralField c(g);
  c.at(1) = 1.0;
  CHECK(sobolev_norm(c, 1) == Approx(std::sqrt(2.0)));
  CHECK(sobolev_norm(c, 0) == Approx(1.0));

  SpectralField d(g);
  d.at(0) = 3.0;
  d.at(2) = {0.0, 4.0};
  d.at(-2) = {0.0, -4.0};
  CHECK(sobolev_norm(d, 0) == Approx(std::sqrt(9.0 + 16.0 + 16.0)));

  CHECK_THROWS_AS(sobolev_norm(d, -1), std::invalid_argument);
}

TEST_CASE("sobolev_norm equals the integral L2 norm up to the (b-a) factor") {
  auto phi = [](double x) {
    const double cx = std::cos(x);
    return 1.0 / (2.0 + cx * cx);
  };
  auto g = make_grid(0.0, 2.0 * kPi, 64);
  auto c = project_initial(phi, g);
  // fine quadrature of integral |phi|^2
  double integral = 0.0;
  const int n = 200000;
  const double h = 2.0 * kPi / n;
  for (int j = 0; j < n; ++j) {
    const double v = phi(j * h);
    integral += v * v;
  }
  integral *= h;
  CHECK(sobolev_norm(c, 0) == Approx(std::sqrt(integral / (2.0 * kPi))).epsilon(1e-10));
}

TEST_CASE("Parseval against the nodal trapezoid rule for resolved polynomials") {
  std::mt19937 rng(31337);
  auto g = make_grid(0.0, 2.0 * kPi, 32);
  // random trig polynomial of degree < M/2, conjugate-symmetric
  SpectralField c(g);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  c.at(0) = dist(rng);
  for (int l = 1; l < 16; ++l) {
    const std::complex<double> z(dist(rng), dist(rng));
    c.at(l) = z;
    c.at(-l) = std::conj(z);
  }
  c.at(-16) = dist(rng);  // unpaired mode must stay real
  auto f = inverse_transform(c);
  double trap = 0.0;
  for (double v : f.values) trap += v * v;
  trap *= g->h;
  const double n0 = sobolev_norm(c, 0);
  CHECK(n0 * n0 * g->length() == Approx(trap).epsilon(1e-11));
}

TEST_CASE("H1 dominates H0") {
  std::mt19937 rng(99);
  auto g = make_grid(0.0, 2.0 * kPi, 64);
  for (int rep = 0; rep < 20; ++rep) {
    auto c = forward_coefficients(random_real_field(g, rng));
    CHECK(sobolev_norm(c, 1) >= sobolev_norm(c, 0));
  }
}

TEST_CASE("restrict_to truncates and coefficient_distance pads") {
  auto fine = make_grid(0.0, 2.0 * kPi, 16);
  auto coarse = make_grid(0.0, 2.0 * kPi, 8);
  SpectralField f(fine);
  f.at(1) = {0.0, -0.5};
  f.at(-1) = {0.0, 0.5};
  f.at(6) = 0.25;  // unresolved on the coarse grid
  f.at(-6) = 0.25;

  auto r = restrict_to(f, coarse);
  CHECK(r.at(1).imag() == Approx(-0.5));
  CHECK(std::abs(r.at(3)) == 0.0);

  SpectralField zero(coarse);
  // distance to zero picks up the full fine field including the tail
  const double d0 = coefficient_distance(f, zero, 0);
  CHECK(d0 == Approx(std::sqrt(0.25 + 0.25 + 0.0625 + 0.0625)));

  auto other_domain = make_grid(0.0, 1.0, 8);
  SpectralField g2(other_domain);
  CHECK_THROWS_AS(coefficient_distance(f, g2, 0), std::invalid_argument);
}

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "latspec/core.hpp"
#include "latspec/error.hpp"

using namespace latspec;
using std::numbers::pi;

TEST_CASE("default dispersion: cosine band between 0 and 2") {
  const Dispersion d;
  CHECK(d.is_default());
  CHECK(d.k_min() == 0.0);
  CHECK(d.k_max() == 2.0);
  CHECK(kinetic_eigenvalue(d, 0.0) == 0.0);
  CHECK(kinetic_eigenvalue(d, pi) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(kinetic_eigenvalue(d, pi / 2) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("dispersion is 2 pi periodic") {
  const Dispersion d({{1, 0.5}, {2, -0.2}, {5, 0.07}});
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> s(-10.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = s(rng);
    CHECK(std::abs(d(x + 2 * pi) - d(x)) < 1e-12);
  }
}

TEST_CASE("dispersion extremes agree with a dense scan") {
  // 10^5-point brute-force scan of one period
  auto scan = [](const Dispersion& d) {
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i <= 100000; ++i) {
      const double v = d(2 * pi * i / 100000.0);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    return std::pair{lo, hi};
  };
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::uniform_int_distribution<int> range(1, 6);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Hopping> hs;
    for (int k = 0; k < 3; ++k) hs.push_back({range(rng), amp(rng)});
    const Dispersion d(hs);
    const auto [lo, hi] = scan(d);
    // refined extremes are at least as extreme as any scan point
    CHECK(d.k_min() <= lo + 1e-15);
    CHECK(d.k_max() >= hi - 1e-15);
    // a grid of spacing h misses an extreme by at most max|K''| h^2 / 8
    CHECK(std::abs(d.k_min() - lo) < 1e-7);
    CHECK(std::abs(d.k_max() - hi) < 1e-7);
  }
}

TEST_CASE("invalid dispersions are rejected") {
  CHECK_THROWS_AS(Dispersion(std::vector<Hopping>{}), PreconditionError);
  CHECK_THROWS_AS(Dispersion({{0, 0.5}}), PreconditionError);
  CHECK_THROWS_AS(Dispersion({{1, NAN}}), PreconditionError);
  CHECK_THROWS_AS(Dispersion({{1, 0.5}}, -1.0), PreconditionError);
}

TEST_CASE("wavenumber_from_energy examples") {
  auto s = wavenumber_from_energy(1.0);
  CHECK(s.re == doctest::Approx(pi / 2).epsilon(1e-15));
  CHECK(s.im == 0.0);

  s = wavenumber_from_energy(2.0);
  CHECK(s.re == doctest::Approx(pi).epsilon(1e-15));
  CHECK(s.im == 0.0);

  // arccosh(2) = ln(2 + sqrt 3)
  s = wavenumber_from_energy(3.0);
  CHECK(s.re == doctest::Approx(pi).epsilon(1e-15));
  CHECK(s.im == doctest::Approx(std::log(2.0 + std::sqrt(3.0))).epsilon(1e-14));
  CHECK(s.im == doctest::Approx(1.316958).epsilon(1e-6));
  CHECK(std::abs(kinetic_eigenvalue(Dispersion{}, s.value()) - 3.0) < 1e-12);

  s = wavenumber_from_energy(-0.5);
  CHECK(s.re == 0.0);
  CHECK(s.im > 0.0);
}

TEST_CASE("wavenumber branches round-trip through the dispersion") {
  const Dispersion d;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> energy(-10.0, 12.0);
  for (int i = 0; i < 10000; ++i) {
    const double e = energy(rng);
    const auto s = wavenumber_from_energy(d, e);
    CHECK(s.im >= 0.0);
    const bool branch_ok = (s.im == 0.0) || (s.re == 0.0 && e < 0.0) || (s.re == pi && e > 2.0);
    CHECK(branch_ok);
    const auto back = kinetic_eigenvalue(d, s.value());
    CHECK(std::abs(back.real() - e) < 1e-10);
    CHECK(std::abs(back.imag()) < 1e-10);
  }
}

TEST_CASE("wavenumber is continuous at the band edges") {
  for (double edge : {0.0, 2.0}) {
    const auto at = wavenumber_from_energy(edge);
    CHECK(std::abs(wavenumber_from_energy(edge - 1e-17).value() - at.value()) < 1e-8);
    CHECK(std::abs(wavenumber_from_energy(edge + 1e-17).value() - at.value()) < 1e-8);
    // |s(edge +- delta) - s(edge)| ~ sqrt(2 delta) on both sides
    for (double delta = 1e-4; delta > 1e-15; delta /= 100.0) {
      // slack covers rounding of edge + delta near 1e-14
      const double bound = 1.05 * std::sqrt(2.0 * delta);
      CHECK(std::abs(wavenumber_from_energy(edge - delta).value() - at.value()) < bound);
      CHECK(std::abs(wavenumber_from_energy(edge + delta).value() - at.value()) < bound);
    }
  }
}

TEST_CASE("analytic inversion needs the default band") {
  const Dispersion d({{1, 0.5}, {3, 0.1}});
  CHECK_THROWS_AS(wavenumber_from_energy(d, 1.0), PreconditionError);
  try {
    wavenumber_from_energy(d, 1.0);
  } catch (const PreconditionError& e) {
    CHECK(e.kind() == "unsupported-dispersion");
  }
}

TEST_CASE("classify_site") {
  const Dispersion d;
  CHECK(classify_site(d, 1.0, 0.0) == SiteClass::allowed);
  CHECK(classify_site(d, -0.5, 0.0) == SiteClass::forbidden_below);
  CHECK(classify_site(d, 4.4, 2.5) == SiteClass::allowed);
  CHECK(classify_site(d, 4.4, 0.0) == SiteClass::forbidden_above);
  // closed band
  CHECK(classify_site(d, 0.0, 0.0) == SiteClass::allowed);
  CHECK(classify_site(d, 2.0, 0.0) == SiteClass::allowed);
  CHECK(to_string(SiteClass::forbidden_above) == "forbidden-above");
}

TEST_CASE("potential types validate their invariants") {
  CHECK_THROWS_AS(WallStepPotential(0, 1.0), PreconditionError);
  CHECK_THROWS_AS(WallStepPotential(3, INFINITY), PreconditionError);
  CHECK_THROWS_AS(SitePotential(0, {}), PreconditionError);
  CHECK_THROWS_AS(SitePotential(0, {1.0, NAN}), PreconditionError);

  const WallStepPotential p(3, -1.5);
  CHECK(p.at(0) == 0.0);
  CHECK(p.at(1) == -1.5);
  CHECK(p.at(3) == -1.5);
  CHECK(p.at(4) == 0.0);

  const auto v = SitePotential::embed(p, 10);
  CHECK(v.first == 1);
  CHECK(v.size() == 10);
  CHECK(v.at(3) == -1.5);
  CHECK(v.at(4) == 0.0);
  CHECK_THROWS_AS(v.at(0), PreconditionError);
  CHECK_THROWS_AS(SitePotential::embed(p, 2), PreconditionError);
}

TEST_CASE("lattice state norm and inverse participation ratio") {
  LatticeState s{-1, {{3.0, 0.0}, {0.0, 4.0}}};
  CHECK(s.norm() == doctest::Approx(5.0));
  s.normalize();
  CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.at(-1) == std::complex<double>(0.6, 0.0));
  CHECK(s.at(5) == std::complex<double>(0.0, 0.0));

  LatticeState flat{0, std::vector<std::complex<double>>(100, 1.0)};
  CHECK(flat.ipr() == doctest::Approx(0.01));
  LatticeState delta{0, {0.0, 1.0, 0.0}};
  CHECK(delta.ipr() == doctest::Approx(1.0));

  LatticeState zero{0, {0.0, 0.0}};
  CHECK_THROWS_AS(zero.normalize(), PreconditionError);
}

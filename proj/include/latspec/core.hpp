#pragma once

// Domain types and elementary kinematics for a particle hopping on a
// one-dimensional lattice. All energies are dimensionless, measured in
// units of the reference scale K0.

#include <complex>
#include <cstddef>
#include <string_view>
#include <vector>

namespace latspec {

struct Hopping {
  int range = 1;           // distance m in sites, m >= 1
  double amplitude = 0.5;  // t_m in units of K0
};

// Kinetic eigenvalue K(s) = sum_m t_m (2 - 2 cos(m s)).
//
// The default is the single nearest-neighbour band 1 - cos s, for which
// k_min = 0 and k_max = 2. Extremes of a general dispersion are located once
// at construction (grid scan refined by Newton on K'(s)).
class Dispersion {
 public:
  Dispersion();
  explicit Dispersion(std::vector<Hopping> hoppings, double k0 = 1.0);

  double operator()(double s) const;
  std::complex<double> operator()(std::complex<double> s) const;

  double k_min() const noexcept { return k_min_; }
  double k_max() const noexcept { return k_max_; }
  double k0() const noexcept { return k0_; }
  int max_range() const noexcept;
  // sum_m 2 t_m: the diagonal kinetic contribution of the lattice operator
  double onsite() const noexcept;
  bool is_default() const noexcept;

  const std::vector<Hopping>& hoppings() const noexcept { return hoppings_; }

 private:
  std::vector<Hopping> hoppings_;
  double k0_ = 1.0;
  double k_min_ = 0.0;
  double k_max_ = 2.0;
};

double kinetic_eigenvalue(const Dispersion& d, double s);
std::complex<double> kinetic_eigenvalue(const Dispersion& d, std::complex<double> s);

// Wavenumber s = re + i im with im >= 0. Exactly one branch applies:
// real (im == 0), below the band (re == 0), above the band (re == pi).
struct ComplexWavenumber {
  double re = 0.0;
  double im = 0.0;

  std::complex<double> value() const { return {re, im}; }
  bool is_real() const noexcept { return im == 0.0; }
};

// Inverts e = 1 - cos s for the default dispersion.
ComplexWavenumber wavenumber_from_energy(double e);
// Throws PreconditionError("unsupported-dispersion") unless d.is_default().
ComplexWavenumber wavenumber_from_energy(const Dispersion& d, double e);

enum class SiteClass { allowed, forbidden_below, forbidden_above };

std::string_view to_string(SiteClass c);

// Band edges count as allowed.
SiteClass classify_site(const Dispersion& d, double e, double u_n);

// Hard wall at n <= 0, step of height u on sites 1..n0, zero beyond.
// u < 0 is a well, u > 0 a barrier.
struct WallStepPotential {
  int n0 = 1;
  double u = 0.0;

  WallStepPotential() = default;
  WallStepPotential(int n0_, double u_);

  double at(int n) const noexcept { return (n >= 1 && n <= n0) ? u : 0.0; }
};

// Finite potential on sites first .. first + size - 1 with Dirichlet
// boundaries: the wavefunction vanishes outside the window.
struct SitePotential {
  int first = 0;
  std::vector<double> values;

  SitePotential() = default;
  SitePotential(int first_, std::vector<double> values_);

  // sites 1 .. n_sites, the wall at site 0 becomes the left Dirichlet edge
  static SitePotential embed(const WallStepPotential& p, int n_sites);

  std::size_t size() const noexcept { return values.size(); }
  int last() const noexcept { return first + static_cast<int>(values.size()) - 1; }
  double at(int n) const;
};

enum class BandKind { continuous, discrete_window };

struct EnergyBand {
  double lo = 0.0;
  double hi = 0.0;
  BandKind kind = BandKind::continuous;

  bool empty() const noexcept { return !(lo < hi); }
  bool contains_strictly(double e) const noexcept { return lo < e && e < hi; }
};

// The continuous kinetic band [k_min, k_max].
EnergyBand kinetic_band(const Dispersion& d);

// Amplitudes on sites first .. first + size - 1; zero elsewhere.
struct LatticeState {
  int first = 0;
  std::vector<std::complex<double>> amplitudes;

  std::size_t size() const noexcept { return amplitudes.size(); }
  std::complex<double> at(int n) const;
  double norm() const;
  LatticeState& normalize();
  // inverse participation ratio sum |psi|^4 / (sum |psi|^2)^2
  double ipr() const;
};

}  // namespace latspec

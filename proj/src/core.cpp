#include "latspec/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "latspec/error.hpp"

namespace latspec {

namespace {

constexpr double kPi = std::numbers::pi;

double derivative(const std::vector<Hopping>& hs, double s) {
  double acc = 0.0;
  for (const auto& h : hs) acc += 2.0 * h.range * h.amplitude * std::sin(h.range * s);
  return acc;
}

double second_derivative(const std::vector<Hopping>& hs, double s) {
  double acc = 0.0;
  for (const auto& h : hs)
    acc += 2.0 * h.range * h.range * h.amplitude * std::cos(h.range * s);
  return acc;
}

}  // namespace

Dispersion::Dispersion() : hoppings_{{1, 0.5}}, k0_(1.0), k_min_(0.0), k_max_(2.0) {}

Dispersion::Dispersion(std::vector<Hopping> hoppings, double k0)
    : hoppings_(std::move(hoppings)), k0_(k0) {
  if (hoppings_.empty())
    throw PreconditionError("invalid-dispersion", "dispersion needs at least one hopping");
  for (const auto& h : hoppings_) {
    if (h.range < 1)
      throw PreconditionError("invalid-dispersion",
                              "hopping range must be a positive integer, got " +
                                  std::to_string(h.range));
    if (!std::isfinite(h.amplitude))
      throw PreconditionError("invalid-dispersion", "hopping amplitude must be finite");
  }
  if (!(k0_ > 0.0) || !std::isfinite(k0_))
    throw PreconditionError("invalid-dispersion", "K0 must be positive and finite");

  // K is even and 2 pi periodic, so [0, pi] holds every extreme value.
  const int points = 2048 * max_range();
  const double step = kPi / points;
  std::vector<double> grid(points + 1);
  for (int i = 0; i <= points; ++i) grid[i] = (*this)(i * step);

  k_min_ = std::min(grid.front(), grid.back());
  k_max_ = std::max(grid.front(), grid.back());
  for (int i = 1; i < points; ++i) {
    const bool is_min = grid[i] <= grid[i - 1] && grid[i] <= grid[i + 1];
    const bool is_max = grid[i] >= grid[i - 1] && grid[i] >= grid[i + 1];
    if (!is_min && !is_max) continue;
    double s = i * step;
    for (int it = 0; it < 50; ++it) {
      const double curv = second_derivative(hoppings_, s);
      if (curv == 0.0) break;
      const double next = std::clamp(s - derivative(hoppings_, s) / curv, (i - 1) * step,
                                     (i + 1) * step);
      if (std::abs(next - s) < 1e-15) {
        s = next;
        break;
      }
      s = next;
    }
    const double v = (*this)(s);
    k_min_ = std::min({k_min_, v, grid[i]});
    k_max_ = std::max({k_max_, v, grid[i]});
  }
}

double Dispersion::operator()(double s) const {
  double acc = 0.0;
  for (const auto& h : hoppings_) acc += h.amplitude * (2.0 - 2.0 * std::cos(h.range * s));
  return acc;
}

std::complex<double> Dispersion::operator()(std::complex<double> s) const {
  std::complex<double> acc = 0.0;
  for (const auto& h : hoppings_)
    acc += h.amplitude * (2.0 - 2.0 * std::cos(static_cast<double>(h.range) * s));
  return acc;
}

int Dispersion::max_range() const noexcept {
  int m = 1;
  for (const auto& h : hoppings_) m = std::max(m, h.range);
  return m;
}

double Dispersion::onsite() const noexcept {
  double acc = 0.0;
  for (const auto& h : hoppings_) acc += 2.0 * h.amplitude;
  return acc;
}

bool Dispersion::is_default() const noexcept {
  return hoppings_.size() == 1 && hoppings_[0].range == 1 && hoppings_[0].amplitude == 0.5;
}

double kinetic_eigenvalue(const Dispersion& d, double s) { return d(s); }

std::complex<double> kinetic_eigenvalue(const Dispersion& d, std::complex<double> s) {
  return d(s);
}

ComplexWavenumber wavenumber_from_energy(double e) {
  if (!std::isfinite(e))
    throw PreconditionError("non-finite-energy", "kinetic energy must be finite");
  if (e < 0.0) return {0.0, std::acosh(1.0 - e)};
  if (e > 2.0) return {kPi, std::acosh(e - 1.0)};
  return {std::acos(1.0 - e), 0.0};
}

ComplexWavenumber wavenumber_from_energy(const Dispersion& d, double e) {
  if (!d.is_default())
    throw PreconditionError("unsupported-dispersion",
                            "analytic wavenumber inversion needs the single-cosine band");
  return wavenumber_from_energy(e);
}

std::string_view to_string(SiteClass c) {
  switch (c) {
    case SiteClass::allowed:
      return "allowed";
    case SiteClass::forbidden_below:
      return "forbidden-below";
    case SiteClass::forbidden_above:
      return "forbidden-above";
  }
  return "unknown";
}

SiteClass classify_site(const Dispersion& d, double e, double u_n) {
  const double kinetic = e - u_n;
  if (kinetic < d.k_min()) return SiteClass::forbidden_below;
  if (kinetic > d.k_max()) return SiteClass::forbidden_above;
  return SiteClass::allowed;
}

WallStepPotential::WallStepPotential(int n0_, double u_) : n0(n0_), u(u_) {
  if (n0 < 1)
    throw PreconditionError("invalid-n0",
                            "n0 must be a positive integer, got " + std::to_string(n0));
  if (!std::isfinite(u)) throw PreconditionError("invalid-u", "step height u must be finite");
}

SitePotential::SitePotential(int first_, std::vector<double> values_)
    : first(first_), values(std::move(values_)) {
  if (values.empty()) throw PreconditionError("empty-window", "potential window is empty");
  for (double v : values)
    if (!std::isfinite(v))
      throw PreconditionError("non-finite-potential", "potential values must be finite");
}

SitePotential SitePotential::embed(const WallStepPotential& p, int n_sites) {
  if (n_sites < p.n0)
    throw PreconditionError("window-too-small",
                            "window of " + std::to_string(n_sites) +
                                " sites cannot hold a step of width " + std::to_string(p.n0));
  std::vector<double> v(static_cast<std::size_t>(n_sites), 0.0);
  std::fill_n(v.begin(), p.n0, p.u);
  return SitePotential(1, std::move(v));
}

double SitePotential::at(int n) const {
  if (n < first || n > last())
    throw PreconditionError("outside-window", "site " + std::to_string(n) +
                                                  " lies outside the potential window");
  return values[static_cast<std::size_t>(n - first)];
}

EnergyBand kinetic_band(const Dispersion& d) {
  return {d.k_min(), d.k_max(), BandKind::continuous};
}

std::complex<double> LatticeState::at(int n) const {
  if (n < first || n >= first + static_cast<int>(amplitudes.size())) return 0.0;
  return amplitudes[static_cast<std::size_t>(n - first)];
}

double LatticeState::norm() const {
  double acc = 0.0;
  for (const auto& a : amplitudes) acc += std::norm(a);
  return std::sqrt(acc);
}

LatticeState& LatticeState::normalize() {
  const double n = norm();
  if (n == 0.0) throw PreconditionError("zero-state", "cannot normalize the zero state");
  for (auto& a : amplitudes) a /= n;
  return *this;
}

double LatticeState::ipr() const {
  double p2 = 0.0;
  double p4 = 0.0;
  for (const auto& a : amplitudes) {
    const double w = std::norm(a);
    p2 += w;
    p4 += w * w;
  }
  return p2 > 0.0 ? p4 / (p2 * p2) : 0.0;
}

}  // namespace latspec

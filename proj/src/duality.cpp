#include "latspec/duality.hpp"

#include "latspec/error.hpp"

namespace latspec {

bool duality_applicable(const Dispersion& d) {
  for (const auto& h : d.hoppings())
    if (h.range % 2 == 0 && h.amplitude != 0.0) return false;
  return true;
}

double duality_shift(const Dispersion& d) {
  if (!duality_applicable(d))
    throw PreconditionError("duality-not-applicable",
                            "dispersion has even-range hoppings; K(s + pi) + K(s) is not constant");
  return d.k_max() + d.k_min();
}

double dual_energy(const Dispersion& d, double e) { return -e + duality_shift(d); }

LatticeState dual_state(const LatticeState& psi) {
  LatticeState out = psi;
  for (std::size_t i = 0; i < out.amplitudes.size(); ++i) {
    const int n = psi.first + static_cast<int>(i);
    if (n % 2 != 0) out.amplitudes[i] = -out.amplitudes[i];
  }
  return out;
}

WallStepPotential dual_potential(const WallStepPotential& v) { return {v.n0, 0.0 - v.u}; }

SitePotential dual_potential(const SitePotential& v) {
  SitePotential out = v;
  for (auto& x : out.values) x = 0.0 - x;  // keeps +0 for empty sites
  return out;
}

}  // namespace latspec

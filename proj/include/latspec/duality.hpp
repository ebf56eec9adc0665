#pragma once

// Attractive <-> repulsive correspondence. Conjugating with the staggered
// sign operator S|n> = (-1)^n |n> maps K onto (k_max + k_min) - K whenever
// the dispersion is a constant plus an odd function of exp(i s), so
//
//   H(-U) = -S H(U) S + (k_max + k_min).
//
// Hard walls are Dirichlet boundaries and are left unchanged by U -> -U.

#include "latspec/core.hpp"

namespace latspec {

// True iff every hopping of even range has zero amplitude.
bool duality_applicable(const Dispersion& d);

// k_max + k_min; for the default band this is 2.
// Throws PreconditionError("duality-not-applicable") when the predicate fails.
double duality_shift(const Dispersion& d);

double dual_energy(const Dispersion& d, double e);

// psi'(n) = (-1)^n psi(n)
LatticeState dual_state(const LatticeState& psi);

WallStepPotential dual_potential(const WallStepPotential& v);
SitePotential dual_potential(const SitePotential& v);

}  // namespace latspec

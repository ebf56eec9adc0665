#pragma once

// Analytic solver for a hard wall followed by a step of width n0 and height
// u (in K0), default nearest-neighbour dispersion.
//
// Inside the step psi(n) = A sin(s_I n); beyond it psi decays as
// exp(i s_II n) with Im s_II > 0. Matching at n0 and n0 + 1 gives the
// quantization condition
//
//   sin(s_I (n0 + 1)) = exp(i s_II) sin(s_I n0),
//
// where exp(i s_II) is real: e^{-theta} for a well, -e^{-theta} for a
// barrier (the decaying tail alternates in sign above the band).

#include <vector>

#include "latspec/core.hpp"

namespace latspec {

enum class Branch { well, barrier };

class QuantizationProblem {
 public:
  // Throws PreconditionError("invalid-u") for u == 0.
  explicit QuantizationProblem(WallStepPotential potential);

  const WallStepPotential& potential() const noexcept { return potential_; }
  Branch branch() const noexcept { return branch_; }
  double u_abs() const noexcept;

  // (-|u|, min(0, 2 - |u|)) for a well, (max(2, u), 2 + u) for a barrier.
  // May be empty.
  EnergyBand window() const noexcept;

  // Wavenumbers at energy e, which must lie strictly inside window().
  double s_inside(double e) const;  // real s_I
  double decay_rate(double e) const;  // theta = Im s_II > 0
  double tail_ratio(double e) const;  // exp(i s_II), real

 private:
  WallStepPotential potential_;
  Branch branch_;
};

struct DiscreteSpectrum {
  std::vector<double> energies;   // strictly increasing
  std::vector<double> residuals;  // |f(E)| per root
  int grid_points = 0;            // scan resolution used

  std::size_t count() const noexcept { return energies.size(); }
};

constexpr double kDefaultRootTolerance = 1e-10;
constexpr double kWindowInset = 1e-9;

// f(e) = sin(s_I (n0 + 1)) - exp(i s_II) sin(s_I n0).
// Throws PreconditionError("outside-window") unless e is strictly inside
// the window.
double quantization_residual(const QuantizationProblem& p, double e);

// Every root of the residual inside the window: uniform sign-change scan on
// max(200, 50 n0) points with edges inset by kWindowInset, then bisection
// until the bracket is below tol and |f| <= tol (or the bracket cannot shrink).
// Throws PreconditionError("invalid-tolerance") unless tol is in (0, 1e-3].
DiscreteSpectrum discrete_spectrum(const QuantizationProblem& p,
                                   double tol = kDefaultRootTolerance);

// 1 - cos((2k - 1) pi / (2 n0 + 1)), k = 1..n0, ascending: the step heights
// at which the k-th discrete level leaves the band edge.
std::vector<double> count_thresholds(int n0);

// Number of thresholds strictly below u_abs.
// Throws PreconditionError("threshold-collision") within 1e-12 of a threshold.
int count_bound_states(int n0, double u_abs);

// Large-|u| limit of the barrier levels: 1 + u_abs - cos(k pi / (n0 + 1)).
std::vector<double> infinite_barrier_energies(int n0, double u_abs);

// Normalised bound state at a discrete energy: psi(0) = 0, A sin(s_I n) on
// 1..n0, a geometric tail beyond n0. The tail norm is summed in closed form
// and the returned amplitudes stop once |psi| < 1e-15.
// Throws PreconditionError("not-an-eigenvalue") if |f(e)| > tol.
LatticeState bound_state_wavefunction(const QuantizationProblem& p, double e,
                                      double tol = 1e-8);

// sum_{n=1..n0} |psi(n)|^2 of the normalised bound state, i.e. dE/du.
double step_weight(const QuantizationProblem& p, double e, double tol = 1e-8);

}  // namespace latspec

#pragma once

// Kronig-Penney chain of attractive deltas, V(x) = V_r - V0 l sum_j delta(x - j l).
//
// With upsilon = m V0 l^2 / hbar^2 and the signed square x = beta^2
// (beta = kappa l real below V_r, imaginary above), Bloch states with phase
// alpha satisfy
//
//   F(x) = cosh(sqrt x) - upsilon sinh(sqrt x) / sqrt x = cos(alpha),
//
// and E = -V0 x / (2 upsilon) + V_r. Unless stated otherwise energies are
// reported as (E - V_r) / V0.

#include <span>
#include <vector>

namespace latspec {

struct KPModel {
  double upsilon = 1.0;
  double v0 = 1.0;
  double v_r = 0.0;
  double ell = 1.0;  // labels only
};

struct AlphaSample {
  double alpha = 0.0;
  double energy = 0.0;
};

struct BandResult {
  int band_index = 0;
  double e_lo = 0.0;
  double e_hi = 0.0;
  double width = 0.0;
  std::vector<AlphaSample> alpha_samples;
};

struct BandGap {
  double width = 0.0;            // band 0
  double gap_to_threshold = 0.0;  // V_r - top of band 0
  double gap_to_next_band = 0.0;  // bottom of band 1 - top of band 0
  double delta = 0.0;             // upsilon / 2
};

struct PerturbativePoint {
  double beta = 0.0;
  double e_over_v0 = 0.0;
};

constexpr double kMinAsymptoticUpsilon = 5.0;
// exp(upsilon) must stay finite in the tuning schedule
constexpr double kMaxUpsilon = 700.0;

// Continuous through x = 0; a Taylor series is used for |x| < 1e-6.
double bloch_function(double x, double upsilon);
double bloch_function_series(double x, double upsilon);

// Band 0 is the lowest band (real beta for upsilon > 2); band n >= 1 spans
// k = sqrt(-x) in [n pi, k_n] with k_n < (n + 1) pi.
// Throws PreconditionError for upsilon <= 0 or a negative index and
// NumericalError("band-not-found") if a bracket fails.
BandResult solve_band(double upsilon, int band_index);

// Energies (E - V_r) / V0 at the given Bloch phases, alpha in [0, pi].
std::vector<AlphaSample> sample_band(double upsilon, int band_index,
                                     std::span<const double> alphas);

BandGap band_gap(double upsilon);

// Exact real beta on band 0 at Bloch phase alpha (upsilon > 2).
double exact_beta(double upsilon, double alpha);

// First order in exp(-upsilon):
//   beta = upsilon (1 + 2 e^{-upsilon} cos alpha),
//   (E - V_r) / V0 = -(upsilon / 2)(1 + 4 e^{-upsilon} cos alpha).
// Throws PreconditionError below kMinAsymptoticUpsilon.
PerturbativePoint perturbative_band(double upsilon, double alpha);

// V0 = W e^upsilon / (4 upsilon), V_r = W e^upsilon / 8, so the lowest band
// tends to [-W/2, W/2]. Throws PreconditionError("out-of-range") outside
// [kMinAsymptoticUpsilon, kMaxUpsilon] or for W <= 0.
KPModel tune_to_lattice(double width_w, double upsilon);

// Absolute energies of the lowest band of a model (upsilon > 2). Evaluated
// as V0 * (offset from the band centre) + (V_r - V0 upsilon / 2), which keeps
// full precision for tuned models where the two large terms cancel.
std::vector<AlphaSample> effective_dispersion(const KPModel& model,
                                              std::span<const double> alpha_grid);

}  // namespace latspec

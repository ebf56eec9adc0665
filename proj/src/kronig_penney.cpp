#include "latspec/kronig_penney.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "latspec/error.hpp"

namespace latspec {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSeriesRadius = 1e-6;

void require_upsilon(double upsilon) {
  if (!(upsilon > 0.0) || !std::isfinite(upsilon))
    throw PreconditionError("invalid-upsilon", "upsilon must be positive and finite");
}

double sinc(double k) {
  if (std::abs(k) < 1e-4) {
    const double k2 = k * k;
    return 1.0 - k2 / 6.0 + k2 * k2 / 120.0;
  }
  return std::sin(k) / k;
}

// F(-k^2) - c
double imag_residual(double k, double upsilon, double c) {
  return std::cos(k) - upsilon * sinc(k) - c;
}

// Same sign as F(beta^2) - c for beta = upsilon + gamma >= 0. For beta >= 1
// this is 2 e^{-beta} (F - c), written so that 1 - upsilon / beta = gamma / beta
// carries no cancellation and nothing overflows.
double real_residual(double gamma, double upsilon, double c) {
  const double beta = upsilon + gamma;
  if (beta < 1.0) return bloch_function(beta * beta, upsilon) - c;
  return gamma / beta + std::exp(-2.0 * beta) * (1.0 + upsilon / beta) - 2.0 * c * std::exp(-beta);
}

// edge_slack: accept an endpoint whose |f| is below it when the signs agree,
// for samples that sit on a previously bisected band edge
template <class Fn>
double bisect(Fn&& f, double a, double b, const char* what, double edge_slack = 0.0) {
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa < 0.0) == (fb < 0.0)) {
    const double best = std::min(std::abs(fa), std::abs(fb));
    if (best <= edge_slack) return std::abs(fa) <= std::abs(fb) ? a : b;
    throw NumericalError("band-not-found", std::string("no sign change bracketing ") + what);
  }
  for (int it = 0; it < 4000; ++it) {
    const double m = a + 0.5 * (b - a);
    if (m <= a || m >= b) break;
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
      fb = fm;
    }
  }
  return std::abs(fa) <= std::abs(fb) ? a : b;
}

// Real-beta points are stored as gamma = beta - upsilon, imaginary ones as k.
struct BandPoint {
  bool real = true;
  double value = 0.0;

  // (E - V_r) / V0 + upsilon / 2
  double offset(double upsilon) const {
    if (real) return -value - value * value / (2.0 * upsilon);
    return value * value / (2.0 * upsilon) + 0.5 * upsilon;
  }
  double energy(double upsilon) const {
    if (real) return -0.5 * upsilon + offset(upsilon);
    return value * value / (2.0 * upsilon);
  }
};

struct Band0 {
  BandPoint bottom;  // alpha = 0, F = +1
  BandPoint top;     // alpha = pi, F = -1
};

Band0 lowest_band(double upsilon) {
  const double gamma_floor = -upsilon;  // beta = 0

  double hi = 2.0;
  while (real_residual(hi, upsilon, 1.0) <= 0.0) {
    hi *= 2.0;
    if (hi > 1e6) throw NumericalError("band-not-found", "no upper bracket for the band-0 bottom");
  }
  Band0 band;
  band.bottom = {true, bisect([&](double g) { return real_residual(g, upsilon, 1.0); },
                              gamma_floor, hi, "the band-0 bottom")};

  if (upsilon >= 2.0) {
    band.top = {true, bisect([&](double g) { return real_residual(g, upsilon, -1.0); },
                             gamma_floor, band.bottom.value, "the band-0 top")};
    return band;
  }
  // F(0) = 1 - upsilon > -1: the band crosses into imaginary beta and ends
  // just below k = pi.
  double eps = std::min(0.5, upsilon / kPi);
  while (imag_residual(kPi - eps, upsilon, -1.0) >= 0.0) {
    eps *= 0.5;
    if (eps < 1e-15) throw NumericalError("band-not-found", "band-0 top too close to k = pi");
  }
  band.top = {false, bisect([&](double k) { return imag_residual(k, upsilon, -1.0); }, 0.0,
                            kPi - eps, "the band-0 top")};
  return band;
}

// Band n >= 1 in k: lower edge n pi exactly, upper edge where F = (-1)^{n+1}.
double upper_k_edge(double upsilon, int n) {
  const double target = n % 2 == 0 ? -1.0 : 1.0;
  const double k_lo = n * kPi;
  const double k_next = (n + 1) * kPi;
  double eps = std::min(0.5, upsilon / k_next);
  auto f = [&](double k) { return imag_residual(k, upsilon, target); };
  const bool lo_negative = f(k_lo) < 0.0;
  while ((f(k_next - eps) < 0.0) == lo_negative) {
    eps *= 0.5;
    if (eps < 1e-15 * k_next)
      throw NumericalError("band-not-found", "band " + std::to_string(n) + " upper edge not bracketed");
  }
  return bisect(f, k_lo, k_next - eps, "a band upper edge");
}

void require_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= kPi))
    throw PreconditionError("invalid-alpha", "Bloch phase alpha must lie in [0, pi]");
}

double sample_slack(double upsilon) { return 1e-12 * (1.0 + upsilon); }

BandPoint band0_point(double upsilon, const Band0& band, double alpha) {
  require_alpha(alpha);
  const double c = std::cos(alpha);
  const double slack = sample_slack(upsilon);
  if (band.top.real)
    return {true, bisect([&](double g) { return real_residual(g, upsilon, c); }, band.top.value,
                         band.bottom.value, "a band-0 sample", slack)};
  if (c >= 1.0 - upsilon)
    return {true, bisect([&](double g) { return real_residual(g, upsilon, c); }, -upsilon,
                         band.bottom.value, "a band-0 sample", slack)};
  return {false, bisect([&](double k) { return imag_residual(k, upsilon, c); }, 0.0,
                        band.top.value, "a band-0 sample", slack)};
}

}  // namespace

double bloch_function_series(double x, double upsilon) {
  // cosh(sqrt x) = sum x^n / (2n)!, sinh(sqrt x)/sqrt x = sum x^n / (2n + 1)!
  double even = 0.0;
  double odd = 0.0;
  double power = 1.0;
  double fact_even = 1.0;  // (2n)!
  for (int n = 0; n < 10; ++n) {
    if (n > 0) {
      power *= x;
      fact_even *= (2.0 * n - 1.0) * (2.0 * n);
    }
    even += power / fact_even;
    odd += power / (fact_even * (2.0 * n + 1.0));
  }
  return even - upsilon * odd;
}

double bloch_function(double x, double upsilon) {
  require_upsilon(upsilon);
  if (std::abs(x) < kSeriesRadius) return bloch_function_series(x, upsilon);
  if (x > 0.0) {
    const double beta = std::sqrt(x);
    return std::cosh(beta) - upsilon * std::sinh(beta) / beta;
  }
  const double k = std::sqrt(-x);
  return std::cos(k) - upsilon * std::sin(k) / k;
}

BandResult solve_band(double upsilon, int band_index) {
  require_upsilon(upsilon);
  if (band_index < 0)
    throw PreconditionError("invalid-band-index", "band index must be nonnegative");
  BandResult out;
  out.band_index = band_index;
  if (band_index == 0) {
    const Band0 band = lowest_band(upsilon);
    out.e_lo = band.bottom.energy(upsilon);
    out.e_hi = band.top.energy(upsilon);
    out.width = band.top.offset(upsilon) - band.bottom.offset(upsilon);
    if (band.top.real) {
      const double gb = band.bottom.value;
      const double gt = band.top.value;
      out.width = (gb - gt) * (1.0 + (gb + gt) / (2.0 * upsilon));
    }
    return out;
  }
  const double k_lo = band_index * kPi;
  const double k_hi = upper_k_edge(upsilon, band_index);
  out.e_lo = k_lo * k_lo / (2.0 * upsilon);
  out.e_hi = k_hi * k_hi / (2.0 * upsilon);
  out.width = (k_hi - k_lo) * (k_hi + k_lo) / (2.0 * upsilon);
  return out;
}

std::vector<AlphaSample> sample_band(double upsilon, int band_index,
                                     std::span<const double> alphas) {
  require_upsilon(upsilon);
  if (band_index < 0)
    throw PreconditionError("invalid-band-index", "band index must be nonnegative");
  std::vector<AlphaSample> out;
  out.reserve(alphas.size());
  if (band_index == 0) {
    const Band0 band = lowest_band(upsilon);
    for (double a : alphas) out.push_back({a, band0_point(upsilon, band, a).energy(upsilon)});
    return out;
  }
  const double k_lo = band_index * kPi;
  const double k_hi = upper_k_edge(upsilon, band_index);
  for (double a : alphas) {
    require_alpha(a);
    const double c = std::cos(a);
    const double k = bisect([&](double kk) { return imag_residual(kk, upsilon, c); }, k_lo, k_hi,
                            "a band sample", sample_slack(upsilon));
    out.push_back({a, k * k / (2.0 * upsilon)});
  }
  return out;
}

BandGap band_gap(double upsilon) {
  require_upsilon(upsilon);
  const Band0 band = lowest_band(upsilon);
  const BandResult b0 = solve_band(upsilon, 0);
  const BandResult b1 = solve_band(upsilon, 1);
  BandGap g;
  g.width = b0.width;
  g.delta = 0.5 * upsilon;
  g.gap_to_threshold = 0.5 * upsilon - band.top.offset(upsilon);
  g.gap_to_next_band = b1.e_lo + g.gap_to_threshold;
  return g;
}

double exact_beta(double upsilon, double alpha) {
  require_upsilon(upsilon);
  if (!(upsilon > 2.0))
    throw PreconditionError("invalid-upsilon", "band 0 is entirely real only for upsilon > 2");
  const Band0 band = lowest_band(upsilon);
  return upsilon + band0_point(upsilon, band, alpha).value;
}

PerturbativePoint perturbative_band(double upsilon, double alpha) {
  if (!(upsilon >= kMinAsymptoticUpsilon) || !std::isfinite(upsilon))
    throw PreconditionError("out-of-range", "perturbative band needs upsilon >= 5");
  const double small = std::exp(-upsilon) * std::cos(alpha);
  return {upsilon * (1.0 + 2.0 * small), -0.5 * upsilon * (1.0 + 4.0 * small)};
}

KPModel tune_to_lattice(double width_w, double upsilon) {
  if (!(width_w > 0.0) || !std::isfinite(width_w))
    throw PreconditionError("invalid-width", "band width W must be positive and finite");
  if (!(upsilon >= kMinAsymptoticUpsilon && upsilon <= kMaxUpsilon))
    throw PreconditionError("out-of-range",
                            "upsilon must lie in [5, 700] for the tuning schedule");
  const double scale = width_w * std::exp(upsilon);
  if (!std::isfinite(scale))
    throw PreconditionError("out-of-range", "W exp(upsilon) overflows");
  return {upsilon, scale / (4.0 * upsilon), scale / 8.0, 1.0};
}

std::vector<AlphaSample> effective_dispersion(const KPModel& model,
                                              std::span<const double> alpha_grid) {
  const double u = model.upsilon;
  require_upsilon(u);
  if (!(u > 2.0))
    throw PreconditionError("invalid-upsilon", "effective dispersion needs a real lowest band");
  const Band0 band = lowest_band(u);
  const double centre = model.v_r - model.v0 * 0.5 * u;
  std::vector<AlphaSample> out;
  out.reserve(alpha_grid.size());
  for (double a : alpha_grid)
    out.push_back({a, model.v0 * band0_point(u, band, a).offset(u) + centre});
  return out;
}

}  // namespace latspec

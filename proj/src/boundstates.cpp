#include "latspec/boundstates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "latspec/error.hpp"

namespace latspec {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTailCutoff = 1e-15;
constexpr std::size_t kMaxTailSites = 10'000'000;

double clamp_unit(double c) { return std::clamp(c, -1.0, 1.0); }

struct Bracket {
  double a;
  double fa;
  double b;
  double fb;
};

// Bisection on a sign-changing bracket. Stops once the bracket is below
// tol * max(1, |x|) and the better endpoint has |f| <= tol, or once the
// bracket cannot shrink in floating point.
double bisect(const QuantizationProblem& p, Bracket br, double tol) {
  for (int it = 0; it < 400; ++it) {
    const double mid = br.a + 0.5 * (br.b - br.a);
    if (mid <= br.a || mid >= br.b) break;
    const double fm = quantization_residual(p, mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (br.fa < 0.0)) {
      br.a = mid;
      br.fa = fm;
    } else {
      br.b = mid;
      br.fb = fm;
    }
    const double scale = std::max(1.0, std::abs(mid));
    const double best = std::min(std::abs(br.fa), std::abs(br.fb));
    if (br.b - br.a <= tol * scale && best <= tol) break;
  }
  return std::abs(br.fa) <= std::abs(br.fb) ? br.a : br.b;
}

}  // namespace

QuantizationProblem::QuantizationProblem(WallStepPotential potential)
    : potential_(potential), branch_(potential.u < 0.0 ? Branch::well : Branch::barrier) {
  if (potential_.n0 < 1)
    throw PreconditionError("invalid-n0", "n0 must be a positive integer, got " +
                                              std::to_string(potential_.n0));
  if (!std::isfinite(potential_.u))
    throw PreconditionError("invalid-u", "step height u must be finite");
  if (potential_.u == 0.0)
    throw PreconditionError("invalid-u", "step height u must be nonzero (no discrete window)");
}

double QuantizationProblem::u_abs() const noexcept { return std::abs(potential_.u); }

EnergyBand QuantizationProblem::window() const noexcept {
  const double u = u_abs();
  if (branch_ == Branch::well) return {-u, std::min(0.0, 2.0 - u), BandKind::discrete_window};
  return {std::max(2.0, u), 2.0 + u, BandKind::discrete_window};
}

double QuantizationProblem::s_inside(double e) const {
  const double kinetic = branch_ == Branch::well ? e + u_abs() : e - u_abs();
  return std::acos(clamp_unit(1.0 - kinetic));
}

double QuantizationProblem::decay_rate(double e) const {
  return branch_ == Branch::well ? std::acosh(std::max(1.0, 1.0 - e))
                                 : std::acosh(std::max(1.0, e - 1.0));
}

double QuantizationProblem::tail_ratio(double e) const {
  const double r = std::exp(-decay_rate(e));
  return branch_ == Branch::well ? r : -r;
}

double quantization_residual(const QuantizationProblem& p, double e) {
  const EnergyBand w = p.window();
  if (!w.contains_strictly(e))
    throw PreconditionError("outside-window",
                            "energy " + std::to_string(e) + " is outside the discrete window (" +
                                std::to_string(w.lo) + ", " + std::to_string(w.hi) + ")");
  const int n0 = p.potential().n0;
  const double s = p.s_inside(e);
  return std::sin(s * (n0 + 1)) - p.tail_ratio(e) * std::sin(s * n0);
}

DiscreteSpectrum discrete_spectrum(const QuantizationProblem& p, double tol) {
  if (!(tol > 0.0 && tol <= 1e-3))
    throw PreconditionError("invalid-tolerance", "tolerance must lie in (0, 1e-3]");

  DiscreteSpectrum out;
  out.grid_points = std::max(200, 50 * p.potential().n0);
  const EnergyBand w = p.window();
  const double lo = w.lo + kWindowInset;
  const double hi = w.hi - kWindowInset;
  if (!(lo < hi)) return out;

  const int n = out.grid_points;
  std::vector<double> xs(n);
  std::vector<double> fs(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = i == n - 1 ? hi : lo + (hi - lo) * i / (n - 1);
    fs[i] = quantization_residual(p, xs[i]);
  }

  for (int i = 0; i < n; ++i) {
    if (fs[i] == 0.0) {
      out.energies.push_back(xs[i]);
      continue;
    }
    if (i + 1 < n && fs[i + 1] != 0.0 && (fs[i] < 0.0) != (fs[i + 1] < 0.0))
      out.energies.push_back(bisect(p, {xs[i], fs[i], xs[i + 1], fs[i + 1]}, tol));
  }

  out.energies.erase(std::unique(out.energies.begin(), out.energies.end()), out.energies.end());
  out.residuals.reserve(out.energies.size());
  for (double e : out.energies) out.residuals.push_back(std::abs(quantization_residual(p, e)));
  return out;
}

std::vector<double> count_thresholds(int n0) {
  if (n0 < 1)
    throw PreconditionError("invalid-n0",
                            "n0 must be a positive integer, got " + std::to_string(n0));
  std::vector<double> t(static_cast<std::size_t>(n0));
  for (int k = 1; k <= n0; ++k) t[k - 1] = 1.0 - std::cos((2 * k - 1) * kPi / (2 * n0 + 1));
  return t;
}

int count_bound_states(int n0, double u_abs) {
  if (!(u_abs > 0.0) || !std::isfinite(u_abs))
    throw PreconditionError("invalid-u", "|u| must be positive and finite");
  int count = 0;
  for (double t : count_thresholds(n0)) {
    if (std::abs(u_abs - t) <= 1e-12)
      throw PreconditionError("threshold-collision",
                              "|u| = " + std::to_string(u_abs) +
                                  " coincides with a bound-state threshold");
    if (t < u_abs) ++count;
  }
  return count;
}

std::vector<double> infinite_barrier_energies(int n0, double u_abs) {
  if (n0 < 1)
    throw PreconditionError("invalid-n0",
                            "n0 must be a positive integer, got " + std::to_string(n0));
  std::vector<double> e(static_cast<std::size_t>(n0));
  for (int k = 1; k <= n0; ++k) e[k - 1] = 1.0 + u_abs - std::cos(k * kPi / (n0 + 1));
  return e;
}

namespace {

struct Profile {
  double s;
  double ratio;
  double edge;          // sin(s n0), amplitude at the last step site before scaling
  double inside_norm2;  // sum_{1..n0} sin^2(s n)
  double tail_norm2;    // sum_{m>=1} (edge r^m)^2
};

Profile profile(const QuantizationProblem& p, double e, double tol) {
  const double f = quantization_residual(p, e);
  if (std::abs(f) > tol)
    throw PreconditionError("not-an-eigenvalue",
                            "energy " + std::to_string(e) + " has quantization residual " +
                                std::to_string(std::abs(f)) + " above tolerance");
  Profile pr{};
  const int n0 = p.potential().n0;
  pr.s = p.s_inside(e);
  pr.ratio = p.tail_ratio(e);
  pr.edge = std::sin(pr.s * n0);
  for (int n = 1; n <= n0; ++n) pr.inside_norm2 += std::pow(std::sin(pr.s * n), 2);
  const double r2 = pr.ratio * pr.ratio;
  pr.tail_norm2 = pr.edge * pr.edge * r2 / (1.0 - r2);
  return pr;
}

}  // namespace

LatticeState bound_state_wavefunction(const QuantizationProblem& p, double e, double tol) {
  const Profile pr = profile(p, e, tol);
  const int n0 = p.potential().n0;
  const double a = 1.0 / std::sqrt(pr.inside_norm2 + pr.tail_norm2);

  LatticeState psi;
  psi.first = 0;
  psi.amplitudes.reserve(static_cast<std::size_t>(2 * n0 + 2));
  psi.amplitudes.emplace_back(0.0);
  for (int n = 1; n <= n0; ++n) psi.amplitudes.emplace_back(a * std::sin(pr.s * n));

  double tail = a * pr.edge * pr.ratio;
  for (std::size_t m = 0; std::abs(tail) >= kTailCutoff; ++m) {
    if (m >= kMaxTailSites)
      throw NumericalError("tail-too-long", "bound-state tail exceeds the site budget");
    psi.amplitudes.emplace_back(tail);
    tail *= pr.ratio;
  }
  return psi;
}

double step_weight(const QuantizationProblem& p, double e, double tol) {
  const Profile pr = profile(p, e, tol);
  return pr.inside_norm2 / (pr.inside_norm2 + pr.tail_norm2);
}

}  // namespace latspec

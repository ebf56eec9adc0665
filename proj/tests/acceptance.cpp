// One PASS/FAIL line per acceptance criterion; nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "latspec/boundstates.hpp"
#include "latspec/cli.hpp"
#include "latspec/duality.hpp"
#include "latspec/kronig_penney.hpp"
#include "latspec/oracle.hpp"

using namespace latspec;
using std::numbers::pi;

namespace {

struct Verdict {
  bool ok = false;
  std::string detail;
};

const std::vector<double> kSmall{2.33248, 2.76619, 3.14779, 3.40786};
const std::vector<double> kLarge{2.60654, 2.89816, 3.30698, 3.74878, 4.13895, 4.40548};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::vector<double> bound_command(int n0, double u) {
  RunConfig c;
  c.command = "bound";
  c.parameters = {{"n0", n0}, {"u", u}, {"tol", 1e-10}};
  const Report r = execute(c);
  std::vector<double> e;
  for (const auto& row : r.results.rows) e.push_back(std::get<double>(row[1]));
  return e;
}

Verdict match_list(const std::vector<double>& got, const std::vector<double>& want, double tol) {
  if (got.size() != want.size())
    return {false, "count " + std::to_string(got.size()) + " != " + std::to_string(want.size())};
  double worst = 0.0;
  for (std::size_t k = 0; k < got.size(); ++k) worst = std::max(worst, std::abs(got[k] - want[k]));
  return {worst <= tol, "count " + std::to_string(got.size()) + ", max |dE| " + fmt("%.2e", worst)};
}

std::vector<double> discrete(int n0, double u) {
  return discrete_spectrum(QuantizationProblem(WallStepPotential(n0, u))).energies;
}

Verdict small_barrier() { return match_list(bound_command(6, 1.5), kSmall, 1e-4); }

Verdict large_barrier() { return match_list(bound_command(6, 2.5), kLarge, 1e-4); }

Verdict very_large_barrier() {
  const auto e = discrete(6, 100.0);
  std::vector<double> offsets, want;
  for (double x : e) offsets.push_back(x - 101.0);
  for (int k = 1; k <= 6; ++k) want.push_back(-std::cos(k * pi / 7.0));
  return match_list(offsets, want, 1e-3);
}

Verdict staircase() {
  const auto t = count_thresholds(6);
  std::vector<double> us;
  for (double u = 0.001; u <= 2.5; u += 0.001) {
    bool close = false;
    for (double x : t) close = close || std::abs(u - x) < 1e-4;
    if (!close) us.push_back(u);
  }
  for (double x : t) {
    us.push_back(x - 1e-4);
    us.push_back(x + 1e-4);
  }
  std::sort(us.begin(), us.end());
  std::size_t prev = 0;
  int jumps = 0;
  for (double u : us) {
    const std::size_t n = discrete(6, u).size();
    if (n < prev || n > prev + 1) return {false, "count jumps from " + std::to_string(prev) + " to " + std::to_string(n) + " at u=" + fmt("%.6f", u)};
    if (n != static_cast<std::size_t>(count_bound_states(6, u)))
      return {false, "count disagrees with thresholds at u=" + fmt("%.6f", u)};
    if (n == prev + 1) ++jumps;
    prev = n;
  }
  return {jumps == 6 && prev == 6,
          std::to_string(us.size()) + " heights, " + std::to_string(jumps) + " unit steps, first threshold " + fmt("%.5f", t[0])};
}

Verdict duality_suite() {
  std::mt19937_64 rng(2718);
  std::uniform_real_distribution<double> pot(-5.0, 5.0);
  const Dispersion d;
  const double c = duality_shift(d);
  double worst_matrix = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v(256);
    for (auto& x : v) x = pot(rng);
    const SitePotential sp(1, v);
    const auto h = build_hamiltonian(d, sp);
    const auto hd = build_hamiltonian(d, dual_potential(sp));
    for (std::size_t i = 0; i < 256; ++i)
      for (std::size_t j = 0; j < 256; ++j) {
        const double s = (i + j) % 2 == 0 ? 1.0 : -1.0;
        worst_matrix = std::max(worst_matrix, std::abs(hd.entry(i, j) - (-s * h.entry(i, j) + (i == j ? c : 0.0))));
      }
  }
  std::uniform_int_distribution<int> n0s(1, 20);
  std::uniform_real_distribution<double> us(0.0, 10.0);
  double worst_mirror = 0.0;
  bool counts = true;
  for (int trial = 0; trial < 50; ++trial) {
    const int n0 = n0s(rng);
    const double u = us(rng);
    const auto barrier = discrete(n0, u);
    const auto well = discrete(n0, -u);
    if (barrier.size() != well.size()) {
      counts = false;
      continue;
    }
    for (std::size_t k = 0; k < well.size(); ++k)
      worst_mirror = std::max(worst_mirror, std::abs(well[k] - dual_energy(d, barrier[barrier.size() - 1 - k])));
  }
  return {counts && worst_matrix <= 1e-14 && worst_mirror <= 1e-9,
          "matrix defect " + fmt("%.1e", worst_matrix) + ", mirror defect " + fmt("%.1e", worst_mirror)};
}

Verdict oracle_equivalence() {
  const Dispersion d;
  double worst = 0.0;
  std::string counts;
  bool ok = true;
  for (double u : {1.5, 2.5}) {
    const auto analytic = discrete(6, u);
    const auto eps = diagonalize(build_hamiltonian(d, SitePotential::embed(WallStepPotential(6, u), 2000)));
    const auto cls = classify_bound(eps, kinetic_band(d));
    counts += (counts.empty() ? "" : "/") + std::to_string(cls.bound.size());
    if (cls.bound.size() != analytic.size()) {
      ok = false;
      continue;
    }
    for (std::size_t k = 0; k < analytic.size(); ++k)
      worst = std::max(worst, std::abs(eps.eigenvalues[cls.bound[k]] - analytic[k]));
  }
  return {ok && worst <= 1e-6, "bound counts " + counts + ", max |dE| " + fmt("%.1e", worst)};
}

Verdict positivity() {
  std::mt19937_64 rng(314);
  std::uniform_real_distribution<double> pot(-3.0, 3.0);
  const Dispersion d;
  double worst = 1e300;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v(64);
    for (auto& x : v) x = pot(rng);
    const SitePotential sp(1, v);
    const auto eps = diagonalize(build_hamiltonian(d, sp));
    for (double x : positivity_check(eps, sp, d)) worst = std::min(worst, x);
  }
  return {worst >= -1e-9, "min value " + fmt("%.3e", worst)};
}

Verdict hellmann_feynman() {
  const double u = 2.5, du = 1e-5;
  const QuantizationProblem p(WallStepPotential(6, u));
  const auto mid = discrete_spectrum(p).energies;
  const auto up = discrete(6, u + du);
  const auto down = discrete(6, u - du);
  if (mid.size() != 6 || up.size() != 6 || down.size() != 6) return {false, "level count changed"};
  double worst = 0.0;
  bool inside = true;
  for (std::size_t k = 0; k < 6; ++k) {
    const double slope = (up[k] - down[k]) / (2 * du);
    worst = std::max(worst, std::abs(slope - step_weight(p, mid[k])));
    inside = inside && slope > 0.0 && slope < 1.0;
  }
  return {inside && worst <= 1e-4, "max |slope - weight| " + fmt("%.1e", worst)};
}

Verdict kronig_penney_band() {
  const BandGap g = band_gap(15.0);
  const double w_rel = std::abs(g.width / (4 * 15.0 * std::exp(-15.0)) - 1.0);
  const double gap_rel = std::abs(g.gap_to_threshold / g.delta - 1.0);
  bool monotone = true;
  double last = 1e300;
  for (double u : {5.0, 8.0, 10.0, 12.0, 15.0}) {
    const BandGap b = band_gap(u);
    const double ratio = b.width / b.gap_to_threshold;
    monotone = monotone && ratio < last && b.width / b.gap_to_next_band < ratio;
    last = ratio;
  }
  return {w_rel <= 1e-3 && gap_rel <= 1e-2 && monotone && g.gap_to_next_band >= g.delta,
          "width rel " + fmt("%.1e", w_rel) + ", gap rel " + fmt("%.1e", gap_rel) +
              ", gap to band 1 / delta " + fmt("%.4f", g.gap_to_next_band / g.delta) +
              (monotone ? ", W/gap decreasing" : ", W/gap not decreasing")};
}

Verdict lattice_emergence() {
  const double w = 1.0;
  const KPModel m = tune_to_lattice(w, 15.0);
  std::vector<double> alphas(101);
  for (int i = 0; i < 101; ++i) alphas[i] = pi * i / 100.0;
  alphas.back() = pi;
  const Dispersion lattice({{1, 0.5}}, w / 2);
  double cos_dev = 0.0, kin_dev = 0.0;
  for (const auto& s : effective_dispersion(m, alphas)) {
    cos_dev = std::max(cos_dev, std::abs(s.energy + 0.5 * w * std::cos(s.alpha)));
    kin_dev = std::max(kin_dev, std::abs(s.energy + 0.5 * w - lattice.k0() * kinetic_eigenvalue(lattice, s.alpha)));
  }
  return {cos_dev <= 2e-3 * w && kin_dev <= 2e-3 * w,
          "101 samples, max deviation " + fmt("%.1e", cos_dev) + " (cosine), " + fmt("%.1e", kin_dev) + " (kinetic)"};
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  std::function<Verdict()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "small barrier n0=6 u=1.5", 1.0, small_barrier},
      {2, "large barrier n0=6 u=2.5", 1.0, large_barrier},
      {3, "very large barrier u=100", 1.0, very_large_barrier},
      {4, "count staircase n0=6", 10.0, staircase},
      {5, "duality suite", 30.0, duality_suite},
      {6, "oracle equivalence N=2000", 60.0, oracle_equivalence},
      {7, "positivity N=64", 30.0, positivity},
      {8, "Hellmann-Feynman slopes", 10.0, hellmann_feynman},
      {9, "Kronig-Penney width and gap", 5.0, kronig_penney_band},
      {10, "lattice emergence W=1 upsilon=15", 5.0, lattice_emergence},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = v.ok && secs < c.limit_s;
    if (!ok) ++failures;
    std::printf("%s AC%d %s: %s [%.3f s, limit %.0f s]\n", ok ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str(), secs,
                c.limit_s);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}

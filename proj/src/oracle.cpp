#include "latspec/oracle.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "latspec/error.hpp"

namespace latspec {

TruncatedHamiltonian::TruncatedHamiltonian(int first, std::vector<double> diagonal,
                                           std::vector<std::vector<double>> band)
    : first_(first), diagonal_(std::move(diagonal)), band_(std::move(band)) {
  for (std::size_t m = 1; m <= band_.size(); ++m) {
    const std::size_t expected = diagonal_.size() > m ? diagonal_.size() - m : 0;
    if (band_[m - 1].size() != expected)
      throw PreconditionError("malformed-hamiltonian",
                              "band " + std::to_string(m) + " has the wrong length");
  }
}

std::span<const double> TruncatedHamiltonian::offdiagonal(int m) const {
  if (m < 1 || m > bandwidth()) return {};
  return band_[static_cast<std::size_t>(m - 1)];
}

double TruncatedHamiltonian::entry(std::size_t i, std::size_t j) const {
  if (i == j) return diagonal_[i];
  const std::size_t lo = std::min(i, j);
  const auto m = static_cast<int>(std::max(i, j) - lo);
  const auto b = offdiagonal(m);
  return b.empty() ? 0.0 : b[lo];
}

std::vector<double> TruncatedHamiltonian::dense() const {
  const std::size_t n = size();
  std::vector<double> out(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) out[i * n + i] = diagonal_[i];
  for (std::size_t m = 1; m <= band_.size(); ++m)
    for (std::size_t i = 0; i + m < n; ++i) {
      out[i * n + i + m] = band_[m - 1][i];
      out[(i + m) * n + i] = band_[m - 1][i];
    }
  return out;
}

std::vector<double> TruncatedHamiltonian::apply(std::span<const double> x) const {
  const std::size_t n = size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = diagonal_[i] * x[i];
  for (std::size_t m = 1; m <= band_.size(); ++m)
    for (std::size_t i = 0; i + m < n; ++i) {
      y[i] += band_[m - 1][i] * x[i + m];
      y[i + m] += band_[m - 1][i] * x[i];
    }
  return y;
}

double TruncatedHamiltonian::norm_bound() const {
  const std::size_t n = size();
  std::vector<double> rows(n);
  for (std::size_t i = 0; i < n; ++i) rows[i] = std::abs(diagonal_[i]);
  for (std::size_t m = 1; m <= band_.size(); ++m)
    for (std::size_t i = 0; i + m < n; ++i) {
      rows[i] += std::abs(band_[m - 1][i]);
      rows[i + m] += std::abs(band_[m - 1][i]);
    }
  return n == 0 ? 0.0 : *std::max_element(rows.begin(), rows.end());
}

TruncatedHamiltonian build_hamiltonian(const Dispersion& d, const SitePotential& v) {
  const std::size_t n = v.size();
  if (n < 3)
    throw PreconditionError("window-too-small",
                            "window needs at least 3 sites, got " + std::to_string(n));
  std::vector<double> diagonal(n);
  for (std::size_t i = 0; i < n; ++i) diagonal[i] = v.values[i] + d.onsite();

  std::vector<std::vector<double>> band(static_cast<std::size_t>(d.max_range()));
  for (std::size_t m = 1; m <= band.size(); ++m)
    band[m - 1].assign(n > m ? n - m : 0, 0.0);
  for (const auto& h : d.hoppings()) {
    auto& b = band[static_cast<std::size_t>(h.range - 1)];
    for (auto& x : b) x -= h.amplitude;
  }
  return {v.first, std::move(diagonal), std::move(band)};
}

LatticeState EigenpairSet::state(std::size_t k) const {
  LatticeState s;
  s.first = first;
  const auto v = eigenvector(k);
  s.amplitudes.assign(v.begin(), v.end());
  return s;
}

namespace {

void fix_sign(std::span<double> v) {
  std::size_t arg = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
  if (v[arg] < 0.0)
    for (auto& x : v) x = -x;
}

std::string convergence_message(lapack_int info) {
  return "eigensolver failed to converge (LAPACK info " + std::to_string(info) +
         ", offending index " + std::to_string(info - 1) + ")";
}

}  // namespace

EigenpairSet diagonalize(const TruncatedHamiltonian& h) {
  const std::size_t n = h.size();
  if (n > kMaxDiagonalizeSites)
    throw PreconditionError("window-too-large",
                            "dense diagonalisation supports at most " +
                                std::to_string(kMaxDiagonalizeSites) + " sites");
  EigenpairSet out;
  out.first = h.first();
  out.n = n;
  out.eigenvalues.resize(n);
  out.vectors.assign(n * n, 0.0);
  const auto ln = static_cast<lapack_int>(n);

  if (h.bandwidth() <= 1) {
    std::vector<double> d = h.diagonal();
    std::vector<double> e(std::max<std::size_t>(n, 1), 0.0);
    const auto off = h.offdiagonal(1);
    std::copy(off.begin(), off.end(), e.begin());
    std::vector<lapack_int> support(2 * n);
    lapack_int found = 0;
    const lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'A', ln, d.data(), e.data(),
                                           0.0, 0.0, 0, 0, 0.0, &found, out.eigenvalues.data(),
                                           out.vectors.data(), ln, support.data());
    if (info != 0 || found != ln) throw NumericalError("no-convergence", convergence_message(info));
  } else {
    const lapack_int kd = h.bandwidth();
    const lapack_int ldab = kd + 1;
    std::vector<double> ab(static_cast<std::size_t>(ldab) * n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      ab[static_cast<std::size_t>(kd) + j * ldab] = h.diagonal()[j];
      for (lapack_int m = 1; m <= kd && static_cast<std::size_t>(m) <= j; ++m)
        ab[static_cast<std::size_t>(kd - m) + j * ldab] = h.offdiagonal(m)[j - m];
    }
    const lapack_int info = LAPACKE_dsbevd(LAPACK_COL_MAJOR, 'V', 'U', ln, kd, ab.data(), ldab,
                                           out.eigenvalues.data(), out.vectors.data(), ln);
    if (info != 0) throw NumericalError("no-convergence", convergence_message(info));
  }

  out.ipr.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::span<double> v(out.vectors.data() + k * n, n);
    fix_sign(v);
    double p4 = 0.0;
    for (double x : v) p4 += x * x * x * x;
    out.ipr[k] = p4;
  }
  return out;
}

BoundClassification classify_bound(const EigenpairSet& eps, const EnergyBand& band,
                                   double ipr_threshold) {
  if (!(ipr_threshold > 0.0))
    ipr_threshold = eps.n == 0 ? 0.0 : 10.0 / static_cast<double>(eps.n);
  BoundClassification out;
  for (std::size_t k = 0; k < eps.eigenvalues.size(); ++k) {
    const double e = eps.eigenvalues[k];
    const bool outside = e < band.lo - kBandMargin || e > band.hi + kBandMargin;
    (outside && eps.ipr[k] >= ipr_threshold ? out.bound : out.band_like).push_back(k);
  }
  return out;
}

std::vector<double> positivity_check(const EigenpairSet& eps, const SitePotential& v,
                                     const Dispersion& d) {
  if (v.first != eps.first || v.size() != eps.n)
    throw PreconditionError("window-mismatch",
                            "potential window does not match the diagonalised window");
  std::vector<double> out(eps.eigenvalues.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double e = eps.eigenvalues[k];
    const auto psi = eps.eigenvector(k);
    double acc = 0.0;
    for (std::size_t i = 0; i < eps.n; ++i) {
      const double kinetic = e - v.values[i];
      acc += (kinetic - d.k_min()) * (d.k_max() - kinetic) * psi[i] * psi[i];
    }
    out[k] = acc;
  }
  return out;
}

double max_residual(const TruncatedHamiltonian& h, const EigenpairSet& eps) {
  double worst = 0.0;
  for (std::size_t k = 0; k < eps.eigenvalues.size(); ++k) {
    const auto psi = eps.eigenvector(k);
    const auto hpsi = h.apply(psi);
    double acc = 0.0;
    for (std::size_t i = 0; i < eps.n; ++i) {
      const double r = hpsi[i] - eps.eigenvalues[k] * psi[i];
      acc += r * r;
    }
    worst = std::max(worst, std::sqrt(acc));
  }
  return worst;
}

}  // namespace latspec

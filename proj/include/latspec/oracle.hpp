#pragma once

// Independent numerical check: the lattice Hamiltonian K + U truncated to a
// finite window with Dirichlet edges, diagonalised exactly.

#include <cstddef>
#include <span>
#include <vector>

#include "latspec/core.hpp"

namespace latspec {

// Real symmetric banded matrix. diagonal[i] = U(first + i) + sum_m 2 t_m and
// band[m - 1][i] = -t_m couples sites i and i + m.
class TruncatedHamiltonian {
 public:
  TruncatedHamiltonian(int first, std::vector<double> diagonal,
                       std::vector<std::vector<double>> band);

  int first() const noexcept { return first_; }
  std::size_t size() const noexcept { return diagonal_.size(); }
  int bandwidth() const noexcept { return static_cast<int>(band_.size()); }

  const std::vector<double>& diagonal() const noexcept { return diagonal_; }
  // Couplings at distance m >= 1; empty span beyond the bandwidth.
  std::span<const double> offdiagonal(int m) const;

  double entry(std::size_t i, std::size_t j) const;
  // Row-major dense copy.
  std::vector<double> dense() const;
  // y = H x
  std::vector<double> apply(std::span<const double> x) const;
  // max absolute row sum, an upper bound on the spectral norm
  double norm_bound() const;

 private:
  int first_;
  std::vector<double> diagonal_;
  std::vector<std::vector<double>> band_;
};

// Throws PreconditionError("window-too-small") for fewer than 3 sites.
TruncatedHamiltonian build_hamiltonian(const Dispersion& d, const SitePotential& v);

constexpr std::size_t kMaxDiagonalizeSites = 8192;

// Full ascending spectrum. Column k of the eigenvector matrix is the state of
// eigenvalue k; its largest-magnitude component is positive.
struct EigenpairSet {
  int first = 0;
  std::size_t n = 0;
  std::vector<double> eigenvalues;
  std::vector<double> vectors;  // column-major n x n
  std::vector<double> ipr;

  std::span<const double> eigenvector(std::size_t k) const {
    return {vectors.data() + k * n, n};
  }
  LatticeState state(std::size_t k) const;
};

// LAPACK dstevr (tridiagonal) or dsbevd (wider bands).
// Throws PreconditionError("window-too-large") above kMaxDiagonalizeSites and
// NumericalError("no-convergence") naming the failing index otherwise.
EigenpairSet diagonalize(const TruncatedHamiltonian& h);

struct BoundClassification {
  std::vector<std::size_t> bound;
  std::vector<std::size_t> band_like;
};

constexpr double kBandMargin = 1e-6;

// Bound iff the eigenvalue lies outside band by more than kBandMargin and
// ipr >= ipr_threshold. A non-positive threshold selects the default 10 / N.
BoundClassification classify_bound(const EigenpairSet& eps, const EnergyBand& band,
                                   double ipr_threshold = 0.0);

// Per eigenpair: sum_n [E - U(n) - k_min][k_max - E + U(n)] |psi(n)|^2.
// Nonnegative for every true eigenpair.
std::vector<double> positivity_check(const EigenpairSet& eps, const SitePotential& v,
                                     const Dispersion& d);

// max_k ||H psi_k - E_k psi_k||
double max_residual(const TruncatedHamiltonian& h, const EigenpairSet& eps);

}  // namespace latspec

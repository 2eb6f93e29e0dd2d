#pragma once

// Independent reference implementations used to cross-check the library.
// Everything here recomputes results from definitions (naive DFT, direct
// conditional-probability entropy, Jacobi eigensolver, permutation test,
// brute-force graph enumeration) and must stay independent of the
// implementation paths it checks.

#include <cstdint>
#include <span>
#include <vector>

#include "fixread/matrix.hpp"

namespace oracles {

// Band power from the definition: naive O(N^2) DFT of the mean-removed,
// zero-padded signal, one-sided PSD, trapezoid integral over [a,b] with
// endpoint interpolation.
double direct_dft_band_power(std::span<const double> x, double rate_hz,
                             std::size_t min_length, double low_hz, double high_hz);

// H(X|Y) in bits straight from the conditional form:
// -sum_y p(y) sum_x p(x|y) log2 p(x|y), after equal-width quantization.
double cond_entropy_direct(std::span<const double> x, std::span<const double> y,
                           int bins);

// Cyclic Jacobi eigendecomposition of a symmetric matrix; returns
// eigenvalues descending with matching eigenvectors as rows.
struct EigenResult {
  std::vector<double> values;
  fixread::RowMatrix vectors;  // row i is the eigenvector of values[i]
};
EigenResult jacobi_eigen(const fixread::RowMatrix& symmetric);

// PCA projections recomputed from an explicit covariance + Jacobi solve.
fixread::RowMatrix pca_project_oracle(const fixread::RowMatrix& x, int k);

// Two-sided paired permutation test (random sign flips, seeded).
double permutation_pvalue(std::span<const double> a, std::span<const double> b,
                          int permutations, std::uint64_t seed);

// Clustering coefficients by brute-force neighborhood enumeration over an
// adjacency matrix given as flat bytes (n x n).
std::vector<double> clustering_bruteforce(const std::vector<std::uint8_t>& adj, int n);

}  // namespace oracles

#pragma once

#include <cstddef>

#include "dst/graph.hpp"
#include "dst/matrix.hpp"

namespace dst {

// Eigen-decomposition of a symmetric matrix, eigenvalues ascending.
// Column i of `vectors` is the unit eigenvector paired with values[i].
struct SpectralData {
  Vector values;
  Matrix vectors;

  std::size_t size() const noexcept { return values.size(); }
  // Algebraic connectivity and spectral radius of a Laplacian spectrum.
  double lambda2() const { return values.at(1); }
  double lambda_max() const { return values.back(); }
};

Matrix laplacian(const WeightedGraph& g);

// Unweighted Laplacian of the single link {i, j} in an n-node graph.
Matrix edge_laplacian(std::size_t n, std::size_t i, std::size_t j);

struct JacobiOptions {
  // Stop when the off-diagonal Frobenius mass drops to rel_tol * ||A||_F.
  double rel_tol = 1e-12;
  int max_sweeps = 100;
};

// Cyclic Jacobi eigensolver. Throws NoConvergence when the sweep budget runs
// out before the off-diagonal mass is small enough.
SpectralData symmetric_eigen(const Matrix& a, JacobiOptions opts = {});

SpectralData spectrum(const WeightedGraph& g);

// Moore-Penrose pseudoinverse of a connected-graph Laplacian through the
// rank-one shift (L + 11^T/n)^{-1} - 11^T/n. Throws Singular if lambda_2 is
// not safely positive.
Matrix pseudoinverse(const Matrix& laplacian);

// Pseudoinverse of M = L - (gamma/2) L^2 from the Laplacian spectrum:
// sum_{i>=2} v_i v_i^T / mu_i, mu_i = lambda_i - (gamma/2) lambda_i^2.
// gamma = 0 gives L^dagger. Throws Unstable if any mu_i <= 1e-10.
Matrix shifted_pseudoinverse(const SpectralData& lap, double gamma);

double effective_resistance(const WeightedGraph& g, std::size_t i, std::size_t j);

// Sum over unordered pairs of effective resistances.
double total_effective_resistance(const WeightedGraph& g);

}  // namespace dst

#include "dst/spectral.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

#include "dst/error.hpp"
#include "dst/kernels.hpp"

namespace dst {
namespace {

constexpr double kSingularThreshold = 1e-10;

double off_diagonal_norm(const Matrix& a) {
  double sum = 0.0;
  for (std::size_t p = 0; p < a.rows(); ++p)
    for (std::size_t q = p + 1; q < a.cols(); ++q) sum += a(p, q) * a(p, q);
  return std::sqrt(2.0 * sum);
}

// Inverse of a symmetric positive definite matrix by Cholesky factorization.
Matrix spd_inverse(const Matrix& a) {
  const std::size_t n = a.rows();
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0)) {
      throw Error(ErrorCode::Singular, "matrix is not positive definite");
    }
    l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  // Solve L L^T X = I column by column.
  Matrix inv(n, n);
  Vector y(n);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = i == c ? 1.0 : 0.0;
      for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
      y[i] = s / l(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {
      double s = y[ii];
      for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * inv(k, c);
      inv(ii, c) = s / l(ii, ii);
    }
  }
  return inv;
}

}  // namespace

Matrix laplacian(const WeightedGraph& g) {
  const std::size_t n = g.node_count();
  Matrix lap(n, n);
  for (const Edge& e : g.edges()) {
    lap(e.i, e.j) -= e.w;
    lap(e.j, e.i) -= e.w;
    lap(e.i, e.i) += e.w;
    lap(e.j, e.j) += e.w;
  }
#ifndef NDEBUG
  for (std::size_t r = 0; r < n; ++r) {
    double s = 0.0;
    double scale = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
      s += lap(r, c);
      scale = std::max(scale, std::abs(lap(r, c)));
    }
    assert(std::abs(s) <= 1e-12 * std::max(1.0, scale));
  }
#endif
  return lap;
}

Matrix edge_laplacian(std::size_t n, std::size_t i, std::size_t j) {
  Matrix le(n, n);
  le(i, i) = 1.0;
  le(j, j) = 1.0;
  le(i, j) = -1.0;
  le(j, i) = -1.0;
  return le;
}

SpectralData symmetric_eigen(const Matrix& input, JacobiOptions opts) {
  if (input.rows() != input.cols()) {
    throw Error(ErrorCode::InvalidArgument, "eigensolver needs a square matrix");
  }
  const std::size_t n = input.rows();
  Matrix a = input;
  // Rows of vt are the eigenvectors being accumulated.
  Matrix vt = Matrix::identity(n);
  const double target = opts.rel_tol * frobenius_norm(input);

  bool converged = false;
  for (int sweep = 0; sweep <= opts.max_sweeps; ++sweep) {
    if (off_diagonal_norm(a) <= target) {
      converged = true;
      break;
    }
    if (sweep == opts.max_sweeps) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        double t = 0.0;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) /
              (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        kernels::rotate(a.row(p), a.row(q), c, s);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          a(r, p) = a(p, r);
          a(r, q) = a(q, r);
        }
        kernels::rotate(vt.row(p), vt.row(q), c, s);
      }
    }
  }
  if (!converged) {
    throw Error(ErrorCode::NoConvergence,
                "Jacobi eigensolver did not converge within " +
                    std::to_string(opts.max_sweeps) + " sweeps");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });

  SpectralData out{Vector(n), Matrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    const auto v = vt.row(order[k]);
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v[r];
  }
  return out;
}

SpectralData spectrum(const WeightedGraph& g) { return symmetric_eigen(laplacian(g)); }

Matrix pseudoinverse(const Matrix& lap) {
  const std::size_t n = lap.rows();
  const SpectralData sd = symmetric_eigen(lap);
  if (n < 2 || sd.values[1] <= kSingularThreshold) {
    throw Error(ErrorCode::Singular,
                "Laplacian has lambda_2 <= 1e-10 (disconnected or degenerate)");
  }
  const double j = 1.0 / static_cast<double>(n);
  Matrix shifted = lap;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) shifted(r, c) += j;
  Matrix inv = spd_inverse(shifted);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) inv(r, c) -= j;
  return inv;
}

Matrix shifted_pseudoinverse(const SpectralData& lap, double gamma) {
  const std::size_t n = lap.size();
  Matrix out(n, n);
  for (std::size_t k = 1; k < n; ++k) {
    const double lambda = lap.values[k];
    const double mu = lambda - 0.5 * gamma * lambda * lambda;
    if (!(mu > kSingularThreshold)) {
      throw Error(ErrorCode::Unstable,
                  "L - (gamma/2) L^2 is not positive on the consensus "
                  "complement (mu = " + std::to_string(mu) + ")");
    }
    const Vector v = lap.vectors.column(k);
    for (std::size_t r = 0; r < n; ++r) {
      kernels::axpy(v[r] / mu, v, out.row(r));
    }
  }
  return out;
}

double effective_resistance(const WeightedGraph& g, std::size_t i, std::size_t j) {
  if (i >= g.node_count() || j >= g.node_count()) {
    throw Error(ErrorCode::IndexOutOfRange, "node index out of range");
  }
  if (i == j) {
    throw Error(ErrorCode::SameNode, "effective resistance needs distinct nodes");
  }
  const Matrix lp = pseudoinverse(laplacian(g));
  return lp(i, i) + lp(j, j) - lp(i, j) - lp(j, i);
}

double total_effective_resistance(const WeightedGraph& g) {
  const std::size_t n = g.node_count();
  const Matrix lp = pseudoinverse(laplacian(g));
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      total += lp(i, i) + lp(j, j) - lp(i, j) - lp(j, i);
#ifndef NDEBUG
  const SpectralData sd = spectrum(g);
  double spectral = 0.0;
  for (std::size_t k = 1; k < n; ++k) spectral += 1.0 / sd.values[k];
  spectral *= static_cast<double>(n);
  assert(std::abs(total - spectral) <= 1e-8 * std::max(1.0, spectral));
#endif
  return total;
}

}  // namespace dst

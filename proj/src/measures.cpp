#include "dst/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dst/error.hpp"

namespace dst {
namespace {

constexpr double kMuThreshold = 1e-10;

void check_gamma(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw Error(ErrorCode::InvalidArgument, "update cycle gamma must be > 0");
  }
}

}  // namespace

NoiseModel NoiseModel::iid(double sigma, bool gamma_scaling) {
  if (!(sigma >= 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma must be >= 0");
  NoiseModel m;
  m.kind_ = Kind::iid;
  m.sigma_ = sigma;
  m.gamma_scaling_ = gamma_scaling;
  return m;
}

NoiseModel NoiseModel::independent(Vector sigmas, bool gamma_scaling) {
  for (double s : sigmas) {
    if (!(s >= 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma_i must be >= 0");
  }
  NoiseModel m;
  m.kind_ = Kind::independent;
  m.sigmas_ = std::move(sigmas);
  m.gamma_scaling_ = gamma_scaling;
  return m;
}

NoiseModel NoiseModel::general(Matrix cov, bool gamma_scaling) {
  if (cov.rows() != cov.cols()) {
    throw Error(ErrorCode::InvalidArgument, "covariance must be square");
  }
  const double scale = std::max(1.0, max_abs(cov));
  for (std::size_t r = 0; r < cov.rows(); ++r)
    for (std::size_t c = 0; c < r; ++c)
      if (std::abs(cov(r, c) - cov(c, r)) > 1e-10 * scale) {
        throw Error(ErrorCode::InvalidArgument, "covariance is not symmetric");
      }
  if (cov.rows() > 0 && symmetric_eigen(cov).values.front() < -1e-10 * scale) {
    throw Error(ErrorCode::InvalidArgument, "covariance is not positive semidefinite");
  }
  NoiseModel m;
  m.kind_ = Kind::general;
  m.cov_ = std::move(cov);
  m.gamma_scaling_ = gamma_scaling;
  return m;
}

NoiseModel NoiseModel::with_gamma_scaling(bool on) const {
  NoiseModel m = *this;
  m.gamma_scaling_ = on;
  return m;
}

Matrix NoiseModel::base_covariance(std::size_t n) const {
  switch (kind_) {
    case Kind::iid: {
      Matrix c = Matrix::identity(n);
      c *= sigma_ * sigma_;
      return c;
    }
    case Kind::independent: {
      if (sigmas_.size() != n) {
        throw Error(ErrorCode::InvalidArgument, "noise has " +
                    std::to_string(sigmas_.size()) + " sigmas for " +
                    std::to_string(n) + " nodes");
      }
      Vector var(n);
      for (std::size_t i = 0; i < n; ++i) var[i] = sigmas_[i] * sigmas_[i];
      return Matrix::diagonal(var);
    }
    case Kind::general:
      if (cov_.rows() != n) {
        throw Error(ErrorCode::InvalidArgument, "covariance dimension mismatch");
      }
      return cov_;
  }
  return {};
}

Matrix NoiseModel::covariance(std::size_t n, double gamma) const {
  Matrix c = base_covariance(n);
  if (gamma_scaling_) c *= gamma;
  return c;
}

Vector NoiseModel::variances(std::size_t n) const { return base_covariance(n).diag(); }

double PhiSs::value() const {
  if (infinite_) throw Error(ErrorCode::Unstable, "steady-state dispersion is infinite");
  return value_;
}

double phi_cr(const SpectralData& lap, double gamma) {
  double worst = 0.0;
  for (std::size_t k = 1; k < lap.size(); ++k) {
    worst = std::max(worst, std::abs(1.0 - gamma * lap.values[k]));
  }
  return worst;
}

double phi_cr(const WeightedGraph& g, double gamma) { return phi_cr(spectrum(g), gamma); }

bool is_convergent(const WeightedGraph& g, double gamma) { return phi_cr(g, gamma) < 1.0; }

bool dispersion_finite(const SpectralData& lap, double gamma) {
  for (std::size_t k = 1; k < lap.size(); ++k) {
    const double lambda = lap.values[k];
    if (!(lambda > 0.0) || !(gamma * lambda < 2.0)) return false;
    if (!(lambda - 0.5 * gamma * lambda * lambda > kMuThreshold)) return false;
  }
  return true;
}

PhiSs phi_ss_closed(const SpectralData& lap, double gamma, const NoiseModel& noise) {
  check_gamma(gamma);
  if (!dispersion_finite(lap, gamma)) return PhiSs::infinite();
  const Matrix mp = shifted_pseudoinverse(lap, gamma);
  const Matrix cov = noise.covariance(lap.size(), gamma);
  return PhiSs::finite(trace_of_product(mp, cov) / (2.0 * gamma));
}

PhiSs phi_ss_closed(const WeightedGraph& g, double gamma, const NoiseModel& noise) {
  return phi_ss_closed(spectrum(g), gamma, noise);
}

PhiSs phi_ss_iid(const SpectralData& lap, double gamma, double sigma) {
  check_gamma(gamma);
  if (!dispersion_finite(lap, gamma)) return PhiSs::infinite();
  double sum = 0.0;
  for (std::size_t k = 1; k < lap.size(); ++k) {
    const double lambda = lap.values[k];
    sum += sigma * sigma / (lambda * (2.0 - gamma * lambda));
  }
  return PhiSs::finite(sum);
}

PhiSs phi_ss_iid(const WeightedGraph& g, double gamma, double sigma) {
  return phi_ss_iid(spectrum(g), gamma, sigma);
}

Matrix lyapunov_gramian(const WeightedGraph& g, double gamma, LyapunovOptions opts) {
  check_gamma(gamma);
  if (!(phi_cr(g, gamma) < 1.0)) {
    throw Error(ErrorCode::Unstable, "Lyapunov iteration needs phi_cr < 1");
  }
  const std::size_t n = g.node_count();
  const double inv_n = 1.0 / static_cast<double>(n);
  Matrix a = Matrix::identity(n) - gamma * laplacian(g);
  Matrix centering = Matrix::identity(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) centering(r, c) -= inv_n;

  // Removes row and column means, i.e. Q <- P Q P with P = I - 11^T/n.
  auto project = [n, inv_n](Matrix& q) {
    Vector col_mean(n, 0.0);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) col_mean[c] += q(r, c) * inv_n;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) q(r, c) -= col_mean[c];
    for (std::size_t r = 0; r < n; ++r) {
      double row_mean = 0.0;
      for (std::size_t c = 0; c < n; ++c) row_mean += q(r, c) * inv_n;
      for (std::size_t c = 0; c < n; ++c) q(r, c) -= row_mean;
    }
  };

  Matrix q(n, n);
  for (std::size_t it = 0; it < opts.max_iters; ++it) {
    Matrix next = a * q * a;
    next += centering;
    project(next);
    double delta = 0.0;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        delta = std::max(delta, std::abs(next(r, c) - q(r, c)));
    q = std::move(next);
    if (delta <= opts.tol * std::max(1.0, max_abs(q))) return q;
  }
  throw Error(ErrorCode::NoConvergence, "Lyapunov iteration did not converge");
}

double phi_ss_lyapunov_oracle(const WeightedGraph& g, double gamma,
                              const NoiseModel& noise, LyapunovOptions opts) {
  const Matrix q = lyapunov_gramian(g, gamma, opts);
  return trace_of_product(q, noise.covariance(g.node_count(), gamma));
}

Vector centrality(const WeightedGraph& g, double gamma) {
  check_gamma(gamma);
  return shifted_pseudoinverse(spectrum(g), gamma).diag();
}

double resistance_limit(const WeightedGraph& g, double sigma) {
  const double n = static_cast<double>(g.node_count());
  return sigma * sigma / (2.0 * n) * total_effective_resistance(g);
}

MeasureReport analyze(const WeightedGraph& g, double gamma, const NoiseModel& noise) {
  check_gamma(gamma);
  const SpectralData lap = spectrum(g);
  MeasureReport report;
  report.phi_cr = phi_cr(lap, gamma);
  report.stable = report.phi_cr < 1.0;
  report.phi_ss = phi_ss_closed(lap, gamma, noise);
  if (report.phi_ss.is_finite()) {
    report.centrality = shifted_pseudoinverse(lap, gamma).diag();
  }
  const Vector var = noise.variances(g.node_count());
  const double mean_var =
      std::accumulate(var.begin(), var.end(), 0.0) / static_cast<double>(var.size());
  report.resistance_limit = resistance_limit(g, std::sqrt(mean_var));
  return report;
}

}  // namespace dst

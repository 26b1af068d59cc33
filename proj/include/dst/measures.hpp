#pragma once

#include <cstddef>

#include "dst/graph.hpp"
#include "dst/matrix.hpp"
#include "dst/spectral.hpp"

namespace dst {

// Covariance of the per-step demand increments v(k) = r(k) - r(k-1).
//
// gamma_scaling selects between the two conventions in use: with it on,
// Cov(v) carries a factor gamma (demand changes of a sampled continuous
// process, N(0, gamma sigma^2)); with it off, Cov(v) is taken as given.
// The steady-state dispersion only has an interior optimum in gamma under
// the second convention.
class NoiseModel {
 public:
  enum class Kind { iid, independent, general };

  static NoiseModel iid(double sigma, bool gamma_scaling);
  static NoiseModel independent(Vector sigmas, bool gamma_scaling);
  // Throws InvalidArgument unless cov is symmetric PSD within 1e-10.
  static NoiseModel general(Matrix cov, bool gamma_scaling);

  Kind kind() const noexcept { return kind_; }
  bool gamma_scaling() const noexcept { return gamma_scaling_; }
  NoiseModel with_gamma_scaling(bool on) const;

  // Unscaled covariance for an n-node network.
  Matrix base_covariance(std::size_t n) const;
  // Cov(v) as it enters the dispersion formula at update cycle gamma.
  Matrix covariance(std::size_t n, double gamma) const;
  // Per-node variances of the unscaled covariance.
  Vector variances(std::size_t n) const;

 private:
  NoiseModel() = default;

  Kind kind_ = Kind::iid;
  bool gamma_scaling_ = true;
  double sigma_ = 0.0;
  Vector sigmas_;
  Matrix cov_;
};

// Steady-state dispersion: either a finite value or infinite (unstable
// dynamics). Kept distinct from IEEE infinity so reports stay unambiguous.
class PhiSs {
 public:
  static PhiSs finite(double v) { return PhiSs(false, v); }
  static PhiSs infinite() { return PhiSs(true, 0.0); }

  bool is_finite() const noexcept { return !infinite_; }
  // Throws Unstable when infinite.
  double value() const;

  bool operator==(const PhiSs&) const = default;

 private:
  PhiSs(bool inf, double v) : infinite_(inf), value_(v) {}
  bool infinite_;
  double value_;
};

// Convergence measure max_{i>=2} |1 - gamma lambda_i|.
double phi_cr(const SpectralData& lap, double gamma);
double phi_cr(const WeightedGraph& g, double gamma);

// Steady-load consensus criterion: phi_cr < 1.
bool is_convergent(const WeightedGraph& g, double gamma);

// True when 0 < lambda_i < 2/gamma for every i >= 2 with a safe margin.
bool dispersion_finite(const SpectralData& lap, double gamma);

// (1 / 2 gamma) tr[(L - (gamma/2) L^2)^dagger Cov(v)].
PhiSs phi_ss_closed(const SpectralData& lap, double gamma, const NoiseModel& noise);
PhiSs phi_ss_closed(const WeightedGraph& g, double gamma, const NoiseModel& noise);

// Expected total mismatch loss for normally distributed initial demand. It
// coincides with the steady-state dispersion.
inline PhiSs total_mismatch_loss(const WeightedGraph& g, double gamma,
                                 const NoiseModel& noise) {
  return phi_ss_closed(g, gamma, noise);
}

// sum_{i>=2} sigma^2 / (lambda_i (2 - gamma lambda_i)); iid increments with
// variance gamma sigma^2.
PhiSs phi_ss_iid(const SpectralData& lap, double gamma, double sigma);
PhiSs phi_ss_iid(const WeightedGraph& g, double gamma, double sigma);

struct LyapunovOptions {
  double tol = 1e-12;
  std::size_t max_iters = 5'000'000;
};

// Solution Q of (I - gamma L) Q (I - gamma L)^T - Q + (I - 11^T/n) = 0 by
// projected fixed-point iteration from zero. Throws Unstable if phi_cr >= 1,
// NoConvergence if the iteration budget runs out.
Matrix lyapunov_gramian(const WeightedGraph& g, double gamma,
                        LyapunovOptions opts = {});

// tr[Q Cov(v)] with Q from lyapunov_gramian: an independent route to the
// steady-state dispersion.
double phi_ss_lyapunov_oracle(const WeightedGraph& g, double gamma,
                              const NoiseModel& noise, LyapunovOptions opts = {});

// Diagonal of (L - (gamma/2) L^2)^dagger. Throws Unstable.
Vector centrality(const WeightedGraph& g, double gamma);

// Small-gamma limit (sigma^2 / 2n) sum_{i>j} r_ij.
double resistance_limit(const WeightedGraph& g, double sigma);

struct MeasureReport {
  double phi_cr = 0.0;
  PhiSs phi_ss = PhiSs::infinite();
  bool stable = false;
  Vector centrality;  // empty when unstable
  double resistance_limit = 0.0;
};

// resistance_limit uses sigma^2 = mean per-node variance of the noise model.
MeasureReport analyze(const WeightedGraph& g, double gamma, const NoiseModel& noise);

}  // namespace dst

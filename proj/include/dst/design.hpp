#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>

#include "dst/graph.hpp"
#include "dst/measures.hpp"

namespace dst {

struct StepRule {
  enum class Kind { fixed, diminishing, backtracking };

  Kind kind = Kind::diminishing;
  double eta = 0.0;   // fixed step, or initial step for the other rules; 0 = auto
  double beta = 0.5;  // backtracking shrink factor
  double c = 1e-4;    // sufficient-decrease constant

  static StepRule fixed(double eta) { return {Kind::fixed, eta, 0.5, 1e-4}; }
  static StepRule diminishing(double eta0) { return {Kind::diminishing, eta0, 0.5, 1e-4}; }
  static StepRule backtracking(double beta, double c) {
    return {Kind::backtracking, 0.0, beta, c};
  }
};

struct SolverConfig {
  std::size_t max_iters = 20000;
  double tol = 1e-10;
  // Unset: each solver picks its own default rule.
  std::optional<StepRule> step;
  // Called with every accepted iterate of the link-weight solvers.
  std::function<void(std::size_t, std::span<const double>, double)> observer;
};

struct DesignResult {
  std::optional<double> gamma;  // set by the update-cycle designs
  Vector weights;               // set by the link-weight designs, edge order of the support
  double objective = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  double kkt_residual = 0.0;
};

// Steady loads: gamma* = 2 / (lambda_2 + lambda_n); objective is phi_cr there.
DesignResult optimal_gamma_steady(const WeightedGraph& g);

// Non-steady loads: golden-section search of the steady-state dispersion over
// (0, 2/lambda_n). Throws NoInteriorOptimum when the minimizer sits on the
// boundary of the feasible interval, which is what happens for gamma-scaled
// noise (the dispersion then increases monotonically with gamma).
DesignResult optimal_gamma_nonsteady(const WeightedGraph& g, const NoiseModel& noise,
                                     SolverConfig cfg = {});

// Fastest network on a fixed support: minimize phi_cr over w >= 0 by
// projected subgradient descent, starting from the best uniform weighting.
// Returns the best iterate; `converged` is false if the iteration stopped on
// the budget rather than on stagnation.
DesignResult fastest_weights(const WeightedGraph& support, double gamma,
                             SolverConfig cfg = {});

// Most robust network on a fixed support: minimize the steady-state
// dispersion over strictly stable w >= 0 by projected gradient with
// backtracking. Throws InfeasibleStart if no uniform weighting is stable.
DesignResult robust_weights(const WeightedGraph& support, double gamma,
                            const NoiseModel& noise, SolverConfig cfg = {});

// d phi_ss / d w_e for each link, in edge order. Throws Unstable.
Vector phi_ss_weight_gradient(const WeightedGraph& g, double gamma,
                              const NoiseModel& noise);

// L(w) = sum_e w_e L_e over the links of `support`; no connectivity check.
Matrix laplacian_for_weights(const WeightedGraph& support, std::span<const double> w);

}  // namespace dst

#include "dst/design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dst/error.hpp"
#include "dst/kernels.hpp"

namespace dst {
namespace {

constexpr double kStabilityMargin = 1e-9;
constexpr double kTieTolerance = 1e-8;
constexpr double kSignDeadband = 1e-12;

// x_aa + x_bb - x_ab - x_ba, i.e. tr(X L_e) for the link {a, b}.
double edge_form(const Matrix& x, const Edge& e) {
  return x(e.i, e.i) + x(e.j, e.j) - x(e.i, e.j) - x(e.j, e.i);
}

void project_nonnegative(Vector& w) {
  for (double& v : w) v = std::max(v, 0.0);
}

double inf_norm_diff(const Vector& a, const Vector& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

Vector unit_weights(const WeightedGraph& support) {
  return Vector(support.edge_count(), 1.0);
}

struct CrEvaluation {
  double objective = 0.0;
  Vector subgradient;
};

// phi_cr at w and the average of the subgradients of every eigenpair that
// attains the max (within kTieTolerance).
CrEvaluation evaluate_cr(const WeightedGraph& support, const Vector& w, double gamma) {
  const SpectralData sd = symmetric_eigen(laplacian_for_weights(support, w));
  CrEvaluation out;
  out.objective = phi_cr(sd, gamma);
  out.subgradient.assign(w.size(), 0.0);
  std::size_t attaining = 0;
  for (std::size_t k = 1; k < sd.size(); ++k) {
    const double dev = 1.0 - gamma * sd.values[k];
    if (std::abs(dev) < out.objective - kTieTolerance) continue;
    ++attaining;
    const double sign = std::abs(dev) <= kSignDeadband ? 0.0 : (dev > 0.0 ? 1.0 : -1.0);
    if (sign == 0.0) continue;
    for (std::size_t e = 0; e < w.size(); ++e) {
      const Edge& edge = support.edges()[e];
      const double d = sd.vectors(edge.i, k) - sd.vectors(edge.j, k);
      // d|1 - gamma lambda_k| / dw_e = -sign * gamma * (v_a - v_b)^2
      out.subgradient[e] -= sign * gamma * d * d;
    }
  }
  if (attaining > 0) {
    for (double& g : out.subgradient) g /= static_cast<double>(attaining);
  }
  return out;
}

struct SsEvaluation {
  bool feasible = false;
  double objective = std::numeric_limits<double>::infinity();
};

SsEvaluation evaluate_ss(const WeightedGraph& support, const Vector& w, double gamma,
                         const NoiseModel& noise) {
  const SpectralData sd = symmetric_eigen(laplacian_for_weights(support, w));
  SsEvaluation out;
  if (sd.values[1] <= 1e-10 || phi_cr(sd, gamma) > 1.0 - kStabilityMargin) return out;
  const PhiSs phi = phi_ss_closed(sd, gamma, noise);
  if (!phi.is_finite()) return out;
  out.feasible = true;
  out.objective = phi.value();
  return out;
}

Vector gradient_for_weights(const WeightedGraph& support, const Vector& w,
                            double gamma, const NoiseModel& noise) {
  const Matrix lap = laplacian_for_weights(support, w);
  const SpectralData sd = symmetric_eigen(lap);
  const Matrix mp = shifted_pseudoinverse(sd, gamma);
  const Matrix cov = noise.covariance(support.node_count(), gamma);
  const Matrix g = mp * cov * mp;
  const Matrix h = lap * g + g * lap;
  Vector grad(w.size());
  for (std::size_t e = 0; e < w.size(); ++e) {
    const Edge& edge = support.edges()[e];
    grad[e] = -(edge_form(g, edge) - 0.5 * gamma * edge_form(h, edge)) / (2.0 * gamma);
  }
  return grad;
}

}  // namespace

Matrix laplacian_for_weights(const WeightedGraph& support, std::span<const double> w) {
  if (w.size() != support.edge_count()) {
    throw Error(ErrorCode::InvalidArgument, "weight vector size mismatch");
  }
  const std::size_t n = support.node_count();
  Matrix lap(n, n);
  for (std::size_t e = 0; e < w.size(); ++e) {
    const Edge& edge = support.edges()[e];
    lap(edge.i, edge.j) -= w[e];
    lap(edge.j, edge.i) -= w[e];
    lap(edge.i, edge.i) += w[e];
    lap(edge.j, edge.j) += w[e];
  }
  return lap;
}

DesignResult optimal_gamma_steady(const WeightedGraph& g) {
  const SpectralData sd = spectrum(g);
  DesignResult r;
  r.gamma = 2.0 / (sd.lambda2() + sd.lambda_max());
  r.objective = phi_cr(sd, *r.gamma);
  r.converged = true;
  return r;
}

DesignResult optimal_gamma_nonsteady(const WeightedGraph& g, const NoiseModel& noise,
                                     SolverConfig cfg) {
  const SpectralData sd = spectrum(g);
  const double upper = 2.0 / sd.lambda_max();
  const double eps = 1e-9 * upper;
  auto f = [&](double gamma) {
    const PhiSs phi = phi_ss_closed(sd, gamma, noise);
    return phi.is_finite() ? phi.value() : std::numeric_limits<double>::infinity();
  };

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = eps;
  double hi = upper - eps;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  std::size_t it = 0;
  while (hi - lo > cfg.tol && it < cfg.max_iters) {
    ++it;
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    }
  }
  const double gamma = 0.5 * (lo + hi);
  const double margin = std::max(10.0 * cfg.tol, 1e-6 * upper);
  if (gamma - eps <= margin || (upper - eps) - gamma <= margin) {
    throw Error(ErrorCode::NoInteriorOptimum,
                "dispersion is monotone in gamma on (0, 2/lambda_n); optimum at "
                "the boundary gamma = " + std::to_string(gamma));
  }
  DesignResult r;
  r.gamma = gamma;
  r.objective = f(gamma);
  r.iterations = it;
  r.converged = hi - lo <= cfg.tol;
  r.kkt_residual = hi - lo;
  return r;
}

DesignResult fastest_weights(const WeightedGraph& support, double gamma,
                             SolverConfig cfg) {
  if (!(gamma > 0.0)) throw Error(ErrorCode::InvalidArgument, "gamma must be > 0");
  // Best uniform weighting: scale s with gamma s (lambda_2 + lambda_n) = 2
  // on the unit-weight support.
  const SpectralData unit = spectrum(support.with_weights(unit_weights(support)));
  const double s0 = 2.0 / (gamma * (unit.lambda2() + unit.lambda_max()));
  const StepRule rule = cfg.step.value_or(StepRule::diminishing(0.0));
  const double eta0 = rule.eta > 0.0 ? rule.eta : 0.1 * s0;

  Vector w(support.edge_count(), s0);
  CrEvaluation cur = evaluate_cr(support, w, gamma);
  Vector best_w = w;
  CrEvaluation best = cur;
  std::size_t last_improvement = 0;
  const std::size_t patience = std::max<std::size_t>(200, cfg.max_iters / 10);

  DesignResult r;
  std::size_t it = 0;
  for (; it < cfg.max_iters; ++it) {
    const double gnorm = std::sqrt(kernels::dot(cur.subgradient, cur.subgradient));
    if (gnorm == 0.0) {
      r.converged = true;
      break;
    }
    Vector next = w;
    switch (rule.kind) {
      case StepRule::Kind::fixed:
        kernels::axpy(-eta0, cur.subgradient, next);
        break;
      case StepRule::Kind::diminishing:
        kernels::axpy(-eta0 / (std::sqrt(static_cast<double>(it + 1)) * gnorm),
                      cur.subgradient, next);
        break;
      case StepRule::Kind::backtracking: {
        double t = eta0 / gnorm;
        for (;;) {
          next = w;
          kernels::axpy(-t, cur.subgradient, next);
          project_nonnegative(next);
          if (evaluate_cr(support, next, gamma).objective < cur.objective) break;
          t *= rule.beta;
          if (t * gnorm < 1e-14 * s0) break;
        }
        break;
      }
    }
    project_nonnegative(next);
    w = std::move(next);
    cur = evaluate_cr(support, w, gamma);
    if (cfg.observer) cfg.observer(it + 1, w, cur.objective);
    if (cur.objective < best.objective - cfg.tol) last_improvement = it;
    if (cur.objective < best.objective) {
      best = cur;
      best_w = w;
    }
    if (best.objective <= cfg.tol || it - last_improvement > patience) {
      r.converged = true;
      ++it;
      break;
    }
  }
  Vector stepped = best_w;
  kernels::axpy(-1.0, best.subgradient, stepped);
  project_nonnegative(stepped);

  r.weights = best_w;
  r.objective = best.objective;
  r.iterations = it;
  r.kkt_residual = inf_norm_diff(stepped, best_w);
  return r;
}

DesignResult robust_weights(const WeightedGraph& support, double gamma,
                            const NoiseModel& noise, SolverConfig cfg) {
  if (!(gamma > 0.0)) throw Error(ErrorCode::InvalidArgument, "gamma must be > 0");
  const SpectralData unit = spectrum(support.with_weights(unit_weights(support)));
  if (unit.lambda2() <= 1e-10) {
    throw Error(ErrorCode::InfeasibleStart, "support is disconnected");
  }
  // gamma * lambda_n = 1 puts every mode strictly inside the stable region.
  Vector w(support.edge_count(), 1.0 / (gamma * unit.lambda_max()));
  SsEvaluation cur = evaluate_ss(support, w, gamma, noise);
  if (!cur.feasible) {
    throw Error(ErrorCode::InfeasibleStart, "no strictly stable uniform weighting");
  }
  const StepRule rule = cfg.step.value_or(StepRule::backtracking(0.5, 1e-4));

  Vector grad = gradient_for_weights(support, w, gamma, noise);
  Vector prev_w;
  Vector prev_grad;
  double t = rule.eta > 0.0 ? rule.eta : 1.0;
  DesignResult r;
  std::size_t it = 0;
  double kkt = 0.0;
  for (; it < cfg.max_iters; ++it) {
    Vector probe = w;
    kernels::axpy(-1.0, grad, probe);
    project_nonnegative(probe);
    kkt = inf_norm_diff(probe, w);
    if (kkt <= cfg.tol) {
      r.converged = true;
      break;
    }

    if (rule.kind != StepRule::Kind::fixed && !prev_w.empty()) {
      // Barzilai-Borwein trial step, then backtrack.
      double ss = 0.0;
      double sy = 0.0;
      for (std::size_t e = 0; e < w.size(); ++e) {
        const double s = w[e] - prev_w[e];
        const double y = grad[e] - prev_grad[e];
        ss += s * s;
        sy += s * y;
      }
      if (sy > 0.0) t = ss / sy;
    }

    Vector next;
    SsEvaluation eval;
    bool accepted = false;
    for (int tries = 0; tries < 200; ++tries) {
      next = w;
      kernels::axpy(-t, grad, next);
      project_nonnegative(next);
      eval = evaluate_ss(support, next, gamma, noise);
      double decrease = 0.0;
      for (std::size_t e = 0; e < w.size(); ++e) decrease += grad[e] * (w[e] - next[e]);
      if (eval.feasible && eval.objective <= cur.objective - rule.c * decrease) {
        accepted = true;
        break;
      }
      if (rule.kind == StepRule::Kind::fixed) break;
      t *= rule.beta;
    }
    if (!accepted) {
      // No feasible descent along the projected path: w is stationary to
      // working precision.
      r.converged = kkt <= std::sqrt(cfg.tol);
      break;
    }
    prev_w = std::move(w);
    prev_grad = std::move(grad);
    w = std::move(next);
    const double previous = cur.objective;
    cur = eval;
    if (cfg.observer) cfg.observer(it + 1, w, cur.objective);
    grad = gradient_for_weights(support, w, gamma, noise);
    if (previous - cur.objective <= 1e-15 * std::abs(previous) &&
        inf_norm_diff(w, prev_w) <= 1e-15 * std::max(1.0, max_abs(w))) {
      r.converged = true;
      ++it;
      break;
    }
  }
  Vector probe = w;
  kernels::axpy(-1.0, grad, probe);
  project_nonnegative(probe);

  r.weights = w;
  r.objective = cur.objective;
  r.iterations = it;
  r.kkt_residual = inf_norm_diff(probe, w);
  return r;
}

Vector phi_ss_weight_gradient(const WeightedGraph& g, double gamma,
                              const NoiseModel& noise) {
  if (!(gamma > 0.0)) throw Error(ErrorCode::InvalidArgument, "gamma must be > 0");
  return gradient_for_weights(g, g.weights(), gamma, noise);
}

}  // namespace dst

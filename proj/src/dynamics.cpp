#include "dst/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dst/error.hpp"
#include "dst/kernels.hpp"
#include "dst/rng.hpp"
#include "dst/spectral.hpp"
#include "dst/throttle.hpp"

namespace dst {
namespace {

constexpr double kBlowup = 1e15;
// Client share streams sit far away from the per-node load streams.
constexpr std::uint64_t kClientStreamBase = 1ULL << 32;

Vector lap_times(const Matrix& lap, std::span<const double> v) { return lap * v; }

double sum(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

double spread(std::span<const double> v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

// (1/2n) sum_ij (p_i - p_j)^2 = sum_i p_i^2 - (sum_i p_i)^2 / n
double dispersion(std::span<const double> p) {
  const double n = static_cast<double>(p.size());
  const double mean = sum(p) / n;
  double acc = 0.0;
  for (double v : p) acc += (v - mean) * (v - mean);
  return acc;
}

void require_positive(std::span<const double> v, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0)) {
      throw Error(ErrorCode::CaseDomainViolation,
                  std::string(what) + " must be positive at node " + std::to_string(i));
    }
  }
}

const char* case_name(MeasureCase c) {
  switch (c) {
    case MeasureCase::I: return "I";
    case MeasureCase::II: return "II";
    case MeasureCase::III: return "III";
    case MeasureCase::IV: return "IV";
  }
  return "?";
}

// Fixed per-client shares of a node's demand.
std::vector<Vector> client_shares(const DstScenario& s) {
  std::vector<Vector> shares;
  for (std::size_t i = 0; i < s.clients_per_node.size(); ++i) {
    CounterRng rng(s.seed, kClientStreamBase + i);
    Vector w(s.clients_per_node[i]);
    for (double& v : w) v = 0.5 + rng.next_uniform();
    const double total = sum(w);
    for (double& v : w) v /= total;
    shares.push_back(std::move(w));
  }
  return shares;
}

}  // namespace

void validate(const DstScenario& s) {
  const std::size_t n = s.graph.node_count();
  if (!(s.gamma > 0.0) || !std::isfinite(s.gamma)) {
    throw Error(ErrorCode::InvalidArgument, "gamma must be > 0");
  }
  if (s.initial_limits.size() != n) {
    throw Error(ErrorCode::InvalidArgument, "initial_limits needs one entry per node");
  }
  for (double x : s.initial_limits) {
    if (!(x >= 0.0)) throw Error(ErrorCode::InvalidArgument, "initial limits must be >= 0");
  }
  if (!(sum(s.initial_limits) > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "total limit must be positive");
  }
  if (s.load.node_count() != n) {
    throw Error(ErrorCode::InvalidArgument, "load model node count does not match graph");
  }
  if (s.horizon > kMaxHorizon) {
    throw Error(ErrorCode::InvalidArgument, "horizon exceeds 10^7 steps");
  }
  if (!s.clients_per_node.empty()) {
    if (s.clients_per_node.size() != n) {
      throw Error(ErrorCode::InvalidArgument, "clients_per_node needs one entry per node");
    }
    for (std::size_t c : s.clients_per_node) {
      if (c == 0) throw Error(ErrorCode::InvalidArgument, "every server needs a client");
    }
  }
  const bool needs_positive = s.measure_case == MeasureCase::II ||
                              s.measure_case == MeasureCase::III;
  if (needs_positive && s.load.kind() == LoadModel::Kind::random_walk &&
      !(s.load.clamp_min() > 0.0)) {
    throw Error(ErrorCode::InvalidArgument,
                std::string("case ") + case_name(s.measure_case) +
                    " with random-walk demand needs clamp_min > 0");
  }
  if (s.measure_case == MeasureCase::III) {
    for (double x : s.initial_limits) {
      if (!(x > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "case III needs positive initial limits");
      }
    }
  }
}

Vector performance(MeasureCase c, std::span<const double> x, std::span<const double> r) {
  Vector p(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    switch (c) {
      case MeasureCase::I: p[i] = r[i] - x[i]; break;
      case MeasureCase::II: p[i] = (r[i] - x[i]) / r[i]; break;
      case MeasureCase::III: p[i] = std::log(r[i] / x[i]); break;
      case MeasureCase::IV: p[i] = x[i]; break;
    }
  }
  return p;
}

Vector step_case1(std::span<const double> x, std::span<const double> r, const Matrix& lap,
                  double gamma) {
  Vector p(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) p[i] = r[i] - x[i];
  Vector next(x.begin(), x.end());
  kernels::axpy(gamma, lap_times(lap, p), next);
  return next;
}

Vector step_case2(std::span<const double> x, std::span<const double> r, const Matrix& lap,
                  double gamma) {
  require_positive(r, "demand");
  Vector p(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) p[i] = (r[i] - x[i]) / r[i];
  Vector next(x.begin(), x.end());
  kernels::axpy(gamma, lap_times(lap, p), next);
  return next;
}

Vector step_case3(std::span<const double> x, std::span<const double> r, const Matrix& lap,
                  double gamma) {
  require_positive(r, "demand");
  require_positive(x, "limit");
  Vector p(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) p[i] = std::log(r[i]) - std::log(x[i]);
  Vector next(x.begin(), x.end());
  kernels::axpy(gamma, lap_times(lap, p), next);
  require_positive(next, "limit after case III step");
  return next;
}

Vector step_case3_normalized(std::span<const double> pbar, const Matrix& lap, double gamma,
                             double r_const) {
  require_positive(pbar, "normalized limit");
  if (!(r_const > 0.0)) throw Error(ErrorCode::CaseDomainViolation, "demand must be positive");
  Vector logs(pbar.size());
  for (std::size_t i = 0; i < pbar.size(); ++i) logs[i] = std::log(pbar[i]);
  Vector next(pbar.begin(), pbar.end());
  kernels::axpy(-gamma / r_const, lap_times(lap, logs), next);
  require_positive(next, "normalized limit after case III step");
  return next;
}

Case4Step step_case4(std::span<const double> x, std::span<const double> r,
                     const WeightedGraph& g, double gamma) {
  const std::size_t n = x.size();
  const auto& edges = g.edges();
  Vector hi(n);
  for (std::size_t i = 0; i < n; ++i) hi[i] = std::max(r[i], x[i]);

  Case4Step out;
  out.frozen.assign(n, false);
  out.reverted.assign(n, false);
  auto active = [&](const Edge& e) {
    return e.w > 0.0 && !out.frozen[e.i] && !out.frozen[e.j];
  };

  // Freeze until no unfrozen node is pushed outward from a bound it sits on.
  Vector u(n);
  for (std::size_t round = 0; round <= n; ++round) {
    std::fill(u.begin(), u.end(), 0.0);
    for (const Edge& e : edges) {
      if (!active(e)) continue;
      const double flow = gamma * e.w * (x[e.i] - x[e.j]);
      u[e.i] += flow;
      u[e.j] -= flow;
    }
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (out.frozen[i]) continue;
      if ((x[i] >= hi[i] && u[i] > 0.0) || (x[i] <= 0.0 && u[i] < 0.0)) {
        out.frozen[i] = true;
        changed = true;
      }
    }
    if (!changed) break;
  }

  out.x.assign(x.begin(), x.end());
  for (std::size_t i = 0; i < n; ++i) {
    if (!out.frozen[i]) out.x[i] += u[i];
  }

  auto violation = [&](std::size_t i) {
    if (out.x[i] > hi[i]) return out.x[i] - hi[i];
    if (out.x[i] < 0.0) return out.x[i];
    return 0.0;
  };

  std::vector<bool> stuck(n, false);
  for (std::size_t pass = 0; pass < 4 * n; ++pass) {
    bool any = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (out.frozen[i] || stuck[i]) continue;
      const double residue = violation(i);
      if (residue == 0.0) continue;
      any = true;
      double wsum = 0.0;
      for (const Edge& e : edges) {
        if (active(e) && (e.i == i || e.j == i)) wsum += e.w;
      }
      if (wsum == 0.0) {
        stuck[i] = true;
        continue;
      }
      out.x[i] -= residue;
      for (const Edge& e : edges) {
        if (!active(e) || (e.i != i && e.j != i)) continue;
        const std::size_t j = e.i == i ? e.j : e.i;
        out.x[j] += residue * (e.w / wsum);
      }
    }
    if (!any) break;
  }

  // Drop the step for every cluster (component of the active links) that
  // still has a node out of bounds.
  bool pending = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (!out.frozen[i] && (stuck[i] || violation(i) != 0.0)) {
      out.reverted[i] = true;
      pending = true;
    }
  }
  while (pending) {
    pending = false;
    for (const Edge& e : edges) {
      if (!active(e)) continue;
      if (out.reverted[e.i] != out.reverted[e.j]) {
        out.reverted[e.i] = out.reverted[e.j] = true;
        pending = true;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (out.reverted[i] || out.frozen[i]) out.x[i] = x[i];
  }
  return out;
}

RunSummary run(const DstScenario& s, const StepObserver& observe) {
  validate(s);
  const std::size_t n = s.graph.node_count();
  const Matrix lap = laplacian(s.graph);
  LoadGenerator load(s.load, n, s.seed, s.gamma);
  const std::vector<Vector> shares = client_shares(s);

  Vector x = s.initial_limits;
  Vector a(n);
  RunSummary out;
  out.l_total = sum(x);
  const std::size_t half = s.horizon / 2;
  std::size_t dispersion_samples = 0;

  for (std::size_t k = 0;; ++k) {
    const Vector& r = load.current();
    try {
      if (s.measure_case == MeasureCase::II || s.measure_case == MeasureCase::III) {
        require_positive(r, "demand");
      }
      if (s.measure_case == MeasureCase::III) require_positive(x, "limit");
    } catch (const Error& e) {
      throw Error(e.code(), std::string(e.what()) + " at step " + std::to_string(k), k);
    }

    const Vector p = performance(s.measure_case, x, r);
    double r_total = 0.0;
    double a_total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = std::min(x[i], r[i]);
      r_total += r[i];
      a_total += a[i];
    }
    const double ideal = std::min(out.l_total, r_total);
    out.sum_ideal += ideal;
    out.sum_accepted += a_total;
    out.max_conservation_residual =
        std::max(out.max_conservation_residual, std::abs(sum(x) - out.l_total));
    if (k > half || s.horizon == 0) {
      out.mean_dispersion += dispersion(p);
      ++dispersion_samples;
    }

    for (std::size_t i = 0; i < shares.size(); ++i) {
      ClientDemands d;
      d.requests.resize(shares[i].size());
      for (std::size_t j = 0; j < shares[i].size(); ++j) d.requests[j] = shares[i][j] * r[i];
      d.server_limit = std::max(x[i], 0.0);
      const Allocation alloc = s.node_algorithm == NodeAlgorithm::waterfill
                                   ? waterfill_split(d)
                                   : proportional_split(d);
      const Vector acc = accepted(d, alloc);
      const double served = sum(acc);
      out.client_allocation_residual =
          std::max(out.client_allocation_residual,
                   std::abs(served - std::min(d.server_limit, r[i])));
    }

    if (observe) observe(StepView{k, x, r, p, a});

    if (k == s.horizon) {
      out.steps = k + 1;
      out.final_spread = spread(p);
      break;
    }

    try {
      switch (s.measure_case) {
        case MeasureCase::I: x = step_case1(x, r, lap, s.gamma); break;
        case MeasureCase::II: x = step_case2(x, r, lap, s.gamma); break;
        case MeasureCase::III: x = step_case3(x, r, lap, s.gamma); break;
        case MeasureCase::IV: x = step_case4(x, r, s.graph, s.gamma).x; break;
      }
    } catch (const Error& e) {
      throw Error(e.code(), std::string(e.what()) + " at step " + std::to_string(k), k);
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!(std::abs(x[i]) <= kBlowup)) {
        throw Error(ErrorCode::NumericalBlowup,
                    "limit diverged at node " + std::to_string(i) + " after step " +
                        std::to_string(k),
                    k + 1);
      }
    }
    load.advance();
  }

  if (dispersion_samples > 0) out.mean_dispersion /= static_cast<double>(dispersion_samples);
  if (out.sum_ideal > 0.0) {
    out.over_throttling_pct = (out.sum_ideal - out.sum_accepted) / out.sum_ideal * 100.0;
  }
  return out;
}

Trajectory simulate(const DstScenario& s) {
  Trajectory t;
  const std::size_t reserve = std::min<std::size_t>(s.horizon + 1, 1 << 20);
  t.x.reserve(reserve);
  t.r.reserve(reserve);
  t.p.reserve(reserve);
  t.a.reserve(reserve);
  t.summary = run(s, [&](const StepView& v) {
    t.x.emplace_back(v.x.begin(), v.x.end());
    t.r.emplace_back(v.r.begin(), v.r.end());
    t.p.emplace_back(v.p.begin(), v.p.end());
    t.a.emplace_back(v.a.begin(), v.a.end());
  });
  t.l_total = t.summary.l_total;
  for (std::size_t k = 0; k < t.x.size(); ++k) {
    const double r_total = sum(t.r[k]);
    t.r_total.push_back(r_total);
    t.a_total.push_back(sum(t.a[k]));
    t.a_ideal.push_back(std::min(t.l_total, r_total));
  }
  t.over_throttling_pct = t.summary.over_throttling_pct;
  return t;
}

double over_throttling_pct(const Trajectory& t) {
  double ideal = 0.0;
  double shortfall = 0.0;
  for (std::size_t k = 0; k < t.a_ideal.size(); ++k) {
    ideal += t.a_ideal[k];
    shortfall += t.a_ideal[k] - t.a_total[k];
  }
  if (!(ideal > 0.0)) {
    throw Error(ErrorCode::ZeroIdeal, "ideal accepted traffic sums to zero");
  }
  return shortfall / ideal * 100.0;
}

}  // namespace dst

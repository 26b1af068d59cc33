#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "dst/graph.hpp"
#include "dst/load.hpp"
#include "dst/matrix.hpp"

namespace dst {

// Nodal performance measure p_i(k) driving the limit updates.
enum class MeasureCase {
  I,    // throttled amount r - x
  II,   // throttled ratio (r - x) / r
  III,  // log ratio ln(r / x)
  IV,   // allowed amount x, with boundary freezing
};

enum class NodeAlgorithm { proportional, waterfill };

struct DstScenario {
  WeightedGraph graph;
  double gamma = 0.0;
  MeasureCase measure_case = MeasureCase::I;
  Vector initial_limits;
  LoadModel load;
  std::size_t horizon = 0;
  std::uint64_t seed = 0;
  // Empty: no client-level split. Otherwise one count per node.
  std::vector<std::size_t> clients_per_node;
  NodeAlgorithm node_algorithm = NodeAlgorithm::proportional;
};

inline constexpr std::size_t kMaxHorizon = 10'000'000;

// Rejects scenarios that break the model's preconditions before any step runs.
void validate(const DstScenario& s);

// Per-step state handed to observers; spans are valid only during the call.
struct StepView {
  std::size_t k;
  std::span<const double> x;
  std::span<const double> r;
  std::span<const double> p;
  std::span<const double> a;
};

using StepObserver = std::function<void(const StepView&)>;

struct RunSummary {
  std::size_t steps = 0;
  double l_total = 0.0;
  double sum_ideal = 0.0;
  double sum_accepted = 0.0;
  std::optional<double> over_throttling_pct;  // unset when sum_ideal == 0
  double max_conservation_residual = 0.0;
  double final_spread = 0.0;    // max_i p_i - min_i p_i at the last step
  double mean_dispersion = 0.0; // mean of (1/2n) sum_ij (p_i - p_j)^2 over the second half
  double client_allocation_residual = 0.0;
};

// Runs the scenario, calling `observe` for k = 0..horizon. Throws
// CaseDomainViolation / NumericalBlowup with the offending step.
RunSummary run(const DstScenario& s, const StepObserver& observe = {});

struct Trajectory {
  std::vector<Vector> x;
  std::vector<Vector> r;
  std::vector<Vector> p;
  std::vector<Vector> a;
  Vector r_total;
  Vector a_total;
  Vector a_ideal;
  double l_total = 0.0;
  std::optional<double> over_throttling_pct;
  RunSummary summary;

  std::size_t steps() const noexcept { return x.size(); }
};

Trajectory simulate(const DstScenario& s);

// sum_k (a_ideal - a_total) / sum_k a_ideal * 100. Throws ZeroIdeal.
double over_throttling_pct(const Trajectory& t);

// p(k) for the scenario's measure case.
Vector performance(MeasureCase c, std::span<const double> x, std::span<const double> r);

// Single-step updates. `lap` is the graph Laplacian.
Vector step_case1(std::span<const double> x, std::span<const double> r, const Matrix& lap,
                  double gamma);
Vector step_case2(std::span<const double> x, std::span<const double> r, const Matrix& lap,
                  double gamma);
// Log-ratio measure in limit form: x + gamma L (ln r - ln x).
Vector step_case3(std::span<const double> x, std::span<const double> r, const Matrix& lap,
                  double gamma);
// Log-ratio measure in normalized form for constant demand r_const:
// pbar = x / r_const, pbar' = pbar - (gamma / r_const) L ln pbar.
Vector step_case3_normalized(std::span<const double> pbar, const Matrix& lap, double gamma,
                             double r_const);

struct Case4Step {
  Vector x;
  std::vector<bool> frozen;
  // Nodes whose cluster update was dropped because boundary residue could
  // not be absorbed.
  std::vector<bool> reverted;
};

// Allowed-amount measure: x' = x + gamma L x with nodes frozen at their
// bounds (x_i = r_i pushing up, x_i = 0 pushing down). Frozen nodes' links
// are masked out for the step; overshoot past a bound is clamped and the
// residue passed to unfrozen neighbours in proportion to link weight.
Case4Step step_case4(std::span<const double> x, std::span<const double> r,
                     const WeightedGraph& g, double gamma);

}  // namespace dst

#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "dst/matrix.hpp"
#include "dst/rng.hpp"

namespace dst {

// Knot (step, value) of a piecewise-linear usage profile.
using UsageKnot = std::pair<double, double>;

class LoadModel {
 public:
  enum class Kind { steady, random_walk, usage_curve };

  LoadModel() = default;

  static LoadModel steady(Vector r);
  // r_i(k+1) = r_i(k) + v_i(k+1), v_i ~ N(0, sigma_i^2) per step (times gamma
  // when gamma_scaling is on). A step that would land below clamp_min is
  // reflected back above it.
  static LoadModel random_walk(Vector r0, Vector sigma, double clamp_min,
                               bool gamma_scaling);
  // One profile per node, knots sorted by step; held constant outside the
  // knot range.
  static LoadModel usage_curve(std::vector<std::vector<UsageKnot>> profiles);

  Kind kind() const noexcept { return kind_; }
  std::size_t node_count() const;

  const Vector& base() const noexcept { return base_; }
  const Vector& sigma() const noexcept { return sigma_; }
  double clamp_min() const noexcept { return clamp_min_; }
  bool gamma_scaling() const noexcept { return gamma_scaling_; }
  const std::vector<std::vector<UsageKnot>>& profiles() const noexcept {
    return profiles_;
  }

 private:
  Kind kind_ = Kind::steady;
  Vector base_;
  Vector sigma_;
  double clamp_min_ = 0.0;
  bool gamma_scaling_ = false;
  std::vector<std::vector<UsageKnot>> profiles_;
};

// Streams r(0), r(1), ... for a load model. Deterministic given the seed;
// node i draws from RNG stream i.
class LoadGenerator {
 public:
  LoadGenerator(const LoadModel& model, std::size_t n, std::uint64_t seed,
                double gamma = 1.0);

  const Vector& current() const noexcept { return r_; }
  std::size_t step() const noexcept { return k_; }
  void advance();

 private:
  void sample_curve();

  const LoadModel* model_;
  std::vector<CounterRng> rngs_;
  Vector r_;
  double step_sd_scale_ = 1.0;
  std::size_t k_ = 0;
};

// r(0..horizon), one vector per step.
std::vector<Vector> generate_load(const LoadModel& model, std::size_t n,
                                  std::size_t horizon, std::uint64_t seed,
                                  double gamma = 1.0);

}  // namespace dst

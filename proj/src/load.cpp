#include "dst/load.hpp"

#include <algorithm>
#include <cmath>

#include "dst/error.hpp"

namespace dst {

LoadModel LoadModel::steady(Vector r) {
  LoadModel m;
  m.kind_ = Kind::steady;
  m.base_ = std::move(r);
  return m;
}

LoadModel LoadModel::random_walk(Vector r0, Vector sigma, double clamp_min,
                                 bool gamma_scaling) {
  if (sigma.size() != r0.size()) {
    throw Error(ErrorCode::InvalidArgument, "random walk needs one sigma per node");
  }
  for (double s : sigma) {
    if (!(s >= 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma must be >= 0");
  }
  if (!(clamp_min >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "clamp_min must be >= 0");
  }
  for (double r : r0) {
    if (r < clamp_min) {
      throw Error(ErrorCode::InvalidArgument, "initial demand below clamp_min");
    }
  }
  LoadModel m;
  m.kind_ = Kind::random_walk;
  m.base_ = std::move(r0);
  m.sigma_ = std::move(sigma);
  m.clamp_min_ = clamp_min;
  m.gamma_scaling_ = gamma_scaling;
  return m;
}

LoadModel LoadModel::usage_curve(std::vector<std::vector<UsageKnot>> profiles) {
  for (auto& p : profiles) {
    if (p.empty()) throw Error(ErrorCode::InvalidArgument, "empty usage profile");
    if (!std::is_sorted(p.begin(), p.end(),
                        [](const UsageKnot& a, const UsageKnot& b) { return a.first < b.first; })) {
      throw Error(ErrorCode::InvalidArgument, "usage profile knots must be sorted by step");
    }
  }
  LoadModel m;
  m.kind_ = Kind::usage_curve;
  m.profiles_ = std::move(profiles);
  return m;
}

std::size_t LoadModel::node_count() const {
  return kind_ == Kind::usage_curve ? profiles_.size() : base_.size();
}

LoadGenerator::LoadGenerator(const LoadModel& model, std::size_t n, std::uint64_t seed,
                             double gamma)
    : model_(&model) {
  if (model.node_count() != n) {
    throw Error(ErrorCode::InvalidArgument, "load model has " +
                std::to_string(model.node_count()) + " nodes, graph has " +
                std::to_string(n));
  }
  rngs_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) rngs_.emplace_back(seed, i);
  if (model.kind() == LoadModel::Kind::random_walk && model.gamma_scaling()) {
    step_sd_scale_ = std::sqrt(gamma);
  }
  if (model.kind() == LoadModel::Kind::usage_curve) {
    r_.resize(n);
    sample_curve();
  } else {
    r_ = model.base();
  }
}

void LoadGenerator::sample_curve() {
  const double t = static_cast<double>(k_);
  for (std::size_t i = 0; i < r_.size(); ++i) {
    const auto& p = model_->profiles()[i];
    if (t <= p.front().first) {
      r_[i] = p.front().second;
    } else if (t >= p.back().first) {
      r_[i] = p.back().second;
    } else {
      const auto hi = std::upper_bound(
          p.begin(), p.end(), t, [](double v, const UsageKnot& kn) { return v < kn.first; });
      const auto lo = hi - 1;
      const double f = (t - lo->first) / (hi->first - lo->first);
      r_[i] = lo->second + f * (hi->second - lo->second);
    }
  }
}

void LoadGenerator::advance() {
  ++k_;
  switch (model_->kind()) {
    case LoadModel::Kind::steady:
      break;
    case LoadModel::Kind::random_walk: {
      const double floor = model_->clamp_min();
      for (std::size_t i = 0; i < r_.size(); ++i) {
        const double sd = model_->sigma()[i] * step_sd_scale_;
        if (sd == 0.0) continue;
        double next = r_[i] + sd * rngs_[i].next_normal();
        if (next < floor) next = 2.0 * floor - next;
        r_[i] = next;
      }
      break;
    }
    case LoadModel::Kind::usage_curve:
      sample_curve();
      break;
  }
}

std::vector<Vector> generate_load(const LoadModel& model, std::size_t n,
                                  std::size_t horizon, std::uint64_t seed, double gamma) {
  LoadGenerator gen(model, n, seed, gamma);
  std::vector<Vector> out;
  out.reserve(horizon + 1);
  out.push_back(gen.current());
  for (std::size_t k = 0; k < horizon; ++k) {
    gen.advance();
    out.push_back(gen.current());
  }
  return out;
}

}  // namespace dst

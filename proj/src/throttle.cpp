#include "dst/throttle.hpp"

#include <algorithm>
#include <numeric>

#include "dst/error.hpp"

namespace dst {
namespace {

void validate(const ClientDemands& d) {
  if (d.requests.empty()) {
    throw Error(ErrorCode::InvalidArgument, "server needs at least one client");
  }
  for (double r : d.requests) {
    if (!(r >= 0.0)) throw Error(ErrorCode::InvalidArgument, "client demand must be >= 0");
  }
  if (!(d.server_limit >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "server limit must be >= 0");
  }
}

double total(const Vector& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

std::vector<std::size_t> ascending_order(const Vector& r) {
  std::vector<std::size_t> order(r.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return r[a] < r[b]; });
  return order;
}

double running_slack_level(const ClientDemands& d) {
  const std::vector<std::size_t> order = ascending_order(d.requests);
  const double c = static_cast<double>(d.requests.size());
  double s = 0.0;
  double l = d.server_limit / c;
  for (std::size_t j = 1; j <= order.size(); ++j) {
    const double rj = d.requests[order[j - 1]];
    if (l > rj && j < order.size()) {
      s = s - rj + l;
      l = s / (c - static_cast<double>(j)) + l;
    }
  }
  return l;
}

}  // namespace

Allocation proportional_split(const ClientDemands& d) {
  validate(d);
  const double sum = total(d.requests);
  Allocation a;
  if (sum <= d.server_limit) {
    a.limits = d.requests;
    return a;
  }
  const double ratio = d.server_limit / sum;
  a.limits.resize(d.requests.size());
  for (std::size_t j = 0; j < d.requests.size(); ++j) a.limits[j] = ratio * d.requests[j];
  return a;
}

double water_level(const ClientDemands& d) {
  validate(d);
  if (total(d.requests) < d.server_limit) {
    throw Error(ErrorCode::InvalidArgument,
                "water level is only defined when demand meets the limit");
  }
  const std::vector<std::size_t> order = ascending_order(d.requests);
  const std::size_t c = order.size();
  double below = 0.0;  // demand of clients fully served under the level
  for (std::size_t j = 0; j < c; ++j) {
    const double r = d.requests[order[j]];
    const double level = (d.server_limit - below) / static_cast<double>(c - j);
    if (level <= r) return level;
    below += r;
  }
  // Only reachable through rounding when total == limit.
  return d.requests[order.back()];
}

Allocation waterfill_split(const ClientDemands& d, WaterfillRule rule) {
  validate(d);
  Allocation a;
  if (total(d.requests) <= d.server_limit) {
    a.limits = d.requests;
    return a;
  }
  const double l = rule == WaterfillRule::exact ? water_level(d) : running_slack_level(d);
  a.limits.assign(d.requests.size(), l);
  a.water_level = l;
  return a;
}

Vector accepted(const ClientDemands& d, const Allocation& a) {
  Vector out(d.requests.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = std::min(a.limits[j], d.requests[j]);
  return out;
}

}  // namespace dst

#pragma once

#include <optional>

#include "dst/matrix.hpp"

namespace dst {

// Per-client request counts at one server and the server's current limit.
struct ClientDemands {
  Vector requests;
  double server_limit = 0.0;
};

struct Allocation {
  Vector limits;                      // per-client limit pushed to clients
  std::optional<double> water_level;  // set by waterfilling when it throttles
};

// Uniform throttled ratio: every client keeps limit/total of its demand.
Allocation proportional_split(const ClientDemands& d);

// The level l >= 0 with sum_j min(r_j, l) = limit, by one sorted prefix scan.
// Requires total demand >= limit.
double water_level(const ClientDemands& d);

enum class WaterfillRule {
  exact,
  // Running-slack recurrence. Can hand out more than the server limit
  // ((1,2,3,10) at limit 8 yields level 3); kept for comparison.
  running_slack,
};

// Throttle the largest demands first: every client gets the common level l.
Allocation waterfill_split(const ClientDemands& d,
                           WaterfillRule rule = WaterfillRule::exact);

// min(limit_j, request_j) per client.
Vector accepted(const ClientDemands& d, const Allocation& a);

}  // namespace dst

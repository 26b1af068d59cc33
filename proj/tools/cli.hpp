#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace dst::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 1,
  kUnstable = 2,
  kInfeasible = 3,
  kDomainViolation = 4,
};

// Sweep axis and its values: "AXIS=v1,v2,.." or "AXIS=start:stop:count".
struct SweepSpec {
  enum class Axis { gamma, edge_weight_scale, graph_file_list, seed };
  Axis axis = Axis::gamma;
  std::vector<std::variant<double, std::string>> values;
};

SweepSpec parse_sweep(const std::string& spec);

// Entry point shared by the binary and the tests. args excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dst::cli

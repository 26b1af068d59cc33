#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "dst/design.hpp"
#include "dst/dynamics.hpp"
#include "dst/error.hpp"
#include "dst/io.hpp"
#include "dst/measures.hpp"

namespace dst::cli {
namespace {

namespace fs = std::filesystem;
using io::json;

enum class LogLevel { quiet, info, debug };

LogLevel log_level() {
  const char* env = std::getenv("DST_LOG");
  if (env == nullptr) return LogLevel::quiet;
  const std::string v = env;
  if (v == "debug") return LogLevel::debug;
  if (v == "info") return LogLevel::info;
  return LogLevel::quiet;
}

struct Options {
  std::string verb;
  std::string graph;
  std::string scenario;
  std::optional<double> gamma;
  std::string noise = "iid:1";
  std::string gamma_scaling;  // "", "on", "off"
  std::string mode;
  std::string sweep;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool emit_plot_data = false;
  std::size_t max_iters = 0;
  double tol = 0.0;
  std::size_t threads = 0;
};

class Context {
 public:
  Context(const Options& o, std::ostream& out, std::ostream& err)
      : opts(o), out_(out), err_(err), level_(log_level()) {}

  void log(LogLevel at, const std::string& msg) {
    if (static_cast<int>(level_) >= static_cast<int>(at)) err_ << "[dst] " << msg << '\n';
  }

  void emit(const json& record, const char* file_name) {
    out_ << record.dump() << '\n';
    if (!opts.out.empty()) {
      std::ofstream f(output_path(file_name));
      f << record.dump() << '\n';
    }
  }

  fs::path output_path(const char* name) {
    const fs::path dir = opts.out;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create output directory '" + dir.string() + "'");
    return dir / name;
  }

  const Options& opts;
  std::ostream& out_;
  std::ostream& err_;

 private:
  LogLevel level_;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, what);
}

bool scaling_flag(const Options& o, bool fallback) {
  if (o.gamma_scaling.empty()) return fallback;
  return o.gamma_scaling == "on";
}

SolverConfig solver_config(const Options& o) {
  SolverConfig cfg;
  if (o.max_iters > 0) cfg.max_iters = o.max_iters;
  if (o.tol > 0.0) cfg.tol = o.tol;
  return cfg;
}

json with_phi(json summary, const DstScenario& s) {
  const SpectralData sd = spectrum(s.graph);
  summary["phi_cr"] = phi_cr(sd, s.gamma);
  const PhiSs phi = phi_ss_iid(sd, s.gamma, 1.0);
  summary["phi_ss"] = phi.is_finite() ? json(phi.value()) : json("inf");
  return summary;
}

int run_analyze(Context& ctx) {
  const Options& o = ctx.opts;
  require(!o.graph.empty(), "analyze needs --graph");
  require(o.gamma.has_value(), "analyze needs --gamma");
  const WeightedGraph g = read_graph_file(o.graph);
  const NoiseModel noise = io::parse_noise(o.noise, scaling_flag(o, true));
  const MeasureReport report = analyze(g, *o.gamma, noise);
  ctx.log(LogLevel::info, "analyzed " + o.graph);
  ctx.emit(io::to_json(report), "report.json");
  return report.phi_ss.is_finite() ? kOk : kUnstable;
}

int run_design(Context& ctx) {
  const Options& o = ctx.opts;
  require(!o.graph.empty(), "design needs --graph");
  std::string mode = o.mode;
  if (o.verb == "design-gamma") {
    if (mode.empty() || mode == "steady") mode = "gamma-steady";
    if (mode == "nonsteady") mode = "gamma-nonsteady";
    require(mode == "gamma-steady" || mode == "gamma-nonsteady",
            "design-gamma --mode must be steady or nonsteady");
  } else if (o.verb == "design-weights") {
    if (mode.empty()) mode = "fastest";
    require(mode == "fastest" || mode == "robust", "design-weights --mode must be fastest or robust");
  }
  require(!mode.empty(), "design needs --mode fastest|robust|gamma-steady|gamma-nonsteady");

  const WeightedGraph g = read_graph_file(o.graph);
  const SolverConfig cfg = solver_config(o);
  DesignResult result;
  if (mode == "gamma-steady") {
    result = optimal_gamma_steady(g);
  } else if (mode == "gamma-nonsteady") {
    result = optimal_gamma_nonsteady(g, io::parse_noise(o.noise, scaling_flag(o, false)), cfg);
  } else if (mode == "fastest") {
    require(o.gamma.has_value(), "--mode fastest needs --gamma");
    result = fastest_weights(g, *o.gamma, cfg);
  } else if (mode == "robust") {
    require(o.gamma.has_value(), "--mode robust needs --gamma");
    result = robust_weights(g, *o.gamma, io::parse_noise(o.noise, scaling_flag(o, false)), cfg);
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown design mode '" + mode + "'");
  }
  ctx.log(LogLevel::info, mode + " design finished after " +
                              std::to_string(result.iterations) + " iterations");
  json record = io::to_json(result);
  record["mode"] = mode;
  ctx.emit(record, "design.json");
  if (!result.weights.empty() && !o.out.empty()) {
    write_graph_file(ctx.output_path("graph.txt"), g.with_weights(result.weights));
  }
  return kOk;
}

DstScenario load_scenario(const Options& o) {
  require(!o.scenario.empty(), o.verb + " needs --scenario");
  DstScenario s = io::read_scenario_file(o.scenario);
  if (o.seed) s.seed = *o.seed;
  return s;
}

int run_simulate(Context& ctx) {
  const Options& o = ctx.opts;
  const DstScenario s = load_scenario(o);
  if (o.out.empty() && !o.emit_plot_data) {
    const RunSummary summary = run(s);
    ctx.emit(with_phi(io::to_json(summary), s), "summary.json");
    return kOk;
  }
  const Trajectory t = simulate(s);
  if (!o.out.empty()) {
    std::ofstream csv(ctx.output_path("trajectory.csv"));
    io::write_trajectory_csv(csv, t);
    if (o.emit_plot_data) {
      std::ofstream plot(ctx.output_path("plot.csv"));
      io::write_plot_data(plot, t);
    }
  } else {
    io::write_plot_data(ctx.out_, t);
  }
  ctx.emit(with_phi(io::to_json(t.summary), s), "summary.json");
  return kOk;
}

json sweep_row(const DstScenario& base, const SweepSpec& spec,
               const std::variant<double, std::string>& value) {
  json row;
  switch (spec.axis) {
    case SweepSpec::Axis::gamma: row["axis"] = "gamma"; break;
    case SweepSpec::Axis::edge_weight_scale: row["axis"] = "edge-weight-scale"; break;
    case SweepSpec::Axis::graph_file_list: row["axis"] = "graph-file-list"; break;
    case SweepSpec::Axis::seed: row["axis"] = "seed"; break;
  }
  std::visit([&](const auto& v) { row["value"] = v; }, value);
  try {
    DstScenario s = base;
    switch (spec.axis) {
      case SweepSpec::Axis::gamma:
        s.gamma = std::get<double>(value);
        break;
      case SweepSpec::Axis::edge_weight_scale:
        s.graph = s.graph.scaled(std::get<double>(value));
        break;
      case SweepSpec::Axis::graph_file_list:
        s.graph = read_graph_file(std::get<std::string>(value));
        break;
      case SweepSpec::Axis::seed:
        s.seed = static_cast<std::uint64_t>(std::get<double>(value));
        break;
    }
    const json summary = with_phi(io::to_json(run(s)), s);
    row.update(summary);
    row["error"] = nullptr;
  } catch (const Error& e) {
    row["error"] = std::string(to_string(e.code())) + ": " + e.what();
  }
  return row;
}

int run_sweep(Context& ctx) {
  const Options& o = ctx.opts;
  require(!o.sweep.empty(), "sweep needs --sweep");
  const DstScenario base = load_scenario(o);
  const SweepSpec spec = parse_sweep(o.sweep);
  std::vector<json> rows(spec.values.size());

  std::size_t workers = o.threads > 0 ? o.threads : std::thread::hardware_concurrency();
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(1, rows.size()));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      rows[i] = sweep_row(base, spec, spec.values[i]);
    }
  };
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }

  std::ostringstream body;
  for (const json& row : rows) body << row.dump() << '\n';
  ctx.out_ << body.str();
  if (!o.out.empty()) {
    std::ofstream f(ctx.output_path("sweep.jsonl"));
    f << body.str();
  }
  return kOk;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Unstable: return kUnstable;
    case ErrorCode::InfeasibleStart:
    case ErrorCode::NoInteriorOptimum: return kInfeasible;
    case ErrorCode::CaseDomainViolation:
    case ErrorCode::NumericalBlowup: return kDomainViolation;
    default: return kInputError;
  }
}

}  // namespace

SweepSpec parse_sweep(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) {
    throw Error(ErrorCode::Parse, "sweep spec must look like AXIS=VALUES");
  }
  const std::string axis = text.substr(0, eq);
  const std::string values = text.substr(eq + 1);
  SweepSpec spec;
  if (axis == "gamma") {
    spec.axis = SweepSpec::Axis::gamma;
  } else if (axis == "edge-weight-scale") {
    spec.axis = SweepSpec::Axis::edge_weight_scale;
  } else if (axis == "graph-file-list") {
    spec.axis = SweepSpec::Axis::graph_file_list;
  } else if (axis == "seed") {
    spec.axis = SweepSpec::Axis::seed;
  } else {
    throw Error(ErrorCode::Parse, "unknown sweep axis '" + axis + "'");
  }

  auto number = [](const std::string& tok) {
    try {
      std::size_t used = 0;
      const double v = std::stod(tok, &used);
      if (used != tok.size() || !std::isfinite(v)) throw std::invalid_argument(tok);
      return v;
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::Parse, "bad sweep value '" + tok + "'");
    }
  };

  if (spec.axis == SweepSpec::Axis::graph_file_list) {
    std::stringstream ss(values);
    std::string tok;
    while (std::getline(ss, tok, ',')) spec.values.emplace_back(tok);
  } else if (std::count(values.begin(), values.end(), ':') == 2) {
    const auto c1 = values.find(':');
    const auto c2 = values.find(':', c1 + 1);
    const double start = number(values.substr(0, c1));
    const double stop = number(values.substr(c1 + 1, c2 - c1 - 1));
    const double count = number(values.substr(c2 + 1));
    if (count < 1 || count != std::floor(count)) {
      throw Error(ErrorCode::Parse, "sweep grid count must be a positive integer");
    }
    const auto c = static_cast<std::size_t>(count);
    for (std::size_t i = 0; i < c; ++i) {
      const double f = c == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(c - 1);
      spec.values.emplace_back(start + f * (stop - start));
    }
  } else {
    std::stringstream ss(values);
    std::string tok;
    while (std::getline(ss, tok, ',')) spec.values.emplace_back(number(tok));
  }
  if (spec.values.empty()) throw Error(ErrorCode::Parse, "sweep has no values");
  return spec;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Analyze, design and simulate distributed system throttlers", "dst"};
  Options o;
  const std::vector<std::string> verbs = {"analyze", "design", "design-gamma",
                                          "design-weights", "simulate", "sweep"};
  app.add_option("verb", o.verb, "analyze | design | design-gamma | design-weights | simulate | sweep")
      ->required()
      ->check(CLI::IsMember(verbs));
  app.add_option("--graph", o.graph, "graph file (\"n m\" then \"i j w\" lines)");
  app.add_option("--scenario", o.scenario, "scenario JSON file");
  app.add_option("--gamma", o.gamma, "server update cycle")->check(CLI::PositiveNumber);
  app.add_option("--noise", o.noise, "iid:SIGMA | indep:S1,S2,.. | file:PATH (default iid:1)");
  app.add_option("--gamma-scaling", o.gamma_scaling,
                 "whether Cov(v) carries a factor gamma (default on for analyze, off for design)")
      ->check(CLI::IsMember({"on", "off"}));
  app.add_option("--mode", o.mode, "fastest | robust | gamma-steady | gamma-nonsteady");
  app.add_option("--sweep", o.sweep, "AXIS=v1,v2,.. or AXIS=start:stop:count");
  app.add_option("--seed", o.seed, "override the scenario seed");
  app.add_option("--out", o.out, "output directory");
  app.add_flag("--emit-plot-data", o.emit_plot_data, "write long-format plot CSV");
  app.add_option("--max-iters", o.max_iters, "solver iteration budget");
  app.add_option("--tol", o.tol, "solver tolerance");
  app.add_option("--threads", o.threads, "sweep worker threads (default: hardware)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  Context ctx(o, out, err);
  try {
    if (o.verb == "analyze") return run_analyze(ctx);
    if (o.verb == "simulate") return run_simulate(ctx);
    if (o.verb == "sweep") return run_sweep(ctx);
    return run_design(ctx);
  } catch (const Error& e) {
    err << "dst " << o.verb << ": " << to_string(e.code()) << ": " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "dst " << o.verb << ": " << e.what() << '\n';
    return kInputError;
  }
}

}  // namespace dst::cli

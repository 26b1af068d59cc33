#include "dst/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "dst/error.hpp"

namespace dst::io {
namespace {

json number_or_null(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

template <class T>
T get_required(const json& doc, const char* key) {
  if (!doc.contains(key)) {
    throw Error(ErrorCode::Parse, std::string("scenario is missing '") + key + "'");
  }
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("bad value for '") + key + "': " + e.what());
  }
}

Vector per_node(const json& v, std::size_t n, const char* key) {
  if (v.is_number()) return Vector(n, v.get<double>());
  try {
    return v.get<Vector>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::Parse, std::string("'") + key + "' must be a number or array");
  }
}

WeightedGraph parse_graph(const json& g, const std::filesystem::path& base_dir) {
  if (g.is_string()) {
    std::filesystem::path p = g.get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    return read_graph_file(p);
  }
  const auto n = get_required<std::size_t>(g, "n");
  std::vector<Edge> edges;
  for (const json& e : get_required<json>(g, "edges")) {
    if (!e.is_array() || e.size() != 3) {
      throw Error(ErrorCode::Parse, "edges must be [i, j, w] triples");
    }
    edges.push_back({e[0].get<std::size_t>(), e[1].get<std::size_t>(), e[2].get<double>()});
  }
  return WeightedGraph::build(n, std::move(edges));
}

LoadModel parse_load(const json& l, std::size_t n) {
  const auto kind = get_required<std::string>(l, "kind");
  if (kind == "steady") {
    return LoadModel::steady(per_node(get_required<json>(l, "r"), n, "r"));
  }
  if (kind == "random_walk") {
    return LoadModel::random_walk(per_node(get_required<json>(l, "r0"), n, "r0"),
                                  per_node(get_required<json>(l, "sigma"), n, "sigma"),
                                  l.value("clamp_min", 0.0), l.value("gamma_scaling", false));
  }
  if (kind == "usage_curve") {
    std::vector<std::vector<UsageKnot>> profiles;
    for (const json& prof : get_required<json>(l, "profiles")) {
      std::vector<UsageKnot> knots;
      for (const json& kn : prof) knots.emplace_back(kn.at(0).get<double>(), kn.at(1).get<double>());
      profiles.push_back(std::move(knots));
    }
    return LoadModel::usage_curve(std::move(profiles));
  }
  throw Error(ErrorCode::Parse, "unknown load kind '" + kind + "'");
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json to_json(const MeasureReport& r) {
  json j;
  j["phi_cr"] = r.phi_cr;
  j["phi_ss"] = r.phi_ss.is_finite() ? json(r.phi_ss.value()) : json("inf");
  j["stable"] = r.stable;
  j["centrality"] = r.centrality;
  j["resistance_limit"] = r.resistance_limit;
  return j;
}

json to_json(const DesignResult& r) {
  json j;
  if (r.gamma) j["gamma"] = *r.gamma;
  if (!r.weights.empty()) j["weights"] = r.weights;
  j["objective"] = r.objective;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["kkt_residual"] = r.kkt_residual;
  return j;
}

json to_json(const RunSummary& s) {
  json j;
  j["steps"] = s.steps;
  j["l_total"] = s.l_total;
  j["over_throttling_pct"] = number_or_null(s.over_throttling_pct);
  j["final_spread"] = s.final_spread;
  j["conservation_residual"] = s.max_conservation_residual;
  j["mean_dispersion"] = s.mean_dispersion;
  j["client_allocation_residual"] = s.client_allocation_residual;
  return j;
}

MeasureCase parse_case(std::string_view s) {
  if (s == "I" || s == "1") return MeasureCase::I;
  if (s == "II" || s == "2") return MeasureCase::II;
  if (s == "III" || s == "3") return MeasureCase::III;
  if (s == "IV" || s == "4") return MeasureCase::IV;
  throw Error(ErrorCode::Parse, "unknown case '" + std::string(s) + "'");
}

const char* to_string(MeasureCase c) {
  switch (c) {
    case MeasureCase::I: return "I";
    case MeasureCase::II: return "II";
    case MeasureCase::III: return "III";
    case MeasureCase::IV: return "IV";
  }
  return "?";
}

DstScenario parse_scenario(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw Error(ErrorCode::Parse, "scenario must be a JSON object");
  WeightedGraph graph = parse_graph(get_required<json>(doc, "graph"), base_dir);
  const std::size_t n = graph.node_count();
  DstScenario s{.graph = std::move(graph)};
  s.gamma = get_required<double>(doc, "gamma");
  const json& c = get_required<json>(doc, "case");
  s.measure_case = parse_case(c.is_number() ? std::to_string(c.get<int>()) : c.get<std::string>());
  s.initial_limits = per_node(get_required<json>(doc, "initial_limits"), n, "initial_limits");
  s.load = parse_load(get_required<json>(doc, "load"), n);
  s.horizon = get_required<std::size_t>(doc, "horizon");
  s.seed = doc.value("seed", std::uint64_t{0});
  if (doc.contains("clients_per_node")) {
    const json& cp = doc.at("clients_per_node");
    if (cp.is_number()) {
      s.clients_per_node.assign(n, cp.get<std::size_t>());
    } else {
      s.clients_per_node = cp.get<std::vector<std::size_t>>();
    }
  }
  const std::string alg = doc.value("node_algorithm", std::string("proportional"));
  if (alg == "proportional") {
    s.node_algorithm = NodeAlgorithm::proportional;
  } else if (alg == "waterfill") {
    s.node_algorithm = NodeAlgorithm::waterfill;
  } else {
    throw Error(ErrorCode::Parse, "unknown node_algorithm '" + alg + "'");
  }
  validate(s);
  return s;
}

DstScenario read_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open scenario file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, path.string() + ": " + e.what());
  }
  try {
    return parse_scenario(doc, path.parent_path());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, path.string() + ": " + e.what());
  }
}

NoiseModel parse_noise(std::string_view spec, bool gamma_scaling) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorCode::Parse, "noise spec must look like iid:SIGMA, indep:S1,S2,.. or file:PATH");
  }
  const std::string kind(spec.substr(0, colon));
  const std::string rest(spec.substr(colon + 1));
  if (kind == "iid") {
    try {
      std::size_t used = 0;
      const double sigma = std::stod(rest, &used);
      if (used != rest.size()) throw std::invalid_argument(rest);
      return NoiseModel::iid(sigma, gamma_scaling);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::Parse, "bad sigma '" + rest + "'");
    }
  }
  if (kind == "indep") {
    Vector sigmas;
    std::stringstream ss(rest);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        sigmas.push_back(std::stod(tok));
      } catch (const std::logic_error&) {
        throw Error(ErrorCode::Parse, "bad sigma '" + tok + "'");
      }
    }
    return NoiseModel::independent(std::move(sigmas), gamma_scaling);
  }
  if (kind == "file") {
    std::ifstream in(rest);
    if (!in) throw Error(ErrorCode::Io, "cannot open covariance file '" + rest + "'");
    std::vector<Vector> rows;
    std::string line;
    while (std::getline(in, line)) {
      std::istringstream ls(line);
      Vector row;
      double v = 0.0;
      while (ls >> v) row.push_back(v);
      if (!ls.eof()) throw Error(ErrorCode::Parse, rest + ": non-numeric entry");
      if (!row.empty()) rows.push_back(std::move(row));
    }
    const std::size_t n = rows.size();
    Matrix cov(n, n);
    for (std::size_t r = 0; r < n; ++r) {
      if (rows[r].size() != n) {
        throw Error(ErrorCode::Parse, rest + ": covariance must be square");
      }
      for (std::size_t c = 0; c < n; ++c) cov(r, c) = rows[r][c];
    }
    return NoiseModel::general(std::move(cov), gamma_scaling);
  }
  throw Error(ErrorCode::Parse, "unknown noise kind '" + kind + "'");
}

void write_trajectory_csv(std::ostream& out, const Trajectory& t) {
  const std::size_t n = t.x.empty() ? 0 : t.x.front().size();
  out << 'k';
  for (const char* prefix : {"x_", "r_", "a_"})
    for (std::size_t i = 0; i < n; ++i) out << ',' << prefix << i;
  out << ",r_total,a_total,a_ideal\n";
  for (std::size_t k = 0; k < t.steps(); ++k) {
    out << k;
    for (const auto* series : {&t.x, &t.r, &t.a})
      for (double v : (*series)[k]) out << ',' << format_double(v);
    out << ',' << format_double(t.r_total[k]) << ',' << format_double(t.a_total[k]) << ','
        << format_double(t.a_ideal[k]) << '\n';
  }
}

void write_plot_data(std::ostream& out, const Trajectory& t) {
  out << "k,series,value\n";
  for (std::size_t k = 0; k < t.steps(); ++k) {
    out << k << ",r_total," << format_double(t.r_total[k]) << '\n';
    out << k << ",l_total," << format_double(t.l_total) << '\n';
    out << k << ",a_total," << format_double(t.a_total[k]) << '\n';
    out << k << ",a_ideal," << format_double(t.a_ideal[k]) << '\n';
  }
}

}  // namespace dst::io

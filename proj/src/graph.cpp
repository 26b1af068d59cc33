#include "dst/graph.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>

#include "dst/error.hpp"

namespace dst {

bool is_connected(std::size_t n, std::span<const Edge> edges) {
  if (n == 0) return false;
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  };
  std::size_t components = n;
  for (const Edge& e : edges) {
    if (!(e.w > 0.0)) continue;
    const std::size_t a = find(e.i);
    const std::size_t b = find(e.j);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

WeightedGraph WeightedGraph::build(std::size_t n, std::vector<Edge> edges,
                                   WeightPolicy policy) {
  if (n < 2) {
    throw Error(ErrorCode::InvalidArgument, "graph needs at least 2 nodes");
  }
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const Edge& e : edges) {
    if (e.i >= n || e.j >= n) {
      throw Error(ErrorCode::IndexOutOfRange,
                  "edge (" + std::to_string(e.i) + ", " + std::to_string(e.j) +
                      ") out of range for n = " + std::to_string(n));
    }
    if (e.i == e.j) {
      throw Error(ErrorCode::SelfLoop,
                  "self-loop at node " + std::to_string(e.i));
    }
    const auto key = std::minmax(e.i, e.j);
    if (!seen.insert(key).second) {
      throw Error(ErrorCode::DuplicateEdge,
                  "duplicate edge (" + std::to_string(key.first) + ", " +
                      std::to_string(key.second) + ")");
    }
    const bool bad = policy == WeightPolicy::strict ? !(e.w > 0.0) : !(e.w >= 0.0);
    if (bad) {
      throw Error(ErrorCode::NonpositiveWeight,
                  "invalid weight on edge (" + std::to_string(e.i) + ", " +
                      std::to_string(e.j) + ")");
    }
  }
  if (!is_connected(n, edges)) {
    throw Error(ErrorCode::Disconnected, "graph is not connected");
  }
  return WeightedGraph(n, std::move(edges));
}

Vector WeightedGraph::weights() const {
  Vector w(edges_.size());
  for (std::size_t e = 0; e < edges_.size(); ++e) w[e] = edges_[e].w;
  return w;
}

WeightedGraph WeightedGraph::with_weights(std::span<const double> w) const {
  if (w.size() != edges_.size()) {
    throw Error(ErrorCode::InvalidArgument, "weight vector size mismatch");
  }
  std::vector<Edge> edges = edges_;
  for (std::size_t e = 0; e < edges.size(); ++e) edges[e].w = w[e];
  return build(n_, std::move(edges));
}

WeightedGraph WeightedGraph::scaled(double factor) const {
  Vector w = weights();
  for (double& v : w) v *= factor;
  return with_weights(w);
}

WeightedGraph read_graph(std::istream& in, WeightPolicy policy) {
  std::size_t n = 0;
  std::size_t m = 0;
  if (!(in >> n >> m)) {
    throw Error(ErrorCode::Parse, "expected header 'n m'");
  }
  std::vector<Edge> edges;
  edges.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    long long i = 0;
    long long j = 0;
    double w = 0.0;
    if (!(in >> i >> j >> w)) {
      throw Error(ErrorCode::Parse, "expected 'i j w' for edge " +
                                        std::to_string(k + 1) + " of " +
                                        std::to_string(m));
    }
    if (i < 0 || j < 0) {
      throw Error(ErrorCode::IndexOutOfRange, "negative node index");
    }
    edges.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j), w});
  }
  std::string trailing;
  if (in >> trailing) {
    throw Error(ErrorCode::Parse, "unexpected trailing content '" + trailing + "'");
  }
  return WeightedGraph::build(n, std::move(edges), policy);
}

WeightedGraph read_graph_file(const std::filesystem::path& path,
                              WeightPolicy policy) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::Io, "cannot open graph file '" + path.string() + "'");
  }
  try {
    return read_graph(in, policy);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void write_graph(std::ostream& out, const WeightedGraph& g) {
  out << g.node_count() << ' ' << g.edge_count() << '\n';
  char buf[64];
  for (const Edge& e : g.edges()) {
    std::snprintf(buf, sizeof buf, "%.17g", e.w);
    out << e.i << ' ' << e.j << ' ' << buf << '\n';
  }
}

void write_graph_file(const std::filesystem::path& path, const WeightedGraph& g) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::Io, "cannot write graph file '" + path.string() + "'");
  }
  write_graph(out, g);
}

WeightedGraph make_path(std::size_t n, double w) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, w});
  return WeightedGraph::build(n, std::move(edges));
}

WeightedGraph make_star(std::size_t n, double w) {
  std::vector<Edge> edges;
  for (std::size_t i = 1; i < n; ++i) edges.push_back({0, i, w});
  return WeightedGraph::build(n, std::move(edges));
}

WeightedGraph make_complete(std::size_t n, double w) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) edges.push_back({i, j, w});
  return WeightedGraph::build(n, std::move(edges));
}

WeightedGraph make_cycle(std::size_t n, double w) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, w});
  if (n == 2) edges.pop_back();
  return WeightedGraph::build(n, std::move(edges));
}

}  // namespace dst

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "dst/matrix.hpp"

namespace dst {

struct Edge {
  std::size_t i = 0;
  std::size_t j = 0;
  double w = 0.0;
};

enum class WeightPolicy {
  // w >= 0; zero-weight links are kept in the support (optimization iterates)
  allow_zero,
  // w > 0 on every link
  strict,
};

// Undirected simple connected graph with nonnegative link weights.
// Immutable once built; connectivity is checked by traversal over the
// positive-weight links.
class WeightedGraph {
 public:
  static WeightedGraph build(std::size_t n, std::vector<Edge> edges,
                             WeightPolicy policy = WeightPolicy::allow_zero);

  std::size_t node_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  Vector weights() const;

  // Same support, new weights (edge order preserved). Revalidated.
  WeightedGraph with_weights(std::span<const double> w) const;
  WeightedGraph scaled(double factor) const;

 private:
  WeightedGraph(std::size_t n, std::vector<Edge> edges)
      : n_(n), edges_(std::move(edges)) {}

  std::size_t n_ = 0;
  std::vector<Edge> edges_;
};

// True when the positive-weight links connect all n nodes.
bool is_connected(std::size_t n, std::span<const Edge> edges);

// Text format: "n m" then m lines "i j w", 0-based.
WeightedGraph read_graph(std::istream& in,
                         WeightPolicy policy = WeightPolicy::allow_zero);
WeightedGraph read_graph_file(const std::filesystem::path& path,
                              WeightPolicy policy = WeightPolicy::allow_zero);
void write_graph(std::ostream& out, const WeightedGraph& g);
void write_graph_file(const std::filesystem::path& path, const WeightedGraph& g);

WeightedGraph make_path(std::size_t n, double w = 1.0);
WeightedGraph make_star(std::size_t n, double w = 1.0);  // node 0 is the hub
WeightedGraph make_complete(std::size_t n, double w = 1.0);
WeightedGraph make_cycle(std::size_t n, double w = 1.0);

}  // namespace dst

#include <random>
#include <sstream>

#include "doctest.h"
#include "dst/error.hpp"
#include "dst/graph.hpp"
#include "dst/spectral.hpp"
#include "oracles.hpp"

using namespace dst;
using doctest::Approx;

namespace {

ErrorCode build_error(std::size_t n, std::vector<Edge> edges,
                      WeightPolicy policy = WeightPolicy::allow_zero) {
  try {
    WeightedGraph::build(n, std::move(edges), policy);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

WeightedGraph triangle() { return make_complete(3); }

}  // namespace

TEST_CASE("build accepts the smallest connected graph") {
  const auto g = WeightedGraph::build(2, {{0, 1, 1.0}});
  CHECK(g.node_count() == 2);
  CHECK(g.edge_count() == 1);
}

TEST_CASE("build K5 with uniform 1/5 weights") {
  std::vector<Edge> e;
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = i + 1; j < 5; ++j) e.push_back({i, j, 0.2});
  const auto g = WeightedGraph::build(5, e, WeightPolicy::strict);
  CHECK(g.edge_count() == 10);
  for (double w : g.weights()) CHECK(w == 0.2);
}

TEST_CASE("build validation") {
  CHECK(build_error(3, {{0, 1, 1}, {1, 2, 1}, {0, 1, 2}}) == ErrorCode::DuplicateEdge);
  CHECK(build_error(3, {{0, 1, 1}, {1, 0, 1}, {1, 2, 1}}) == ErrorCode::DuplicateEdge);
  CHECK(build_error(2, {{1, 1, 1}, {0, 1, 1}}) == ErrorCode::SelfLoop);
  CHECK(build_error(3, {{0, 1, 1}}) == ErrorCode::Disconnected);
  CHECK(build_error(2, {{0, 2, 1}}) == ErrorCode::IndexOutOfRange);
  CHECK(build_error(2, {{0, 1, -1}}) == ErrorCode::NonpositiveWeight);
  CHECK(build_error(3, {{0, 1, 1}, {1, 2, 0}}, WeightPolicy::strict) == ErrorCode::NonpositiveWeight);
  // zero-weight link is allowed in the support but does not connect
  CHECK(build_error(3, {{0, 1, 1}, {1, 2, 0}}) == ErrorCode::Disconnected);
  CHECK(build_error(1, {}) == ErrorCode::InvalidArgument);
}

TEST_CASE("laplacian entries") {
  const Matrix p2 = laplacian(make_path(2));
  CHECK(p2(0, 0) == 1.0);
  CHECK(p2(0, 1) == -1.0);
  CHECK(p2(1, 0) == -1.0);
  CHECK(p2(1, 1) == 1.0);

  const Matrix t = laplacian(triangle());
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(t(i, j) == (i == j ? 2.0 : -1.0));

  const Matrix s = laplacian(make_star(5, 1.0 / 3.0));
  const auto o = oracle::laplacian(make_star(5, 1.0 / 3.0));
  CHECK(s(0, 0) == Approx(4.0 / 3.0));
  for (std::size_t i = 1; i < 5; ++i) CHECK(s(i, i) == Approx(1.0 / 3.0));
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) CHECK(s(i, j) == Approx(o[i][j]));
}

TEST_CASE("spectrum examples") {
  const auto p2 = spectrum(make_path(2));
  CHECK(std::abs(p2.values[0]) < 1e-12);
  CHECK(p2.values[1] == Approx(2.0).epsilon(1e-12));

  // det(lambda I - L) for P3 is lambda (lambda - 1)(lambda - 3)
  const auto p3 = spectrum(make_path(3));
  CHECK(std::abs(p3.values[0]) < 1e-12);
  CHECK(p3.values[1] == Approx(1.0).epsilon(1e-12));
  CHECK(p3.values[2] == Approx(3.0).epsilon(1e-12));

  // L_K5 = 5I - J: every vector orthogonal to 1 has eigenvalue 5
  const auto k5 = spectrum(make_complete(5));
  CHECK(std::abs(k5.values[0]) < 1e-12);
  for (std::size_t i = 1; i < 5; ++i) CHECK(k5.values[i] == Approx(5.0).epsilon(1e-12));
}

TEST_CASE("spectral invariants on random graphs") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 2 + rng() % 49;
    const auto g = oracle::random_graph(rng, n, 0.15);
    const Matrix l = laplacian(g);
    const auto sd = spectrum(g);
    REQUIRE(sd.size() == n);
    CHECK(std::abs(sd.values[0]) <= 1e-9);
    CHECK(sd.values[1] > 0.0);
    for (std::size_t i = 1; i < n; ++i) CHECK(sd.values[i - 1] <= sd.values[i]);

    // rows of L sum to zero
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (double v : l.row(i)) s += v;
      CHECK(std::abs(s) <= 1e-12);
    }

    const Matrix& v = sd.vectors;
    double recon = 0.0, ortho = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        double a = 0.0, o = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          a += v(i, k) * sd.values[k] * v(j, k);
          o += v(k, i) * v(k, j);
        }
        recon = std::max(recon, std::abs(a - l(i, j)));
        ortho = std::max(ortho, std::abs(o - (i == j ? 1.0 : 0.0)));
      }
    }
    CHECK(recon <= 1e-9 * std::max(1.0, max_abs(l)));
    CHECK(ortho <= 1e-9);
  }
}

TEST_CASE("jacobi handles a general symmetric matrix") {
  Matrix a(3, 3);
  const double vals[3][3] = {{4, 1, -2}, {1, 2, 0}, {-2, 0, 3}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = vals[i][j];
  const auto sd = symmetric_eigen(a);
  // trace and determinant are spectral invariants
  CHECK(sd.values[0] + sd.values[1] + sd.values[2] == Approx(9.0));
  CHECK(sd.values[0] * sd.values[1] * sd.values[2] == Approx(4 * 6 - 1 * 3 - 2 * 4));
}

TEST_CASE("jacobi reports an exhausted sweep budget") {
  const Matrix l = laplacian(make_cycle(12));
  try {
    symmetric_eigen(l, {.rel_tol = 1e-300, .max_sweeps = 1});
    FAIL("expected NoConvergence");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoConvergence);
  }
}

TEST_CASE("pseudoinverse") {
  const Matrix p = pseudoinverse(laplacian(make_path(2)));
  CHECK(p(0, 0) == Approx(0.25));
  CHECK(p(0, 1) == Approx(-0.25));
  CHECK(p(1, 0) == Approx(-0.25));
  CHECK(p(1, 1) == Approx(0.25));

  // K5: L^dagger = (5I - J)/25
  const Matrix k = pseudoinverse(laplacian(make_complete(5)));
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j)
      CHECK(k(i, j) == Approx(((i == j ? 5.0 : 0.0) - 1.0) / 25.0));

  std::mt19937_64 rng(3);
  for (int t = 0; t < 30; ++t) {
    const auto g = oracle::random_graph(rng, 3 + rng() % 15, 0.3);
    const Matrix l = laplacian(g);
    const Matrix lp = pseudoinverse(l);
    CHECK(max_abs(l * lp * l - l) <= 1e-8 * std::max(1.0, max_abs(l)));
    const Vector ones(g.node_count(), 1.0);
    CHECK(max_abs(lp * ones) <= 1e-8);
    const Matrix sp = shifted_pseudoinverse(spectrum(g), 0.0);
    CHECK(max_abs(sp - lp) <= 1e-8 * std::max(1.0, max_abs(lp)));
  }
}

TEST_CASE("pseudoinverse rejects a singular Laplacian") {
  Matrix l(3, 3);
  l(0, 0) = l(1, 1) = 1;
  l(0, 1) = l(1, 0) = -1;
  CHECK_THROWS_AS(pseudoinverse(l), Error);
}

TEST_CASE("effective resistance") {
  CHECK(effective_resistance(make_path(3), 0, 2) == Approx(2.0));
  for (auto [i, j] : {std::pair{0, 1}, {0, 2}, {1, 2}})
    CHECK(effective_resistance(triangle(), i, j) == Approx(2.0 / 3.0));
  CHECK(effective_resistance(make_complete(5), 1, 3) == Approx(0.4));
  CHECK(effective_resistance(make_complete(5), 1, 3) == Approx(oracle::resistance(make_complete(5), 1, 3)));
  try {
    effective_resistance(triangle(), 1, 1);
    FAIL("expected SameNode");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SameNode);
  }
}

TEST_CASE("effective resistance is a symmetric metric") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const auto g = oracle::random_graph(rng, 4 + rng() % 8, 0.3);
    const std::size_t n = g.node_count();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const double rij = effective_resistance(g, i, j);
        CHECK(rij >= 0.0);
        CHECK(rij == Approx(effective_resistance(g, j, i)));
        CHECK(rij == Approx(oracle::resistance(g, i, j)).epsilon(1e-9));
        for (std::size_t k = 0; k < n; ++k) {
          if (k == i || k == j) continue;
          CHECK(effective_resistance(g, i, k) <= rij + effective_resistance(g, j, k) + 1e-12);
        }
      }
  }
}

TEST_CASE("total effective resistance") {
  CHECK(total_effective_resistance(make_path(2)) == Approx(1.0));
  CHECK(total_effective_resistance(triangle()) == Approx(2.0));
  CHECK(total_effective_resistance(make_path(3)) == Approx(4.0));

  std::mt19937_64 rng(9);
  for (int t = 0; t < 20; ++t) {
    const auto g = oracle::random_graph(rng, 3 + rng() % 20, 0.2);
    const auto sd = spectrum(g);
    double s = 0.0;
    for (std::size_t i = 1; i < sd.size(); ++i) s += 1.0 / sd.values[i];
    const double spectral = static_cast<double>(g.node_count()) * s;
    CHECK(std::abs(total_effective_resistance(g) - spectral) <= 1e-8 * spectral);
  }
}

TEST_CASE("graph text format round trip") {
  std::istringstream in("3 2\n0 1 0.5\n1 2 1.25\n");
  const auto g = read_graph(in);
  CHECK(g.node_count() == 3);
  CHECK(g.edges()[1].w == 1.25);
  const auto w = make_complete(4, 1.0 / 3.0);
  std::ostringstream out;
  write_graph(out, w);
  std::istringstream back(out.str());
  const auto r = read_graph(back);
  CHECK(r.weights() == w.weights());

  std::istringstream bad("3 2\n0 1 x\n");
  CHECK_THROWS_AS(read_graph(bad), Error);
  CHECK_THROWS_AS(read_graph_file("/nonexistent/graph.txt"), Error);
}

TEST_CASE("with_weights keeps the support and revalidates") {
  const auto g = make_path(3);
  const double w[] = {2.0, 3.0};
  const auto h = g.with_weights(w);
  CHECK(h.edges()[0].w == 2.0);
  CHECK(h.edges()[1].w == 3.0);
  const double z[] = {0.0, 1.0};
  CHECK_THROWS_AS(g.with_weights(z), Error);
  CHECK(g.scaled(2.0).weights() == Vector{2.0, 2.0});
}

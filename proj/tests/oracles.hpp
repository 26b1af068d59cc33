#pragma once

// Reference computations for the tests. Deliberately naive and independent of
// the library's numerics: Gauss-Jordan inverses, bisection, progressive
// filling, brute-force grids.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "dst/graph.hpp"

namespace oracle {

using Dense = std::vector<std::vector<double>>;

inline Dense zeros(std::size_t n) { return Dense(n, std::vector<double>(n, 0.0)); }

inline Dense laplacian(const dst::WeightedGraph& g) {
  Dense l = zeros(g.node_count());
  for (const auto& e : g.edges()) {
    l[e.i][e.i] += e.w;
    l[e.j][e.j] += e.w;
    l[e.i][e.j] -= e.w;
    l[e.j][e.i] -= e.w;
  }
  return l;
}

inline Dense mul(const Dense& a, const Dense& b) {
  const std::size_t n = a.size();
  Dense c = zeros(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

inline Dense gauss_jordan_inverse(Dense a) {
  const std::size_t n = a.size();
  Dense inv = zeros(n);
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (std::abs(a[piv][col]) < 1e-300) throw std::runtime_error("singular");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    const double d = a[col][col];
    for (std::size_t j = 0; j < n; ++j) {
      a[col][j] /= d;
      inv[col][j] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r][col];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

// (A + J/n)^{-1} - J/n for a symmetric matrix whose null space is span{1}.
inline Dense shift_pinv(const Dense& a) {
  const std::size_t n = a.size();
  Dense s = a;
  for (auto& row : s)
    for (double& v : row) v += 1.0 / static_cast<double>(n);
  Dense inv = gauss_jordan_inverse(s);
  for (auto& row : inv)
    for (double& v : row) v -= 1.0 / static_cast<double>(n);
  return inv;
}

// L - (gamma/2) L^2 formed entrywise.
inline Dense dispersion_matrix(const dst::WeightedGraph& g, double gamma) {
  const Dense l = oracle::laplacian(g);
  const Dense l2 = mul(l, l);
  Dense m = l;
  for (std::size_t i = 0; i < l.size(); ++i)
    for (std::size_t j = 0; j < l.size(); ++j) m[i][j] -= 0.5 * gamma * l2[i][j];
  return m;
}

// (1/2 gamma) tr[M^dagger Cov], with Cov already in final convention.
inline double phi_ss(const dst::WeightedGraph& g, double gamma, const Dense& cov) {
  const Dense mp = shift_pinv(dispersion_matrix(g, gamma));
  double tr = 0.0;
  for (std::size_t i = 0; i < cov.size(); ++i)
    for (std::size_t j = 0; j < cov.size(); ++j) tr += mp[i][j] * cov[j][i];
  return tr / (2.0 * gamma);
}

inline Dense scaled_identity(std::size_t n, double s) {
  Dense d = zeros(n);
  for (std::size_t i = 0; i < n; ++i) d[i][i] = s;
  return d;
}

inline double resistance(const dst::WeightedGraph& g, std::size_t i, std::size_t j) {
  const Dense p = shift_pinv(oracle::laplacian(g));
  return p[i][i] + p[j][j] - p[i][j] - p[j][i];
}

// Largest |1 - gamma lambda| over the nontrivial spectrum, from the
// characteristic behaviour of powers: uses the matrix I - gamma L restricted
// to 1-perp and power iteration on (I - gamma L - J/n).
inline double phi_cr_power(const dst::WeightedGraph& g, double gamma, int iters = 20000) {
  const std::size_t n = g.node_count();
  const Dense l = oracle::laplacian(g);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  std::vector<double> v(n);
  for (double& x : v) x = nd(rng);
  double est = 0.0;
  for (int it = 0; it < iters; ++it) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(n);
    for (double& x : v) x -= mean;
    std::vector<double> w(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = v[i];
      for (std::size_t j = 0; j < n; ++j) w[i] -= gamma * l[i][j] * v[j];
    }
    double nv = 0.0, nw = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      nv += v[i] * v[i];
      nw += w[i] * w[i];
    }
    est = std::sqrt(nw / nv);
    const double s = 1.0 / std::sqrt(nw);
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] * s;
  }
  return est;
}

inline double bisect_level(const std::vector<double>& req, double limit) {
  double lo = 0.0;
  double hi = *std::max_element(req.begin(), req.end());
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    double s = 0.0;
    for (double r : req) s += std::min(r, mid);
    (s < limit ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Max-min fair shares by progressive filling: raise all unsatisfied clients
// together until the capacity or their demand runs out.
inline std::vector<double> progressive_filling(const std::vector<double>& req, double cap) {
  std::vector<double> got(req.size(), 0.0);
  std::vector<bool> done(req.size(), false);
  double left = cap;
  for (std::size_t j = 0; j < req.size(); ++j)
    if (req[j] <= 0.0) done[j] = true;
  while (left > 1e-15) {
    std::size_t active = 0;
    double inc = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < req.size(); ++j) {
      if (done[j]) continue;
      ++active;
      inc = std::min(inc, req[j] - got[j]);
    }
    if (active == 0) break;
    inc = std::min(inc, left / static_cast<double>(active));
    for (std::size_t j = 0; j < req.size(); ++j) {
      if (done[j]) continue;
      got[j] += inc;
      if (got[j] >= req[j] - 1e-15) done[j] = true;
    }
    left -= inc * static_cast<double>(active);
  }
  return got;
}

// Connected random graph: random spanning tree plus extra links.
inline dst::WeightedGraph random_graph(std::mt19937_64& rng, std::size_t n, double extra_p,
                                       double wmin = 0.1, double wmax = 2.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<dst::Edge> edges;
  std::vector<std::vector<bool>> has(n, std::vector<bool>(n, false));
  auto w = [&] { return wmin + (wmax - wmin) * u(rng); };
  for (std::size_t v = 1; v < n; ++v) {
    const std::size_t parent = static_cast<std::size_t>(u(rng) * static_cast<double>(v));
    edges.push_back({parent, v, w()});
    has[parent][v] = has[v][parent] = true;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!has[i][j] && u(rng) < extra_p) edges.push_back({i, j, w()});
  return dst::WeightedGraph::build(n, std::move(edges), dst::WeightPolicy::strict);
}

inline dst::WeightedGraph random_tree(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<dst::Edge> edges;
  for (std::size_t v = 1; v < n; ++v)
    edges.push_back({static_cast<std::size_t>(u(rng) * static_cast<double>(v)), v, 1.0});
  return dst::WeightedGraph::build(n, std::move(edges));
}

inline Dense random_psd(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> nd;
  Dense b = zeros(n);
  for (auto& row : b)
    for (double& v : row) v = nd(rng);
  Dense c = zeros(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) c[i][j] += b[i][k] * b[j][k] / static_cast<double>(n);
  return c;
}

inline double golden_min(const std::function<double(double)>& f, double a, double b,
                         double tol = 1e-12) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - r * (b - a), d = a + r * (b - a);
  while (b - a > tol) {
    if (f(c) < f(d)) {
      b = d;
    } else {
      a = c;
    }
    c = b - r * (b - a);
    d = a + r * (b - a);
  }
  return 0.5 * (a + b);
}

}  // namespace oracle

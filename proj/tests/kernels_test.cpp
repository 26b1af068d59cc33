#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "dst/kernels.hpp"
#include "dst/measures.hpp"
#include "dst/spectral.hpp"

using namespace dst;

namespace {

std::vector<const kernels::KernelTable*> variants() {
  std::vector<const kernels::KernelTable*> v;
  if (auto* t = kernels::avx2_table()) v.push_back(t);
  if (auto* t = kernels::neon_table()) v.push_back(t);
  return v;
}

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// sizes around the vector width and its remainders
const std::size_t kSizes[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 64, 101, 200};

}  // namespace

TEST_CASE("scalar table is always present") {
  CHECK(std::string(kernels::scalar_table().name) == "scalar");
  CHECK(kernels::select("scalar"));
  CHECK(std::string(kernels::active().name) == "scalar");
  CHECK_FALSE(kernels::select("bogus"));
  CHECK(kernels::select("auto"));
}

TEST_CASE("simd kernels match the scalar reference") {
  const auto& ref = kernels::scalar_table();
  std::mt19937_64 rng(42);
  for (const auto* t : variants()) {
    CAPTURE(t->name);
    for (std::size_t n : kSizes) {
      CAPTURE(n);
      const auto x = random_vec(rng, n);
      const auto y = random_vec(rng, n);

      const double d0 = ref.dot(x.data(), y.data(), n);
      const double d1 = t->dot(x.data(), y.data(), n);
      CHECK(std::abs(d0 - d1) <= 1e-13 * (1.0 + static_cast<double>(n)));

      auto y0 = y, y1 = y;
      ref.axpy(0.37, x.data(), y0.data(), n);
      t->axpy(0.37, x.data(), y1.data(), n);
      CHECK(max_diff(y0, y1) <= 1e-15);

      auto a0 = x, b0 = y, a1 = x, b1 = y;
      ref.rotate(a0.data(), b0.data(), 0.8, 0.6, n);
      t->rotate(a1.data(), b1.data(), 0.8, 0.6, n);
      CHECK(max_diff(a0, a1) <= 1e-15);
      CHECK(max_diff(b0, b1) <= 1e-15);

      const std::size_t rows = n % 13 + 1;
      const auto a = random_vec(rng, rows * n);
      std::vector<double> m0(rows), m1(rows);
      ref.matvec(a.data(), x.data(), m0.data(), rows, n);
      t->matvec(a.data(), x.data(), m1.data(), rows, n);
      CHECK(max_diff(m0, m1) <= 1e-13 * (1.0 + static_cast<double>(n)));
    }
    for (std::size_t m : {1, 3, 8, 17}) {
      for (std::size_t k : {1, 4, 9}) {
        for (std::size_t n : {1, 5, 8, 13, 33}) {
          const auto a = random_vec(rng, m * k);
          const auto b = random_vec(rng, k * n);
          std::vector<double> c0(m * n, 9.0), c1(m * n, -9.0);
          ref.gemm(a.data(), b.data(), c0.data(), m, k, n);
          t->gemm(a.data(), b.data(), c1.data(), m, k, n);
          CHECK(max_diff(c0, c1) <= 1e-13 * static_cast<double>(k));
        }
      }
    }
  }
}

TEST_CASE("scalar reference values") {
  const auto& ref = kernels::scalar_table();
  const double x[] = {1, 2, 3};
  const double y[] = {4, 5, 6};
  CHECK(ref.dot(x, y, 3) == 32.0);
  double a[] = {1, 0}, b[] = {0, 1};
  ref.rotate(a, b, 0.0, 1.0, 2);
  CHECK(a[0] == 0.0);
  CHECK(a[1] == -1.0);
  CHECK(b[0] == 1.0);
  CHECK(b[1] == 0.0);
  const double m[] = {1, 2, 3, 4};
  double out[4];
  ref.gemm(m, m, out, 2, 2, 2);
  CHECK(out[0] == 7.0);
  CHECK(out[1] == 10.0);
  CHECK(out[2] == 15.0);
  CHECK(out[3] == 22.0);
}

TEST_CASE("library results agree across kernel variants") {
  const auto g = dst::make_cycle(37, 0.7);
  REQUIRE(kernels::select("scalar"));
  const auto ref = spectrum(g);
  const auto ref_phi = phi_ss_iid(ref, 0.1, 1.0).value();
  for (const char* name : {"avx2", "neon"}) {
    if (!kernels::select(name)) continue;
    CAPTURE(name);
    const auto sd = spectrum(g);
    for (std::size_t i = 0; i < sd.size(); ++i) CHECK(std::abs(sd.values[i] - ref.values[i]) <= 1e-12);
    CHECK(std::abs(phi_ss_iid(sd, 0.1, 1.0).value() - ref_phi) <= 1e-12 * ref_phi);
  }
  kernels::select("auto");
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <thread>
#include <vector>

#include "nclb/errors.hpp"
#include "nclb/kernels.hpp"
#include "nclb/random.hpp"
#include "oracles.hpp"

using namespace nclb;

namespace {

const double kE = std::numbers::e;
const double kSqrtE = std::sqrt(std::numbers::e);

// sqrt(pi e / 2), frozen from oracle::phi_by_quadrature(0).
constexpr double kPhiAtZero = 2.0663656770612465;

}  // namespace

TEST_CASE("quadrature oracle reproduces the frozen phi(0)") {
  CHECK(std::abs(oracle::phi_by_quadrature(0.0) - kPhiAtZero) <= 1e-12);
  CHECK(std::abs(oracle::phi_by_quadrature(1.3) - phi(1.3)) <= 1e-12);
  CHECK(std::abs(oracle::phi_by_quadrature(-2.7) - phi(-2.7)) <= 1e-12);
}

TEST_CASE("psi closed form") {
  CHECK(psi(0.5) == 0.0);
  CHECK(psi(-3.0) == 0.0);
  CHECK(psi(1.0) == 1.0);
  CHECK(std::abs(psi(100.0) - kE) <= 1e-3);
  CHECK(psi(100.0) < kE);
  CHECK_THROWS_AS(psi(std::numeric_limits<double>::quiet_NaN()), DomainError);
  CHECK_THROWS_AS(psi(std::numeric_limits<double>::infinity()), DomainError);
}

TEST_CASE("psi derivatives") {
  CHECK(psi_deriv(0.3, 1) == 0.0);
  CHECK(psi_deriv(1.0, 1) == 4.0);
  CHECK(psi_deriv(1.0, 0) == psi(1.0));

  auto d1 = [](double t) { return psi_deriv(t, 1); };
  CHECK(oracle::rel_close(oracle::central_diff(d1, 0.8), psi_deriv(0.8, 2), 1e-6));

  CHECK_THROWS_AS(psi_deriv(1.0, kDefaultMaxOrder + 1), UnsupportedOrder);
  CHECK_THROWS_AS(psi_deriv(1.0, -1), UnsupportedOrder);
  CHECK_THROWS_AS(psi_deriv(std::nan(""), 2), DomainError);
}

TEST_CASE("phi closed form") {
  const double top = std::sqrt(2.0 * std::numbers::pi * kE);
  CHECK(std::abs(phi(40.0) - top) <= 1e-10);
  CHECK(std::abs(phi(0.0) - kPhiAtZero) <= 1e-13);
  CHECK(phi(-40.0) > 0.0);
  CHECK(phi(-40.0) <= 1e-10);
  CHECK_THROWS_AS(phi(std::numeric_limits<double>::quiet_NaN()), DomainError);

  double prev = phi(-50.0);
  for (int i = 1; i <= 10000; ++i) {
    const double v = phi(-50.0 + 0.01 * i);
    REQUIRE(v >= prev);
    prev = v;
  }
}

TEST_CASE("phi derivatives") {
  CHECK(std::abs(phi_deriv(0.0, 1) - kSqrtE) <= 1e-15);
  CHECK(phi_deriv(1.0, 2) == -1.0);
  auto d2 = [](double t) { return phi_deriv(t, 2); };
  CHECK(oracle::rel_close(oracle::central_diff(d2, 0.7), phi_deriv(0.7, 3), 1e-6));
  CHECK(phi_deriv(-40.0, 1) > 0.0);
  CHECK_THROWS_AS(phi_deriv(0.0, kDefaultMaxOrder + 1), UnsupportedOrder);
}

TEST_CASE("kernel bounds") {
  CHECK(kernel_bound(KernelKind::psi, 0) == kE);
  CHECK(kernel_bound(KernelKind::phi, 1) == kSqrtE);
  CHECK(std::abs(kernel_bound(KernelKind::psi, 2) - 32768.0) <= 1e-9 * 32768.0);
  CHECK(std::abs(kernel_bound(KernelKind::phi, 0) - std::sqrt(2 * std::numbers::pi * kE)) <= 1e-15);
  CHECK(std::abs(kernel_bound(KernelKind::phi, 2) - std::exp(3.0 * std::log(3.0))) <= 1e-12);
}

TEST_CASE("coefficient tables") {
  const KernelTables tables(kMaxSupportedOrder);
  const auto& ph = tables.phi_coeffs().rows;
  const auto& ps = tables.psi_coeffs().rows;
  REQUIRE(ph.size() == static_cast<std::size_t>(kMaxSupportedOrder + 1));
  CHECK(ph[1] == std::vector<double>({0.0, -1.0}));
  CHECK(ps[1] == std::vector<double>({4.0}));

  SUBCASE("phi recurrence and growth") {
    for (int k = 0; k < kMaxSupportedOrder; ++k) {
      for (int i = 0; i <= k + 1; ++i) {
        const double up = i + 1 <= k ? (i + 1) * ph[k][i + 1] : 0.0;
        const double down = i >= 1 && i - 1 <= k ? ph[k][i - 1] : 0.0;
        CHECK(ph[k + 1][i] == up - down);
      }
    }
    for (int k = 0; k <= kDefaultMaxOrder; ++k) {
      for (int i = 0; i <= k; ++i) CHECK(std::abs(ph[k][i]) <= std::pow(2.0 * std::max(i, 1), k));
    }
    // Past the default order the stated bound is too tight: the linear
    // coefficient of the ninth derivative is the Hermite value 945 > 2^9.
    CHECK(std::abs(ph[9][1]) == 945.0);
    CHECK(std::abs(ph[9][1]) > std::pow(2.0, 9));
  }
  SUBCASE("psi recurrence and growth") {
    for (int k = 1; k < kMaxSupportedOrder; ++k) {
      for (int i = 1; i <= k + 1; ++i) {
        const double lo = i >= 2 ? ps[k][i - 2] : 0.0;
        const double same = i <= k ? ps[k][i - 1] : 0.0;
        CHECK(ps[k + 1][i - 1] == 4.0 * lo - 2.0 * (k + 2 * i) * same);
      }
    }
    for (int k = 1; k <= kMaxSupportedOrder; ++k) {
      for (int i = 1; i <= k; ++i) {
        CHECK(std::abs(ps[k][i - 1]) <= std::pow(6.0, k) * std::pow(2.0 * i + k, k));
      }
    }
  }
  CHECK_THROWS_AS(KernelTables(kMaxSupportedOrder + 1), UnsupportedOrder);
}

TEST_CASE("dead zone is exact for every order") {
  for (int j = 0; j <= 2000; ++j) {
    const double x = -50.0 + 50.5 * j / 2000.0;
    for (int k = 0; k <= kDefaultMaxOrder; ++k) REQUIRE(psi_deriv(x, k) == 0.0);
  }
}

TEST_CASE("seam stays finite") {
  for (double eps : {1e-1, 1e-2, 5e-3, 1e-3, 1e-4, 1e-6, 1e-9, 1e-12}) {
    for (int k = 0; k <= kDefaultMaxOrder; ++k) {
      const double v = psi_deriv(0.5 + eps, k);
      REQUIRE(std::isfinite(v));
      REQUIRE(std::abs(v) <= kernel_bound(KernelKind::psi, k));
    }
  }
  // psi underflows long before the polynomial factor overflows.
  CHECK(psi_deriv(0.5 + 1e-9, kDefaultMaxOrder) == 0.0);
}

TEST_CASE("higher orders match differences of the order below") {
  const KernelTables tables(kDefaultMaxOrder);
  SeededRng rng(11, 0);
  for (int s = 0; s < 40; ++s) {
    // Three-point differences are accurate enough away from the seam.
    const double x = 0.9 + 3.0 * rng.uniform();
    const double y = -6.0 + 12.0 * rng.uniform();
    for (int k = 1; k <= kDefaultMaxOrder; ++k) {
      auto fp = [&](double t) { return psi_deriv(t, k - 1, tables); };
      auto ff = [&](double t) { return phi_deriv(t, k - 1, tables); };
      CHECK(oracle::rel_close(oracle::central_diff(fp, x), psi_deriv(x, k, tables), 1e-6));
      CHECK(oracle::rel_close(oracle::central_diff(ff, y), phi_deriv(y, k, tables), 1e-6));
    }
  }
}

TEST_CASE("product gap") {
  for (int a = 0; a < 60; ++a) {
    const double x = 1.0 + 0.5 * a;
    for (int b = 0; b < 60; ++b) {
      const double y = -1.0 + (2.0 * b + 1.0) / 60.0;
      REQUIRE(psi(x) * phi_deriv(y, 1) > 1.0);
    }
  }
}

TEST_CASE("phi below its supremum wherever the gap is representable") {
  const double top = kernel_bound(KernelKind::phi, 0);
  CHECK(phi(8.0) < top);
  // The exact gap sqrt(pi e / 2) erfc(x / sqrt 2) drops below half an ulp here.
  CHECK(phi(8.5) <= top);
  CHECK(phi(50.0) <= top);
}

TEST_CASE("concurrent evaluation agrees with serial evaluation") {
  std::vector<double> xs;
  for (int i = 0; i < 400; ++i) xs.push_back(-3.0 + 0.015 * i);
  std::vector<double> serial(xs.size()), parallel(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) serial[i] = psi_deriv(xs[i], 5) + phi_deriv(xs[i], 4);
  std::vector<std::thread> pool;
  for (int w = 0; w < 4; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < xs.size(); i += 4) parallel[i] = psi_deriv(xs[i], 5) + phi_deriv(xs[i], 4);
    });
  }
  for (auto& t : pool) t.join();
  CHECK(serial == parallel);
}

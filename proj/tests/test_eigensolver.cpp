#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "kpp/eigensolver.hpp"
#include "kpp/errors.hpp"
#include "kpp/tridiagonal.hpp"

using kpp::EnvironmentProfile;

namespace {

// k tan(kL/2) = beta, k = sqrt(r_m - lam), beta = sqrt(lam - r)
double well_root(double r, double rm, double length) {
  double lo = r, hi = rm;
  for (int i = 0; i < 300; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double k = std::sqrt(rm - mid);
    if (k * std::tan(0.5 * k * length) > std::sqrt(mid - r)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_SUITE("eigensolver") {
  TEST_CASE("tridiagonal helpers") {
    // Discrete Dirichlet Laplacian: eigenvalues -4 sin^2(k pi / (2(n+1))).
    const std::size_t n = 50;
    kpp::SymTridiagonal m;
    m.diag.assign(n, -2.0);
    m.off.assign(n - 1, 1.0);
    const double top = -4.0 * std::pow(std::sin(std::numbers::pi / (2.0 * (n + 1))), 2);
    CHECK(kpp::largest_eigenvalue(m) == doctest::Approx(top).epsilon(1e-13));
    CHECK(kpp::count_below(m, top - 1e-9) == n - 1);
    CHECK(kpp::count_below(m, top + 1e-9) == n);
    const auto v = kpp::eigenvector(m, top);
    for (std::size_t i = 0; i < n; ++i) {
      const double expect = std::sin(std::numbers::pi * (i + 1.0) / (n + 1.0)) / std::sin(std::numbers::pi * 25.0 / 51.0);
      CHECK(v[i] == doctest::Approx(expect).epsilon(1e-8));
    }

    std::vector<double> lower{1.0, -2.0, 0.5}, diag{4.0, 5.0, 6.0, 7.0}, upper{0.3, 1.0, -1.0};
    const kpp::TridiagonalSolver<double> solver(lower, diag, upper);
    std::vector<double> x{1.0, -2.0, 3.0, 0.5}, b(4);
    for (std::size_t i = 0; i < 4; ++i) {
      b[i] = diag[i] * x[i] + (i > 0 ? lower[i - 1] * x[i - 1] : 0.0) + (i < 3 ? upper[i] * x[i + 1] : 0.0);
    }
    solver.solve(b);
    for (std::size_t i = 0; i < 4; ++i) CHECK(b[i] == doctest::Approx(x[i]).epsilon(1e-14));
  }

  TEST_CASE("constant profile") {
    for (double g0 : {0.3, 1.0, 1.7, 4.0}) {
      const auto r = kpp::principal_eigenvalue(EnvironmentProfile::constant(g0));
      CHECK(std::fabs(r.lambda1 - g0) <= 1e-6);
      CHECK(r.lambda1 >= g0);  // clamp is exact
    }
  }

  TEST_CASE("square well against transcendental matching") {
    const auto r = kpp::principal_eigenvalue(EnvironmentProfile::three_patch(1.0, 2.0, 1.0, 2.0));
    const double oracle = well_root(1.0, 2.0, 2.0);
    CHECK(std::fabs(r.lambda1 - oracle) <= 1e-5);
    CHECK(r.converged);
    const double beta = std::sqrt(oracle - 1.0);
    CHECK(r.decay_rate_plus == doctest::Approx(beta).epsilon(0.05));
    CHECK(r.decay_rate_minus == doctest::Approx(beta).epsilon(0.05));
    for (std::size_t i = 1; i + 1 < r.eigenfunction.size(); ++i) REQUIRE(r.eigenfunction[i].second > 0.0);
  }

  TEST_CASE("asymmetric well decay rates") {
    const auto g = EnvironmentProfile::three_patch(1.0, 4.0, 2.0, 1.5);
    const auto r = kpp::principal_eigenvalue(g);
    REQUIRE(r.lambda1 > 2.0);
    CHECK(r.decay_rate_plus == doctest::Approx(std::sqrt(r.lambda1 - 2.0)).epsilon(0.05));
    CHECK(r.decay_rate_minus == doctest::Approx(std::sqrt(r.lambda1 - 1.0)).epsilon(0.05));
  }

  TEST_CASE("monotone, shift and reflection invariant") {
    const auto lo = EnvironmentProfile::three_patch(1.0, 2.5, 1.5, 1.0);
    const auto hi = EnvironmentProfile::three_patch(1.2, 3.0, 1.5, 1.0);
    const double a = kpp::principal_eigenvalue(lo).lambda1;
    CHECK(a <= kpp::principal_eigenvalue(hi).lambda1 + 1e-6);
    CHECK(kpp::principal_eigenvalue(kpp::reflect(lo)).lambda1 == doctest::Approx(a).epsilon(1e-6));
    const auto shifted = EnvironmentProfile::piecewise_constant({3.0, 4.0}, {1.0, 2.5, 1.5});
    CHECK(kpp::principal_eigenvalue(shifted).lambda1 == doctest::Approx(a).epsilon(1e-6));
  }

  TEST_CASE("tail-dominated profile clamps to the tail level") {
    // Too narrow a bump to lift the eigenvalue above r+ = 2.
    const auto g = EnvironmentProfile::three_patch(1.0, 3.0, 2.0, 0.5);
    CHECK_FALSE(kpp::exceeds_tail_level(g));
    CHECK(kpp::principal_eigenvalue(g).lambda1 == 2.0);
    CHECK(kpp::exceeds_tail_level(EnvironmentProfile::three_patch(1.0, 3.0, 2.0, 1.0)));
  }

  TEST_CASE("three-patch threshold at pi/4") {
    double lo = 0.1, hi = 2.0;
    for (int i = 0; i < 40; ++i) {
      const double mid = 0.5 * (lo + hi);
      (kpp::exceeds_tail_level(EnvironmentProfile::three_patch(1.0, 3.0, 2.0, mid)) ? hi : lo) = mid;
    }
    CHECK(std::fabs(0.5 * (lo + hi) - std::numbers::pi / 4.0) <= 1e-3);
  }

  TEST_CASE("flux limiter") {
    CHECK(kpp::flux_limiter(2.0, 2.0) == 1.0);
    CHECK(kpp::flux_limiter(1.0, 2.0) == 0.0);
  }

  TEST_CASE("non-positive profile rejected") {
    CHECK_THROWS_AS(kpp::principal_eigenvalue(EnvironmentProfile::three_patch(1.0, 0.0, 1.0, 1.0)), kpp::Error);
  }
}

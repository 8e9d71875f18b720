#include <doctest.h>

#include <cmath>
#include <vector>

#include "kpp/env_profile.hpp"
#include "kpp/errors.hpp"

using kpp::EnvironmentProfile;

namespace {

double midpoint_rule(const EnvironmentProfile& p, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += p(a + (i + 0.5) * h);
  return s * h;
}

std::vector<EnvironmentProfile> zoo() {
  return {EnvironmentProfile::constant(1.7),
          EnvironmentProfile::piecewise_constant({-1.0, 0.5, 2.0}, {1.0, 2.5, 0.7, 1.2}),
          EnvironmentProfile::three_patch(1.0, 3.0, 2.0, 1.0),
          EnvironmentProfile::tanh_ramp(0.5, 2.0, 1.3),
          EnvironmentProfile::sampled({-2.0, 0.0, 1.0, 3.0}, {1.0, 4.0, 2.0, 1.5}, 0.8, 1.5)};
}

}  // namespace

TEST_SUITE("env_profile") {
  TEST_CASE("evaluate examples") {
    CHECK(EnvironmentProfile::constant(1.7)(5.0) == 1.7);
    const auto tp = EnvironmentProfile::three_patch(1.0, 3.0, 2.0, 1.0);
    CHECK(tp(0.5) == 3.0);
    CHECK(tp(-4.0) == 1.0);
    CHECK(tp(0.0) == 3.0);  // middle patch is [0, L)
    CHECK(tp(1.0) == 2.0);
    CHECK(tp(7.0) == 2.0);
  }

  TEST_CASE("asymptotes and extremes") {
    const auto tp = EnvironmentProfile::three_patch(1.0, 3.0, 2.0, 1.0);
    CHECK(tp.sup_g() == 3.0);
    CHECK(tp.inf_g() == 1.0);
    CHECK(tp.r_minus() == 1.0);
    CHECK(tp.r_plus() == 2.0);
    CHECK(tp.max_asymptote() == 2.0);
    const auto tr = EnvironmentProfile::tanh_ramp(0.5, 2.0, 1.3);
    CHECK(std::fabs(tr(1e6) - 2.0) < 1e-8);
    CHECK(std::fabs(tr(-1e6) - 0.5) < 1e-8);
    const auto sm = EnvironmentProfile::sampled({-2.0, 0.0, 1.0}, {1.0, 4.0, 2.0}, 0.8, 1.5);
    CHECK(sm(-1e6) == 0.8);
    CHECK(sm(1e6) == 1.5);
    CHECK(sm(-1.0) == doctest::Approx(2.5));
    CHECK(sm.sup_g() == 4.0);
    CHECK(sm.inf_g() == 0.8);
  }

  TEST_CASE("integral agrees with quadrature") {
    for (const auto& p : zoo()) {
      CAPTURE(p.kind_name());
      for (auto [a, b] : {std::pair{-5.0, 5.0}, std::pair{-0.3, 0.2}, std::pair{1.5, 9.0}}) {
        CHECK(p.integral(a, b) == doctest::Approx(midpoint_rule(p, a, b, 200000)).epsilon(1e-6));
      }
      CHECK(p.integral(2.0, -1.0) == doctest::Approx(-p.integral(-1.0, 2.0)));
    }
  }

  TEST_CASE("reflect is an involution") {
    for (const auto& p : zoo()) {
      CAPTURE(p.kind_name());
      const auto rr = kpp::reflect(kpp::reflect(p));
      for (double y = -6.0; y <= 6.0; y += 0.173) CHECK(rr(y) == doctest::Approx(p(y)).epsilon(1e-14));
      const auto r = kpp::reflect(p);
      CHECK(r.r_minus() == p.r_plus());
      CHECK(r.r_plus() == p.r_minus());
    }
    const auto r = kpp::reflect(EnvironmentProfile::three_patch(1.0, 3.0, 2.0, 1.0));
    CHECK(r(-5.0) == 2.0);
    CHECK(r(0.5) == 3.0);
    CHECK(r(5.0) == 1.0);
    CHECK(kpp::reflect(EnvironmentProfile::constant(2.0))(3.0) == 2.0);
  }

  TEST_CASE("invalid profiles") {
    CHECK_THROWS_AS(EnvironmentProfile::constant(0.0), kpp::Error);
    try {
      EnvironmentProfile::three_patch(1.0, -0.5, 1.0, 1.0);
      FAIL("expected NonPositiveProfile");
    } catch (const kpp::Error& e) {
      CHECK(e.code() == kpp::ErrorCode::NonPositiveProfile);
    }
    try {
      EnvironmentProfile::piecewise_constant({1.0, 0.0}, {1.0, 2.0, 3.0});
      FAIL("expected InvalidProfile");
    } catch (const kpp::Error& e) {
      CHECK(e.code() == kpp::ErrorCode::InvalidProfile);
    }
    CHECK_THROWS_AS(EnvironmentProfile::piecewise_constant({0.0}, {1.0}), kpp::Error);
    CHECK_THROWS_AS(EnvironmentProfile::constant(NAN), kpp::Error);
    CHECK_THROWS_AS(EnvironmentProfile::tanh_ramp(1.0, 2.0, 0.0), kpp::Error);
    CHECK_THROWS_AS(EnvironmentProfile::sampled({0.0}, {1.0}, 1.0, 1.0), kpp::Error);
  }
}

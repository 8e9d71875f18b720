#include <doctest.h>

#include <cmath>
#include <limits>

#include "kpp/errors.hpp"
#include "kpp/speed_formulas.hpp"

using kpp::Regime;
using kpp::SpeedInputs;

TEST_SUITE("speed_formulas") {
  TEST_CASE("rightward examples") {
    auto r = kpp::rightward_speed({3.0, 1.0, 1.0, 2.0});
    CHECK(r.regime == Regime::NonlocalPulling);
    CHECK(r.mu_minus == doctest::Approx(0.5));
    CHECK(r.c_star == doctest::Approx(2.5));
    r = kpp::rightward_speed({10.0, 1.0, 1.0, 2.0});
    CHECK(r.regime == Regime::KppLeft);
    CHECK(r.c_star == 2.0);
    r = kpp::rightward_speed({2.5, 1.0, 1.0, 2.0});
    CHECK(r.regime == Regime::KeepPace);
    CHECK(r.c_star == 2.5);
    for (double c1 : {-3.0, 0.0, 1.0, 2.0}) {
      r = kpp::rightward_speed({c1, 1.0, 1.0, 1.0});
      CHECK(r.c_star == 2.0);
      CHECK(r.regime == Regime::KppRight);
    }
  }

  TEST_CASE("boundaries belong to the lower case") {
    CHECK(kpp::rightward_speed({2.0, 1.0, 1.0, 2.0}).regime == Regime::KppRight);
    CHECK(kpp::rightward_speed({2.0 * std::sqrt(2.0), 1.0, 1.0, 2.0}).regime == Regime::KeepPace);
    CHECK(kpp::rightward_speed({4.0, 1.0, 1.0, 2.0}).regime == Regime::NonlocalPulling);
    CHECK(kpp::rightward_speed({std::nextafter(4.0, 5.0), 1.0, 1.0, 2.0}).regime == Regime::KppLeft);
  }

  TEST_CASE("leftward examples") {
    CHECK(kpp::leftward_speed({-3.0, 1.0, 1.0, 2.0}).c_star == doctest::Approx(2.5));
    CHECK(kpp::leftward_speed({-1.0, 1.0, 3.0, 3.0}).c_star == 2.0);
    CHECK(kpp::leftward_speed({5.0, 1.0, 2.0, 2.0}).c_star == 2.0);
    CHECK(kpp::leftward_speed({0.0, 1.5, 1.5, 2.0}).c_star == kpp::rightward_speed({0.0, 1.5, 1.5, 2.0}).c_star);
    const SpeedInputs in{1.3, 0.7, 2.1, 2.9};
    CHECK(kpp::leftward_speed(in).c_star == kpp::rightward_speed(kpp::mirrored(in)).c_star);
  }

  TEST_CASE("baseline examples") {
    CHECK(kpp::baseline_speed({3.0, 1.0, 2.0, 7.0}).c_star == doctest::Approx(2.5));
    CHECK(kpp::baseline_speed({2.5, 2.0, 1.0, 2.0}).c_star == 2.5);
    for (double c1 : {-1.0, 1.0, 2.5, 9.0}) CHECK(kpp::baseline_speed({c1, 1.0, 1.0, 1.0}).c_star == 2.0);
    const SpeedInputs at_max{3.3, 1.2, 1.9, 1.9};
    CHECK(kpp::baseline_speed(at_max).c_star == kpp::rightward_speed(at_max).c_star);
  }

  TEST_CASE("non-monotone in c1 when lambda1 > r+ = r-") {
    // Speed at the top of the keep-pace window exceeds the far-field value.
    const double a = kpp::rightward_speed({2.0 * std::sqrt(2.0), 1.0, 1.0, 2.0}).c_star;
    const double b = kpp::rightward_speed({6.0, 1.0, 1.0, 2.0}).c_star;
    CHECK(a > b);
  }

  TEST_CASE("regime names") {
    for (Regime r : {Regime::KppRight, Regime::KeepPace, Regime::NonlocalPulling, Regime::KppLeft}) {
      CHECK(kpp::parse_regime(kpp::regime_name(r)) == r);
    }
    CHECK(kpp::regime_name(Regime::NonlocalPulling) == "nonlocal_pulling");
    CHECK_FALSE(kpp::parse_regime("sideways").has_value());
  }

  TEST_CASE("invalid inputs") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const SpeedInputs& in : {SpeedInputs{1.0, 0.0, 1.0, 2.0}, SpeedInputs{1.0, 1.0, -1.0, 2.0},
                                  SpeedInputs{1.0, 1.0, 2.0, 1.5}, SpeedInputs{nan, 1.0, 1.0, 2.0}}) {
      try {
        kpp::rightward_speed(in);
        FAIL("expected InvalidInputs");
      } catch (const kpp::Error& e) {
        CHECK(e.code() == kpp::ErrorCode::InvalidInputs);
        CHECK(std::string(e.what()).rfind("InvalidInputs", 0) == 0);
      }
    }
  }
}

#include <doctest.h>

#include <cmath>
#include <random>

#include "kpp/errors.hpp"
#include "kpp/fl_explicit.hpp"
#include "kpp/hamiltonian.hpp"

using kpp::PieceKind;
using kpp::SpeedInputs;

TEST_SUITE("fl_explicit") {
  TEST_CASE("hamiltonian envelopes") {
    const double c = 3.0, rp = 1.3, rm = 0.7;
    CHECK(kpp::h_minus(c, 0.5 * c + 1.0, rp) == doctest::Approx(-c * c / 4.0 + rp));
    CHECK(kpp::h_plus(c, 0.5 * c, rm) == doctest::Approx(-c * c / 4.0 + rm));
    CHECK(kpp::h_plus(2.0, 2.0, 1.0) == 1.0);
    CHECK(kpp::fa_junction(0.0, 2.0, 1.0, 1.0, 1.0, 1.0) == 0.0);
    CHECK(kpp::fa_junction(50.0, 2.0, 1.0, 1.0, 3.0, -1.0) == 50.0);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int i = 0; i < 1000; ++i) {
      const double a = u(rng), b = a - std::fabs(u(rng)), pp = u(rng), pm = u(rng);
      CHECK(kpp::fa_junction(b, 2.0, 1.0, 1.5, pp, pm) <= kpp::fa_junction(a, 2.0, 1.0, 1.5, pp, pm));
    }
    const auto h = kpp::Hamiltonian::single(2.0, 1.0, 3.0);
    CHECK(h.R(2.0) == 1.0);  // left-continuous at the junction
    CHECK(h.R(2.0 + 1e-12) == 3.0);
  }

  TEST_CASE("case (i) construction") {
    const auto sol = kpp::construct_explicit({1.0, 1.0, 1.0, 1.0});
    CHECK(sol.regime == kpp::Regime::KppRight);
    CHECK(sol.s_hat == 2.0);
    CHECK(sol(1.0) == 0.0);
    CHECK(sol(4.0) == doctest::Approx(3.0));
    CHECK(sol.piece_at(1.0).kind == PieceKind::Zero);
    CHECK(sol.piece_at(3.0).kind == PieceKind::Quadratic);
  }

  TEST_CASE("case (iii) construction") {
    const SpeedInputs in{3.0, 1.0, 1.0, 2.0};
    const auto sol = kpp::construct_explicit(in);
    CHECK(sol.regime == kpp::Regime::NonlocalPulling);
    CHECK(sol.mu_minus == doctest::Approx(0.5));
    CHECK(sol.mu_plus == doctest::Approx(2.5));
    CHECK(sol(3.0) == doctest::Approx(0.25));
    CHECK(sol(3.0) == doctest::Approx(9.0 / 4.0 - 2.0));
    CHECK(0.5 * 3.0 - (0.25 + 1.0) == doctest::Approx(sol(3.0)));
    CHECK(sol.s_hat == 2.5);
    CHECK(sol(3.0) + kpp::hamiltonian(3.0, 1.5, 1.0) == doctest::Approx(1.0 - 2.0));
  }

  TEST_CASE("structural invariants on random inputs") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> rate(0.2, 3.0), extra(0.0, 2.0), cc(-1.0, 8.0);
    for (int k = 0; k < 300; ++k) {
      const double rm = rate(rng), rp = rate(rng);
      const SpeedInputs in{cc(rng), rm, rp, std::max(rm, rp) + extra(rng)};
      CAPTURE(in.c1);
      const auto sol = kpp::construct_explicit(in);
      CHECK(sol.s_hat == kpp::rightward_speed(in).c_star);
      for (std::size_t b = 1; b < sol.breakpoints.size(); ++b) {
        const double s = sol.breakpoints[b];
        CHECK(std::fabs(sol.pieces[b - 1].value(s) - sol.pieces[b].value(s)) < 1e-12);
      }
      double prev = 0.0;
      const double extent = kpp::natural_extent(sol);
      for (int i = 0; i <= 500; ++i) {
        const double s = extent * i / 500.0;
        const double v = sol(s);
        CHECK(v >= 0.0);
        CHECK(v >= prev - 1e-14);
        if (s <= sol.s_hat) CHECK(v == 0.0);
        prev = v;
      }
      CHECK(sol.pieces.back().kind == PieceKind::Quadratic);
      const auto rep = kpp::verify_viscosity(sol, {2000, 1e-9, 21});
      CHECK(rep.pass);
    }
  }

  TEST_CASE("verify_viscosity named checks") {
    const auto rep3 = kpp::verify_viscosity(kpp::construct_explicit({3.0, 1.0, 1.0, 2.0}));
    REQUIRE(rep3.find("junction_left_envelope") != nullptr);
    CHECK(rep3.find("junction_left_envelope")->value == doctest::Approx(-1.0));
    CHECK(rep3.pass);
    const auto rep4 = kpp::verify_viscosity(kpp::construct_explicit({5.0, 1.0, 1.0, 2.0}));
    REQUIRE(rep4.find("s3_supersolution") != nullptr);
    CHECK(rep4.find("s3_supersolution")->pass);
    CHECK(rep4.classical <= 1e-12);
  }

  TEST_CASE("verify_viscosity rejects a wrong solution") {
    auto sol = kpp::construct_explicit({3.0, 1.0, 1.0, 2.0});
    sol.pieces.back().rate += 0.1;  // break the far-field quadratic
    CHECK_FALSE(kpp::verify_viscosity(sol).pass);
    auto shifted = kpp::construct_explicit({1.0, 1.0, 1.0, 1.0});
    shifted.breakpoints[1] += 0.2;  // zero set too long
    CHECK_FALSE(kpp::verify_viscosity(shifted).pass);
  }

  TEST_CASE("ishii equivalence") {
    const auto eq = kpp::ishii_equivalence_check({2.5, 1.0, 1.0, 1.0});
    CHECK(eq.pass);
    CHECK(eq.sup_gap < 1e-10);
    const auto c1 = kpp::ishii_equivalence_check({2.0, 1.0, 2.0, 2.0});
    CHECK(c1.s_hat == doctest::Approx(2.0 * std::sqrt(2.0)));
    CHECK(c1.pass);
    CHECK(kpp::ishii_equivalence_check({3.5, 2.0, 0.5, 2.0}).pass);
    try {
      kpp::ishii_equivalence_check({3.0, 1.0, 1.0, 2.0});
      FAIL("expected PreconditionViolated");
    } catch (const kpp::Error& e) {
      CHECK(e.code() == kpp::ErrorCode::PreconditionViolated);
    }
  }

  TEST_CASE("invalid inputs") {
    CHECK_THROWS_AS(kpp::construct_explicit({1.0, 1.0, 1.0, 0.5}), kpp::Error);
  }
}

#include <doctest.h>

#include <cmath>
#include <random>

#include "kpp/errors.hpp"
#include "kpp/fl_explicit.hpp"
#include "kpp/hj_junction_solver.hpp"

using kpp::JunctionProblem;
using kpp::SolveOptions;

namespace {

double sup_error(const kpp::GridSolution& g, const kpp::PiecewiseSolution& exact) {
  double e = 0.0;
  for (std::size_t i = 0; i < g.s.size(); ++i) e = std::max(e, std::fabs(g.values[i] - exact(g.s[i])));
  return e;
}

}  // namespace

TEST_SUITE("hj_junction_solver") {
  TEST_CASE("single junction against the explicit solution") {
    const kpp::SpeedInputs in{3.0, 1.0, 1.0, 2.0};
    const JunctionProblem p = JunctionProblem::single(in, 12.0);
    const auto g = kpp::solve(p, SolveOptions{});
    CHECK(sup_error(g, kpp::construct_explicit(in)) <= 5e-3);
    CHECK(std::fabs(g.s_hat_numeric - 2.5) <= 10.0 * g.h);
    CHECK(g.residual <= 1e-10);
    for (std::size_t i = 1; i < g.values.size(); ++i) {
      CHECK(g.values[i] >= 0.0);
      CHECK(g.values[i] >= g.values[i - 1]);
    }
  }

  TEST_CASE("no junction reduces to the homogeneous solution") {
    JunctionProblem p;
    p.rates = {1.5};
    p.s_max = 8.0;
    const auto g = kpp::solve(p, {5e-3});
    double e = 0.0;
    for (std::size_t i = 0; i < g.s.size(); ++i) {
      e = std::max(e, std::fabs(g.values[i] - std::max(g.s[i] * g.s[i] / 4.0 - 1.5, 0.0)));
    }
    CHECK(e <= 10.0 * g.h);
  }

  TEST_CASE("initial states agree") {
    const JunctionProblem p = JunctionProblem::single({5.0, 1.0, 1.0, 2.0});
    SolveOptions a{2e-3};
    a.init = kpp::InitialState::Zero;
    SolveOptions b{2e-3};
    b.init = kpp::InitialState::Large;
    const auto ga = kpp::solve(p, a), gb = kpp::solve(p, b);
    for (std::size_t i = 0; i < ga.values.size(); ++i) CHECK(std::fabs(ga.values[i] - gb.values[i]) <= 1e-9);
  }

  TEST_CASE("nodewise update is monotone") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 10000; ++k) {
      const double s = 10.0 * u(rng), h = 1e-3 + 0.1 * u(rng), r = 0.2 + 3.0 * u(rng);
      const double left = 5.0 * u(rng), right = left + 5.0 * u(rng) - 1.0;
      const double dl = u(rng), dr = u(rng);
      CHECK(kpp::node_update(s, h, r, left + dl, right) >= kpp::node_update(s, h, r, left, right));
      CHECK(kpp::node_update(s, h, r, left, right + dr) >= kpp::node_update(s, h, r, left, right));
      const double a = -3.0 + 4.0 * u(rng);
      CHECK(kpp::junction_update(s, h, r, 1.0, a, left + dl, right + dr) >=
            kpp::junction_update(s, h, r, 1.0, a, left, right));
    }
  }

  TEST_CASE("inactive second junction") {
    const JunctionProblem one = JunctionProblem::single({2.5, 1.0, 1.0, 2.0}, 20.0);
    const JunctionProblem two{{2.5, 6.0}, {1.0, 1.0, 1.0}, {one.flux_limiters[0], -1000.0}, 20.0};
    const auto a = kpp::solve(one, {1e-3}), b = kpp::solve(two, {1e-3});
    REQUIRE(a.values.size() == b.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i) CHECK(std::fabs(a.values[i] - b.values[i]) <= 2.0 * a.h);
  }

  TEST_CASE("speed is monotone in the flux limiter") {
    double prev = 0.0;
    for (double a : {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0}) {
      const JunctionProblem p{{3.0}, {1.0, 1.0}, {a}, 16.0};
      const double s = kpp::multi_junction_speed(p, 1e-3);
      CHECK(s >= prev);
      prev = s;
    }
  }

  TEST_CASE("errors") {
    const JunctionProblem p = JunctionProblem::single({3.0, 1.0, 1.0, 2.0});
    SolveOptions off{0.0007};
    CHECK_THROWS_AS(kpp::solve(p, off), kpp::Error);
    try {
      kpp::solve(p, off);
    } catch (const kpp::Error& e) {
      CHECK(e.code() == kpp::ErrorCode::GridMisaligned);
    }
    const JunctionProblem irrational{{1.0, std::sqrt(2.0)}, {1.0, 1.0, 1.0}, {0.0, 0.0}, 10.0};
    CHECK_THROWS_AS(kpp::aligned_step(irrational, 1e-3), kpp::Error);
    SolveOptions short_run{1e-3};
    short_run.init = kpp::InitialState::Zero;
    short_run.max_sweeps = 2;
    try {
      kpp::solve(p, short_run);
      FAIL("expected NoConvergence");
    } catch (const kpp::Error& e) {
      CHECK(e.code() == kpp::ErrorCode::NoConvergence);
    }
    const JunctionProblem bad{{3.0}, {1.0, 1.0}, {0.0}, 2.0};
    CHECK_THROWS_AS(kpp::validate(bad), kpp::Error);
    const JunctionProblem sizes{{3.0}, {1.0}, {0.0}, 20.0};
    CHECK_THROWS_AS(kpp::validate(sizes), kpp::Error);
  }
}

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "kpp/errors.hpp"
#include "kpp/io.hpp"
#include "kpp/report.hpp"

using kpp::io::json;

namespace {

kpp::ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const kpp::Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return kpp::ErrorCode::InvalidInputs;
}

}  // namespace

TEST_SUITE("cli_reporting") {
  TEST_CASE("profile json round trip") {
    for (const char* text : {R"({"kind": "three_patch", "r_minus": 1.0, "r_mid": 3.0, "r_plus": 2.0, "L": 1.0})",
                             R"({"kind": "constant", "g0": 1.7})",
                             R"({"kind": "piecewise_constant", "breaks": [0, 2], "values": [1, 2, 1.5]})",
                             R"({"kind": "tanh_ramp", "r_minus": 1, "r_plus": 2, "steepness": 0.5})",
                             R"({"kind": "sampled", "table": [[0, 1], [1, 3], [2, 1]], "r_minus": 1, "r_plus": 1})"}) {
      const auto p = kpp::io::profile_from_json(json::parse(text));
      const auto q = kpp::io::profile_from_json(kpp::io::profile_to_json(p));
      for (double y = -3.0; y <= 3.0; y += 0.25) CHECK(p(y) == q(y));
    }
    CHECK(code_of([] { kpp::io::profile_from_json(json::parse(R"({"kind": "spiral"})")); }) ==
          kpp::ErrorCode::InvalidProfile);
    CHECK(code_of([] { kpp::io::profile_from_json(json::parse(R"({"kind": "constant"})")); }) ==
          kpp::ErrorCode::InvalidProfile);
  }

  TEST_CASE("problem json") {
    const auto p = kpp::io::problem_from_json(
        json::parse(R"({"junctions": [3], "rates": [1, 1], "lambda1": [2], "s_max": 12})"));
    CHECK(p.flux_limiters[0] == doctest::Approx(-0.25));
    CHECK(p.s_max == 12.0);
    const auto q = kpp::io::problem_from_json(json::parse(R"({"junctions": [2.5, 6], "rates": [1, 1.5, 1], "A": [0, -8]})"));
    CHECK(q.s_max >= kpp::required_s_max(q));
    CHECK_THROWS_AS(kpp::io::problem_from_json(json::parse(R"({"junctions": [3], "rates": [1], "A": [0]})")),
                    kpp::Error);
  }

  TEST_CASE("sim config json") {
    const auto c = kpp::io::sim_config_from_json(json::parse(
        R"({"profile": {"kind": "constant", "g0": 1}, "c1": 0.5, "dx": 0.1, "t_end": 50, "precision": "extended"})"));
    CHECK(c.shifts.size() == 1);
    CHECK(c.shifts[0].speed == 0.5);
    CHECK(c.precision == kpp::Precision::Extended);
    CHECK(code_of([] {
            kpp::io::sim_config_from_json(
                json::parse(R"({"profile": {"kind": "constant", "g0": 1}, "dx": 0.1, "dt": 0.5})"));
          }) == kpp::ErrorCode::InvalidConfig);
    CHECK(code_of([] {
            kpp::io::sim_config_from_json(json::parse(R"({"profile": {"kind": "constant", "g0": 1}, "scheme": "rk9"})"));
          }) == kpp::ErrorCode::InvalidConfig);
  }

  TEST_CASE("csv rendering and atomic writes") {
    kpp::io::CsvTable t({"a", "b"});
    t.add_row({"1", kpp::io::fmt(0.1)});
    t.add_row({kpp::io::fmt(NAN), kpp::io::fmt(INFINITY)});
    const std::string text = t.render("00ff");
    CHECK(text.rfind("# kpp-front-lab 0.1.0 config=00ff\na,b\n1,0.1\n", 0) == 0);
    CHECK(text.find("nan,inf") != std::string::npos);
    CHECK(kpp::io::hash_hex(kpp::io::fnv1a("")) == "cbf29ce484222325");

    const auto path = std::filesystem::temp_directory_path() / "kpp_io_test.csv";
    kpp::io::write_csv(path, t, "00ff");
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == text);
    CHECK_FALSE(std::filesystem::exists(path.string() + ".tmp"));
    std::filesystem::remove(path);
  }

  TEST_CASE("figure panels") {
    const auto f = kpp::figure1_panel('f');
    CHECK(f.lambda1 > f.r_minus);
    CHECK(f.r_minus == f.r_plus);
    CHECK(code_of([] { kpp::figure1_panel('z'); }) == kpp::ErrorCode::InvalidInputs);

    // (e): flat at 2 sqrt(lambda1); (c): no curved segment; (b): all four regimes.
    for (const auto& r : kpp::speed_sweep(0.0, 8.0, 200, 1.0, 1.0, 1.0)) CHECK(r.c_star_right == 2.0);
    const auto pc = kpp::figure1_panel('c');
    for (const auto& r : kpp::speed_sweep(0.0, 8.0, 400, pc.r_minus, pc.r_plus, pc.lambda1)) {
      CHECK(r.regime != kpp::Regime::NonlocalPulling);
    }
    const auto pb = kpp::figure1_panel('b');
    bool seen[4] = {false, false, false, false};
    for (const auto& r : kpp::speed_sweep(0.0, 8.0, 400, pb.r_minus, pb.r_plus, pb.lambda1)) {
      seen[static_cast<int>(r.regime)] = true;
    }
    CHECK((seen[0] && seen[1] && seen[2] && seen[3]));
  }

  TEST_CASE("sweep rows are index ordered and deterministic") {
    const auto a = kpp::speed_sweep(-1.0, 7.0, 1001, 1.0, 2.0, 3.0);
    const auto b = kpp::speed_sweep(-1.0, 7.0, 1001, 1.0, 2.0, 3.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].c1 == doctest::Approx(-1.0 + 8.0 * i / 1000.0));
      CHECK(a[i].c_star_right == b[i].c_star_right);
    }
    CHECK(kpp::sweep_table(a).render("x") == kpp::sweep_table(b).render("x"));
  }

  TEST_CASE("quick validation suite passes") {
    kpp::ValidateOptions opt;
    const auto rep = kpp::run_validation(opt);
    CHECK(rep.pass);
    CHECK(rep.rows.size() == 4);
    CHECK(rep.to_json()["pass"].get<bool>());
  }
}

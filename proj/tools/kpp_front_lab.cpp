#include <omp.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kpp/eigensolver.hpp"
#include "kpp/errors.hpp"
#include "kpp/fl_explicit.hpp"
#include "kpp/hj_junction_solver.hpp"
#include "kpp/io.hpp"
#include "kpp/kpp_simulator.hpp"
#include "kpp/report.hpp"
#include "kpp/speed_formulas.hpp"
#include "kpp/version.hpp"

namespace fs = std::filesystem;
using kpp::io::json;

namespace {

// Exit 1: a module rejected the inputs or a validation did not pass.
struct Failed {};

std::string config_hash(const json& cfg) { return kpp::io::hash_hex(kpp::io::fnv1a(cfg.dump())); }

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

const auto kWritable = CLI::Validator(
    [](std::string& path) -> std::string {
      const fs::path parent = fs::path(path).parent_path();
      if (!parent.empty() && !fs::is_directory(parent)) return "output directory does not exist: " + parent.string();
      return {};
    },
    "WRITABLE");

// "t=100,200,400" or "100,200,400"
std::vector<double> parse_times(std::string text) {
  if (text.rfind("t=", 0) == 0) text.erase(0, 2);
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || !std::isfinite(v)) throw CLI::ValidationError("bad time list '" + text + "'");
    out.push_back(v);
  }
  if (out.empty()) throw CLI::ValidationError("empty time list");
  return out;
}

struct Range {
  double lo = 0.0, hi = 0.0;
  std::size_t count = 0;
};

// "a:b:n"
Range parse_range(const std::string& flag, const std::string& text) {
  Range r;
  char tail = 0;
  long n = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%ld%c", &r.lo, &r.hi, &n, &tail) != 3 || n < 2 || !(r.hi >= r.lo)) {
    throw CLI::ValidationError(flag, "expected lo:hi:n with lo <= hi and n >= 2, got '" + text + "'");
  }
  r.count = static_cast<std::size_t>(n);
  return r;
}

std::string time_tag(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", t);
  return buf;
}

fs::path sibling(const fs::path& base, const std::string& suffix) {
  return base.parent_path() / (base.stem().string() + suffix);
}

void apply_thread_cap() {
  const char* env = std::getenv("KPP_FRONT_LAB_THREADS");
  if (env == nullptr || *env == '\0') return;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1) {
    std::cerr << "kpp-front-lab: ignoring KPP_FRONT_LAB_THREADS='" << env << "'\n";
    return;
  }
  omp_set_num_threads(static_cast<int>(std::min<long>(n, omp_get_num_procs())));
}

struct SpeedArgs {
  double c1 = 0.0, r_minus = 0.0, r_plus = 0.0, lambda1 = 0.0;

  void add(CLI::App* app) {
    app->add_option("--c1", c1, "shift speed")->required();
    app->add_option("--r-minus", r_minus, "growth rate at -inf")->required();
    app->add_option("--r-plus", r_plus, "growth rate at +inf")->required();
    app->add_option("--lambda1", lambda1, "principal eigenvalue")->required();
  }
  kpp::SpeedInputs inputs() const { return {c1, r_minus, r_plus, lambda1}; }
  json to_json() const { return {{"c1", c1}, {"r_minus", r_minus}, {"r_plus", r_plus}, {"lambda1", lambda1}}; }
};

json residual_json(const kpp::ResidualReport& r) {
  json j{{"pass", r.pass},
         {"tol", r.tol},
         {"samples", r.samples},
         {"classical", r.classical},
         {"obstacle", r.obstacle},
         {"kink", r.kink},
         {"junction_sub", r.junction_sub},
         {"junction_super", r.junction_super},
         {"checks", json::array()}};
  for (const auto& c : r.checks) {
    j["checks"].push_back({{"name", c.name}, {"value", num(c.value)}, {"bound", num(c.bound)}, {"pass", c.pass}});
  }
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spreading speeds of KPP fronts in shifting environments"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_version_flag("--version", std::string(kpp::kToolName) + " " + kpp::kVersion);
  app.require_subcommand(1);

  // eigen
  auto* eigen = app.add_subcommand("eigen", "principal eigenvalue of phi'' + g phi");
  std::string eig_profile, eig_emit;
  double eig_tol = 1e-6;
  eigen->add_option("--profile", eig_profile, "profile JSON")->required()->check(CLI::ExistingFile);
  eigen->add_option("--tol", eig_tol, "schedule tolerance")->check(CLI::PositiveNumber);
  eigen->add_option("--emit", eig_emit, "eigenfunction CSV (y, phi)")->check(kWritable);

  // speed
  auto* speed = app.add_subcommand("speed", "closed-form spreading speed");
  SpeedArgs speed_args;
  speed_args.add(speed);
  std::string direction = "right";
  bool speed_json = false;
  speed->add_option("--direction", direction, "right or left")->check(CLI::IsMember({"right", "left"}));
  speed->add_flag("--json", speed_json, "print {\"c_star\", \"regime\"}");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "speeds over a range of c1");
  std::string sweep_range, sweep_emit;
  double sw_rm = 0.0, sw_rp = 0.0, sw_lam = 0.0;
  sweep->add_option("--c1-range", sweep_range, "lo:hi:n")->required();
  sweep->add_option("--r-minus", sw_rm)->required();
  sweep->add_option("--r-plus", sw_rp)->required();
  sweep->add_option("--lambda1", sw_lam)->required();
  sweep->add_option("--emit", sweep_emit, "CSV output")->required()->check(kWritable);

  // fl-explicit
  auto* fle = app.add_subcommand("fl-explicit", "explicit flux-limited solution");
  SpeedArgs fle_args;
  fle_args.add(fle);
  std::string fle_emit, fle_report;
  bool fle_verify = false;
  std::size_t fle_points = 2001;
  fle->add_option("--emit", fle_emit, "CSV (s, rho, piece_tag)")->check(kWritable);
  fle->add_option("--points", fle_points, "grid points in the CSV")->check(CLI::Range(2, 10000000));
  fle->add_flag("--verify", fle_verify, "print the viscosity residual report as JSON");
  fle->add_option("--report", fle_report, "also write the report JSON here")->check(kWritable);

  // fl-solve
  auto* fls = app.add_subcommand("fl-solve", "numeric junction problem");
  std::string fls_problem, fls_emit;
  double fls_h = 1e-3, fls_tol = 1e-10;
  bool fls_compare = false;
  fls->add_option("--problem", fls_problem, "problem JSON")->required()->check(CLI::ExistingFile);
  fls->add_option("--h", fls_h, "target grid step")->check(CLI::PositiveNumber);
  fls->add_option("--tol", fls_tol, "sweep tolerance")->check(CLI::PositiveNumber);
  fls->add_option("--emit", fls_emit, "CSV (s, rho)")->check(kWritable);
  fls->add_flag("--compare-explicit", fls_compare, "compare with the explicit solution (one junction)");

  // simulate
  auto* sim = app.add_subcommand("simulate", "reaction-diffusion front simulation");
  std::string sim_config, sim_emit = "front.csv", sim_snaps, sim_rate, sim_precision, sim_backend;
  std::string sim_rate_range = "0:4:401";
  sim->add_option("--config", sim_config, "simulation JSON")->required()->check(CLI::ExistingFile);
  sim->add_option("--emit", sim_emit, "front CSV (t, x_front, u_max)")->check(kWritable);
  sim->add_option("--emit-snapshots", sim_snaps, "t=100,200,400");
  sim->add_option("--emit-rate-function", sim_rate, "t=400");
  sim->add_option("--rate-range", sim_rate_range, "s grid lo:hi:n for the rate function");
  sim->add_option("--precision", sim_precision, "double or extended")->check(CLI::IsMember({"double", "extended"}));
  sim->add_option("--backend", sim_backend, "openmp or serial")->check(CLI::IsMember({"openmp", "serial"}));

  // validate
  auto* val = app.add_subcommand("validate", "cross-validation suites");
  std::string val_suite = "quick", val_emit, val_report;
  kpp::ValidateOptions vopt;
  val->add_option("--suite", val_suite, "quick, full or pde")->check(CLI::IsMember({"quick", "full", "pde"}));
  val->add_option("--seed", vopt.seed, "seed for the random property points");
  val->add_option("--h", vopt.h, "grid step of the numeric solver")->check(CLI::PositiveNumber);
  val->add_option("--points", vopt.random_points, "random property points");
  val->add_option("--emit", val_emit, "rows CSV")->check(kWritable);
  val->add_option("--report", val_report, "full JSON report")->check(kWritable);

  // figure1
  auto* fig = app.add_subcommand("figure1", "c_star against c1 for a preset panel");
  std::string fig_panel, fig_emit;
  std::size_t fig_points = 400;
  fig->add_option("--panel", fig_panel, "a..f")->required()->check(CLI::IsMember({"a", "b", "c", "d", "e", "f"}));
  fig->add_option("--emit", fig_emit, "CSV (c1, c_star, regime)")->required()->check(kWritable);
  fig->add_option("--points", fig_points)->check(CLI::Range(2, 10000000));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  apply_thread_cap();

  try {
    if (eigen->parsed()) {
      const json pj = kpp::io::read_json_file(eig_profile);
      const kpp::EnvironmentProfile g = kpp::io::profile_from_json(pj.contains("profile") ? pj["profile"] : pj);
      kpp::EigenOptions opt;
      opt.tol = eig_tol;
      const kpp::EigenResult r = kpp::principal_eigenvalue(g, opt);
      std::printf("lambda1 %.12g\nconverged %d\nhalf_width %.12g\ndecay_plus %.12g\ndecay_minus %.12g\n", r.lambda1,
                  r.converged ? 1 : 0, r.domain_half_width, r.decay_rate_plus, r.decay_rate_minus);
      if (!eig_emit.empty()) {
        kpp::io::CsvTable t({"y", "phi"});
        for (const auto& [y, phi] : r.eigenfunction) t.add_row({kpp::io::fmt(y), kpp::io::fmt(phi)});
        kpp::io::write_csv(eig_emit, t, config_hash({{"eigen", kpp::io::profile_to_json(g)}, {"tol", eig_tol}}));
      }
    } else if (speed->parsed()) {
      const kpp::SpeedInputs in = speed_args.inputs();
      const kpp::SpeedResult r = direction == "left" ? kpp::leftward_speed(in) : kpp::rightward_speed(in);
      if (speed_json) {
        std::cout << json{{"c_star", r.c_star}, {"regime", kpp::regime_name(r.regime)}}.dump() << '\n';
      } else {
        std::printf("c_star %.12g\nregime %s\n", r.c_star, std::string(kpp::regime_name(r.regime)).c_str());
      }
    } else if (sweep->parsed()) {
      const Range range = parse_range("--c1-range", sweep_range);
      const auto rows = kpp::speed_sweep(range.lo, range.hi, range.count, sw_rm, sw_rp, sw_lam);
      const json cfg{{"sweep", sweep_range}, {"r_minus", sw_rm}, {"r_plus", sw_rp}, {"lambda1", sw_lam}};
      kpp::io::write_csv(sweep_emit, kpp::sweep_table(rows), config_hash(cfg));
      std::printf("wrote %zu rows to %s\n", rows.size(), sweep_emit.c_str());
    } else if (fle->parsed()) {
      const kpp::PiecewiseSolution sol = kpp::construct_explicit(fle_args.inputs());
      std::printf("regime %s\ns_hat %.12g\nflux_limiter %.12g\n", std::string(kpp::regime_name(sol.regime)).c_str(),
                  sol.s_hat, sol.flux_limiter);
      if (!fle_emit.empty()) {
        const double extent = kpp::natural_extent(sol);
        kpp::io::CsvTable t({"s", "rho", "piece_tag"});
        for (std::size_t i = 0; i < fle_points; ++i) {
          const double s = extent * static_cast<double>(i) / static_cast<double>(fle_points - 1);
          t.add_row({kpp::io::fmt(s), kpp::io::fmt(sol(s)), std::string(kpp::piece_tag(sol.piece_at(s).kind))});
        }
        json cfg = fle_args.to_json();
        cfg["points"] = fle_points;
        kpp::io::write_csv(fle_emit, t, config_hash(cfg));
      }
      if (fle_verify || !fle_report.empty()) {
        const kpp::ResidualReport rep = kpp::verify_viscosity(sol);
        const std::string text = residual_json(rep).dump(2) + "\n";
        if (fle_verify) std::cout << text;
        if (!fle_report.empty()) kpp::io::write_atomic(fle_report, text);
        if (!rep.pass) throw Failed{};
      }
    } else if (fls->parsed()) {
      const json pj = kpp::io::read_json_file(fls_problem);
      const kpp::JunctionProblem p = kpp::io::problem_from_json(pj);
      kpp::SolveOptions opt;
      opt.h = kpp::aligned_step(p, fls_h);
      opt.tol = fls_tol;
      const kpp::GridSolution g = kpp::solve(p, opt);
      std::printf("h %.12g\nsweeps %ld\ns_hat %.12g\nresidual %.3g\n", g.h, g.iterations, g.s_hat_numeric,
                  g.residual);
      std::optional<kpp::PiecewiseSolution> exact;
      if (fls_compare) {
        if (p.junctions.size() != 1) {
          throw kpp::Error(kpp::ErrorCode::InvalidInputs, "--compare-explicit needs exactly one junction");
        }
        const double c = p.junctions[0];
        exact = kpp::construct_explicit({c, p.rates[0], p.rates[1], p.flux_limiters[0] + 0.25 * c * c});
        double err = 0.0;
        for (std::size_t i = 0; i < g.s.size(); ++i) err = std::max(err, std::fabs(g.values[i] - (*exact)(g.s[i])));
        std::printf("sup_error %.3g\ns_hat_explicit %.12g\n", err, exact->s_hat);
      }
      if (!fls_emit.empty()) {
        std::vector<std::string> header{"s", "rho"};
        if (exact) header.push_back("rho_explicit");
        kpp::io::CsvTable t(header);
        for (std::size_t i = 0; i < g.s.size(); ++i) {
          std::vector<std::string> row{kpp::io::fmt(g.s[i]), kpp::io::fmt(g.values[i])};
          if (exact) row.push_back(kpp::io::fmt((*exact)(g.s[i])));
          t.add_row(std::move(row));
        }
        kpp::io::write_csv(fls_emit, t, config_hash({{"problem", pj}, {"h", g.h}, {"tol", fls_tol}}));
      }
    } else if (sim->parsed()) {
      json cj = kpp::io::read_json_file(sim_config);
      kpp::SimConfig cfg = kpp::io::sim_config_from_json(cj);
      const std::vector<double> snaps = sim_snaps.empty() ? std::vector<double>{} : parse_times(sim_snaps);
      const std::vector<double> rate_times = sim_rate.empty() ? std::vector<double>{} : parse_times(sim_rate);
      const Range s_grid = parse_range("--rate-range", sim_rate_range);
      // Far-tail values of u underflow a double long before t = 400.
      if (!rate_times.empty() && sim_precision.empty() && !cj.contains("precision")) {
        cfg.precision = kpp::Precision::Extended;
      }
      if (!sim_precision.empty()) cfg.precision = sim_precision == "extended" ? kpp::Precision::Extended : kpp::Precision::Double;
      if (!sim_backend.empty()) cfg.backend = sim_backend == "serial" ? kpp::Backend::Serial : kpp::Backend::OpenMP;
      for (double t : snaps) cfg.snapshot_times.push_back(t);
      for (double t : rate_times) cfg.snapshot_times.push_back(t);

      const kpp::SimulationHandle h = cfg.shifts.size() > 1 ? kpp::multi_shift_simulate(cfg) : kpp::simulate(cfg);
      json effective = cj;
      effective["precision"] = kpp::precision_name(cfg.precision);
      effective["snapshot_times"] = cfg.snapshot_times;
      const std::string hash = config_hash(effective);

      const kpp::FrontTrace front = kpp::front_speed(h, h.levels.front());
      std::printf("level %.6g\nc_empirical %.12g\nfit_rms %.3g\nnodes %zu\nmin_u %.3g\n", front.level,
                  front.fitted_speed, front.fit_residual, h.nodes, h.min_u);

      const fs::path base(sim_emit);
      kpp::io::CsvTable t({"t", "x_front", "u_max"});
      for (std::size_t j = 0; j < h.times.size(); ++j) {
        t.add_row({kpp::io::fmt(h.times[j]), kpp::io::fmt(h.fronts[0][j]), kpp::io::fmt(h.u_max[j])});
      }
      kpp::io::write_csv(base, t, hash);
      for (double ts : snaps) {
        const kpp::Snapshot& s = h.snapshot(ts);
        kpp::io::CsvTable st({"x", "u", "log_u"});
        for (std::size_t i = 0; i < s.u.size(); ++i) {
          st.add_row({kpp::io::fmt(h.x(i)), kpp::io::fmt(s.u[i]), kpp::io::fmt(s.log_u[i])});
        }
        kpp::io::write_csv(sibling(base, "_snapshot_t" + time_tag(ts) + ".csv"), st, hash);
      }
      for (double tr : rate_times) {
        kpp::io::CsvTable rt({"s", "w"});
        for (const auto& [s, w] : kpp::rate_function(h, tr, s_grid.lo, s_grid.hi, s_grid.count)) {
          rt.add_row({kpp::io::fmt(s), kpp::io::fmt(w)});
        }
        kpp::io::write_csv(sibling(base, "_rate_t" + time_tag(tr) + ".csv"), rt, hash);
      }
    } else if (val->parsed()) {
      vopt.suite = *kpp::parse_suite(val_suite);
      const kpp::CrossValidationReport rep = kpp::run_validation(vopt);
      for (const auto& r : rep.rows) {
        std::printf("%s c1=%-5g %-16s formula=%.6f explicit=%.6f numeric=%.6f empirical=%.6f\n",
                    r.pass ? "PASS" : "FAIL", r.inputs.c1, std::string(kpp::regime_name(r.regime)).c_str(),
                    r.c_formula, r.s_hat_explicit, r.s_hat_numeric, r.c_empirical);
      }
      for (const auto& c : rep.checks) {
        std::printf("%s %-28s %.3g (bound %.3g)\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.value, c.bound);
      }
      std::printf("%s suite=%s seed=%llu\n", rep.pass ? "PASS" : "FAIL", val_suite.c_str(),
                  static_cast<unsigned long long>(rep.seed));
      const std::string hash = config_hash({{"suite", val_suite},
                                            {"seed", vopt.seed},
                                            {"h", vopt.h},
                                            {"points", vopt.random_points}});
      if (!val_emit.empty()) kpp::io::write_csv(val_emit, rep.rows_table(), hash);
      if (!val_report.empty()) kpp::io::write_atomic(val_report, rep.to_json().dump(2) + "\n");
      if (!rep.pass) throw Failed{};
    } else if (fig->parsed()) {
      const kpp::FigurePanel panel = kpp::figure1_panel(fig_panel[0]);
      const json cfg{{"figure1", fig_panel}, {"points", fig_points}};
      kpp::io::write_csv(fig_emit, kpp::figure1_table(panel, fig_points), config_hash(cfg));
      std::printf("panel %s: r_minus=%g r_plus=%g lambda1=%g -> %s\n", fig_panel.c_str(), panel.r_minus,
                  panel.r_plus, panel.lambda1, fig_emit.c_str());
    }
  } catch (const CLI::ParseError& e) {
    std::cerr << "kpp-front-lab: " << e.what() << '\n';
    return 2;
  } catch (const kpp::Error& e) {
    std::cerr << "kpp-front-lab: " << e.what() << '\n';
    return 1;
  } catch (const Failed&) {
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "kpp-front-lab: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

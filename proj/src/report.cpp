#include "kpp/report.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "kpp/detail/speed_cases.hpp"
#include "kpp/eigensolver.hpp"
#include "kpp/errors.hpp"
#include "kpp/hj_junction_solver.hpp"
#include "kpp/kpp_simulator.hpp"

namespace kpp {
namespace {

void check(std::vector<NamedCheck>& out, std::string name, double value, double bound, bool pass) {
  out.push_back({std::move(name), value, bound, pass});
}

SpeedInputs random_inputs(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> rate(0.2, 3.0), extra(0.0, 2.0), unit(0.0, 1.0);
  SpeedInputs in;
  in.r_minus = rate(rng);
  in.r_plus = rate(rng);
  in.lambda1 = std::max(in.r_minus, in.r_plus) + (unit(rng) < 0.25 ? 0.0 : extra(rng));
  const double top = detail::pulling_limit(in.lambda1, in.r_minus) + 1.0;
  in.c1 = -2.0 + (top + 2.0) * unit(rng);
  return in;
}

// Root of k tan(k L / 2) = beta with k = sqrt(r_mid - lam), beta = sqrt(lam - r).
double square_well_oracle(double r, double r_mid, double length) {
  double lo = r, hi = r_mid;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double k = std::sqrt(r_mid - mid);
    const double f = k * std::tan(0.5 * k * length) - std::sqrt(mid - r);
    (f > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

void formula_checks(const ValidateOptions& opt, std::vector<NamedCheck>& out) {
  std::mt19937_64 rng(opt.seed);
  double worst_jump = 0.0, bound_violation = 0.0, pulling_violation = 0.0, enhancement_violation = 0.0;
  double residual = 0.0, ishii_gap = 0.0, monotone_violation = 0.0;
  bool bitwise = true, viscosity = true, ishii = true, strict_found = true;
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (std::size_t k = 0; k < opt.random_points; ++k) {
    const SpeedInputs in = random_inputs(rng);
    const double rm = in.r_minus, rp = in.r_plus, lam = in.lambda1;

    // Neighbouring case expressions meet at each boundary.
    const double b2 = detail::kpp_speed(lam);
    const double b3 = detail::pulling_limit(lam, rm);
    worst_jump = std::max(worst_jump, std::fabs(b2 - detail::pulling_speed(detail::mu_minus(b2, lam, rm), rm)));
    worst_jump = std::max(worst_jump,
                          std::fabs(detail::pulling_speed(detail::mu_minus(b3, lam, rm), rm) - detail::kpp_speed(rm)));

    const SpeedResult r = rightward_speed(in);
    const double lo = std::min(2.0 * std::sqrt(rm), 2.0 * std::sqrt(rp));
    const double hi = std::max({2.0 * std::sqrt(rp), in.c1, 2.0 * std::sqrt(rm)});
    bound_violation = std::max({bound_violation, lo - r.c_star, r.c_star - hi});
    if (r.regime == Regime::NonlocalPulling) {
      pulling_violation = std::max({pulling_violation, 2.0 * std::sqrt(rm) - r.c_star, r.c_star - in.c1});
      if (!(r.c_star > 2.0 * std::sqrt(rm) && r.c_star < in.c1)) pulling_violation = std::max(pulling_violation, 1e-300);
    }
    enhancement_violation = std::max(enhancement_violation, baseline_speed(in).c_star - r.c_star);
    if (lam > std::max(rm, rp)) {
      bool strict = false;
      const double top = detail::pulling_limit(lam, rm) + 1.0;
      for (int i = 0; i <= 400 && !strict; ++i) {
        SpeedInputs v = in;
        v.c1 = top * i / 400.0;
        strict = rightward_speed(v).c_star > baseline_speed(v).c_star;
      }
      strict_found = strict_found && strict;
    }

    const PiecewiseSolution sol = construct_explicit(in);
    bitwise = bitwise && sol.s_hat == r.c_star;
    const ResidualReport rep = verify_viscosity(sol, {2000, 1e-9, 21});
    viscosity = viscosity && rep.pass;
    residual = std::max({residual, rep.classical, rep.obstacle, rep.kink, rep.junction_sub, rep.junction_super});

    SpeedInputs base = in;
    base.lambda1 = std::max(rm, rp);
    const IshiiComparison ic = ishii_equivalence_check(base, 2000);
    ishii = ishii && ic.pass;
    ishii_gap = std::max(ishii_gap, ic.sup_gap);

    // Larger flux limiter, smaller solution and larger free boundary.
    SpeedInputs lower = in;
    lower.lambda1 = std::max(rm, rp) + (lam - std::max(rm, rp)) * unit(rng);
    const PiecewiseSolution sol_low = construct_explicit(lower);
    const double extent = natural_extent(sol);
    for (int i = 0; i <= 200; ++i) {
      const double s = extent * i / 200.0;
      monotone_violation = std::max(monotone_violation, sol(s) - sol_low(s));
    }
    monotone_violation = std::max(monotone_violation, sol_low.s_hat - sol.s_hat);
  }

  check(out, "formula_continuity", worst_jump, 1e-12, worst_jump < 1e-12);
  check(out, "formula_bounds", bound_violation, 1e-12, bound_violation <= 1e-12);
  check(out, "nonlocal_pulling_window", pulling_violation, 0.0, pulling_violation <= 0.0);
  check(out, "enhancement", enhancement_violation, 0.0, enhancement_violation <= 0.0 && strict_found);
  check(out, "free_boundary_bitwise", bitwise ? 0.0 : 1.0, 0.0, bitwise);
  check(out, "viscosity_residuals", residual, 1e-9, viscosity);
  check(out, "ishii_equivalence", ishii_gap, 1e-10, ishii);
  check(out, "monotone_in_flux_limiter", monotone_violation, 1e-12, monotone_violation <= 1e-12);

  // F_A collapses onto F_A0 below A0.
  double fa_gap = 0.0;
  std::uniform_real_distribution<double> slope(-10.0, 10.0);
  for (std::size_t k = 0; k < opt.random_points; ++k) {
    const SpeedInputs in = random_inputs(rng);
    const double c = std::fabs(in.c1);
    const double a0 = std::max(in.r_minus, in.r_plus) - 0.25 * c * c;
    const double a = a0 - 5.0 * unit(rng);
    const double pp = slope(rng), pm = slope(rng);
    fa_gap = std::max(fa_gap, std::fabs(fa_junction(a, c, in.r_minus, in.r_plus, pp, pm) -
                                        fa_junction(a0, c, in.r_minus, in.r_plus, pp, pm)));
  }
  check(out, "flux_limiter_below_A0", fa_gap, 0.0, fa_gap == 0.0);
}

void numeric_checks(const ValidateOptions& opt, std::vector<NamedCheck>& out) {
  const double h = opt.h;
  double uniq = 0.0, obstacle = 0.0;
  for (const SpeedInputs& in : canonical_points()) {
    const JunctionProblem p = JunctionProblem::single(in);
    SolveOptions so;
    so.h = aligned_step(p, h);
    so.init = InitialState::Zero;
    const GridSolution a = solve(p, so);
    so.init = InitialState::Large;
    const GridSolution b = solve(p, so);
    for (std::size_t i = 0; i < a.values.size(); ++i) uniq = std::max(uniq, std::fabs(a.values[i] - b.values[i]));
    obstacle = std::max(obstacle, obstacle_residual(p, b));
  }
  check(out, "hj_uniqueness", uniq, 1e-9, uniq <= 1e-9);

  // Convergence study: sup error against the explicit solution at h and h/2.
  for (const double step : {h, 0.5 * h}) {
    double err = 0.0;
    for (const SpeedInputs& in : canonical_points()) {
      const JunctionProblem p = JunctionProblem::single(in);
      SolveOptions so;
      so.h = aligned_step(p, step);
      const GridSolution g = solve(p, so);
      const PiecewiseSolution exact = construct_explicit(in);
      for (std::size_t i = 0; i < g.s.size(); ++i) err = std::max(err, std::fabs(g.values[i] - exact(g.s[i])));
    }
    check(out, step == h ? "hj_sup_error_h" : "hj_sup_error_h_half", err, 5e-3, err <= 5e-3);
  }
  check(out, "hj_obstacle_consistency", obstacle, 1e-9, obstacle <= 1e-9);

  // Staircase R = 1, 1.5, 1 with inactive limiters: governed by the first junction.
  const JunctionProblem stairs{{2.5, 6.0}, {1.0, 1.5, 1.0}, {1.5 - 2.5 * 2.5 / 4.0, 1.5 - 9.0}, 20.0};
  const double s_num = multi_junction_speed(stairs, h);
  const double s_ref = rightward_speed({2.5, 1.0, 1.5, 1.5}).c_star;
  check(out, "hj_staircase_speed", std::fabs(s_num - s_ref), 10.0 * h, std::fabs(s_num - s_ref) <= 10.0 * h);

  const double l_const = principal_eigenvalue(EnvironmentProfile::constant(1.7)).lambda1;
  check(out, "eigen_constant", std::fabs(l_const - 1.7), 1e-6, std::fabs(l_const - 1.7) <= 1e-6);
  const double l_well = principal_eigenvalue(EnvironmentProfile::three_patch(1.0, 2.0, 1.0, 2.0)).lambda1;
  const double oracle = square_well_oracle(1.0, 2.0, 2.0);
  check(out, "eigen_square_well", std::fabs(l_well - oracle), 1e-5, std::fabs(l_well - oracle) <= 1e-5);
  double lo = 0.05, hi = 3.0;
  for (int it = 0; it < 40; ++it) {
    const double mid = 0.5 * (lo + hi);
    (exceeds_tail_level(EnvironmentProfile::three_patch(1.0, 3.0, 2.0, mid)) ? hi : lo) = mid;
  }
  const double gap = std::fabs(0.5 * (lo + hi) - std::numbers::pi / 4.0);
  check(out, "eigen_three_patch_threshold", gap, 1e-3, gap <= 1e-3);
  const double l_canon = principal_eigenvalue(canonical_profile()).lambda1;
  check(out, "eigen_canonical_profile", std::fabs(l_canon - 2.0), 0.02, std::fabs(l_canon - 2.0) <= 0.02);
}

void pde_multi_junction_check(const ValidateOptions& opt, std::vector<NamedCheck>& out) {
  // Two bumps: the first keeps pace at 2.5, the second outruns every front.
  const EnvironmentProfile bump = canonical_profile();
  SimConfig cfg;
  cfg.shifts = {{2.5, bump}, {6.0, bump}};
  cfg.dx = opt.pde_dx;
  cfg.dt = opt.pde_dt;
  cfg.t_end = opt.pde_t_end;
  const SimulationHandle h = multi_shift_simulate(cfg);
  const double c_emp = front_speed(h, h.levels.front()).fitted_speed;
  const JunctionProblem p{{2.5, 6.0}, {1.0, 1.0, 1.0}, {2.0 - 2.5 * 2.5 / 4.0, 2.0 - 9.0}, 20.0};
  const double c_hj = multi_junction_speed(p, aligned_step(p, opt.h));
  const double rel = std::fabs(c_emp - c_hj) / c_hj;
  check(out, "pde_vs_hj_two_junctions", rel, kEmpiricalTolerance, rel <= kEmpiricalTolerance);
}

}  // namespace

std::optional<Suite> parse_suite(std::string_view name) {
  if (name == "quick") return Suite::Quick;
  if (name == "full") return Suite::Full;
  if (name == "pde") return Suite::Pde;
  return std::nullopt;
}

std::string_view suite_name(Suite s) {
  switch (s) {
    case Suite::Quick: return "quick";
    case Suite::Full: return "full";
    case Suite::Pde: return "pde";
  }
  return "unknown";
}

std::vector<SpeedInputs> canonical_points() {
  return {{1.0, 1.0, 1.0, 2.0}, {2.5, 1.0, 1.0, 2.0}, {3.0, 1.0, 1.0, 2.0}, {5.0, 1.0, 1.0, 2.0}};
}

EnvironmentProfile canonical_profile() { return EnvironmentProfile::three_patch(1.0, 3.0, 1.0, std::numbers::pi / 2.0); }

CrossValidationRow cross_validate_point(const SpeedInputs& in, const PointOptions& opt) {
  CrossValidationRow row;
  row.inputs = in;
  const SpeedResult r = rightward_speed(in);
  row.regime = r.regime;
  row.c_formula = r.c_star;
  row.s_hat_explicit = construct_explicit(in).s_hat;
  row.pass = row.s_hat_explicit == row.c_formula;
  row.max_deviation = std::fabs(row.s_hat_explicit - row.c_formula);

  if (opt.numeric) {
    JunctionProblem p;
    if (in.c1 > 0.0) {
      p = JunctionProblem::single(in);
    } else {
      p.rates = {in.r_plus};
      p.s_max = std::ceil(1.25 * required_s_max(p) + 1.0);
    }
    const double h = aligned_step(p, opt.h);
    row.s_hat_numeric = multi_junction_speed(p, h);
    const double dev = std::fabs(row.s_hat_numeric - row.c_formula);
    row.max_deviation = std::max(row.max_deviation, dev);
    row.pass = row.pass && dev <= 10.0 * h;
  }
  if (opt.pde_profile) {
    SimConfig cfg = SimConfig::single(*opt.pde_profile, in.c1);
    cfg.dx = opt.pde_dx;
    cfg.dt = opt.pde_dt;
    cfg.t_end = opt.pde_t_end;
    const SimulationHandle h = simulate(cfg);
    row.c_empirical = front_speed(h, h.levels.front()).fitted_speed;
    const double dev = std::fabs(row.c_empirical - row.c_formula);
    row.max_deviation = std::max(row.max_deviation, dev);
    row.pass = row.pass && dev <= kEmpiricalTolerance * row.c_formula;
  }
  return row;
}

CrossValidationReport run_validation(const ValidateOptions& opt) {
  CrossValidationReport rep;
  rep.suite = opt.suite;
  rep.seed = opt.seed;
  rep.h = opt.h;
  PointOptions po;
  po.numeric = opt.suite != Suite::Quick;
  po.h = opt.h;
  if (opt.suite == Suite::Pde) po.pde_profile = canonical_profile();
  po.pde_dx = opt.pde_dx;
  po.pde_dt = opt.pde_dt;
  po.pde_t_end = opt.pde_t_end;
  for (const SpeedInputs& in : canonical_points()) rep.rows.push_back(cross_validate_point(in, po));

  formula_checks(opt, rep.checks);
  if (opt.suite != Suite::Quick) numeric_checks(opt, rep.checks);
  if (opt.suite == Suite::Pde) pde_multi_junction_check(opt, rep.checks);

  rep.pass = true;
  for (const auto& r : rep.rows) rep.pass = rep.pass && r.pass;
  for (const auto& c : rep.checks) rep.pass = rep.pass && c.pass;
  return rep;
}

io::CsvTable CrossValidationReport::rows_table() const {
  io::CsvTable t({"c1", "r_minus", "r_plus", "lambda1", "regime", "c_formula", "s_hat_explicit", "s_hat_numeric",
                  "c_empirical", "max_deviation", "pass"});
  for (const auto& r : rows) {
    t.add_row({io::fmt(r.inputs.c1), io::fmt(r.inputs.r_minus), io::fmt(r.inputs.r_plus), io::fmt(r.inputs.lambda1),
               std::string(regime_name(r.regime)), io::fmt(r.c_formula), io::fmt(r.s_hat_explicit),
               io::fmt(r.s_hat_numeric), io::fmt(r.c_empirical), io::fmt(r.max_deviation), r.pass ? "1" : "0"});
  }
  return t;
}

io::json CrossValidationReport::to_json() const {
  auto num = [](double v) { return std::isfinite(v) ? io::json(v) : io::json(nullptr); };
  io::json j;
  j["suite"] = suite_name(suite);
  j["seed"] = seed;
  j["h"] = h;
  j["pass"] = pass;
  j["rows"] = io::json::array();
  for (const auto& r : rows) {
    j["rows"].push_back({{"c1", r.inputs.c1},
                         {"r_minus", r.inputs.r_minus},
                         {"r_plus", r.inputs.r_plus},
                         {"lambda1", r.inputs.lambda1},
                         {"regime", regime_name(r.regime)},
                         {"c_formula", num(r.c_formula)},
                         {"s_hat_explicit", num(r.s_hat_explicit)},
                         {"s_hat_numeric", num(r.s_hat_numeric)},
                         {"c_empirical", num(r.c_empirical)},
                         {"max_deviation", num(r.max_deviation)},
                         {"pass", r.pass}});
  }
  j["checks"] = io::json::array();
  for (const auto& c : checks) {
    j["checks"].push_back({{"name", c.name}, {"value", num(c.value)}, {"bound", num(c.bound)}, {"pass", c.pass}});
  }
  return j;
}

FigurePanel figure1_panel(char id) {
  switch (id) {
    case 'a': return {'a', 1.0, 2.0, 2.0};
    case 'b': return {'b', 1.0, 2.0, 3.0};
    case 'c': return {'c', 2.0, 1.0, 2.0};
    case 'd': return {'d', 2.0, 1.0, 3.0};
    case 'e': return {'e', 1.0, 1.0, 1.0};
    case 'f': return {'f', 1.0, 1.0, 2.0};
    default: break;
  }
  throw Error(ErrorCode::InvalidInputs, std::string("unknown figure panel '") + id + "' (expected a..f)");
}

io::CsvTable figure1_table(const FigurePanel& panel, std::size_t points) {
  const double top = detail::pulling_limit(panel.lambda1, panel.r_minus) + 2.0;
  const auto rows = speed_sweep(0.0, top, points, panel.r_minus, panel.r_plus, panel.lambda1);
  io::CsvTable t({"c1", "c_star", "regime"});
  for (const auto& r : rows) t.add_row({io::fmt(r.c1), io::fmt(r.c_star_right), std::string(regime_name(r.regime))});
  return t;
}

std::vector<SweepRow> speed_sweep(double lo, double hi, std::size_t count, double r_minus, double r_plus,
                                  double lambda1) {
  if (count < 2 || !(hi >= lo)) throw Error(ErrorCode::InvalidInputs, "sweep range needs lo <= hi and >= 2 points");
  validate(SpeedInputs{lo, r_minus, r_plus, lambda1});
  validate(SpeedInputs{hi, r_minus, r_plus, lambda1});
  std::vector<SweepRow> rows(count);
  const long n = static_cast<long>(count);
#pragma omp parallel for schedule(dynamic, 16)
  for (long i = 0; i < n; ++i) {
    SweepRow& row = rows[static_cast<std::size_t>(i)];
    row.c1 = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    const SpeedInputs in{row.c1, r_minus, r_plus, lambda1};
    const SpeedResult right = rightward_speed(in);
    row.c_star_right = right.c_star;
    row.regime = right.regime;
    row.c_star_left = leftward_speed(in).c_star;
    row.s_base = baseline_speed(in).c_star;
  }
  return rows;
}

io::CsvTable sweep_table(const std::vector<SweepRow>& rows) {
  io::CsvTable t({"c1", "c_star_right", "c_star_left", "regime", "s_base"});
  for (const auto& r : rows) {
    t.add_row({io::fmt(r.c1), io::fmt(r.c_star_right), io::fmt(r.c_star_left), std::string(regime_name(r.regime)),
               io::fmt(r.s_base)});
  }
  return t;
}

}  // namespace kpp

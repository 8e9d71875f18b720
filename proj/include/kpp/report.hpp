#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kpp/env_profile.hpp"
#include "kpp/fl_explicit.hpp"
#include "kpp/io.hpp"
#include "kpp/speed_formulas.hpp"

namespace kpp {

enum class Suite { Quick, Full, Pde };

std::optional<Suite> parse_suite(std::string_view name);
std::string_view suite_name(Suite s);

/// r- = r+ = 1, lambda1 = 2 at c1 = 1, 2.5, 3, 5: one point per regime.
std::vector<SpeedInputs> canonical_points();

/// Three-patch bump with lambda1 = 2 exactly: k tan(kL/2) = beta at k = beta = 1.
EnvironmentProfile canonical_profile();

struct CrossValidationRow {
  SpeedInputs inputs;
  Regime regime = Regime::KppRight;
  double c_formula = 0.0;
  double s_hat_explicit = 0.0;
  double s_hat_numeric = std::numeric_limits<double>::quiet_NaN();
  double c_empirical = std::numeric_limits<double>::quiet_NaN();
  double max_deviation = 0.0;  // largest |estimate - c_formula|
  bool pass = false;
};

struct CrossValidationReport {
  Suite suite = Suite::Quick;
  std::uint64_t seed = 0;
  double h = 0.0;
  std::vector<CrossValidationRow> rows;
  std::vector<NamedCheck> checks;
  bool pass = false;

  io::CsvTable rows_table() const;
  io::json to_json() const;
};

struct ValidateOptions {
  Suite suite = Suite::Quick;
  std::uint64_t seed = 1;
  double h = 1e-3;
  std::size_t random_points = 200;
  double pde_dx = 0.05;
  double pde_dt = 0.05;
  double pde_t_end = 400.0;
};

/// Tolerances: formula vs explicit exact, vs numeric 10 h, vs empirical 7 %.
inline constexpr double kEmpiricalTolerance = 0.07;

struct PointOptions {
  bool numeric = false;
  double h = 1e-3;
  /// Runs the PDE with this profile shifted at c1 when set.
  std::optional<EnvironmentProfile> pde_profile;
  double pde_dx = 0.05;
  double pde_dt = 0.05;
  double pde_t_end = 400.0;
};

CrossValidationRow cross_validate_point(const SpeedInputs& in, const PointOptions& opt);

CrossValidationReport run_validation(const ValidateOptions& opt);

struct FigurePanel {
  char id = 'a';
  double r_minus = 1.0;
  double r_plus = 1.0;
  double lambda1 = 1.0;
};

/// Presets (a)..(f); throws Error(InvalidInputs) for anything else.
FigurePanel figure1_panel(char id);

/// c1 over [0, 2 (sqrt(r-) + sqrt(lambda1 - r-)) + 2], columns c1, c_star, regime.
io::CsvTable figure1_table(const FigurePanel& panel, std::size_t points = 400);

struct SweepRow {
  double c1 = 0.0;
  double c_star_right = 0.0;
  double c_star_left = 0.0;
  Regime regime = Regime::KppRight;
  double s_base = 0.0;
};

/// Evenly spaced c1 in [lo, hi], `count` points, evaluated in parallel and
/// returned in index order.
std::vector<SweepRow> speed_sweep(double lo, double hi, std::size_t count, double r_minus, double r_plus,
                                  double lambda1);

io::CsvTable sweep_table(const std::vector<SweepRow>& rows);

}  // namespace kpp

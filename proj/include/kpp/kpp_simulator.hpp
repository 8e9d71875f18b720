#pragma once

#include <cstddef>
#include <limits>
#include <string_view>
#include <utility>
#include <vector>

#include "kpp/env_profile.hpp"

namespace kpp {

enum class Scheme { ExplicitEuler, ImexCrankNicolson };
enum class Precision { Double, Extended };
enum class Backend { OpenMP, Serial };

std::string_view scheme_name(Scheme s);
std::string_view precision_name(Precision p);

/// A profile translating rigidly at `speed`.
struct Shift {
  double speed = 0.0;
  EnvironmentProfile profile = EnvironmentProfile::constant(1.0);
};

/// height * cos^2(pi (x - center) / width) on |x - center| < width / 2.
struct InitialBump {
  double center = 0.0;
  double width = 2.0;
  double height = 1.0;

  double operator()(double x) const;
};

struct SimConfig {
  /// Ascending speeds. The total growth is g_1(x - c_1 t) plus
  /// g_i(x - c_i t) - g_i(-inf) for i >= 2; neighbours must share asymptotes.
  std::vector<Shift> shifts;
  double dx = 0.05;
  double dt = 0.05;
  double t_end = 400.0;
  /// NaN selects the sizing rule from the speed bounds.
  double x_min = std::numeric_limits<double>::quiet_NaN();
  double x_max = std::numeric_limits<double>::quiet_NaN();
  Scheme scheme = Scheme::ImexCrankNicolson;
  Precision precision = Precision::Double;
  Backend backend = Backend::OpenMP;
  InitialBump u0;
  /// Front positions are recorded every sample_dt.
  double sample_dt = 1.0;
  /// Full profiles kept at these times (rounded to the step grid).
  std::vector<double> snapshot_times;
  /// Tracked in addition to 0.5 inf g and 1e-6.
  std::vector<double> levels;
  /// Leading IMEX steps whose diffusion is two backward-Euler half steps.
  int rannacher_steps = 4;

  static SimConfig single(EnvironmentProfile g, double c1);

  double growth(double t, double x) const;
  double inf_growth() const;
  double sup_growth() const;
  /// max(2 sqrt(g(+inf)), 2 sqrt(g(-inf)), c_i) over the shifts.
  double speed_bound() const;
};

/// Throws Error(InvalidConfig) on violated invariants.
void validate(const SimConfig& cfg);

/// Fills x_min/x_max from the sizing rule when they are NaN.
SimConfig resolved(const SimConfig& cfg);

struct Snapshot {
  double t = 0.0;
  std::vector<double> u;      // may underflow to 0 in the far tail
  std::vector<double> log_u;  // log of the working-precision value
};

class SimulationHandle {
 public:
  SimConfig config;  // resolved
  std::size_t nodes = 0;
  std::vector<double> levels;
  std::vector<double> times;
  /// fronts[k][j]: rightmost crossing of levels[k] at times[j], NaN if absent.
  std::vector<std::vector<double>> fronts;
  std::vector<double> u_max;
  double min_u = 0.0;
  std::vector<Snapshot> snapshots;

  double x(std::size_t i) const { return config.x_min + static_cast<double>(i) * config.dx; }
  /// Snapshot recorded at time t (within half a step); throws Error(InvalidInputs).
  const Snapshot& snapshot(double t) const;
  std::size_t level_index(double level) const;
};

/// Evolves u_t = u_xx + u (g_total(t, x) - u) with zero Dirichlet ends.
/// Throws Error(UnstableBlowup) or Error(DomainExhausted).
SimulationHandle simulate(const SimConfig& cfg);

/// Same as simulate; validates the multi-shift gluing explicitly.
SimulationHandle multi_shift_simulate(const SimConfig& cfg);

struct FrontTrace {
  double level = 0.0;
  std::vector<std::pair<double, double>> samples;  // (t, x_level)
  double fitted_speed = 0.0;
  std::pair<double, double> fit_window{0.0, 0.0};
  double fit_residual = 0.0;  // rms of the line fit
};

/// Line fit of the tracked level over [t_end / 2, t_end]. Throws
/// Error(LevelNotReached) or Error(InvalidInputs) for an untracked level.
FrontTrace front_speed(const SimulationHandle& h, double level);

/// w(s) = -log u(t, s t) / t on an even grid of s, log-linear in x between nodes.
std::vector<std::pair<double, double>> rate_function(const SimulationHandle& h, double t, double s_lo,
                                                     double s_hi, std::size_t count);

/// min u over |x| < speed * t in the snapshot at t.
double persistence_floor(const SimulationHandle& h, double t, double speed);

}  // namespace kpp

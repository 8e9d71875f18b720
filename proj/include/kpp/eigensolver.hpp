#pragma once

#include <utility>
#include <vector>

#include "kpp/env_profile.hpp"
#include "kpp/tridiagonal.hpp"

namespace kpp {

struct EigenOptions {
  /// Truncation half-widths; empty selects {20, 40, 80, 160} scaled by
  /// 1 / sqrt(min(sup g - max(r+-), 1)) when the profile has a bump.
  std::vector<double> half_widths;
  /// Grid step is first_half_width / nodes_per_half_width and stays fixed
  /// across the schedule, so successive values differ only by truncation.
  int nodes_per_half_width = 2000;
  double tol = 1e-6;
  /// Combine steps h and h/2 as (4 l(h/2) - l(h)) / 3.
  bool richardson = true;
};

struct EigenResult {
  double lambda1 = 0.0;
  double domain_half_width = 0.0;
  double grid_step = 0.0;
  /// (y, phi) on the last truncated domain, peak normalised to 1.
  std::vector<std::pair<double, double>> eigenfunction;
  double decay_rate_plus = 0.0;
  double decay_rate_minus = 0.0;
  bool converged = false;
  /// Truncated values, one per half-width actually used.
  std::vector<double> schedule_values;
};

/// Dirichlet operator phi'' + g phi on [-W, W] with n_half interior steps
/// per half-width; g is cell-averaged so jumps cost O(h^2), not O(h).
SymTridiagonal dirichlet_operator(const EnvironmentProfile& g, double half_width, int nodes_per_half_width);

/// Largest eigenvalue of the truncated Dirichlet problem (optionally
/// Richardson-extrapolated in the grid step).
double truncated_eigenvalue(const EnvironmentProfile& g, double half_width, int nodes_per_half_width,
                            bool richardson = true);

std::vector<double> default_half_widths(const EnvironmentProfile& g);

/// Generalized principal eigenvalue of phi'' + g phi = Lambda phi on the line.
EigenResult principal_eigenvalue(const EnvironmentProfile& g, const EigenOptions& options = {});

/// True when Lambda_1 > max(g(+inf), g(-inf)). Decided by a Sturm count of
/// the operator truncated with the Robin conditions phi' = +-sqrt(L* - r-+) phi
/// that the decaying tails satisfy exactly at the level L* = max(r+-). Exact
/// in the continuum limit for profiles that are constant outside the core;
/// no truncation bias near the threshold, unlike the Dirichlet route.
bool exceeds_tail_level(const EnvironmentProfile& g, int nodes = 40000);

/// A = Lambda_1 - c1^2 / 4.
inline double flux_limiter(double lambda1, double c1) { return lambda1 - 0.25 * c1 * c1; }

}  // namespace kpp

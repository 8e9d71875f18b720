#pragma once

#include <cstddef>
#include <vector>

#include "kpp/hamiltonian.hpp"
#include "kpp/speed_formulas.hpp"

namespace kpp {

/// Discrete variational inequality min{rho, rho + H(s, rho')} = 0 on [0, s_max]
/// with a flux-limited condition at each junction, rho(0) = 0, and the far
/// field s^2/4 - R(s_max) imposed on two ghost nodes.
struct JunctionProblem {
  std::vector<double> junctions;
  std::vector<double> rates;          // junctions.size() + 1, R left-continuous
  std::vector<double> flux_limiters;  // A_i = lambda1_i - c_i^2 / 4
  double s_max = 0.0;

  Hamiltonian hamiltonian() const { return {junctions, rates}; }

  /// One junction at c1; s_max == 0 picks a comfortable domain.
  static JunctionProblem single(const SpeedInputs& in, double s_max = 0.0);
};

/// Smallest s_max for which the final quadratic regime sits inside the domain.
double required_s_max(const JunctionProblem& p);

/// Throws Error(InvalidInputs) on inconsistent sizes, unordered or
/// out-of-domain junctions, nonpositive rates or a short domain.
void validate(const JunctionProblem& p);

enum class InitialState { Zero, Large };

struct SolveOptions {
  double h = 1e-3;
  double tol = 1e-10;
  long max_sweeps = 100000;
  InitialState init = InitialState::Large;
  /// Nodes at or below this value count as the zero set; negative selects 10 * tol.
  double value_threshold = -1.0;
};

struct GridSolution {
  double h = 0.0;
  std::vector<double> s;       // nodes 0..N
  std::vector<double> values;
  long iterations = 0;
  double residual = 0.0;       // sup-norm of the last sweep's update
  double value_threshold = 0.0;
  double s_hat_numeric = 0.0;

  /// Piecewise-linear interpolation between nodes.
  double operator()(double x) const;
};

/// rho* with rho* + max(H+(s, (rho* - left)/h), H-(s, (right - rho*)/h)) = 0.
/// Both one-sided roots are closed form; the smaller one is the solution since
/// each branch is increasing in rho*.
double godunov_root(double s, double h, double r, double left, double right);

/// Junction analogue with max(A, H-(c+, D+), H+(c-, D-)).
double junction_root(double c, double h, double r_left, double r_right, double a, double left, double right);

/// Projected nodewise updates, max(0, root).
inline double node_update(double s, double h, double r, double left, double right) {
  const double x = godunov_root(s, h, r, left, right);
  return x > 0.0 ? x : 0.0;
}
inline double junction_update(double c, double h, double r_left, double r_right, double a, double left,
                              double right) {
  const double x = junction_root(c, h, r_left, r_right, a, left, right);
  return x > 0.0 ? x : 0.0;
}

/// Largest step in [h_target / 2, h_target] that puts every junction on the grid s_i = i h.
/// Throws Error(GridMisaligned) when the junctions are not commensurate.
double aligned_step(const JunctionProblem& p, double h_target);

/// Alternating Gauss-Seidel sweeps. Throws Error(NoConvergence) or
/// Error(GridMisaligned).
GridSolution solve(const JunctionProblem& p, const SolveOptions& opt);

/// max_i |min(rho_i, rho_i + H_God)| over the solved nodes.
double obstacle_residual(const JunctionProblem& p, const GridSolution& sol);

/// sup{s : rho(s) = 0} on the grid, with the zero set read at 10 * tol.
double multi_junction_speed(const JunctionProblem& p, double h, double tol = 1e-10);

}  // namespace kpp

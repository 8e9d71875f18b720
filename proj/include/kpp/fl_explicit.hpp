#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "kpp/hamiltonian.hpp"
#include "kpp/speed_formulas.hpp"

namespace kpp {

enum class PieceKind { Zero, Affine, Quadratic };

std::string_view piece_tag(PieceKind kind);

struct Piece {
  PieceKind kind = PieceKind::Zero;
  double slope = 0.0;      // Affine: slope * s + intercept
  double intercept = 0.0;
  double rate = 0.0;       // Quadratic: s^2/4 - rate

  static Piece zero() { return {}; }
  static Piece affine(double slope, double intercept) { return {PieceKind::Affine, slope, intercept, 0.0}; }
  static Piece quadratic(double rate) { return {PieceKind::Quadratic, 0.0, 0.0, rate}; }

  double value(double s) const;
  double derivative(double s) const;
};

/// Exact FL-solution on [0, inf): pieces[k] holds on [breakpoints[k], breakpoints[k+1]],
/// the last piece is unbounded.
struct PiecewiseSolution {
  SpeedInputs inputs;
  Regime regime = Regime::KppRight;
  std::vector<double> breakpoints;
  std::vector<Piece> pieces;
  double flux_limiter = 0.0;
  double junction = 0.0;
  double junction_value = std::numeric_limits<double>::quiet_NaN();
  double s_hat = 0.0;
  double mu_minus = std::numeric_limits<double>::quiet_NaN();
  double mu_plus = std::numeric_limits<double>::quiet_NaN();

  /// Index of the piece holding s; at a breakpoint, the piece starting there.
  std::size_t piece_index(double s) const;
  const Piece& piece_at(double s) const { return pieces[piece_index(s)]; }
  double operator()(double s) const { return piece_at(s).value(s); }
  double slope_left(double s) const;
  double slope_right(double s) const;
  Hamiltonian hamiltonian() const { return Hamiltonian::single(junction, inputs.r_minus, inputs.r_plus); }
};

/// Case-matched construction rho_1 .. rho_4 for the single-junction problem.
PiecewiseSolution construct_explicit(const SpeedInputs& in);

struct NamedCheck {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool pass = false;
};

struct ResidualReport {
  double tol = 0.0;
  std::size_t samples = 0;
  double classical = 0.0;       // max |rho + H| on positive smooth pieces
  double obstacle = 0.0;        // max (-(rho + H))+ on zero pieces
  double kink = 0.0;            // worst one-sided violation at interior kinks
  double junction_sub = 0.0;    // max (rho + F_A)+ over the subsolution lattice
  double junction_super = 0.0;  // max (-(rho + F_A))+ over the supersolution lattice
  std::vector<NamedCheck> checks;
  bool pass = false;

  const NamedCheck* find(std::string_view name) const;
};

struct ViscosityOptions {
  std::size_t samples = 10000;
  double tol = 1e-9;
  int lattice = 21;
};

/// Samples the variational inequality min{rho, rho + H(s, rho')} = 0 on the
/// smooth pieces, tests admissible slopes at kinks, and the flux-limited
/// junction condition on a test-slope lattice at each junction.
ResidualReport verify_viscosity(const PiecewiseSolution& sol, const Hamiltonian& h,
                                const std::vector<double>& limiters, const ViscosityOptions& opt = {});
ResidualReport verify_viscosity(const PiecewiseSolution& sol, const ViscosityOptions& opt = {});

/// Closed-form Ishii solution for lambda1 = max(r-, r+), written per ordering
/// of r- and r+. Ignores in.lambda1.
double baseline_solution(const SpeedInputs& in, double s);

struct IshiiComparison {
  double sup_gap = 0.0;
  double s_hat = 0.0;
  double s_base = 0.0;
  bool pass = false;
};

/// Requires lambda1 == max(r+-); throws Error(PreconditionViolated) otherwise.
IshiiComparison ishii_equivalence_check(const SpeedInputs& in, std::size_t samples = 10000);

/// Right end of the interval where the construction is interesting.
double natural_extent(const PiecewiseSolution& sol);

}  // namespace kpp

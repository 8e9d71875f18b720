#include "kpp/fl_explicit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kpp/detail/speed_cases.hpp"
#include "kpp/errors.hpp"

namespace kpp {
namespace {

// Appends pieces left to right. Affine pieces are anchored on the current
// value at their start so the result is continuous by construction, and a
// piece that would have zero length is replaced by its successor.
class Builder {
 public:
  explicit Builder(Piece first) : breaks_{0.0}, pieces_{first} {}

  double value_at(double s) const { return pieces_.back().value(s); }

  void then(double at, Piece p) {
    if (at < breaks_.back()) throw std::logic_error("construction pieces out of order");
    if (at == breaks_.back() && pieces_.size() > 1) {
      breaks_.pop_back();
      pieces_.pop_back();
    }
    if (at == breaks_.back()) {
      pieces_.back() = p;
      return;
    }
    breaks_.push_back(at);
    pieces_.push_back(p);
  }

  void then_affine(double at, double slope) {
    if (at == breaks_.back() && pieces_.size() > 1) {
      breaks_.pop_back();
      pieces_.pop_back();
    }
    const double anchor = value_at(at);
    then(at, Piece::affine(slope, anchor - slope * at));
  }

  void finish(PiecewiseSolution& sol) {
    sol.breakpoints = std::move(breaks_);
    sol.pieces = std::move(pieces_);
  }

 private:
  std::vector<double> breaks_;
  std::vector<Piece> pieces_;
};

std::vector<double> lattice(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (n - 1);
  return out;
}

void add_check(ResidualReport& rep, std::string name, double value, double bound, bool pass) {
  rep.checks.push_back({std::move(name), value, bound, pass});
}

}  // namespace

std::string_view piece_tag(PieceKind kind) {
  switch (kind) {
    case PieceKind::Zero: return "zero";
    case PieceKind::Affine: return "affine";
    case PieceKind::Quadratic: return "quadratic";
  }
  return "unknown";
}

double Piece::value(double s) const {
  switch (kind) {
    case PieceKind::Zero: return 0.0;
    case PieceKind::Affine: return slope * s + intercept;
    case PieceKind::Quadratic: return 0.25 * s * s - rate;
  }
  return 0.0;
}

double Piece::derivative(double s) const {
  switch (kind) {
    case PieceKind::Zero: return 0.0;
    case PieceKind::Affine: return slope;
    case PieceKind::Quadratic: return 0.5 * s;
  }
  return 0.0;
}

std::size_t PiecewiseSolution::piece_index(double s) const {
  const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), s);
  if (it == breakpoints.begin()) return 0;
  return static_cast<std::size_t>(it - breakpoints.begin()) - 1;
}

double PiecewiseSolution::slope_left(double s) const {
  std::size_t k = piece_index(s);
  if (k > 0 && breakpoints[k] == s) --k;
  return pieces[k].derivative(s);
}

double PiecewiseSolution::slope_right(double s) const { return piece_at(s).derivative(s); }

PiecewiseSolution construct_explicit(const SpeedInputs& in) {
  const SpeedResult speed = rightward_speed(in);
  const double c1 = in.c1, rm = in.r_minus, rp = in.r_plus, lam = in.lambda1;

  PiecewiseSolution sol;
  sol.inputs = in;
  sol.regime = speed.regime;
  sol.junction = c1;
  sol.flux_limiter = lam - 0.25 * c1 * c1;

  Builder b(Piece::zero());
  switch (detail::speed_case(c1, rm, rp, lam)) {
    case 1: {
      sol.s_hat = detail::kpp_speed(rp);
      b.then(sol.s_hat, Piece::quadratic(rp));
      break;
    }
    case 2: {
      sol.s_hat = c1;
      const double m = 0.5 * (c1 + std::sqrt(c1 * c1 - 4.0 * rp));
      b.then_affine(c1, m);
      b.then(2.0 * m, Piece::quadratic(rp));
      break;
    }
    case 3: {
      sol.mu_minus = detail::mu_minus(c1, lam, rm);
      sol.mu_plus = detail::mu_plus(c1, lam, rp);
      sol.s_hat = detail::pulling_speed(sol.mu_minus, rm);
      b.then_affine(sol.s_hat, sol.mu_minus);
      b.then_affine(c1, sol.mu_plus);
      b.then(2.0 * sol.mu_plus, Piece::quadratic(rp));
      break;
    }
    default: {
      sol.mu_minus = detail::mu_minus(c1, lam, rm);
      sol.mu_plus = detail::mu_plus(c1, lam, rp);
      sol.s_hat = detail::kpp_speed(rm);
      b.then(sol.s_hat, Piece::quadratic(rm));
      b.then_affine(2.0 * sol.mu_minus, sol.mu_minus);
      b.then_affine(c1, sol.mu_plus);
      b.then(2.0 * sol.mu_plus, Piece::quadratic(rp));
      break;
    }
  }
  b.finish(sol);
  if (c1 >= 0.0) sol.junction_value = sol(c1);
  return sol;
}

const NamedCheck* ResidualReport::find(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

double natural_extent(const PiecewiseSolution& sol) {
  return 1.5 * std::max({sol.breakpoints.back(), sol.junction, sol.s_hat}) + 2.0;
}

ResidualReport verify_viscosity(const PiecewiseSolution& sol, const Hamiltonian& h,
                                const std::vector<double>& limiters, const ViscosityOptions& opt) {
  if (limiters.size() != h.junctions.size()) {
    throw Error(ErrorCode::InvalidInputs, "one flux limiter per junction required");
  }
  ResidualReport rep;
  rep.tol = opt.tol;
  rep.samples = opt.samples;
  const double tol = opt.tol;
  const double extent = natural_extent(sol);

  auto near_special = [&](double s) {
    for (double b : sol.breakpoints) {
      if (std::fabs(s - b) < 1e-12) return true;
    }
    for (double c : h.junctions) {
      if (std::fabs(s - c) < 1e-12) return true;
    }
    return false;
  };

  double min_value = 0.0, max_drop = 0.0, zero_set_max = 0.0;
  double prev = sol(0.0);
  for (std::size_t k = 0; k < opt.samples; ++k) {
    const double s = extent * (static_cast<double>(k) + 0.5) / static_cast<double>(opt.samples);
    const double v = sol(s);
    min_value = std::min(min_value, v);
    max_drop = std::max(max_drop, prev - v);
    prev = v;
    if (s <= sol.s_hat) zero_set_max = std::max(zero_set_max, std::fabs(v));
    if (near_special(s)) continue;
    const Piece& p = sol.piece_at(s);
    const double res = v + h(s, p.derivative(s));
    if (p.kind == PieceKind::Zero) {
      rep.obstacle = std::max(rep.obstacle, -res);
    } else {
      rep.classical = std::max(rep.classical, std::fabs(res));
    }
  }

  // Interior kinks: convex ones admit test functions from below only.
  for (std::size_t k = 1; k < sol.breakpoints.size(); ++k) {
    const double s = sol.breakpoints[k];
    if (std::find(h.junctions.begin(), h.junctions.end(), s) != h.junctions.end()) continue;
    const double v = sol(s), sl = sol.slope_left(s), sr = sol.slope_right(s);
    const double r = h.R(s);
    for (double p : lattice(std::min(sl, sr), std::max(sl, sr), opt.lattice)) {
      const double res = v + hamiltonian(s, p, r);
      if (sr >= sl) {
        rep.kink = std::max(rep.kink, -res);
      } else if (v > 0.0) {
        rep.kink = std::max(rep.kink, res);
      }
    }
  }

  for (std::size_t j = 0; j < h.junctions.size(); ++j) {
    const double c = h.junctions[j];
    if (c <= 0.0) continue;
    const double a = limiters[j];
    const double v = sol(c), sl = sol.slope_left(c), sr = sol.slope_right(c);
    const double lam = a + 0.25 * c * c;
    const double w = 3.0 * (1.0 + std::fabs(c) + std::sqrt(std::max(lam, 0.0)));
    if (v > 0.0) {
      for (double pp : lattice(sr, sr + w, opt.lattice)) {
        for (double pm : lattice(sl - w, sl, opt.lattice)) {
          rep.junction_sub = std::max(rep.junction_sub, v + h.fa(j, a, pp, pm));
        }
      }
    }
    for (double pp : lattice(sr - w, sr, opt.lattice)) {
      for (double pm : lattice(sl, sl + w, opt.lattice)) {
        rep.junction_super = std::max(rep.junction_super, -(v + h.fa(j, a, pp, pm)));
      }
    }
  }

  double jump = 0.0;
  for (std::size_t k = 1; k < sol.breakpoints.size(); ++k) {
    const double s = sol.breakpoints[k];
    jump = std::max(jump, std::fabs(sol.pieces[k - 1].value(s) - sol.pieces[k].value(s)));
  }
  add_check(rep, "continuity", jump, 1e-12, jump < 1e-12);
  add_check(rep, "origin", sol(0.0), 0.0, sol(0.0) == 0.0);
  add_check(rep, "nonnegative", min_value, -tol, min_value >= -tol);
  add_check(rep, "nondecreasing", max_drop, tol, max_drop <= tol);
  add_check(rep, "zero_set", zero_set_max, tol, zero_set_max <= tol);
  const double after = sol(sol.s_hat + 1e-6 * (1.0 + sol.s_hat));
  add_check(rep, "free_boundary_sharp", after, 0.0, after > 0.0);
  const bool superlinear = sol.pieces.back().kind == PieceKind::Quadratic;
  add_check(rep, "superlinear_tail", superlinear ? 1.0 : 0.0, 1.0, superlinear);

  const SpeedInputs& in = sol.inputs;
  if (sol.regime == Regime::NonlocalPulling || sol.regime == Regime::KppLeft) {
    // rho(c1) + H(c1-, c1/2) collapses to r- - lambda1.
    const double c = sol.junction;
    const double value = sol(c) + hamiltonian(c, 0.5 * c, in.r_minus);
    const double bound = in.r_minus - in.lambda1;
    add_check(rep, "junction_left_envelope", value, bound,
              value <= tol && std::fabs(value - bound) <= tol * (1.0 + std::fabs(bound)));
  }
  if (sol.regime == Regime::NonlocalPulling) {
    const double s2 = sol.s_hat;
    double worst = std::numeric_limits<double>::infinity();
    for (double p : lattice(0.0, sol.mu_minus, 101)) worst = std::min(worst, hamiltonian(s2, p, in.r_minus));
    add_check(rep, "s2_supersolution", worst, -tol, worst >= -tol);
  }
  if (sol.regime == Regime::KppLeft) {
    const double s3 = sol.s_hat;
    const double bound = in.r_minus - 0.25 * s3 * s3;
    double worst = std::numeric_limits<double>::infinity();
    for (double p : lattice(0.0, sol.mu_minus, 101)) worst = std::min(worst, hamiltonian(s3, p, in.r_minus));
    add_check(rep, "s3_supersolution", worst, bound, worst >= bound - tol && std::fabs(bound) <= tol);
  }

  rep.pass = rep.classical <= tol && rep.obstacle <= tol && rep.kink <= tol && rep.junction_sub <= tol &&
             rep.junction_super <= tol;
  for (const auto& c : rep.checks) rep.pass = rep.pass && c.pass;
  return rep;
}

ResidualReport verify_viscosity(const PiecewiseSolution& sol, const ViscosityOptions& opt) {
  return verify_viscosity(sol, sol.hamiltonian(), {sol.flux_limiter}, opt);
}

double baseline_solution(const SpeedInputs& in, double s) {
  const double c1 = in.c1, rm = in.r_minus, rp = in.r_plus;
  if (s <= 0.0) return 0.0;
  auto kpp = [](double s, double r) { return std::max(0.25 * s * s - r, 0.0); };

  if (rp == rm) return kpp(s, rp);

  if (rp > rm) {
    if (c1 <= 2.0 * std::sqrt(rp)) return kpp(s, rp);
    if (s >= c1) return 0.25 * s * s - rp;
    // Tangent line of slope mu to s^2/4 - r- on the left of the junction.
    const double mu = 0.5 * c1 - std::sqrt(rp - rm);
    const double line = mu * s - mu * mu - rm;
    if (mu <= std::sqrt(rm)) return std::max(line, 0.0);
    return s <= 2.0 * mu ? kpp(s, rm) : line;
  }

  // r- > r+: the left side is already settled at c1.
  if (c1 <= 2.0 * std::sqrt(rp)) return kpp(s, rp);
  if (c1 <= 2.0 * std::sqrt(rm)) {
    const double m = 0.5 * (c1 + std::sqrt(c1 * c1 - 4.0 * rp));
    if (s <= c1) return 0.0;
    return s <= 2.0 * m ? m * (s - c1) : 0.25 * s * s - rp;
  }
  const double mu = 0.5 * c1 + std::sqrt(rm - rp);
  if (s <= c1) return kpp(s, rm);
  return s <= 2.0 * mu ? 0.25 * c1 * c1 - rm + mu * (s - c1) : 0.25 * s * s - rp;
}

IshiiComparison ishii_equivalence_check(const SpeedInputs& in, std::size_t samples) {
  validate(in);
  if (in.lambda1 > std::max(in.r_minus, in.r_plus)) {
    throw Error(ErrorCode::PreconditionViolated, "Ishii equivalence needs lambda1 = max(r_minus, r_plus)");
  }
  const PiecewiseSolution sol = construct_explicit(in);
  IshiiComparison out;
  out.s_hat = sol.s_hat;
  out.s_base = baseline_speed(in).c_star;
  const double extent = natural_extent(sol);
  auto gap_at = [&](double s) { return std::fabs(sol(s) - baseline_solution(in, s)); };
  for (std::size_t k = 0; k <= samples; ++k) {
    out.sup_gap = std::max(out.sup_gap, gap_at(extent * static_cast<double>(k) / static_cast<double>(samples)));
  }
  for (double b : sol.breakpoints) out.sup_gap = std::max(out.sup_gap, gap_at(b));
  out.pass = out.sup_gap < 1e-10 && out.s_hat == out.s_base;
  return out;
}

}  // namespace kpp

#include "kpp/hj_junction_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kpp/errors.hpp"

namespace kpp {
namespace {

// Root of x + H+(s, (x - a)/h) = 0. Flat branch when the upwind slope stays
// below s/2, otherwise the larger root of p^2 + (h - s) p + a + r = 0.
double root_from_left(double s, double h, double r, double a) {
  const double flat = 0.25 * s * s - r;
  if (flat - a <= 0.5 * s * h) return flat;
  const double b = s - h;
  const double disc = std::max(b * b - 4.0 * (a + r), 0.0);
  return a + h * 0.5 * (b + std::sqrt(disc));
}

// Root of x + H-(s, (b - x)/h) = 0. Flat branch when the downwind slope is at
// least s/2, otherwise the smaller root of q^2 - (s + h) q + b + r = 0,
// written without cancellation.
double root_from_right(double s, double h, double r, double b) {
  const double flat = 0.25 * s * s - r;
  if (b - flat >= 0.5 * s * h) return flat;
  const double k = s + h;
  const double disc = std::max(k * k - 4.0 * (b + r), 0.0);
  const double q = 2.0 * (b + r) / (k + std::sqrt(disc));
  return b - h * q;
}

double godunov_h(double s, double r, double p_minus, double p_plus) {
  return std::max(h_plus(s, p_minus, r), h_minus(s, p_plus, r));
}

struct Grid {
  std::size_t n = 0;                 // last solved node
  double h = 0.0;
  std::vector<double> s;             // 0..n+2
  std::vector<double> r;             // R at each node (left value at junctions)
  std::vector<int> junction_of;      // -1 or junction index
};

Grid build_grid(const JunctionProblem& p, double h) {
  Grid g;
  g.h = h;
  g.n = static_cast<std::size_t>(std::ceil(p.s_max / h - 1e-9));
  g.s.resize(g.n + 3);
  g.r.resize(g.n + 3);
  g.junction_of.assign(g.n + 3, -1);
  for (std::size_t i = 0; i < g.s.size(); ++i) g.s[i] = static_cast<double>(i) * h;
  for (std::size_t j = 0; j < p.junctions.size(); ++j) {
    const double c = p.junctions[j];
    const double k = std::round(c / h);
    if (std::fabs(k * h - c) > 1e-9 * std::max(1.0, c)) {
      std::ostringstream os;
      os << "junction " << c << " is not a multiple of h = " << h;
      throw Error(ErrorCode::GridMisaligned, os.str());
    }
    const auto i = static_cast<std::size_t>(k);
    g.s[i] = c;
    g.junction_of[i] = static_cast<int>(j);
  }
  const Hamiltonian ham = p.hamiltonian();
  for (std::size_t i = 0; i < g.s.size(); ++i) g.r[i] = ham.R(g.s[i]);
  return g;
}

double update_at(const JunctionProblem& p, const Grid& g, const std::vector<double>& v, std::size_t i) {
  const int j = g.junction_of[i];
  if (j < 0) return node_update(g.s[i], g.h, g.r[i], v[i - 1], v[i + 1]);
  const auto ju = static_cast<std::size_t>(j);
  return junction_update(g.s[i], g.h, p.rates[ju], p.rates[ju + 1], p.flux_limiters[ju], v[i - 1], v[i + 1]);
}

}  // namespace

JunctionProblem JunctionProblem::single(const SpeedInputs& in, double s_max) {
  validate(in);
  JunctionProblem p;
  p.junctions = {in.c1};
  p.rates = {in.r_minus, in.r_plus};
  p.flux_limiters = {in.lambda1 - 0.25 * in.c1 * in.c1};
  p.s_max = s_max > 0.0 ? s_max : std::ceil(1.25 * required_s_max(p) + 1.0);
  return p;
}

double required_s_max(const JunctionProblem& p) {
  double reach = 0.0;
  for (std::size_t j = 0; j < p.junctions.size(); ++j) {
    const double c = p.junctions[j];
    const double lam = std::max(p.flux_limiters[j] + 0.25 * c * c, 0.0);
    reach = std::max(reach, std::sqrt(lam) + 0.5 * c);
  }
  return 2.0 * (std::sqrt(p.rates.back()) + reach);
}

void validate(const JunctionProblem& p) {
  auto fail = [](const std::string& why) { throw Error(ErrorCode::InvalidInputs, why); };
  if (p.rates.size() != p.junctions.size() + 1) fail("rates must have one entry more than junctions");
  if (p.flux_limiters.size() != p.junctions.size()) fail("one flux limiter per junction required");
  for (double r : p.rates) {
    if (!(r > 0.0) || !std::isfinite(r)) fail("segment rates must be positive and finite");
  }
  for (double a : p.flux_limiters) {
    if (!std::isfinite(a)) fail("flux limiters must be finite");
  }
  for (std::size_t j = 0; j < p.junctions.size(); ++j) {
    const double c = p.junctions[j];
    if (!(c > 0.0) || !(c < p.s_max)) fail("junctions must lie inside (0, s_max)");
    if (j > 0 && !(c > p.junctions[j - 1])) fail("junctions must be strictly increasing");
  }
  if (!(p.s_max > required_s_max(p))) {
    std::ostringstream os;
    os << "s_max = " << p.s_max << " must exceed " << required_s_max(p);
    fail(os.str());
  }
}

double godunov_root(double s, double h, double r, double left, double right) {
  return std::min(root_from_left(s, h, r, left), root_from_right(s, h, r, right));
}

double junction_root(double c, double h, double r_left, double r_right, double a, double left, double right) {
  return std::min({root_from_left(c, h, r_left, left), root_from_right(c, h, r_right, right), -a});
}

double aligned_step(const JunctionProblem& p, double h_target) {
  if (!(h_target > 0.0)) throw Error(ErrorCode::InvalidInputs, "step must be positive");
  if (p.junctions.empty()) return h_target;
  const double c = p.junctions.front();
  // Divisors of the first junction with h in [h_target / 2, h_target].
  const double n0 = std::ceil(c / h_target - 1e-9);
  for (double n = n0; n <= 2.0 * n0; n += 1.0) {
    const double h = c / n;
    bool ok = true;
    for (double cj : p.junctions) {
      const double k = std::round(cj / h);
      if (std::fabs(k * h - cj) > 1e-9 * std::max(1.0, cj)) {
        ok = false;
        break;
      }
    }
    if (ok) return h;
  }
  throw Error(ErrorCode::GridMisaligned, "no aligned step found near the requested h");
}

GridSolution solve(const JunctionProblem& p, const SolveOptions& opt) {
  validate(p);
  if (!(opt.h > 0.0) || !(opt.tol > 0.0) || opt.max_sweeps < 1) {
    throw Error(ErrorCode::InvalidInputs, "h, tol and max_sweeps must be positive");
  }
  const Grid g = build_grid(p, opt.h);
  const double r_far = p.rates.back();
  const double r_top = *std::max_element(p.rates.begin(), p.rates.end());

  std::vector<double> v(g.s.size(), 0.0);
  for (std::size_t i = 1; i <= g.n; ++i) {
    v[i] = opt.init == InitialState::Zero ? 0.0 : 0.25 * g.s[i] * g.s[i] + r_top + 10.0;
  }
  for (std::size_t i = g.n + 1; i < v.size(); ++i) v[i] = 0.25 * g.s[i] * g.s[i] - r_far;

  GridSolution out;
  out.h = opt.h;
  bool converged = false;
  for (long sweep = 1; sweep <= opt.max_sweeps; ++sweep) {
    double delta = 0.0;
    auto visit = [&](std::size_t i) {
      const double next = update_at(p, g, v, i);
      delta = std::max(delta, std::fabs(next - v[i]));
      v[i] = next;
    };
    if (sweep % 2 == 1) {
      for (std::size_t i = 1; i <= g.n; ++i) visit(i);
    } else {
      for (std::size_t i = g.n; i >= 1; --i) visit(i);
    }
    out.iterations = sweep;
    out.residual = delta;
    if (delta < opt.tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    std::ostringstream os;
    os << "iterations=" << out.iterations << " residual=" << out.residual;
    throw Error(ErrorCode::NoConvergence, os.str());
  }

  out.s.assign(g.s.begin(), g.s.begin() + static_cast<std::ptrdiff_t>(g.n + 1));
  out.values.assign(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(g.n + 1));
  out.value_threshold = opt.value_threshold >= 0.0 ? opt.value_threshold : 10.0 * opt.tol;
  std::size_t last_zero = 0;
  while (last_zero + 1 < out.values.size() && out.values[last_zero + 1] <= out.value_threshold) ++last_zero;
  out.s_hat_numeric = out.s[last_zero];
  return out;
}

double GridSolution::operator()(double x) const {
  if (x <= s.front()) return values.front();
  if (x >= s.back()) return values.back();
  const auto it = std::upper_bound(s.begin(), s.end(), x);
  const auto k = static_cast<std::size_t>(it - s.begin());
  const double w = (x - s[k - 1]) / (s[k] - s[k - 1]);
  return values[k - 1] + w * (values[k] - values[k - 1]);
}

double obstacle_residual(const JunctionProblem& p, const GridSolution& sol) {
  const Hamiltonian ham = p.hamiltonian();
  const double h = sol.h;
  const double r_far = p.rates.back();
  double worst = 0.0;
  const std::size_t n = sol.values.size() - 1;
  for (std::size_t i = 1; i <= n; ++i) {
    const double s = sol.s[i];
    const double v = sol.values[i];
    const double right = i < n ? sol.values[i + 1] : 0.25 * (s + h) * (s + h) - r_far;
    const double dm = (v - sol.values[i - 1]) / h;
    const double dp = (right - v) / h;
    double hg = 0.0;
    const auto jt = std::find(p.junctions.begin(), p.junctions.end(), s);
    if (jt != p.junctions.end()) {
      const auto j = static_cast<std::size_t>(jt - p.junctions.begin());
      hg = ham.fa(j, p.flux_limiters[j], dp, dm);
    } else {
      hg = godunov_h(s, ham.R(s), dm, dp);
    }
    worst = std::max(worst, std::fabs(std::min(v, v + hg)));
  }
  return worst;
}

double multi_junction_speed(const JunctionProblem& p, double h, double tol) {
  SolveOptions opt;
  opt.h = h;
  opt.tol = tol;
  return solve(p, opt).s_hat_numeric;
}

}  // namespace kpp

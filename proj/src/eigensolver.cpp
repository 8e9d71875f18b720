#include "kpp/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kpp/errors.hpp"

namespace kpp {
namespace {

// Least-squares slope of log(phi) against y over nodes with y in [lo, hi].
double log_slope(const std::vector<std::pair<double, double>>& phi, double lo, double hi) {
  double n = 0.0, sy = 0.0, sl = 0.0, syy = 0.0, syl = 0.0;
  for (const auto& [y, v] : phi) {
    if (y < lo || y > hi || !(v > 0.0)) continue;
    const double l = std::log(v);
    n += 1.0;
    sy += y;
    sl += l;
    syy += y * y;
    syl += y * l;
  }
  if (n < 2.0) return std::numeric_limits<double>::quiet_NaN();
  return (n * syl - sy * sl) / (n * syy - sy * sy);
}

}  // namespace

SymTridiagonal dirichlet_operator(const EnvironmentProfile& g, double half_width, int nodes_per_half_width) {
  const int n_half = nodes_per_half_width;
  const double h = half_width / n_half;
  const std::size_t n = static_cast<std::size_t>(2 * n_half - 1);
  SymTridiagonal m;
  m.diag.resize(n);
  m.off.assign(n - 1, 1.0 / (h * h));
  for (std::size_t i = 0; i < n; ++i) {
    const double y = -half_width + static_cast<double>(i + 1) * h;
    m.diag[i] = g.integral(y - 0.5 * h, y + 0.5 * h) / h - 2.0 / (h * h);
  }
  return m;
}

double truncated_eigenvalue(const EnvironmentProfile& g, double half_width, int nodes_per_half_width,
                            bool richardson) {
  const double coarse = largest_eigenvalue(dirichlet_operator(g, half_width, nodes_per_half_width));
  if (!richardson) return coarse;
  const double fine = largest_eigenvalue(dirichlet_operator(g, half_width, 2 * nodes_per_half_width));
  return (4.0 * fine - coarse) / 3.0;
}

std::vector<double> default_half_widths(const EnvironmentProfile& g) {
  double scale = 1.0;
  const double bump = g.sup_g() - g.max_asymptote();
  if (bump > 0.0) scale = 1.0 / std::sqrt(std::min(bump, 1.0));
  const double core = std::max(std::fabs(g.core_min()), std::fabs(g.core_max()));
  std::vector<double> widths;
  for (double w : {20.0, 40.0, 80.0, 160.0}) widths.push_back(w * scale + core);
  return widths;
}

EigenResult principal_eigenvalue(const EnvironmentProfile& g, const EigenOptions& options) {
  if (!(g.inf_g() > 0.0)) throw Error(ErrorCode::NonPositiveProfile, "inf g must be positive");
  if (options.nodes_per_half_width < 2) throw Error(ErrorCode::InvalidInputs, "nodes_per_half_width < 2");
  const std::vector<double> widths = options.half_widths.empty() ? default_half_widths(g) : options.half_widths;
  const double floor = g.max_asymptote();

  const double step = widths.front() / options.nodes_per_half_width;
  const auto nodes_for = [step](double w) { return std::max(2, static_cast<int>(std::lround(w / step))); };

  EigenResult result;
  double value = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < widths.size(); ++k) {
    const double w = widths[k];
    value = truncated_eigenvalue(g, w, nodes_for(w), options.richardson);
    result.schedule_values.push_back(value);
    result.domain_half_width = w;
    if (k == 0) continue;
    const double prev = result.schedule_values[k - 1];
    if (std::fabs(value - prev) < options.tol) {
      result.converged = true;
      break;
    }
    // Tail-dominated: truncated values creep up to max(r+-) like 1/W^2.
    const double w_prev = widths[k - 1];
    const double extrapolated = value + (value - prev) * w_prev * w_prev / (w * w - w_prev * w_prev);
    if (value <= floor && extrapolated <= floor + options.tol) {
      result.converged = true;
      break;
    }
  }
  result.lambda1 = std::max(value, floor);

  // Eigenfunction and tail decay on the last domain, unextrapolated grid.
  const double w = result.domain_half_width;
  const int n_half = nodes_for(w);
  const SymTridiagonal op = dirichlet_operator(g, w, n_half);
  const double top = largest_eigenvalue(op);
  const std::vector<double> vec = eigenvector(op, top);
  const double h = w / n_half;
  result.grid_step = h;
  result.eigenfunction.reserve(vec.size() + 2);
  result.eigenfunction.emplace_back(-w, 0.0);
  for (std::size_t i = 0; i < vec.size(); ++i) {
    result.eigenfunction.emplace_back(-w + static_cast<double>(i + 1) * h, vec[i]);
  }
  result.eigenfunction.emplace_back(w, 0.0);
  // Outer quarter of each half-domain, held off the Dirichlet wall by 0.1 W.
  result.decay_rate_plus = -log_slope(result.eigenfunction, 0.65 * w, 0.9 * w);
  result.decay_rate_minus = log_slope(result.eigenfunction, -0.9 * w, -0.65 * w);
  return result;
}

bool exceeds_tail_level(const EnvironmentProfile& g, int nodes) {
  const double level = g.max_asymptote();
  if (g.sup_g() <= level) return false;
  const double kappa_minus = std::sqrt(level - g.r_minus());
  const double kappa_plus = std::sqrt(level - g.r_plus());
  const double w = std::max(std::fabs(g.core_min()), std::fabs(g.core_max())) + 5.0;
  const double h = 2.0 * w / nodes;
  const std::size_t n = static_cast<std::size_t>(nodes) + 1;

  SymTridiagonal m;
  m.diag.resize(n);
  m.off.assign(n - 1, 1.0 / (h * h));
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double y = -w + static_cast<double>(i) * h;
    m.diag[i] = g.integral(y - 0.5 * h, y + 0.5 * h) / h - 2.0 / (h * h);
  }
  // Ghost-node Robin rows, symmetrised by scaling the end unknowns by sqrt(2).
  m.diag.front() = g.r_minus() - 2.0 / (h * h) - 2.0 * kappa_minus / h;
  m.diag.back() = g.r_plus() - 2.0 / (h * h) - 2.0 * kappa_plus / h;
  m.off.front() = std::sqrt(2.0) / (h * h);
  m.off.back() = std::sqrt(2.0) / (h * h);

  const double margin = 64.0 * std::numeric_limits<double>::epsilon() * (4.0 / (h * h) + g.sup_g());
  return count_below(m, level + margin) < n;
}

}  // namespace kpp

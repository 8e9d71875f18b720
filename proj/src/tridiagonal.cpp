#include "kpp/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>

namespace kpp {

std::size_t count_below(const SymTridiagonal& m, double x) {
  const std::size_t n = m.size();
  constexpr double tiny = std::numeric_limits<double>::min();
  std::size_t negatives = 0;
  double q = m.diag[0] - x;
  for (std::size_t i = 0;; ++i) {
    if (q == 0.0) q = -tiny;
    if (q < 0.0) ++negatives;
    if (i + 1 == n) break;
    q = m.diag[i + 1] - x - m.off[i] * m.off[i] / q;
  }
  return negatives;
}

double largest_eigenvalue(const SymTridiagonal& m) {
  const std::size_t n = m.size();
  // Gershgorin bounds
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    const double radius = (i > 0 ? std::fabs(m.off[i - 1]) : 0.0) + (i + 1 < n ? std::fabs(m.off[i]) : 0.0);
    lo = std::min(lo, m.diag[i] - radius);
    hi = std::max(hi, m.diag[i] + radius);
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (count_below(m, mid) == n) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<double> eigenvector(const SymTridiagonal& m, double eigenvalue) {
  const std::size_t n = m.size();
  std::vector<double> v(n, 1.0);
  if (n == 1) return v;

  // Inverse iteration with a shift just above the spectrum: -(T - sI) is an
  // M-matrix, so Thomas runs without cancellation. Only used to locate the peak.
  const double shift = eigenvalue + 1e-9 * std::max(1.0, std::fabs(eigenvalue));
  std::vector<double> lower(m.off), upper(m.off), diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = m.diag[i] - shift;
  const TridiagonalSolver<double> solver(lower, diag, upper);
  for (int pass = 0; pass < 2; ++pass) {
    solver.solve(v);
    const double peak = *std::max_element(v.begin(), v.end(),
                                          [](double a, double b) { return std::fabs(a) < std::fabs(b); });
    for (double& x : v) x /= peak;
  }
  const auto match = static_cast<std::size_t>(
      std::distance(v.begin(), std::max_element(v.begin(), v.end())));

  // Tails from recurrences that grow toward the peak from each end.
  constexpr double rescale_at = 1e150;
  std::vector<double> left(match + 1, 0.0);
  left[0] = 1.0;
  for (std::size_t i = 0; i < match; ++i) {
    const double prev = i > 0 ? m.off[i - 1] * left[i - 1] : 0.0;
    left[i + 1] = ((eigenvalue - m.diag[i]) * left[i] - prev) / m.off[i];
    if (std::fabs(left[i + 1]) > rescale_at) {
      for (std::size_t k = 0; k <= i + 1; ++k) left[k] /= rescale_at;
    }
  }
  std::vector<double> right(n, 0.0);
  right[n - 1] = 1.0;
  for (std::size_t i = n - 1; i > match; --i) {
    const double next = i + 1 < n ? m.off[i] * right[i + 1] : 0.0;
    right[i - 1] = ((eigenvalue - m.diag[i]) * right[i] - next) / m.off[i - 1];
    if (std::fabs(right[i - 1]) > rescale_at) {
      for (std::size_t k = i - 1; k < n; ++k) right[k] /= rescale_at;
    }
  }
  const double left_scale = 1.0 / left[match];
  const double right_scale = 1.0 / right[match];
  for (std::size_t i = 0; i <= match; ++i) v[i] = left[i] * left_scale;
  for (std::size_t i = match + 1; i < n; ++i) v[i] = right[i] * right_scale;
  const double peak = *std::max_element(v.begin(), v.end());
  for (double& x : v) x /= peak;
  return v;
}

}  // namespace kpp

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>

// Pointwise kernels of the parabolic solver. The omp variants are the ones
// the simulator runs; the serial ones are the reference they must match bit
// for bit (every kernel is elementwise or an order-free max reduction).
namespace kpp::kernels {

namespace serial {

/// g[i] = f(x0 + i dx)
template <class F>
void growth_field(std::span<double> g, double x0, double dx, F&& f) {
  const std::size_t n = g.size();
  for (std::size_t i = 0; i < n; ++i) g[i] = f(x0 + static_cast<double>(i) * dx);
}

/// Exact flow of u' = u (g - u) over dt.
template <class Real>
void logistic_reaction(std::span<Real> u, std::span<const double> g, double dt) {
  const std::size_t n = u.size();
  // exp is cached across runs of equal g, which is most of the line
  double g_prev = std::numeric_limits<double>::quiet_NaN();
  Real e = 1, k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (g[i] != g_prev) {
      g_prev = g[i];
      e = std::exp(static_cast<Real>(g[i]) * static_cast<Real>(dt));
      k = (e - Real(1)) / static_cast<Real>(g[i]);
    }
    const Real v = u[i];
    u[i] = v * e / (Real(1) + v * k);
  }
}

/// out = u + a (u[i-1] - 2 u[i] + u[i+1]) with zero Dirichlet ends.
template <class Real>
void diffusion_rhs(std::span<const Real> u, std::span<Real> out, Real a) {
  const std::size_t n = u.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Real l = i > 0 ? u[i - 1] : Real(0);
    const Real r = i + 1 < n ? u[i + 1] : Real(0);
    out[i] = u[i] + a * (l - Real(2) * u[i] + r);
  }
}

/// Forward Euler for u_t = u_xx + u (g - u).
template <class Real>
void explicit_step(std::span<const Real> u, std::span<Real> out, std::span<const double> g, Real dt, Real dx) {
  const std::size_t n = u.size();
  const Real a = dt / (dx * dx);
  for (std::size_t i = 0; i < n; ++i) {
    const Real l = i > 0 ? u[i - 1] : Real(0);
    const Real r = i + 1 < n ? u[i + 1] : Real(0);
    out[i] = u[i] + a * (l - Real(2) * u[i] + r) + dt * u[i] * (static_cast<Real>(g[i]) - u[i]);
  }
}

template <class Real>
Real max_value(std::span<const Real> u) {
  Real m = -std::numeric_limits<Real>::infinity();
  for (const Real v : u) m = v > m || v != v ? v : m;
  return m;
}

template <class Real>
Real min_value(std::span<const Real> u) {
  Real m = std::numeric_limits<Real>::infinity();
  for (const Real v : u) m = v < m ? v : m;
  return m;
}

/// Largest i with u[i] >= level, or -1.
template <class Real>
long rightmost_at_least(std::span<const Real> u, Real level) {
  for (std::size_t i = u.size(); i-- > 0;) {
    if (u[i] >= level) return static_cast<long>(i);
  }
  return -1;
}

/// Smallest i with u[i] >= level, or -1.
template <class Real>
long leftmost_at_least(std::span<const Real> u, Real level) {
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] >= level) return static_cast<long>(i);
  }
  return -1;
}

}  // namespace serial

namespace omp {

template <class F>
void growth_field(std::span<double> g, double x0, double dx, F&& f) {
  const long n = static_cast<long>(g.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = f(x0 + static_cast<double>(i) * dx);
}

template <class Real>
void logistic_reaction(std::span<Real> u, std::span<const double> g, double dt) {
  const long n = static_cast<long>(u.size());
#pragma omp parallel
  {
    double g_prev = std::numeric_limits<double>::quiet_NaN();
    Real e = 1, k = 0;
#pragma omp for schedule(static)
    for (long j = 0; j < n; ++j) {
      const auto i = static_cast<std::size_t>(j);
      if (g[i] != g_prev) {
        g_prev = g[i];
        e = std::exp(static_cast<Real>(g[i]) * static_cast<Real>(dt));
        k = (e - Real(1)) / static_cast<Real>(g[i]);
      }
      const Real v = u[i];
      u[i] = v * e / (Real(1) + v * k);
    }
  }
}

template <class Real>
void diffusion_rhs(std::span<const Real> u, std::span<Real> out, Real a) {
  const long n = static_cast<long>(u.size());
#pragma omp parallel for schedule(static)
  for (long k = 0; k < n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    const Real l = k > 0 ? u[i - 1] : Real(0);
    const Real r = k + 1 < n ? u[i + 1] : Real(0);
    out[i] = u[i] + a * (l - Real(2) * u[i] + r);
  }
}

template <class Real>
void explicit_step(std::span<const Real> u, std::span<Real> out, std::span<const double> g, Real dt, Real dx) {
  const long n = static_cast<long>(u.size());
  const Real a = dt / (dx * dx);
#pragma omp parallel for schedule(static)
  for (long k = 0; k < n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    const Real l = k > 0 ? u[i - 1] : Real(0);
    const Real r = k + 1 < n ? u[i + 1] : Real(0);
    out[i] = u[i] + a * (l - Real(2) * u[i] + r) + dt * u[i] * (static_cast<Real>(g[i]) - u[i]);
  }
}

template <class Real>
Real max_value(std::span<const Real> u) {
  const long n = static_cast<long>(u.size());
  Real m = -std::numeric_limits<Real>::infinity();
  bool nan = false;
#pragma omp parallel for schedule(static) reduction(max : m) reduction(|| : nan)
  for (long k = 0; k < n; ++k) {
    const Real v = u[static_cast<std::size_t>(k)];
    if (v != v) nan = true;
    else if (v > m) m = v;
  }
  return nan ? std::numeric_limits<Real>::quiet_NaN() : m;
}

template <class Real>
Real min_value(std::span<const Real> u) {
  const long n = static_cast<long>(u.size());
  Real m = std::numeric_limits<Real>::infinity();
#pragma omp parallel for schedule(static) reduction(min : m)
  for (long k = 0; k < n; ++k) {
    const Real v = u[static_cast<std::size_t>(k)];
    if (v < m) m = v;
  }
  return m;
}

template <class Real>
long rightmost_at_least(std::span<const Real> u, Real level) {
  const long n = static_cast<long>(u.size());
  long best = -1;
#pragma omp parallel for schedule(static) reduction(max : best)
  for (long k = 0; k < n; ++k) {
    if (u[static_cast<std::size_t>(k)] >= level && k > best) best = k;
  }
  return best;
}

template <class Real>
long leftmost_at_least(std::span<const Real> u, Real level) {
  const long n = static_cast<long>(u.size());
  long best = n;
#pragma omp parallel for schedule(static) reduction(min : best)
  for (long k = 0; k < n; ++k) {
    if (u[static_cast<std::size_t>(k)] >= level && k < best) best = k;
  }
  return best == n ? -1 : best;
}

}  // namespace omp

}  // namespace kpp::kernels

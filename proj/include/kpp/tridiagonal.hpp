#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace kpp {

/// Symmetric tridiagonal matrix: diag[0..n), off[i] couples rows i and i+1.
struct SymTridiagonal {
  std::vector<double> diag;
  std::vector<double> off;

  std::size_t size() const noexcept { return diag.size(); }
};

/// Number of eigenvalues strictly below x (Sturm sequence via LDL^T pivots).
std::size_t count_below(const SymTridiagonal& m, double x);

/// Largest eigenvalue by Sturm bisection to near machine precision.
double largest_eigenvalue(const SymTridiagonal& m);

/// Eigenvector for an eigenvalue already known to full precision. Uses two
/// recurrences that both grow toward the peak, matched at the peak, so tail
/// entries keep their relative accuracy. Normalised to max |v| = 1.
std::vector<double> eigenvector(const SymTridiagonal& m, double eigenvalue);

/// Pre-factored constant tridiagonal system (Thomas algorithm). `lower[i]`
/// couples row i+1 to i, `upper[i]` couples row i to i+1.
template <class Real>
class TridiagonalSolver {
 public:
  TridiagonalSolver(std::vector<Real> lower, std::vector<Real> diag, std::vector<Real> upper)
      : lower_(std::move(lower)), inv_pivot_(diag.size()), c_prime_(diag.size()) {
    const std::size_t n = diag.size();
    Real pivot = diag[0];
    inv_pivot_[0] = Real(1) / pivot;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      c_prime_[i] = upper[i] * inv_pivot_[i];
      pivot = diag[i + 1] - lower_[i] * c_prime_[i];
      inv_pivot_[i + 1] = Real(1) / pivot;
    }
  }

  /// Solves in place; rhs becomes the solution.
  void solve(std::span<Real> rhs) const {
    const std::size_t n = inv_pivot_.size();
    rhs[0] *= inv_pivot_[0];
    for (std::size_t i = 1; i < n; ++i) rhs[i] = (rhs[i] - lower_[i - 1] * rhs[i - 1]) * inv_pivot_[i];
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c_prime_[i] * rhs[i + 1];
  }

  std::size_t size() const noexcept { return inv_pivot_.size(); }

 private:
  std::vector<Real> lower_;
  std::vector<Real> inv_pivot_;
  std::vector<Real> c_prime_;
};

}  // namespace kpp

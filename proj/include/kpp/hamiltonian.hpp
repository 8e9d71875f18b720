#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

namespace kpp {

/// H(s, p) = -s p + p^2 + r.
inline double hamiltonian(double s, double p, double r) { return -s * p + p * p + r; }

/// Nondecreasing part in p: H(s, max(p, s/2)).
inline double h_plus(double s, double p, double r) { return hamiltonian(s, std::max(p, 0.5 * s), r); }

/// Nonincreasing part in p: H(s, min(p, s/2)).
inline double h_minus(double s, double p, double r) { return hamiltonian(s, std::min(p, 0.5 * s), r); }

/// Flux-limited junction function max(A, H-(c+, p+), H+(c-, p-)).
inline double fa_junction(double a, double c, double r_left, double r_right, double p_plus, double p_minus) {
  return std::max({a, h_minus(c, p_plus, r_right), h_plus(c, p_minus, r_left)});
}

/// Piecewise-constant R(s) with jumps at ascending junctions. R is
/// left-continuous: rates[k] holds on (c_k, c_{k+1}].
struct Hamiltonian {
  std::vector<double> junctions;
  std::vector<double> rates;  // junctions.size() + 1 entries

  /// Single junction at c1 with r- on s <= c1 and r+ beyond.
  static Hamiltonian single(double c1, double r_minus, double r_plus) { return {{c1}, {r_minus, r_plus}}; }

  std::size_t segment(double s) const {
    return static_cast<std::size_t>(std::lower_bound(junctions.begin(), junctions.end(), s) - junctions.begin());
  }
  double R(double s) const { return rates[segment(s)]; }
  double operator()(double s, double p) const { return hamiltonian(s, p, R(s)); }

  double r_left(std::size_t junction) const { return rates[junction]; }
  double r_right(std::size_t junction) const { return rates[junction + 1]; }

  double h_plus_left(std::size_t j, double p) const { return h_plus(junctions[j], p, r_left(j)); }
  double h_plus_right(std::size_t j, double p) const { return h_plus(junctions[j], p, r_right(j)); }
  double h_minus_left(std::size_t j, double p) const { return h_minus(junctions[j], p, r_left(j)); }
  double h_minus_right(std::size_t j, double p) const { return h_minus(junctions[j], p, r_right(j)); }

  double fa(std::size_t j, double a, double p_plus, double p_minus) const {
    return fa_junction(a, junctions[j], r_left(j), r_right(j), p_plus, p_minus);
  }
};

}  // namespace kpp

#pragma once

#include <cmath>

// Case algebra shared by the speed formulas and the explicit constructions,
// so the free boundary of a construction and the formula speed are the same
// floating-point expression.
namespace kpp::detail {

inline double kpp_speed(double r) { return 2.0 * std::sqrt(r); }

inline double mu_minus(double c1, double lambda1, double r_minus) {
  return 0.5 * c1 - std::sqrt(lambda1 - r_minus);
}

inline double mu_plus(double c1, double lambda1, double r_plus) {
  return 0.5 * c1 + std::sqrt(lambda1 - r_plus);
}

inline double pulling_speed(double mu, double r_minus) { return mu + r_minus / mu; }

// Upper edge of the nonlocal-pulling window.
inline double pulling_limit(double lambda1, double r_minus) {
  return 2.0 * (std::sqrt(r_minus) + std::sqrt(lambda1 - r_minus));
}

// 1 .. 4; each boundary value belongs to the lower case.
inline int speed_case(double c1, double r_minus, double r_plus, double lambda1) {
  if (c1 <= kpp_speed(r_plus)) return 1;
  if (c1 <= kpp_speed(lambda1)) return 2;
  if (c1 <= pulling_limit(lambda1, r_minus)) return 3;
  return 4;
}

}  // namespace kpp::detail

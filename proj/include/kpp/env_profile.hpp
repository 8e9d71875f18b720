#pragma once

#include <string>
#include <variant>
#include <vector>

namespace kpp {

/// Growth profiles g(y). Every kind is right-continuous at its breakpoints.
namespace profile {

struct Constant {
  double g0;
};

/// values[k] holds on [breaks[k-1], breaks[k]); values.size() == breaks.size() + 1.
struct PiecewiseConstant {
  std::vector<double> breaks;
  std::vector<double> values;
};

/// r_minus on y < 0, r_mid on [0, length), r_plus on y >= length.
struct ThreePatch {
  double r_minus;
  double r_mid;
  double r_plus;
  double length;
};

/// r_minus + (r_plus - r_minus) * (1 + tanh(steepness * y)) / 2.
struct TanhRamp {
  double r_minus;
  double r_plus;
  double steepness;
};

/// Linear interpolation inside the table, declared asymptotes outside it.
struct Sampled {
  std::vector<double> positions;
  std::vector<double> rates;
  double r_minus;
  double r_plus;
};

}  // namespace profile

class EnvironmentProfile {
 public:
  using Kind = std::variant<profile::Constant, profile::PiecewiseConstant, profile::ThreePatch,
                            profile::TanhRamp, profile::Sampled>;

  /// Validates the description; throws Error(InvalidProfile) on malformed
  /// input and Error(NonPositiveProfile) when inf g <= 0.
  explicit EnvironmentProfile(Kind kind);

  static EnvironmentProfile constant(double g0);
  static EnvironmentProfile piecewise_constant(std::vector<double> breaks, std::vector<double> values);
  static EnvironmentProfile three_patch(double r_minus, double r_mid, double r_plus, double length);
  static EnvironmentProfile tanh_ramp(double r_minus, double r_plus, double steepness);
  static EnvironmentProfile sampled(std::vector<double> positions, std::vector<double> rates,
                                    double r_minus, double r_plus);

  double operator()(double y) const { return evaluate(y); }
  double evaluate(double y) const;

  /// Exact integral of g over [a, b].
  double integral(double a, double b) const;

  double r_minus() const noexcept { return r_minus_; }
  double r_plus() const noexcept { return r_plus_; }
  double inf_g() const noexcept { return inf_g_; }
  double sup_g() const noexcept { return sup_g_; }
  double max_asymptote() const noexcept { return r_minus_ > r_plus_ ? r_minus_ : r_plus_; }

  /// Interval outside which g equals its asymptotes (or is within the tanh
  /// tail). Used to size truncated domains.
  double core_min() const noexcept { return core_min_; }
  double core_max() const noexcept { return core_max_; }

  const Kind& kind() const noexcept { return kind_; }
  std::string kind_name() const;

 private:
  Kind kind_;
  double r_minus_ = 0.0;
  double r_plus_ = 0.0;
  double inf_g_ = 0.0;
  double sup_g_ = 0.0;
  double core_min_ = 0.0;
  double core_max_ = 0.0;
};

inline double evaluate(const EnvironmentProfile& p, double y) { return p.evaluate(y); }

/// Mirror y -> -y with r_minus and r_plus swapped. ThreePatch is renormalised
/// so the patch sits on [0, L) again; all kinds satisfy reflect(reflect(p)) == p.
EnvironmentProfile reflect(const EnvironmentProfile& p);

}  // namespace kpp

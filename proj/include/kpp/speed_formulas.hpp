#pragma once

#include <limits>
#include <optional>
#include <string_view>

namespace kpp {

enum class Regime { KppRight, KeepPace, NonlocalPulling, KppLeft };

std::string_view regime_name(Regime r);
std::optional<Regime> parse_regime(std::string_view name);

struct SpeedInputs {
  double c1 = 0.0;
  double r_minus = 1.0;
  double r_plus = 1.0;
  double lambda1 = 1.0;
};

struct SpeedResult {
  double c_star = 0.0;
  Regime regime = Regime::KppRight;
  // Set in the pulling and left-KPP regimes, NaN otherwise.
  double mu_minus = std::numeric_limits<double>::quiet_NaN();
  double mu_plus = std::numeric_limits<double>::quiet_NaN();
};

/// Throws Error(InvalidInputs) unless r+- > 0, lambda1 >= max(r+-) and all finite.
void validate(const SpeedInputs& in);

SpeedResult rightward_speed(const SpeedInputs& in);

/// Rightward speed of the mirrored problem: c1 -> -c1, r- <-> r+.
SpeedResult leftward_speed(const SpeedInputs& in);

/// Speed with lambda1 replaced by max(r-, r+).
SpeedResult baseline_speed(const SpeedInputs& in);

SpeedInputs mirrored(const SpeedInputs& in);

}  // namespace kpp

#include "kpp/speed_formulas.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kpp/detail/speed_cases.hpp"
#include "kpp/errors.hpp"

namespace kpp {

std::string_view regime_name(Regime r) {
  switch (r) {
    case Regime::KppRight: return "kpp_right";
    case Regime::KeepPace: return "keep_pace";
    case Regime::NonlocalPulling: return "nonlocal_pulling";
    case Regime::KppLeft: return "kpp_left";
  }
  return "unknown";
}

std::optional<Regime> parse_regime(std::string_view name) {
  for (Regime r : {Regime::KppRight, Regime::KeepPace, Regime::NonlocalPulling, Regime::KppLeft}) {
    if (regime_name(r) == name) return r;
  }
  return std::nullopt;
}

void validate(const SpeedInputs& in) {
  auto fail = [&](const char* why) {
    std::ostringstream os;
    os << why << " (c1=" << in.c1 << ", r_minus=" << in.r_minus << ", r_plus=" << in.r_plus
       << ", lambda1=" << in.lambda1 << ")";
    throw Error(ErrorCode::InvalidInputs, os.str());
  };
  if (!std::isfinite(in.c1) || !std::isfinite(in.r_minus) || !std::isfinite(in.r_plus) ||
      !std::isfinite(in.lambda1)) {
    fail("inputs must be finite");
  }
  if (!(in.r_minus > 0.0) || !(in.r_plus > 0.0)) fail("r_minus and r_plus must be positive");
  if (in.lambda1 < std::max(in.r_minus, in.r_plus)) fail("lambda1 must be >= max(r_minus, r_plus)");
}

SpeedResult rightward_speed(const SpeedInputs& in) {
  validate(in);
  const double c1 = in.c1, rm = in.r_minus, rp = in.r_plus, lam = in.lambda1;
  SpeedResult out;
  switch (detail::speed_case(c1, rm, rp, lam)) {
    case 1:
      out.regime = Regime::KppRight;
      out.c_star = detail::kpp_speed(rp);
      break;
    case 2:
      out.regime = Regime::KeepPace;
      out.c_star = c1;
      break;
    case 3:
      out.regime = Regime::NonlocalPulling;
      out.mu_minus = detail::mu_minus(c1, lam, rm);
      out.mu_plus = detail::mu_plus(c1, lam, rp);
      out.c_star = detail::pulling_speed(out.mu_minus, rm);
      break;
    default:
      out.regime = Regime::KppLeft;
      out.mu_minus = detail::mu_minus(c1, lam, rm);
      out.mu_plus = detail::mu_plus(c1, lam, rp);
      out.c_star = detail::kpp_speed(rm);
      break;
  }
  return out;
}

SpeedInputs mirrored(const SpeedInputs& in) { return {-in.c1, in.r_plus, in.r_minus, in.lambda1}; }

SpeedResult leftward_speed(const SpeedInputs& in) { return rightward_speed(mirrored(in)); }

SpeedResult baseline_speed(const SpeedInputs& in) {
  SpeedInputs base = in;
  base.lambda1 = std::max(in.r_minus, in.r_plus);
  return rightward_speed(base);
}

}  // namespace kpp

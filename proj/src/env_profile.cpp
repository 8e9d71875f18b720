#include "kpp/env_profile.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

#include "kpp/errors.hpp"

namespace kpp {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InvalidProfile, what);
}

bool finite(double v) { return std::isfinite(v); }

// log(cosh(x)) without overflow.
double log_cosh(double x) {
  const double a = std::fabs(x);
  return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

// Integral of a right-continuous step function over [a, b], a <= b.
double step_integral(const std::vector<double>& breaks, const std::vector<double>& values, double a,
                     double b) {
  double total = 0.0;
  double lo = a;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double seg_hi = k < breaks.size() ? breaks[k] : b;
    const double hi = std::min(seg_hi, b);
    if (hi > lo) {
      total += values[k] * (hi - lo);
      lo = hi;
    }
    if (lo >= b) break;
  }
  return total;
}

}  // namespace

EnvironmentProfile::EnvironmentProfile(Kind kind) : kind_(std::move(kind)) {
  std::visit(
      Overloaded{
          [&](const profile::Constant& c) {
            require(finite(c.g0), "constant profile value must be finite");
            r_minus_ = r_plus_ = inf_g_ = sup_g_ = c.g0;
            core_min_ = core_max_ = 0.0;
          },
          [&](const profile::PiecewiseConstant& pc) {
            require(!pc.values.empty(), "piecewise_constant needs at least one value");
            require(pc.values.size() == pc.breaks.size() + 1,
                    "piecewise_constant needs values.size() == breaks.size() + 1");
            require(std::all_of(pc.breaks.begin(), pc.breaks.end(), finite) &&
                        std::all_of(pc.values.begin(), pc.values.end(), finite),
                    "piecewise_constant entries must be finite");
            require(std::adjacent_find(pc.breaks.begin(), pc.breaks.end(),
                                       std::greater_equal<>()) == pc.breaks.end(),
                    "piecewise_constant breaks must be strictly ascending");
            r_minus_ = pc.values.front();
            r_plus_ = pc.values.back();
            inf_g_ = *std::min_element(pc.values.begin(), pc.values.end());
            sup_g_ = *std::max_element(pc.values.begin(), pc.values.end());
            core_min_ = pc.breaks.empty() ? 0.0 : pc.breaks.front();
            core_max_ = pc.breaks.empty() ? 0.0 : pc.breaks.back();
          },
          [&](const profile::ThreePatch& tp) {
            require(finite(tp.r_minus) && finite(tp.r_mid) && finite(tp.r_plus) && finite(tp.length),
                    "three_patch entries must be finite");
            require(tp.length >= 0.0, "three_patch length must be nonnegative");
            r_minus_ = tp.r_minus;
            r_plus_ = tp.r_plus;
            inf_g_ = std::min({tp.r_minus, tp.r_plus, tp.length > 0.0 ? tp.r_mid : tp.r_minus});
            sup_g_ = std::max({tp.r_minus, tp.r_plus, tp.length > 0.0 ? tp.r_mid : tp.r_minus});
            core_min_ = 0.0;
            core_max_ = tp.length;
          },
          [&](const profile::TanhRamp& tr) {
            require(finite(tr.r_minus) && finite(tr.r_plus) && finite(tr.steepness),
                    "tanh_ramp entries must be finite");
            require(tr.steepness > 0.0, "tanh_ramp steepness must be positive");
            r_minus_ = tr.r_minus;
            r_plus_ = tr.r_plus;
            inf_g_ = std::min(tr.r_minus, tr.r_plus);
            sup_g_ = std::max(tr.r_minus, tr.r_plus);
            // tanh tail below 1e-16 beyond this half-width
            const double half = 19.0 / tr.steepness;
            core_min_ = -half;
            core_max_ = half;
          },
          [&](const profile::Sampled& s) {
            require(s.positions.size() >= 2, "sampled profile needs at least two table rows");
            require(s.positions.size() == s.rates.size(), "sampled positions/rates length mismatch");
            require(std::all_of(s.positions.begin(), s.positions.end(), finite) &&
                        std::all_of(s.rates.begin(), s.rates.end(), finite) && finite(s.r_minus) &&
                        finite(s.r_plus),
                    "sampled entries must be finite");
            require(std::adjacent_find(s.positions.begin(), s.positions.end(),
                                       std::greater_equal<>()) == s.positions.end(),
                    "sampled positions must be strictly ascending");
            r_minus_ = s.r_minus;
            r_plus_ = s.r_plus;
            const auto [lo, hi] = std::minmax_element(s.rates.begin(), s.rates.end());
            inf_g_ = std::min({*lo, s.r_minus, s.r_plus});
            sup_g_ = std::max({*hi, s.r_minus, s.r_plus});
            core_min_ = s.positions.front();
            core_max_ = s.positions.back();
          },
      },
      kind_);

  if (!(inf_g_ > 0.0)) {
    throw Error(ErrorCode::NonPositiveProfile,
                "growth profile must be positive everywhere (inf g = " + std::to_string(inf_g_) + ")");
  }
}

EnvironmentProfile EnvironmentProfile::constant(double g0) { return EnvironmentProfile(profile::Constant{g0}); }

EnvironmentProfile EnvironmentProfile::piecewise_constant(std::vector<double> breaks, std::vector<double> values) {
  return EnvironmentProfile(profile::PiecewiseConstant{std::move(breaks), std::move(values)});
}

EnvironmentProfile EnvironmentProfile::three_patch(double r_minus, double r_mid, double r_plus, double length) {
  return EnvironmentProfile(profile::ThreePatch{r_minus, r_mid, r_plus, length});
}

EnvironmentProfile EnvironmentProfile::tanh_ramp(double r_minus, double r_plus, double steepness) {
  return EnvironmentProfile(profile::TanhRamp{r_minus, r_plus, steepness});
}

EnvironmentProfile EnvironmentProfile::sampled(std::vector<double> positions, std::vector<double> rates,
                                               double r_minus, double r_plus) {
  return EnvironmentProfile(profile::Sampled{std::move(positions), std::move(rates), r_minus, r_plus});
}

double EnvironmentProfile::evaluate(double y) const {
  return std::visit(
      Overloaded{
          [](const profile::Constant& c) { return c.g0; },
          [y](const profile::PiecewiseConstant& pc) {
            const auto it = std::upper_bound(pc.breaks.begin(), pc.breaks.end(), y);
            return pc.values[static_cast<std::size_t>(std::distance(pc.breaks.begin(), it))];
          },
          [y](const profile::ThreePatch& tp) {
            if (y < 0.0) return tp.r_minus;
            if (y < tp.length) return tp.r_mid;
            return tp.r_plus;
          },
          [y](const profile::TanhRamp& tr) {
            return tr.r_minus + (tr.r_plus - tr.r_minus) * 0.5 * (1.0 + std::tanh(tr.steepness * y));
          },
          [y](const profile::Sampled& s) {
            if (y < s.positions.front()) return s.r_minus;
            if (y > s.positions.back()) return s.r_plus;
            const auto it = std::upper_bound(s.positions.begin(), s.positions.end(), y);
            if (it == s.positions.end()) return s.rates.back();
            const auto k = static_cast<std::size_t>(std::distance(s.positions.begin(), it));
            const double y0 = s.positions[k - 1], y1 = s.positions[k];
            const double w = (y - y0) / (y1 - y0);
            return s.rates[k - 1] + w * (s.rates[k] - s.rates[k - 1]);
          },
      },
      kind_);
}

double EnvironmentProfile::integral(double a, double b) const {
  if (b < a) return -integral(b, a);
  return std::visit(
      Overloaded{
          [&](const profile::Constant& c) { return c.g0 * (b - a); },
          [&](const profile::PiecewiseConstant& pc) { return step_integral(pc.breaks, pc.values, a, b); },
          [&](const profile::ThreePatch& tp) {
            return step_integral({0.0, tp.length}, {tp.r_minus, tp.r_mid, tp.r_plus}, a, b);
          },
          [&](const profile::TanhRamp& tr) {
            const double mean = 0.5 * (tr.r_minus + tr.r_plus);
            const double half_jump = 0.5 * (tr.r_plus - tr.r_minus);
            return mean * (b - a) +
                   half_jump / tr.steepness * (log_cosh(tr.steepness * b) - log_cosh(tr.steepness * a));
          },
          [&](const profile::Sampled& s) {
            double total = 0.0;
            const double t0 = s.positions.front(), t1 = s.positions.back();
            if (a < t0) total += s.r_minus * (std::min(b, t0) - a);
            if (b > t1) total += s.r_plus * (b - std::max(a, t1));
            for (std::size_t k = 1; k < s.positions.size(); ++k) {
              const double lo = std::max(a, s.positions[k - 1]);
              const double hi = std::min(b, s.positions[k]);
              if (hi <= lo) continue;
              // trapezoid is exact on a linear segment
              total += 0.5 * (evaluate(lo) + evaluate(hi)) * (hi - lo);
            }
            return total;
          },
      },
      kind_);
}

std::string EnvironmentProfile::kind_name() const {
  return std::visit(Overloaded{
                        [](const profile::Constant&) { return std::string("constant"); },
                        [](const profile::PiecewiseConstant&) { return std::string("piecewise_constant"); },
                        [](const profile::ThreePatch&) { return std::string("three_patch"); },
                        [](const profile::TanhRamp&) { return std::string("tanh_ramp"); },
                        [](const profile::Sampled&) { return std::string("sampled"); },
                    },
                    kind_);
}

EnvironmentProfile reflect(const EnvironmentProfile& p) {
  return std::visit(
      Overloaded{
          [](const profile::Constant& c) { return EnvironmentProfile(c); },
          [](const profile::PiecewiseConstant& pc) {
            std::vector<double> breaks(pc.breaks.rbegin(), pc.breaks.rend());
            for (double& b : breaks) b = -b;
            std::vector<double> values(pc.values.rbegin(), pc.values.rend());
            return EnvironmentProfile::piecewise_constant(std::move(breaks), std::move(values));
          },
          [](const profile::ThreePatch& tp) {
            return EnvironmentProfile::three_patch(tp.r_plus, tp.r_mid, tp.r_minus, tp.length);
          },
          [](const profile::TanhRamp& tr) {
            return EnvironmentProfile::tanh_ramp(tr.r_plus, tr.r_minus, tr.steepness);
          },
          [](const profile::Sampled& s) {
            std::vector<double> positions(s.positions.rbegin(), s.positions.rend());
            for (double& y : positions) y = -y;
            std::vector<double> rates(s.rates.rbegin(), s.rates.rend());
            return EnvironmentProfile::sampled(std::move(positions), std::move(rates), s.r_plus, s.r_minus);
          },
      },
      p.kind());
}

}  // namespace kpp

#include "kpp/kpp_simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <type_traits>

#include "kpp/errors.hpp"
#include "kpp/kernels.hpp"
#include "kpp/tridiagonal.hpp"

#if defined(__SSE__)
#include <xmmintrin.h>
#endif

namespace kpp {
namespace {

constexpr double kTailLevel = 1e-6;

[[noreturn]] void bad_config(const std::string& why) { throw Error(ErrorCode::InvalidConfig, why); }

// One shifting profile, with its constant tails short-circuited so the
// per-node cost outside the core is two comparisons.
struct ShiftEval {
  const EnvironmentProfile* profile;
  double speed;
  double lo, hi;
  double r_lo, r_hi;
  double offset;

  double operator()(double t, double x) const {
    const double y = x - speed * t;
    if (y < lo) return r_lo - offset;
    if (y > hi) return r_hi - offset;
    return profile->evaluate(y) - offset;
  }
};

std::vector<ShiftEval> shift_evals(const SimConfig& cfg) {
  std::vector<ShiftEval> out;
  for (std::size_t i = 0; i < cfg.shifts.size(); ++i) {
    const auto& p = cfg.shifts[i].profile;
    out.push_back({&p, cfg.shifts[i].speed, p.core_min(), p.core_max(), p.r_minus(), p.r_plus(),
                   i == 0 ? 0.0 : p.r_minus()});
  }
  return out;
}

double interpolate_crossing(double x0, double dx, double u0, double u1, double level) {
  if (!(u0 > u1)) return x0;
  return x0 + dx * (u0 - level) / (u0 - u1);
}

// Flush-to-zero and denormals-are-zero on every worker for the lifetime of a
// double-precision run. Values below 1e-308 carry no front information and
// subnormal arithmetic in the leading tail otherwise dominates the runtime.
class DenormalGuard {
 public:
  explicit DenormalGuard(bool enable) : enable_(enable) {
#if defined(__SSE__)
    if (enable_) {
#pragma omp parallel
      _mm_setcsr(_mm_getcsr() | kFlags);
    }
#endif
  }
  ~DenormalGuard() {
#if defined(__SSE__)
    if (enable_) {
#pragma omp parallel
      _mm_setcsr(_mm_getcsr() & ~kFlags);
    }
#endif
  }
  DenormalGuard(const DenormalGuard&) = delete;
  DenormalGuard& operator=(const DenormalGuard&) = delete;

 private:
  static constexpr unsigned kFlags = 0x8040;  // FTZ | DAZ
  bool enable_;
};

template <class Real>
class Runner {
 public:
  explicit Runner(const SimConfig& cfg) : cfg_(cfg), evals_(shift_evals(cfg)) {
    n_ = static_cast<std::size_t>(std::floor((cfg.x_max - cfg.x_min) / cfg.dx)) + 1;
    u_.resize(n_);
    work_.resize(n_);
    g_.resize(n_);
    omp_ = cfg.backend == Backend::OpenMP;
  }

  SimulationHandle run() {
    const DenormalGuard guard(std::is_same_v<Real, double>);
    SimulationHandle h;
    h.config = cfg_;
    h.nodes = n_;
    h.levels = {0.5 * cfg_.inf_growth(), kTailLevel};
    for (double l : cfg_.levels) {
      if (std::find(h.levels.begin(), h.levels.end(), l) == h.levels.end()) h.levels.push_back(l);
    }
    h.fronts.assign(h.levels.size(), {});

    for (std::size_t i = 0; i < n_; ++i) u_[i] = static_cast<Real>(cfg_.u0(h.x(i)));
    u0_max_ = cfg_.u0.height;
    blowup_ = 10.0 * std::max(cfg_.sup_growth(), u0_max_);

    const double dt = cfg_.dt, dx = cfg_.dx;
    const long steps = std::lround(cfg_.t_end / dt);
    const long sample_every = std::max(1L, std::lround(cfg_.sample_dt / dt));
    std::vector<long> snap_steps;
    for (double t : cfg_.snapshot_times) snap_steps.push_back(std::lround(t / dt));

    // I - (dt/2) L serves both the CN step and a backward-Euler half step.
    const Real a_cn = static_cast<Real>(dt / (2.0 * dx * dx));
    const TridiagonalSolver<Real> implicit = diffusion_solver(a_cn);

    h.min_u = static_cast<double>(min_value());
    record(h, 0, snap_steps);
    for (long k = 0; k < steps; ++k) {
      const double t_mid = (static_cast<double>(k) + 0.5) * dt;
      fill_growth(t_mid);
      if (cfg_.scheme == Scheme::ExplicitEuler) {
        if (omp_) {
          kernels::omp::explicit_step<Real>(u_, work_, g_, static_cast<Real>(dt), static_cast<Real>(dx));
        } else {
          kernels::serial::explicit_step<Real>(u_, work_, g_, static_cast<Real>(dt), static_cast<Real>(dx));
        }
        u_.swap(work_);
      } else {
        if (omp_) {
          kernels::omp::logistic_reaction<Real>(u_, g_, dt);
        } else {
          kernels::serial::logistic_reaction<Real>(u_, g_, dt);
        }
        if (k < cfg_.rannacher_steps) {
          implicit.solve(u_);
          implicit.solve(u_);
        } else {
          if (omp_) {
            kernels::omp::diffusion_rhs<Real>(u_, work_, a_cn);
          } else {
            kernels::serial::diffusion_rhs<Real>(u_, work_, a_cn);
          }
          implicit.solve(work_);
          u_.swap(work_);
        }
      }
      const long step = k + 1;
      if (step % sample_every == 0 || step == steps ||
          std::find(snap_steps.begin(), snap_steps.end(), step) != snap_steps.end()) {
        record(h, step, snap_steps);
      }
    }
    return h;
  }

 private:
  TridiagonalSolver<Real> diffusion_solver(Real a) const {
    std::vector<Real> off(n_ - 1, -a), diag(n_, Real(1) + Real(2) * a);
    return TridiagonalSolver<Real>(off, diag, off);
  }

  void fill_growth(double t) {
    const auto& ev = evals_;
    auto f = [&ev, t](double x) {
      double total = 0.0;
      for (const auto& e : ev) total += e(t, x);
      return total;
    };
    if (omp_) {
      kernels::omp::growth_field(std::span<double>(g_), cfg_.x_min, cfg_.dx, f);
    } else {
      kernels::serial::growth_field(std::span<double>(g_), cfg_.x_min, cfg_.dx, f);
    }
  }

  Real max_value() const {
    return omp_ ? kernels::omp::max_value<Real>(u_) : kernels::serial::max_value<Real>(u_);
  }
  Real min_value() const {
    return omp_ ? kernels::omp::min_value<Real>(u_) : kernels::serial::min_value<Real>(u_);
  }
  long rightmost(Real level) const {
    return omp_ ? kernels::omp::rightmost_at_least<Real>(u_, level)
                : kernels::serial::rightmost_at_least<Real>(u_, level);
  }
  long leftmost(Real level) const {
    return omp_ ? kernels::omp::leftmost_at_least<Real>(u_, level)
                : kernels::serial::leftmost_at_least<Real>(u_, level);
  }

  void record(SimulationHandle& h, long step, const std::vector<long>& snap_steps) {
    const double t = static_cast<double>(step) * cfg_.dt;
    const double top = static_cast<double>(max_value());
    if (!(top <= blowup_)) {
      std::ostringstream os;
      os << "max u = " << top << " exceeds " << blowup_ << " at t = " << t;
      throw Error(ErrorCode::UnstableBlowup, os.str());
    }
    const long right = rightmost(static_cast<Real>(kTailLevel));
    const long left = leftmost(static_cast<Real>(kTailLevel));
    if (right >= static_cast<long>(n_) - 1 - 10 || (left >= 0 && left <= 10)) {
      std::ostringstream os;
      os << "level " << kTailLevel << " within 10 dx of the boundary at t = " << t;
      throw Error(ErrorCode::DomainExhausted, os.str());
    }

    if (std::find(snap_steps.begin(), snap_steps.end(), step) != snap_steps.end()) {
      Snapshot s;
      s.t = t;
      s.u.resize(n_);
      s.log_u.resize(n_);
      for (std::size_t i = 0; i < n_; ++i) {
        s.u[i] = static_cast<double>(u_[i]);
        s.log_u[i] = u_[i] > Real(0) ? static_cast<double>(std::log(u_[i]))
                                     : -std::numeric_limits<double>::infinity();
      }
      h.snapshots.push_back(std::move(s));
    }

    h.min_u = std::min(h.min_u, static_cast<double>(min_value()));
    h.times.push_back(t);
    h.u_max.push_back(top);
    for (std::size_t k = 0; k < h.levels.size(); ++k) {
      const Real level = static_cast<Real>(h.levels[k]);
      const long i = rightmost(level);
      double x = std::numeric_limits<double>::quiet_NaN();
      if (i >= 0) {
        const auto iu = static_cast<std::size_t>(i);
        x = iu + 1 < n_ ? interpolate_crossing(h.x(iu), cfg_.dx, static_cast<double>(u_[iu]),
                                               static_cast<double>(u_[iu + 1]), h.levels[k])
                        : h.x(iu);
      }
      h.fronts[k].push_back(x);
    }
  }

  SimConfig cfg_;
  std::vector<ShiftEval> evals_;
  std::size_t n_ = 0;
  std::vector<Real> u_, work_;
  std::vector<double> g_;
  bool omp_ = true;
  double u0_max_ = 1.0;
  double blowup_ = 0.0;
};

}  // namespace

std::string_view scheme_name(Scheme s) {
  return s == Scheme::ExplicitEuler ? "explicit_euler" : "imex_crank_nicolson";
}

std::string_view precision_name(Precision p) { return p == Precision::Double ? "double" : "extended"; }

double InitialBump::operator()(double x) const {
  const double z = (x - center) / width;
  if (std::fabs(z) >= 0.5) return 0.0;
  const double c = std::cos(std::numbers::pi * z);
  return height * c * c;
}

SimConfig SimConfig::single(EnvironmentProfile g, double c1) {
  SimConfig cfg;
  cfg.shifts.push_back({c1, std::move(g)});
  return cfg;
}

double SimConfig::growth(double t, double x) const {
  double total = 0.0;
  for (const auto& e : shift_evals(*this)) total += e(t, x);
  return total;
}

double SimConfig::inf_growth() const {
  double v = 0.0;
  for (std::size_t i = 0; i < shifts.size(); ++i) {
    const auto& p = shifts[i].profile;
    v += p.inf_g() - (i == 0 ? 0.0 : p.r_minus());
  }
  return v;
}

double SimConfig::sup_growth() const {
  double v = 0.0;
  for (std::size_t i = 0; i < shifts.size(); ++i) {
    const auto& p = shifts[i].profile;
    v += p.sup_g() - (i == 0 ? 0.0 : p.r_minus());
  }
  return v;
}

double SimConfig::speed_bound() const {
  double b = 0.0;
  for (const auto& s : shifts) {
    b = std::max({b, s.speed, 2.0 * std::sqrt(s.profile.r_minus()), 2.0 * std::sqrt(s.profile.r_plus())});
  }
  return b;
}

void validate(const SimConfig& cfg) {
  if (cfg.shifts.empty()) bad_config("at least one shifting profile is required");
  for (std::size_t i = 1; i < cfg.shifts.size(); ++i) {
    if (!(cfg.shifts[i].speed > cfg.shifts[i - 1].speed)) bad_config("shift speeds must be strictly increasing");
    const double left = cfg.shifts[i - 1].profile.r_plus();
    const double right = cfg.shifts[i].profile.r_minus();
    if (std::fabs(left - right) > 1e-12 * std::max(1.0, std::fabs(left))) {
      bad_config("g_i(+inf) must equal g_{i+1}(-inf) to glue shifting profiles");
    }
  }
  if (!(cfg.inf_growth() > 0.0)) bad_config("total growth must stay positive");
  if (!(cfg.dx > 0.0) || !(cfg.dt > 0.0) || !(cfg.t_end > 0.0)) bad_config("dx, dt and t_end must be positive");
  if (!(cfg.sample_dt > 0.0)) bad_config("sample_dt must be positive");
  if (cfg.scheme == Scheme::ExplicitEuler && cfg.dt > 0.4 * cfg.dx * cfg.dx) {
    bad_config("explicit Euler needs dt <= 0.4 dx^2");
  }
  if (cfg.scheme == Scheme::ImexCrankNicolson && cfg.dt > cfg.dx) bad_config("IMEX needs dt <= dx");
  if (!(cfg.u0.height > 0.0) || !(cfg.u0.width > 0.0)) bad_config("initial bump must be nontrivial");
  for (double l : cfg.levels) {
    if (!(l > 0.0)) bad_config("tracked levels must be positive");
  }
  for (double t : cfg.snapshot_times) {
    if (!(t >= 0.0) || t > cfg.t_end + 0.5 * cfg.dt) bad_config("snapshot times must lie in [0, t_end]");
  }
  if (cfg.rannacher_steps < 0) bad_config("rannacher_steps must be nonnegative");
  const double lo = cfg.u0.center - 0.5 * cfg.u0.width, hi = cfg.u0.center + 0.5 * cfg.u0.width;
  if (!std::isnan(cfg.x_min) && !(cfg.x_min < lo)) bad_config("initial bump must lie inside the domain");
  if (!std::isnan(cfg.x_max) && !(cfg.x_max > hi)) bad_config("initial bump must lie inside the domain");
}

SimConfig resolved(const SimConfig& cfg) {
  validate(cfg);
  SimConfig out = cfg;
  const double lo = cfg.u0.center - 0.5 * cfg.u0.width, hi = cfg.u0.center + 0.5 * cfg.u0.width;
  if (std::isnan(out.x_max)) out.x_max = (cfg.speed_bound() + 4.0) * cfg.t_end + hi;
  if (std::isnan(out.x_min)) out.x_min = -(2.0 * std::sqrt(cfg.sup_growth()) + 1.0) * cfg.t_end + lo;
  return out;
}

const Snapshot& SimulationHandle::snapshot(double t) const {
  for (const auto& s : snapshots) {
    if (std::fabs(s.t - t) <= 0.5 * config.dt) return s;
  }
  std::ostringstream os;
  os << "no snapshot at t = " << t;
  throw Error(ErrorCode::InvalidInputs, os.str());
}

std::size_t SimulationHandle::level_index(double level) const {
  for (std::size_t k = 0; k < levels.size(); ++k) {
    if (std::fabs(levels[k] - level) <= 1e-12 * std::max(1.0, level)) return k;
  }
  std::ostringstream os;
  os << "level " << level << " was not tracked";
  throw Error(ErrorCode::InvalidInputs, os.str());
}

SimulationHandle simulate(const SimConfig& cfg) {
  const SimConfig r = resolved(cfg);
  if (r.precision == Precision::Extended) return Runner<long double>(r).run();
  return Runner<double>(r).run();
}

SimulationHandle multi_shift_simulate(const SimConfig& cfg) {
  if (cfg.shifts.size() < 2) bad_config("multi-shift simulation needs at least two shifts");
  return simulate(cfg);
}

FrontTrace front_speed(const SimulationHandle& h, double level) {
  const std::size_t k = h.level_index(level);
  FrontTrace tr;
  tr.level = level;
  const double t_end = h.config.t_end;
  tr.fit_window = {0.5 * t_end, t_end};
  double n = 0.0, st = 0.0, sx = 0.0, stt = 0.0, stx = 0.0;
  for (std::size_t j = 0; j < h.times.size(); ++j) {
    const double t = h.times[j], x = h.fronts[k][j];
    if (std::isnan(x)) continue;
    tr.samples.emplace_back(t, x);
    if (t < tr.fit_window.first - 1e-9) continue;
    n += 1.0;
    st += t;
    sx += x;
    stt += t * t;
    stx += t * x;
  }
  if (n < 2.0) {
    std::ostringstream os;
    os << "level " << level << " not attained in the fit window";
    throw Error(ErrorCode::LevelNotReached, os.str());
  }
  tr.fitted_speed = (n * stx - st * sx) / (n * stt - st * st);
  const double intercept = (sx - tr.fitted_speed * st) / n;
  double ss = 0.0;
  for (const auto& [t, x] : tr.samples) {
    if (t < tr.fit_window.first - 1e-9) continue;
    const double r = x - (intercept + tr.fitted_speed * t);
    ss += r * r;
  }
  tr.fit_residual = std::sqrt(ss / n);
  return tr;
}

std::vector<std::pair<double, double>> rate_function(const SimulationHandle& h, double t, double s_lo,
                                                     double s_hi, std::size_t count) {
  if (!(t > 0.0)) throw Error(ErrorCode::InvalidInputs, "rate function needs t > 0");
  if (count < 2 || !(s_hi > s_lo)) throw Error(ErrorCode::InvalidInputs, "rate function grid is empty");
  const Snapshot& snap = h.snapshot(t);
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, double>> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double s = s_lo + (s_hi - s_lo) * static_cast<double>(k) / static_cast<double>(count - 1);
    const double pos = (s * snap.t - h.config.x_min) / h.config.dx;
    double w = inf;
    if (pos >= 0.0 && pos <= static_cast<double>(h.nodes - 1)) {
      const auto i = std::min(static_cast<std::size_t>(pos), h.nodes - 2);
      const double f = pos - static_cast<double>(i);
      const double l0 = snap.log_u[i], l1 = snap.log_u[i + 1];
      if (std::isfinite(l0) && std::isfinite(l1)) w = -((1.0 - f) * l0 + f * l1) / snap.t;
    }
    out.emplace_back(s, w);
  }
  return out;
}

double persistence_floor(const SimulationHandle& h, double t, double speed) {
  const Snapshot& snap = h.snapshot(t);
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < h.nodes; ++i) {
    if (std::fabs(h.x(i)) < speed * snap.t) m = std::min(m, snap.u[i]);
  }
  return m;
}

}  // namespace kpp

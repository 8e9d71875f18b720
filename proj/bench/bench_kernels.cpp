#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <span>
#include <string>
#include <vector>

#include "kpp/env_profile.hpp"
#include "kpp/kernels.hpp"
#include "kpp/kpp_simulator.hpp"
#include "kpp/report.hpp"

namespace k = kpp::kernels;

namespace {

template <class F>
double best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void row(const char* name, double serial, double parallel) {
  std::printf("%-22s %10.3f ms %10.3f ms %7.2fx\n", name, 1e3 * serial, 1e3 * parallel, serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t n = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 2000000;
  const int reps = 5;
  std::printf("nodes %zu, threads %d\n", n, omp_get_max_threads());
  std::printf("%-22s %13s %13s %8s\n", "kernel", "serial", "openmp", "speedup");

  const kpp::EnvironmentProfile g = kpp::EnvironmentProfile::three_patch(1.0, 3.0, 1.0, 1.5707963);
  const auto f = [&g](double x) { return g.evaluate(x); };
  std::vector<double> grow(n), u(n), out(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = 0.5 * (1.0 + std::cos(1e-4 * static_cast<double>(i)));

  row("growth_field", best_of(reps, [&] { k::serial::growth_field(grow, -100.0, 1e-4, f); }),
      best_of(reps, [&] { k::omp::growth_field(grow, -100.0, 1e-4, f); }));
  row("logistic_reaction", best_of(reps, [&] { k::serial::logistic_reaction<double>(u, grow, 1e-3); }),
      best_of(reps, [&] { k::omp::logistic_reaction<double>(u, grow, 1e-3); }));
  row("diffusion_rhs", best_of(reps, [&] { k::serial::diffusion_rhs<double>(u, out, 0.1); }),
      best_of(reps, [&] { k::omp::diffusion_rhs<double>(u, out, 0.1); }));
  row("explicit_step", best_of(reps, [&] { k::serial::explicit_step<double>(u, out, grow, 1e-3, 0.05); }),
      best_of(reps, [&] { k::omp::explicit_step<double>(u, out, grow, 1e-3, 0.05); }));
  volatile double sink = 0.0;
  row("max_value", best_of(reps, [&] { sink = k::serial::max_value<double>(u); }),
      best_of(reps, [&] { sink = k::omp::max_value<double>(u); }));

  kpp::SimConfig cfg = kpp::SimConfig::single(g, 3.0);
  cfg.t_end = 50.0;
  cfg.backend = kpp::Backend::Serial;
  const double sim_serial = best_of(1, [&] { kpp::simulate(cfg); });
  cfg.backend = kpp::Backend::OpenMP;
  const double sim_omp = best_of(1, [&] { kpp::simulate(cfg); });
  row("simulate t_end=50", sim_serial, sim_omp);

  const int threads = omp_get_max_threads();
  omp_set_num_threads(1);
  const double sweep_one = best_of(reps, [] { kpp::speed_sweep(0.0, 10.0, 200000, 1.0, 2.0, 3.0); });
  omp_set_num_threads(threads);
  const double sweep_all = best_of(reps, [] { kpp::speed_sweep(0.0, 10.0, 200000, 1.0, 2.0, 3.0); });
  row("speed_sweep 2e5", sweep_one, sweep_all);
  return 0;
}

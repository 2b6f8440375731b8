// Timing comparison of the serial reference kernels against the OpenMP ones:
// coherence-matrix fill, extension-search sweep, and the noise Monte Carlo.

#include <chrono>
#include <cstdio>
#include <random>

#include <omp.h>

#include "histoq/extension_search.hpp"
#include "histoq/noise_lab.hpp"

#include "../tests/support/fixtures.hpp"

using namespace histoq;
using Clock = std::chrono::steady_clock;

namespace {

template <typename F>
double time_best_of(int reps, F&& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    auto t0 = Clock::now();
    fn();
    best = std::min(best, std::chrono::duration<double>(Clock::now() - t0).count());
  }
  return best;
}

void row(const char* name, double serial, double parallel) {
  std::printf("%-28s %10.4f ms %10.4f ms %8.2fx\n", name, serial * 1e3, parallel * 1e3,
              serial / parallel);
}

}  // namespace

int main() {
  const int threads = omp_get_max_threads();
  std::printf("threads: %d\n", threads);
  std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "openmp", "speedup");

  testing::Rng rng(12);

  {
    // 3-qubit family with two rank-1 insertions: 512 histories, 512^2 pairs
    Circuit c = testing::random_circuit(8, 3, rng, true);
    HistoryFamily fam = one_event_family(c)
                            .with_insertion({1, testing::random_rank1_set(8, rng)})
                            .with_insertion({2, testing::random_rank1_set(8, rng)});
    double serial = time_best_of(3, [&] { coherence_matrix(fam, 1); });
    double par = time_best_of(3, [&] { coherence_matrix(fam, 0); });
    row("coherence fill (N=512)", serial, par);
  }

  {
    Circuit c = testing::worked_circuit();
    SearchConfig cfg;
    cfg.stage = 2;
    cfg.level = Level::computing;
    cfg.grid = 3.14159265358979323846 / 8.0;
    double serial = time_best_of(3, [&] { search_local_extensions(c, cfg, 1); });
    double par = time_best_of(3, [&] { search_local_extensions(c, cfg, 0); });
    row("search sweep (pi/8 grid)", serial, par);
  }

  {
    Circuit c = testing::worked_circuit();
    double serial = time_best_of(3, [&] {
      run_robustness_experiment(c, 2, LocalBasis::computational(2), 50000, 9, 1.0, 1);
    });
    double par = time_best_of(3, [&] {
      run_robustness_experiment(c, 2, LocalBasis::computational(2), 50000, 9, 1.0, 0);
    });
    row("noise MC (50k samples)", serial, par);
  }
  return 0;
}

#include <doctest.h>

#include "support/fixtures.hpp"
#include "histoq/extension_search.hpp"
#include "histoq/noise_lab.hpp"

using namespace histoq;
using testing::Rng;

// The OpenMP kernels write disjoint slots, so they must reproduce the serial
// reference bit for bit, independent of the thread count.

TEST_CASE("coherence fill: serial and parallel agree exactly") {
  Rng rng(91);
  for (int trial = 0; trial < 6; ++trial) {
    Circuit c = testing::random_circuit(8, 2, rng, trial % 2 == 0, 2);
    HistoryFamily fam = one_event_family(c)
                            .with_insertion({1, testing::random_rank1_set(8, rng)});
    CoherenceMatrix serial = coherence_matrix(fam, 1);
    CoherenceMatrix par2 = coherence_matrix(fam, 2);
    CoherenceMatrix par4 = coherence_matrix(fam, 4);
    CHECK(max_abs(Matrix(serial.d - par2.d)) == 0.0);
    CHECK(max_abs(Matrix(serial.d - par4.d)) == 0.0);
  }
}

TEST_CASE("search sweep: serial and parallel agree") {
  Circuit c = testing::worked_circuit();
  SearchConfig cfg;
  cfg.stage = 2;
  cfg.level = Level::computing;
  cfg.grid = 3.14159265358979323846 / 4.0;
  auto serial = search_local_extensions(c, cfg, 1);
  auto par = search_local_extensions(c, cfg, 3);
  REQUIRE(serial.size() == par.size());
  for (size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].basis.describe() == par[i].basis.describe());
    CHECK(serial[i].report.max_violation == par[i].report.max_violation);
    CHECK(serial[i].trivial == par[i].trivial);
  }
}

TEST_CASE("noise sweep: thread count does not change the report") {
  Circuit c = testing::worked_circuit();
  NoiseReport serial = run_robustness_experiment(c, 2, LocalBasis::computational(2), 2000, 5, 1.0, 1);
  NoiseReport par = run_robustness_experiment(c, 2, LocalBasis::computational(2), 2000, 5, 1.0, 4);
  CHECK(serial.h0 == par.h0);
  CHECK(serial.hm == par.hm);
  CHECK(serial.chi2_h0 == par.chi2_h0);
  CHECK(serial.h0_sem == par.h0_sem);
}

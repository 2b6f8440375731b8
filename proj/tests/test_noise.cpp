#include <doctest.h>

#include <numbers>

#include "support/fixtures.hpp"
#include "histoq/noise_lab.hpp"

using namespace histoq;
using testing::Rng;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("counter rng is stateless and uniform-ish") {
  CounterRng a(42), b(42), c(43);
  CHECK(a.bits(7) == b.bits(7));
  CHECK(a.bits(7) != c.bits(7));
  double mean = 0.0;
  for (int i = 0; i < 10000; ++i) {
    double u = a.uniform(i);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    mean += u;
  }
  CHECK(std::abs(mean / 10000 - 0.5) < 0.02);
}

TEST_CASE("dephasing channel") {
  // strength 0 leaves the state alone
  Vector plus(2);
  plus << 1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2;
  DensityMatrix rho = DensityMatrix::pure(StateVector(plus));
  DephasingChannel none{LocalBasis::computational(1), 0.0, {}};
  CHECK(max_abs(Matrix(dephase(rho, none).matrix() - rho.matrix())) < 1e-15);

  // complete computational dephasing of |+><+| is the maximally mixed qubit
  DephasingChannel full{LocalBasis::computational(1), 1.0, {}};
  CHECK(max_abs(Matrix(dephase(rho, full).matrix() - Matrix::Identity(2, 2) * 0.5)) < 1e-15);

  // idempotent at strength 1
  DensityMatrix once = dephase(rho, full);
  CHECK(max_abs(Matrix(dephase(once, full).matrix() - once.matrix())) < 1e-15);

  // equals the unread projective measurement in that basis
  Rng rng(2);
  DensityMatrix rho2 = testing::random_density(4, 3, rng);
  DephasingChannel comp2{LocalBasis::computational(2), 1.0, {}};
  Matrix pinched = Matrix(rho2.matrix().diagonal().asDiagonal());
  CHECK(max_abs(Matrix(dephase(rho2, comp2).matrix() - pinched)) < 1e-14);

  // partial dephasing scales off-diagonals by 1 - strength
  DephasingChannel half{LocalBasis::computational(2), 0.25, {}};
  Matrix got = dephase(rho2, half).matrix();
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 4; ++j)
      if (i != j) CHECK(std::abs(got(i, j) - 0.75 * rho2.matrix()(i, j)) < 1e-14);

  // single-target dephasing only kills coherences across that qubit
  DephasingChannel q1{LocalBasis::computational(2), 1.0, {1}};
  Matrix site = dephase(rho2, q1).matrix();
  CHECK(std::abs(site(0, 2) - rho2.matrix()(0, 2)) < 1e-14);  // q0 coherence kept
  CHECK(std::abs(site(0, 1)) < 1e-14);                        // q1 coherence gone
}

TEST_CASE("divergences") {
  RealVector p(2), q(2);
  p << 1.0, 0.0;
  q << 0.5, 0.5;
  CHECK(kl_divergence(p, p) == doctest::Approx(0.0));
  CHECK(kl_divergence(p, q) == doctest::Approx(std::log(2.0)));
  CHECK(chi_squared(p, p) == doctest::Approx(0.0));
  CHECK(chi_squared(p, q) == doctest::Approx(1.0));

  RealVector bad(3);
  CHECK_THROWS_AS(kl_divergence(p, bad), std::invalid_argument);
  CHECK_THROWS_AS(chi_squared(p, bad), std::invalid_argument);

  // support clamp flag
  RealVector z(2);
  z << 1.0, 0.0;
  bool clamped = false;
  double v = kl_divergence(q, z, &clamped);
  CHECK(clamped);
  CHECK(std::isfinite(v));

  // nonnegativity, zero iff equal
  Rng rng(8);
  std::uniform_real_distribution<double> unif(1e-6, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    RealVector a(4), b(4);
    for (int i = 0; i < 4; ++i) {
      a(i) = unif(rng);
      b(i) = unif(rng);
    }
    a /= a.sum();
    b /= b.sum();
    CHECK(kl_divergence(a, b) >= -1e-12);
    CHECK(kl_divergence(a, a) < 1e-12);
  }
}

TEST_CASE("complete dephasing in a consistent basis does not damage the output") {
  Circuit c = testing::worked_circuit();
  Matrix rho2 = c.density_at(2);
  DephasingChannel comp{LocalBasis::computational(2), 1.0, {}};
  Matrix dephased = dephase_raw(rho2, comp);
  Matrix u3 = c.unitary_between(2, 3);

  RealVector p(4), pt(4);
  Matrix out_clean = u3 * rho2 * u3.adjoint();
  Matrix out_noisy = u3 * dephased * u3.adjoint();
  for (Index k = 0; k < 4; ++k) {
    p(k) = out_clean(k, k).real();
    pt(k) = out_noisy(k, k).real();
  }
  CHECK(kl_divergence(p, pt) < 1e-14);
}

TEST_CASE("refocusing protects against known-basis decoherence") {
  Circuit c = testing::worked_circuit();
  RealVector clean = one_event_family(c).born_marginal(0);

  Rng rng(33);
  CounterRng crng(33);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<BlochAngles> angles(2);
    for (int q = 0; q < 2; ++q) angles[q] = random_bloch_point(crng, 2 * trial + q);
    LocalBasis known = LocalBasis::product(angles);

    RefocusedCircuit rf = refocus_known_basis(c, 2, known, LocalBasis::computational(2));

    // no decoherence: output unchanged by the R, R^dag pair
    RealVector untouched = one_event_family(rf.circuit).born_marginal(0);
    CHECK((untouched - clean).cwiseAbs().maxCoeff() < 1e-12);

    // complete dephasing in the known basis right after R: output preserved
    Matrix rho_mid = rf.circuit.density_at(rf.noise_stage);
    Matrix noisy = dephase_raw(rho_mid, DephasingChannel{known, 1.0, {}});
    Matrix rest = rf.circuit.unitary_between(rf.noise_stage, rf.circuit.stage_count());
    Matrix out = rest * noisy * rest.adjoint();
    RealVector damaged(4);
    for (Index k = 0; k < 4; ++k) damaged(k) = out(k, k).real();
    CHECK((damaged - clean).cwiseAbs().maxCoeff() < 1e-10);
  }

  // identity refocusing when the bases agree
  RefocusedCircuit same =
      refocus_known_basis(c, 2, LocalBasis::computational(2), LocalBasis::computational(2));
  CHECK(max_abs(Matrix(same.circuit.stages()[2].unitary - Matrix::Identity(4, 4))) < 1e-12);

  // bases covering the wrong number of qubits are rejected
  CHECK_THROWS_AS(
      refocus_known_basis(c, 2, LocalBasis::computational(1), LocalBasis::computational(2)),
      std::invalid_argument);
}

TEST_CASE("robustness experiment on the demo circuit") {
  Circuit c = testing::worked_circuit();
  NoiseReport rep = run_robustness_experiment(c, 2, LocalBasis::computational(2), 4000, 7);
  CHECK(rep.samples == 4000);
  CHECK(rep.rng_seed == 7);
  CHECK(rep.h0 > 0.0);
  CHECK(rep.hm > 0.0);
  CHECK(rep.hm < rep.h0);                 // forcing the local state helps on average
  CHECK(rep.reduction > 0.10);            // the full-size run pins [0.15, 0.35]
  CHECK(rep.reduction < 0.40);
  CHECK(rep.chi2_reduction > 0.10);

  // reproducible: same seed, same report
  NoiseReport again = run_robustness_experiment(c, 2, LocalBasis::computational(2), 4000, 7);
  CHECK(again.h0 == rep.h0);
  CHECK(again.hm == rep.hm);

  // doubled samples agree within 3 standard errors
  NoiseReport big = run_robustness_experiment(c, 2, LocalBasis::computational(2), 8000, 7);
  CHECK(std::abs(big.h0 - rep.h0) < 3.0 * (rep.h0_sem + big.h0_sem));
  CHECK(std::abs(big.hm - rep.hm) < 3.0 * (rep.hm_sem + big.hm_sem));

  CHECK_THROWS_AS(run_robustness_experiment(c, 2, LocalBasis::computational(2), 50, 7),
                  std::invalid_argument);
  // X x X fails the computing check at stage 2 and is rejected
  std::vector<BlochAngles> xx(2, BlochAngles{kPi / 2, 0.0});
  CHECK_THROWS_AS(run_robustness_experiment(c, 2, LocalBasis::product(xx), 1000, 7),
                  std::invalid_argument);
}

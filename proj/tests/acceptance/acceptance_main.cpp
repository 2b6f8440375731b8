// Acceptance suite: one line per criterion, [PASS]/[FAIL], exit code equal to
// the number of failures. Tolerances are pinned in code next to each check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <vector>

#include "histoq/classical_sim.hpp"
#include "histoq/constructions.hpp"
#include "histoq/extension_search.hpp"
#include "histoq/gates.hpp"
#include "histoq/green_graph.hpp"
#include "histoq/io.hpp"
#include "histoq/noise_lab.hpp"

#include "../support/fixtures.hpp"

using namespace histoq;
using testing::Rng;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(int number, const char* title, bool ok, const std::string& detail) {
  std::printf("[%s] %2d. %s — %s\n", ok ? "PASS" : "FAIL", number, title, detail.c_str());
  if (!ok) ++failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// ---------------------------------------------------------------------------

void criterion_1_chain() {
  auto t0 = Clock::now();
  HistoryFamily fam = testing::worked_family_no_bell();
  TransitionChain chain = compile_chain(fam);

  RealMatrix want_t(4, 4);
  want_t << 1, 0, 0, 0, 0, 0.25, 0.25, 0.5, 0, 0.5, 0.5, 0, 0, 0.25, 0.25, 0.5;
  RealVector want_init(4), want_final(4);
  want_init << 0.5, 0.25, 0.0, 0.25;
  want_final << 0.5, 3.0 / 16, 1.0 / 8, 3.0 / 16;

  double err = (chain.matrices[0].entries - want_t).cwiseAbs().maxCoeff();
  err = std::max(err, (chain.initial.probabilities - want_init).cwiseAbs().maxCoeff());
  RealVector final_dist = run_chain(chain).probabilities;
  err = std::max(err, (final_dist - want_final).cwiseAbs().maxCoeff());
  double quantum_err =
      (fam.born_marginal(fam.event_count() - 1) - want_final).cwiseAbs().maxCoeff();
  err = std::max(err, quantum_err);
  double dt = seconds_since(t0);

  report(1, "stochastic chain reproduces the printed distributions", err < 1e-12 && dt < 1.0,
         "max error " + fmt(err) + ", " + fmt(dt) + " s");
}

void criterion_2_loops() {
  const Complex kI{0.0, 1.0};
  bool ok = true;
  std::string detail;

  // demo circuit: the first loop's phase product is exactly -i/4
  GreenGraph g = build_graph(testing::worked_family());
  auto loops = enumerate_all_loop_pairs(g);
  ok = ok && loops.size() == 2;
  if (ok) {
    Complex phase = loop_phase_product(g, loops[0]);
    ok = ok && std::abs(phase.real()) < 1e-12 && std::abs(phase.imag() + 0.25) < 1e-12;
    detail += "demo phase product " + fmt(phase.real()) + (phase.imag() < 0 ? "-" : "+") +
              fmt(std::abs(phase.imag())) + "i";
    for (const auto& pair : loops) ok = ok && std::abs(loop_product(g, pair).real()) < 1e-12;
  }

  // weak-bound family at dim 6: some loop product equals i/12 exactly
  GreenGraph g6 = build_graph(build_weak_bound_family(6));
  bool found = false;
  for (const auto& pair : enumerate_all_loop_pairs(g6)) {
    Complex p = loop_product(g6, pair);
    ok = ok && std::abs(p.real()) < 1e-12;
    if (std::abs(p - kI / 12.0) < 1e-12) found = true;
  }
  ok = ok && found;
  detail += std::string("; i/12 loop ") + (found ? "found" : "missing");
  report(2, "loop products match -i/4 and i/12", ok, detail);
}

void criterion_3_verdicts() {
  Circuit circuit = testing::worked_circuit();
  HistoryFamily base = one_event_family(circuit);
  HistoryFamily with_comp = base.with_insertion({2, ProjectorSet::computational(4)});
  HistoryFamily full = testing::worked_family();

  bool weak_ok = check_weak(with_comp, 1e-10).passed && check_weak(full, 1e-10).passed;
  bool comp_ok = check_computing(with_comp, 1e-10).passed && check_computing(full, 1e-10).passed;
  bool medium_fails = !check_medium(full, 1e-10).passed && !check_medium(with_comp, 1e-10).passed;
  bool bell_trivial = is_trivial_extension(base, base.with_insertion({1, ProjectorSet::bell()}));
  bool comp_nontrivial = !is_trivial_extension(base, with_comp);

  report(3, "demo-circuit consistency verdicts",
         weak_ok && comp_ok && medium_fails && bell_trivial && comp_nontrivial,
         std::string("weak ") + (weak_ok ? "pass" : "FAIL") + ", computing " +
             (comp_ok ? "pass" : "FAIL") + ", medium fails " + (medium_fails ? "yes" : "NO") +
             ", bell trivial " + (bell_trivial ? "yes" : "NO") + ", comp nontrivial " +
             (comp_nontrivial ? "yes" : "NO"));
}

void criterion_4_entropy() {
  SearchResult res = insert_and_check(testing::worked_circuit(), 2, LocalBasis::computational(2),
                                      Level::computing, 1e-10);
  bool nats_ok = std::abs(res.entropy_nats - 0.4166) <= 1e-3;
  bool bits_ok = std::abs(res.entropy_bits - 0.6009) <= 1e-3;
  std::string json = io::serialize_results({res});
  bool documented = json.find("entropy_nats") != std::string::npos &&
                    json.find("entropy_bits") != std::string::npos &&
                    json.find("units_note") != std::string::npos;
  report(4, "destroyed entanglement 0.4166 nats / 0.6009 bits, units documented",
         nats_ok && bits_ok && documented,
         fmt(res.entropy_nats) + " nats, " + fmt(res.entropy_bits) + " bits");
}

void criterion_5_diosi_bounds() {
  auto t0 = Clock::now();
  bool ok = true;

  // exact attainment
  const std::pair<int, Index> cases[] = {{1, 2}, {1, 8}, {2, 4}, {4, 4}};
  for (auto [r, d] : cases) {
    Matrix rho = Matrix::Zero(d, d);
    for (int i = 0; i < r; ++i) rho(i, i) = 1.0 / r;
    std::size_t count = count_nonzero_histories(build_diosi_family(DensityMatrix(rho)));
    ok = ok && count == static_cast<std::size_t>(r) * static_cast<std::size_t>(d);
  }

  // random suite: 400 medium-consistent + 120 weakly consistent families
  Rng rng(2024);
  std::size_t suite = 0;
  for (int trial = 0; trial < 400; ++trial) {
    Index d = std::vector<Index>{2, 4, 6, 8}[trial % 4];
    int r = 1 + static_cast<int>(rng() % static_cast<unsigned>(d));
    HistoryFamily fam = build_diosi_family(testing::random_density(d, r, rng));
    if (trial % 3 == 0) {
      auto part = testing::random_partition(fam.event_set(0).size(), rng);
      fam = HistoryFamily(fam.circuit(),
                          {{fam.event_stage(0), coarse_grain(fam.event_set(0), part)}});
    }
    ok = ok && check_medium(fam, 1e-10).passed;
    ok = ok && count_nonzero_histories(fam) <=
                   static_cast<std::size_t>(r) * static_cast<std::size_t>(d);
    ++suite;
  }
  for (int trial = 0; trial < 120; ++trial) {
    Index d = (trial % 2) ? 4 : 6;
    int r = 1 + trial % 3;
    HistoryFamily fam = build_weak_bound_family(d, testing::random_density(d, r, rng));
    ok = ok && check_weak(fam, 1e-10).passed;
    ok = ok && count_nonzero_histories(fam) <=
                   2 * static_cast<std::size_t>(r) * static_cast<std::size_t>(d);
    ++suite;
  }
  double dt = seconds_since(t0);
  report(5, "history-count bounds r*dim (medium) and 2*r*dim (weak)", ok && dt < 60.0,
         std::to_string(suite) + " families, " + fmt(dt) + " s");
}

void criterion_6_hierarchy() {
  Rng rng(606);
  bool ok = true;
  int s = 0, m = 0, w = 0, q = 0;
  for (int trial = 0; trial < 200; ++trial) {
    HistoryFamily fam = [&]() -> HistoryFamily {
      switch (trial % 8) {
        case 0: return one_event_family(testing::random_circuit(4, 2, rng, trial % 16 == 0));
        case 1: return build_diosi_family(testing::random_density(4, 1 + trial % 4, rng));
        case 2: return build_weak_bound_family(4 + 2 * (trial % 2));
        case 3: {
          Circuit c = testing::random_circuit(4, 2, rng, true);
          return one_event_family(c).with_insertion({1, testing::random_rank1_set(4, rng)});
        }
        case 4: {
          Circuit c = testing::random_circuit(4, 2, rng, false, 1 + trial % 3);
          return one_event_family(c).with_insertion(
              {1, coarse_grain(testing::random_rank1_set(4, rng), {{0, 2}, {1}, {3}})});
        }
        case 5: {  // eigenbasis first: medium consistent by construction
          DensityMatrix rho = testing::random_density(4, 1 + trial % 4, rng);
          const auto& es = rho.eigensystem();
          std::vector<Vector> eig;
          for (Index i = 0; i < 4; ++i) eig.push_back(es.vectors[i]);
          Circuit c(InitialState(rho),
                    {dense_stage(Matrix::Identity(4, 4)), dense_stage(Matrix::Identity(4, 4))},
                    testing::random_rank1_set(4, rng));
          return one_event_family(c).with_insertion({1, ProjectorSet::from_basis(eig)});
        }
        case 6: {  // pseudopure variant of a computing-consistent family
          HistoryFamily pure = testing::worked_family_no_bell();
          return pure.with_initial(InitialState(
              pseudopure(StateVector::basis_state(4, 1), 0.25 * (1 + trial % 3))));
        }
        default: return testing::worked_family();
      }
    }();
    const double eps = 1e-10;
    bool cs = fam.circuit().initial().rank(1e-12) <= 4 && check_strong(fam, eps).passed;
    bool cm = check_medium(fam, eps).passed;
    bool cw = check_weak(fam, eps).passed;
    bool cq = check_computing(fam, eps).passed;
    if (cs && !cm) ok = false;
    if (cm && !cw) ok = false;
    if (cw && !cq) ok = false;
    s += cs;
    m += cm;
    w += cw;
    q += cq;
  }
  report(6, "hierarchy strong => medium => weak => computing on 200 families",
         ok && s > 0 && m >= s && w >= m && q >= w && q < 200,
         "passes: strong " + std::to_string(s) + ", medium " + std::to_string(m) + ", weak " +
             std::to_string(w) + ", computing " + std::to_string(q));
}

void criterion_7_oracles() {
  Rng rng(707);
  bool ok = true;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Index dim = 4;
    HistoryFamily fam = [&]() -> HistoryFamily {
      switch (trial % 3) {
        case 0: {
          Circuit c = testing::random_circuit(dim, 2, rng, true);
          return one_event_family(c).with_insertion({1, testing::random_rank1_set(dim, rng)});
        }
        case 1:
          return build_diosi_family(
              DensityMatrix::pure(StateVector(testing::haar_vector(dim, rng))));
        default: return build_weak_bound_family(dim);
      }
    }();
    GreenGraph g = build_graph(fam);
    if (check_weak_via_loops(g, 1e-10).passed != check_weak(fam, 1e-10).passed) ok = false;
    if (check_medium_via_paths(g).passed != check_medium(fam, 1e-10).passed) ok = false;

    double diff =
        max_abs(Matrix(coherence_matrix(fam).d - coherence_matrix_via_operators(fam).d));
    worst = std::max(worst, diff);
  }
  ok = ok && worst < 1e-12;
  report(7, "graph and operator-chain oracles agree with the primary route", ok,
         "100 families, max coherence deviation " + fmt(worst));
}

void criterion_8_pseudopure() {
  Rng rng(808);
  bool ok = true;
  int families = 0;
  std::uniform_real_distribution<double> phase(0.0, 6.283185307179586);
  while (families < 50) {
    // computing-consistent pure families: eigen-start constructions and
    // evolved-eigenbasis insertions into random circuits
    HistoryFamily fam = [&]() -> HistoryFamily {
      if (families % 2 == 0) {
        return build_diosi_family(
            DensityMatrix::pure(StateVector(testing::haar_vector(4, rng))));
      }
      Matrix d = Matrix::Identity(4, 4);
      for (Index i = 0; i < 4; ++i) d(i, i) = std::polar(1.0, phase(rng));
      Circuit c(InitialState(StateVector::basis_state(4, rng() % 4)),
                {dense_stage(testing::haar_unitary(4, rng)), dense_stage(std::move(d))},
                ProjectorSet::computational(4));
      Vector evolved = c.state_at(1);
      std::vector<Vector> basis{evolved};
      for (Index i = 0; basis.size() < 4; ++i) {
        Vector e = Vector::Zero(4);
        e(i) = 1;
        for (const auto& u : basis) e -= u * u.dot(e);
        if (e.norm() > 1e-6) basis.push_back(e.normalized());
      }
      return one_event_family(c).with_insertion({1, ProjectorSet::from_basis(basis)});
    }();
    if (!check_computing(fam, 1e-10).passed) continue;  // generator sanity
    ++families;
    for (double nu : {0.1, 0.5, 0.9}) {
      PseudopureReport rep = check_pseudopure_lemma(fam, nu, 1e-10);
      ok = ok && rep.computing.passed;
      if (rep.decomposition_checked) ok = ok && rep.decomposition_error < 1e-10;
    }
  }
  report(8, "pseudopure initial states stay computing-consistent", ok,
         "50 families x nu in {0.1, 0.5, 0.9}");
}

void criterion_9_interpolation() {
  Rng rng(909);
  bool ok = true;
  int found = 0, nontrivial = 0;
  SearchConfig cfg;
  cfg.grid = 3.14159265358979323846 / 4.0;
  const auto candidates = candidate_bases(cfg, 2);
  for (int trial = 0; trial < 100; ++trial) {
    const Index dim = 4;
    DensityMatrix rho = [&] {
      if (trial % 2) return testing::random_density(dim, 2 + trial % 3, rng);
      std::uniform_real_distribution<double> unif(0.1, 1.0);
      Matrix d = Matrix::Zero(dim, dim);
      double total = 0;
      for (Index i = 0; i < dim; ++i) total += (d(i, i) = unif(rng)).real();
      return DensityMatrix(Matrix(d / total));
    }();
    const auto& es = rho.eigensystem();
    std::vector<Vector> eig;
    for (Index i = 0; i < dim; ++i) eig.push_back(es.vectors[i]);
    Circuit c(InitialState(rho),
              {dense_stage(Matrix::Identity(dim, dim)), dense_stage(Matrix::Identity(dim, dim)),
               dense_stage(Matrix::Identity(dim, dim))},
              testing::random_rank1_set(dim, rng));
    HistoryFamily base = one_event_family(c).with_insertion({1, ProjectorSet::from_basis(eig)});
    if (!check_medium(base, 1e-10).passed) {
      ok = false;
      continue;
    }
    for (const LocalBasis& tau : candidates) {
      HistoryFamily ext = base.with_insertion({2, tau.to_projector_set()});
      if (!check_medium(ext, 1e-10).passed) continue;
      ++found;
      if (!is_trivial_extension(base, ext)) ++nontrivial;
    }
  }
  ok = ok && nontrivial == 0 && found > 0;
  report(9, "every medium-consistent interpolation found is trivial", ok,
         std::to_string(found) + " consistent finds, " + std::to_string(nontrivial) +
             " nontrivial");
}

void criterion_10_noise() {
  auto t0 = Clock::now();
  Circuit circuit = testing::worked_circuit();
  NoiseReport rep =
      run_robustness_experiment(circuit, 2, LocalBasis::computational(2), 100000, 4242);
  bool band = rep.reduction >= 0.15 && rep.reduction <= 0.35 && rep.hm <= rep.h0;

  // refocusing with known bases protects the output exactly
  CounterRng crng(11);
  double worst = 0.0;
  RealVector clean = one_event_family(circuit).born_marginal(0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<BlochAngles> angles(2);
    for (int q = 0; q < 2; ++q) angles[q] = random_bloch_point(crng, 2 * trial + q);
    LocalBasis known = LocalBasis::product(angles);
    RefocusedCircuit rf = refocus_known_basis(circuit, 2, known, LocalBasis::computational(2));
    Matrix noisy = dephase_raw(rf.circuit.density_at(rf.noise_stage),
                               DephasingChannel{known, 1.0, {}});
    Matrix rest = rf.circuit.unitary_between(rf.noise_stage, rf.circuit.stage_count());
    Matrix out = rest * noisy * rest.adjoint();
    for (Index k = 0; k < clean.size(); ++k)
      worst = std::max(worst, std::abs(out(k, k).real() - clean(k)));
  }
  double dt = seconds_since(t0);
  bool ok = band && worst < 1e-10 && dt < 120.0;
  report(10, "dephasing robustness band and exact refocusing", ok,
         "reduction " + fmt(rep.reduction) + " (chi2 " + fmt(rep.chi2_reduction) +
             "), refocus error " + fmt(worst) + ", " + fmt(dt) + " s");
}

void criterion_11_equivalence() {
  Rng rng(1111);
  bool ok = true;
  int produced = 0;
  double worst = 0.0;
  SearchConfig cfg;
  cfg.level = Level::computing;
  cfg.epsilon = 1e-8;
  cfg.grid = 3.14159265358979323846 / 2.0;
  for (int trial = 0; trial < 100; ++trial) {
    int qubits = 2 + trial % 2;
    Circuit c = testing::random_chainable_circuit(qubits, 2 + trial % 2, rng);
    auto family = search_complete_chain(c, cfg);
    if (!family) continue;
    ++produced;
    Distribution chain_out = run_chain(compile_chain(*family, false));
    RealVector quantum = family->born_marginal(family->event_count() - 1);
    double diff = (chain_out.probabilities - quantum).cwiseAbs().maxCoeff();
    worst = std::max(worst, diff);
    if (diff >= 1e-10) ok = false;
  }
  ok = ok && produced >= 30;
  report(11, "searched chains reproduce the quantum final distribution", ok,
         std::to_string(produced) + "/100 circuits chained, max deviation " + fmt(worst));
}

}  // namespace

int main() {
  std::printf("acceptance suite\n");
  criterion_1_chain();
  criterion_2_loops();
  criterion_3_verdicts();
  criterion_4_entropy();
  criterion_5_diosi_bounds();
  criterion_6_hierarchy();
  criterion_7_oracles();
  criterion_8_pseudopure();
  criterion_9_interpolation();
  criterion_10_noise();
  criterion_11_equivalence();
  std::printf("%d criterion(s) failed\n", failures);
  return failures;
}

#include "histoq/extension_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <omp.h>

namespace histoq {

namespace kernels {

void sweep_serial(const CandidateEval& eval, std::size_t count, std::vector<SearchResult>& out) {
  out.resize(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = eval(i);
}

void sweep_omp(const CandidateEval& eval, std::size_t count, std::vector<SearchResult>& out,
               int threads) {
  out.resize(count);
#pragma omp parallel for schedule(dynamic, 8) num_threads(threads > 0 ? threads : omp_get_max_threads())
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i)
    out[i] = eval(static_cast<std::size_t>(i));
}

}  // namespace kernels

namespace {

// Per-qubit angle catalog: computational, then the theta-grid with the exact
// X and Y points injected.
std::vector<BlochAngles> qubit_angle_catalog(double grid) {
  std::vector<BlochAngles> out;
  auto push_unique = [&](BlochAngles a) {
    for (const auto& b : out)
      if (std::abs(a.theta - b.theta) < 1e-12 && std::abs(a.phi - b.phi) < 1e-12) return;
    out.push_back(a);
  };
  const double half_pi = std::numbers::pi / 2.0;
  push_unique({0.0, 0.0});            // computational
  push_unique({half_pi, 0.0});        // X
  push_unique({half_pi, half_pi});    // Y
  // theta in (0, pi/2]: antipodal pairs produce the same projector set, and
  // on the equator phi and phi+pi coincide as sets.
  for (double theta = grid; theta < half_pi + 1e-12; theta += grid) {
    double t = std::min(theta, half_pi);
    double phi_span = (half_pi - t < 1e-12) ? std::numbers::pi : 2.0 * std::numbers::pi;
    for (double phi = 0.0; phi < phi_span - 1e-12; phi += grid) push_unique({t, phi});
  }
  return out;
}

double mean_single_qubit_entropy(const Vector& state, int qubit_count, LogBase base) {
  StateVector psi((Vector(state)));
  double sum = 0.0;
  for (int q = 0; q < qubit_count; ++q) sum += entanglement_entropy(psi, {q}, base);
  return sum / qubit_count;
}

bool better(const SearchResult& a, const SearchResult& b) {
  if (a.trivial != b.trivial) return !a.trivial;
  return a.report.max_violation < b.report.max_violation;
}

}  // namespace

std::vector<LocalBasis> candidate_bases(const SearchConfig& config, int qubit_count) {
  if (config.grid <= 0.0) throw std::invalid_argument("grid must be positive");
  if (config.joint_block_max > joint_block_cap(qubit_count))
    throw std::invalid_argument("joint_block_max exceeds the logarithmic cap of " +
                                std::to_string(joint_block_cap(qubit_count)));
  const auto catalog = qubit_angle_catalog(config.grid);
  std::vector<LocalBasis> out;

  std::vector<size_t> pick(qubit_count, 0);
  for (;;) {
    std::vector<BlochAngles> angles;
    angles.reserve(qubit_count);
    for (int q = 0; q < qubit_count; ++q) angles.push_back(catalog[pick[q]]);
    out.push_back(LocalBasis::product(angles));
    int q = qubit_count - 1;
    while (q >= 0 && ++pick[q] == catalog.size()) pick[q--] = 0;
    if (q < 0) break;
  }

  if (config.joint_block_max >= 2 && qubit_count >= 2) {
    // Joint candidates after the product stream: a Bell block on each qubit
    // pair, remaining qubits computational.
    for (int qa = 0; qa < qubit_count; ++qa)
      for (int qb = qa + 1; qb < qubit_count; ++qb)
        out.push_back(LocalBasis::with_bell_block(qubit_count, qa, qb));
  }
  return out;
}

namespace {

// The destroyed entanglement depends on the stage only, so sweeps compute it
// once and stamp it onto every candidate.
std::pair<double, double> stage_entropy(const Circuit& circuit, int stage) {
  if (circuit.initial().rank_one() && circuit.qubit_count() > 0) {
    Vector state = circuit.state_at(stage);
    return {mean_single_qubit_entropy(state, circuit.qubit_count(), LogBase::e),
            mean_single_qubit_entropy(state, circuit.qubit_count(), LogBase::two)};
  }
  return {std::nan(""), std::nan("")};
}

SearchResult evaluate_candidate(const Circuit& circuit, int stage, const LocalBasis& basis,
                                Level level, double epsilon,
                                const std::pair<double, double>& entropy) {
  if (stage < 0 || stage >= circuit.stage_count())
    throw std::invalid_argument("insertions must come strictly before the final measurement");
  SearchResult res;
  res.basis = basis;
  res.local = basis.fully_local();
  HistoryFamily base = one_event_family(circuit);
  HistoryFamily extended = base.with_insertion({stage, basis.to_projector_set()});
  res.report = check(extended, level, epsilon, 1);
  res.trivial = is_trivial_extension(base, extended);
  res.entropy_nats = entropy.first;
  res.entropy_bits = entropy.second;
  return res;
}

}  // namespace

SearchResult insert_and_check(const Circuit& circuit, int stage, const LocalBasis& basis,
                              Level level, double epsilon) {
  return evaluate_candidate(circuit, stage, basis, level, epsilon, stage_entropy(circuit, stage));
}

std::vector<SearchResult> search_local_extensions(const Circuit& circuit,
                                                  const SearchConfig& config, int threads) {
  if (circuit.qubit_count() < 1)
    throw std::invalid_argument("local-basis search needs a qubit register");
  const auto candidates = candidate_bases(config, circuit.qubit_count());
  const auto entropy = stage_entropy(circuit, config.stage);
  std::vector<SearchResult> evaluated;
  kernels::CandidateEval eval = [&](std::size_t i) {
    return evaluate_candidate(circuit, config.stage, candidates[i], config.level, config.epsilon,
                              entropy);
  };
  if (threads == 1)
    kernels::sweep_serial(eval, candidates.size(), evaluated);
  else
    kernels::sweep_omp(eval, candidates.size(), evaluated, threads);

  std::vector<SearchResult> out;
  for (auto& r : evaluated) {
    if (!r.report.passed) continue;
    if (config.require_nontrivial && r.trivial) continue;
    out.push_back(std::move(r));
  }
  std::stable_sort(out.begin(), out.end(), better);
  if (out.size() > config.max_results) out.resize(config.max_results);
  return out;
}

std::vector<ProfileEntry> classicality_profile(const Circuit& circuit, const SearchConfig& config,
                                               int threads) {
  std::vector<ProfileEntry> out;
  for (int stage = 0; stage < circuit.stage_count(); ++stage) {
    SearchConfig c = config;
    c.stage = stage;
    c.require_nontrivial = false;
    c.max_results = std::numeric_limits<std::size_t>::max();
    ProfileEntry entry;
    entry.stage = stage;
    if (circuit.initial().is_pure() && circuit.qubit_count() > 0) {
      Vector state = circuit.state_at(stage);
      entry.entropy_nats = mean_single_qubit_entropy(state, circuit.qubit_count(), LogBase::e);
      entry.entropy_bits = mean_single_qubit_entropy(state, circuit.qubit_count(), LogBase::two);
    } else {
      entry.entropy_nats = std::nan("");
      entry.entropy_bits = std::nan("");
    }
    entry.candidates_checked = candidate_bases(c, circuit.qubit_count()).size();
    auto results = search_local_extensions(circuit, c, threads);
    entry.passing = results.size();
    for (const auto& r : results) {
      if (!entry.best_any || better(r, *entry.best_any)) entry.best_any = r;
      if (!r.trivial && (!entry.best_nontrivial || better(r, *entry.best_nontrivial)))
        entry.best_nontrivial = r;
    }
    out.push_back(std::move(entry));
  }
  return out;
}

std::optional<HistoryFamily> search_complete_chain(const Circuit& circuit,
                                                   const SearchConfig& config, int threads) {
  if (circuit.qubit_count() < 1 || !circuit.final_set().is_rank_one()) return std::nullopt;
  HistoryFamily family = one_event_family(circuit);
  const auto candidates = candidate_bases(config, circuit.qubit_count());
  for (int stage = 1; stage < circuit.stage_count(); ++stage) {
    // Whole-family re-check after each insertion, best candidate wins.
    std::vector<SearchResult> evaluated;
    kernels::CandidateEval eval = [&](std::size_t i) {
      SearchResult r;
      r.basis = candidates[i];
      r.local = candidates[i].fully_local();
      HistoryFamily f = family.with_insertion({stage, candidates[i].to_projector_set()});
      r.report = check(f, config.level, config.epsilon, 1);
      return r;
    };
    if (threads == 1)
      kernels::sweep_serial(eval, candidates.size(), evaluated);
    else
      kernels::sweep_omp(eval, candidates.size(), evaluated, threads);

    int best = -1;
    for (size_t i = 0; i < evaluated.size(); ++i) {
      if (!evaluated[i].report.passed) continue;
      if (best < 0 || evaluated[i].report.max_violation < evaluated[best].report.max_violation)
        best = static_cast<int>(i);
    }
    if (best < 0) return std::nullopt;
    family = family.with_insertion({stage, candidates[best].to_projector_set()});
  }
  return family;
}

}  // namespace histoq

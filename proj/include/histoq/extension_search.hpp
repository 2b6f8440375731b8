#pragma once

#include <optional>

#include "histoq/consistency.hpp"

namespace histoq {

// Grid search over local measurement bases. The exact computational, X and Y
// points (and the Bell block for joint searches) are always injected, so a
// coarse grid still contains the catalog bases.
struct SearchConfig {
  int stage = 1;                    // insertion point, 0 <= stage < gate count
  Level level = Level::computing;
  double epsilon = 1e-8;
  double grid = 0.39269908169872414;  // pi/8 per Bloch angle
  int joint_block_max = 1;            // capped at ceil(log2 qubits) + 1
  bool require_nontrivial = false;
  std::size_t max_results = 64;
};

struct SearchResult {
  LocalBasis basis;
  ConsistencyReport report;
  bool trivial = false;
  bool local = true;           // all blocks single-qubit
  // Entanglement carried by the state at the insertion stage (mean von
  // Neumann entropy over single-qubit cuts); what a complete product
  // measurement there destroys. NaN for mixed initial states.
  double entropy_nats = 0.0;
  double entropy_bits = 0.0;
};

// Deterministic candidate stream: per-qubit (theta, phi) grid products first
// (catalog points injected at the head), then joint-block candidates when
// joint_block_max >= 2. theta runs over [0, pi/2] since antipodal angles give
// the same projector set.
std::vector<LocalBasis> candidate_bases(const SearchConfig& config, int qubit_count);

// Extends the one-event family {rho, final} by `basis` at `stage`, checks the
// requested level, and reports triviality and destroyed entanglement.
SearchResult insert_and_check(const Circuit& circuit, int stage, const LocalBasis& basis,
                              Level level, double epsilon);

// All passing candidates, nontrivial first, then by ascending violation;
// capped at max_results. An empty list is a valid answer.
std::vector<SearchResult> search_local_extensions(const Circuit& circuit,
                                                  const SearchConfig& config, int threads = 0);

struct ProfileEntry {
  int stage = 0;
  double entropy_nats = 0.0;
  double entropy_bits = 0.0;
  std::size_t candidates_checked = 0;
  std::size_t passing = 0;
  std::optional<SearchResult> best_nontrivial;
  std::optional<SearchResult> best_any;
};

// Per-stage summary over every insertable stage 0..n-1.
std::vector<ProfileEntry> classicality_profile(const Circuit& circuit, const SearchConfig& config,
                                               int threads = 0);

// Greedy left-to-right composition: at each stage 1..n-1 insert the first
// candidate that keeps the whole family consistent at the requested level,
// re-checking after every insertion. Returns the complete rank-1 family or
// nothing if some stage admits no candidate.
std::optional<HistoryFamily> search_complete_chain(const Circuit& circuit,
                                                   const SearchConfig& config, int threads = 0);

namespace kernels {

// Evaluates candidates [0, count) into `out`; slot i only depends on
// candidate i, so the parallel kernel is bit-identical to the serial one.
using CandidateEval = std::function<SearchResult(std::size_t)>;
void sweep_serial(const CandidateEval& eval, std::size_t count, std::vector<SearchResult>& out);
void sweep_omp(const CandidateEval& eval, std::size_t count, std::vector<SearchResult>& out,
               int threads);

}  // namespace kernels

}  // namespace histoq

#pragma once

#include <string>

#include "histoq/coherence.hpp"

namespace histoq {

enum class Level { weak, medium, strong, computing };

std::string to_string(Level level);
Level level_from_string(const std::string& name);

struct Witness {
  std::size_t alpha = 0;
  std::size_t beta = 0;
  double value = 0.0;
};

// passed <=> max_violation <= epsilon.
struct ConsistencyReport {
  Level level = Level::weak;
  bool passed = false;
  double max_violation = 0.0;
  double epsilon = 0.0;
  std::vector<Witness> witnesses;  // worst offending pairs, largest first
};

// Weak:   Re D(a;b) = 0 for a != b.
// Medium: D(a;b) = 0 for a != b.
// Computing: for each final outcome k, the pair sum
//   sum_{a_n = b_n = k, b < a} Re D(a;b) = (q_k - m_k)/2
// vanishes, where q is the Born final distribution and m the summed history
// probabilities. One condition per final outcome.
ConsistencyReport check_weak(const CoherenceMatrix& d, double epsilon);
ConsistencyReport check_medium(const CoherenceMatrix& d, double epsilon);
ConsistencyReport check_computing(const CoherenceMatrix& d, double epsilon);

ConsistencyReport check_weak(const HistoryFamily& family, double epsilon, int threads = 0);
ConsistencyReport check_medium(const HistoryFamily& family, double epsilon, int threads = 0);
// Streaming marginal route; never materializes the N x N matrix.
ConsistencyReport check_computing(const HistoryFamily& family, double epsilon);

// Record condition: a set of mutually orthogonal projectors R_a with
// C_a rho = R_a rho, taking C_a as the time-ordered product acting on the
// initial state. For pure rho this is equivalent to
//   (1) branch vectors pairwise orthogonal, and
//   (2) <psi|b_a> = ||b_a||^2.
// For mixed rho of rank <= 4 a single R_a must serve every eigenvector:
//   (1) cross-outcome branch overlaps vanish for all eigenvector pairs, and
//   (2) <b_{a,i}|b_{a,j}> = <psi_i|b_{a,j}> for all i, j.
// Rank above 4 is rejected.
ConsistencyReport check_strong(const HistoryFamily& family, double epsilon);

ConsistencyReport check(const HistoryFamily& family, Level level, double epsilon, int threads = 0);

// Number of histories with probability above epsilon (pruned walk).
std::size_t count_nonzero_histories(const HistoryFamily& family, double epsilon = kZeroProbability);

// True when `extended` equals `base` with one extra inserted set and, for
// every base history of nonzero probability, at most one inserted outcome
// keeps the probability nonzero.
bool is_trivial_extension(const HistoryFamily& base, const HistoryFamily& extended,
                          double epsilon = kZeroProbability);

struct PseudopureReport {
  ConsistencyReport computing;       // the rebuilt family's computing check
  double nu = 1.0;
  // Two-event families only: max deviation of D' from
  // (1-nu)/dim * diagonal term + nu * pure term, checked entrywise.
  double decomposition_error = 0.0;
  bool decomposition_checked = false;
};

// Rebuilds the family with rho = (1-nu)/dim 1l + nu |psi><psi| and checks
// computing-consistency; requires a pure initial state.
PseudopureReport check_pseudopure_lemma(const HistoryFamily& family, double nu, double epsilon);

}  // namespace histoq

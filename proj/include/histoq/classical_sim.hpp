#pragma once

#include "histoq/consistency.hpp"

namespace histoq {

// Column-stochastic: entry (i, j) = |<out_i|U|in_j>|^2, acting on column
// probability vectors.
struct TransitionMatrix {
  RealMatrix entries;
};

struct Distribution {
  RealVector probabilities;
  std::vector<std::string> labels;
};

// Initial classical distribution at the first measured stage plus one
// stochastic matrix per consecutive pair of measured stages.
struct TransitionChain {
  Distribution initial;
  std::vector<TransitionMatrix> matrices;
  std::vector<int> stages;  // measured stages, final last
  std::vector<std::string> final_labels;
};

TransitionMatrix transition_matrix(const Matrix& u, const ProjectorSet& in_basis,
                                   const ProjectorSet& out_basis);

// Compile a family whose sets are all rank 1 into a stochastic chain. The
// chain starts at the first inserted set's stage with the Born distribution
// there. With require_consistent the family must pass the computing check at
// epsilon first; disable it to compile chains for mismatch demonstrations.
TransitionChain compile_chain(const HistoryFamily& family, bool require_consistent = true,
                              double epsilon = 1e-10);

Distribution run_chain(const TransitionChain& chain);

struct SumRuleReport {
  bool passed = false;
  double max_violation = 0.0;
  std::vector<int> stages;
  std::vector<double> per_stage;  // max |quantum - chain| at each measured stage
};

// Chain-propagated distributions against the freely evolved Born marginals,
// stage by stage. The final-stage comparison is exactly the content of the
// computing-consistency condition.
SumRuleReport verify_sum_rule(const HistoryFamily& family, double epsilon);

}  // namespace histoq

#pragma once

#include <string>
#include <vector>

#include "histoq/projectors.hpp"
#include "histoq/states.hpp"
#include "histoq/types.hpp"

namespace histoq {

// One gate of the circuit, stored dense on the full register. `name` and
// `targets` are kept for serialization when the stage came from the catalog.
struct Stage {
  Matrix unitary;
  std::string name;
  std::vector<int> targets;
};

Stage dense_stage(Matrix unitary);
Stage named_stage(const std::string& name, const std::vector<int>& targets, int qubit_count);

// Initial state, gates U_1 .. U_n, and the fixed final measurement after U_n.
// Stage index k is the moment right after gate k; stage 0 is the initial time.
class Circuit {
 public:
  Circuit(InitialState initial, std::vector<Stage> stages, ProjectorSet final_set);

  Index dim() const { return initial_.dim(); }
  // -1 when the dimension is not a power of two.
  int qubit_count() const { return qubit_count_; }
  int stage_count() const { return static_cast<int>(stages_.size()); }
  const InitialState& initial() const { return initial_; }
  const std::vector<Stage>& stages() const { return stages_; }
  const Stage& stage(int k) const { return stages_[k - 1]; }  // gate k, 1-based
  const ProjectorSet& final_set() const { return final_; }

  // U(t_to, t_from) = U_to ... U_{from+1}; identity when to == from.
  Matrix unitary_between(int from_stage, int to_stage) const;
  Vector propagate(Vector v, int from_stage, int to_stage) const;
  Matrix propagate_density(Matrix rho, int from_stage, int to_stage) const;

  Vector state_at(int stage) const;  // pure initial states only
  Matrix density_at(int stage) const;

  // A new circuit with extra gates spliced in after `stage` (used by the
  // refocusing construction).
  Circuit with_gates_inserted(int stage, std::vector<Stage> gates) const;

 private:
  InitialState initial_;
  std::vector<Stage> stages_;
  ProjectorSet final_;
  int qubit_count_ = -1;
};

}  // namespace histoq

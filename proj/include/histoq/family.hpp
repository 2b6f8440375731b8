#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "histoq/circuit.hpp"

namespace histoq {

// One outcome index per event, in event order (insertions then final).
using MultiIndex = std::vector<int>;

// Mixed-radix shape of the history label space; lexicographic flattening
// with the first event most significant.
class IndexShape {
 public:
  explicit IndexShape(std::vector<int> sizes);
  int events() const { return static_cast<int>(sizes_.size()); }
  int size(int j) const { return sizes_[j]; }
  const std::vector<int>& sizes() const { return sizes_; }
  std::size_t total() const { return total_; }
  std::size_t flatten(const MultiIndex& idx) const;
  MultiIndex unflatten(std::size_t flat) const;

 private:
  std::vector<int> sizes_;
  std::size_t total_ = 1;
};

struct Insertion {
  int stage = 0;
  ProjectorSet set;
};

// Family size is guarded at 10^7 histories.
inline constexpr std::size_t kHistoryGuard = 10'000'000;

// A family of histories: the circuit's initial state, inserted projector
// sets at strictly increasing stages before the last gate, and the circuit's
// fixed final measurement as the last event.
class HistoryFamily {
 public:
  HistoryFamily(Circuit circuit, std::vector<Insertion> insertions);

  const Circuit& circuit() const { return circuit_; }
  const std::vector<Insertion>& insertions() const { return insertions_; }
  int event_count() const { return static_cast<int>(insertions_.size()) + 1; }
  // Events are 0-based; the last one is the final measurement.
  const ProjectorSet& event_set(int j) const;
  int event_stage(int j) const;
  const IndexShape& shape() const { return shape_; }
  std::size_t history_count() const { return shape_.total(); }

  // Branch vector P^(n) U ... P^(1) U |psi0> in the Schrodinger picture of the
  // final stage. Inner products between branches equal those of the
  // Heisenberg-picture branches.
  Vector branch(const Vector& psi0, const MultiIndex& idx) const;

  // Enumerates all N branches of psi0 in lexicographic order. Subtrees whose
  // prefix squared norm is <= prune below are reported as exact zeros (pass a
  // negative prune to disable).
  void for_each_branch(const Vector& psi0,
                       const std::function<void(std::size_t, const Vector&)>& fn,
                       double prune = -1.0) const;

  // U(t,0)^dag P U(t,0) for outcome `a` of event j.
  Matrix heisenberg_projector(int event, int outcome) const;
  // P^(1)_{a1} P^(2)_{a2} ... P^(n)_{an} of Heisenberg projectors, as written.
  Matrix history_operator(const MultiIndex& idx) const;

  // Tr{C^dag rho C}, clamped to [0,1].
  double probability(const MultiIndex& idx) const;

  // Sum of history probabilities grouped by the outcome of event j.
  RealVector marginal_by_event(int event) const;
  // Born distribution of event j's outcomes on the freely evolved state,
  // ignoring every insertion.
  RealVector born_marginal(int event) const;

  HistoryFamily with_insertion(const Insertion& ins) const;
  HistoryFamily with_initial(InitialState initial) const;

 private:
  Circuit circuit_;
  std::vector<Insertion> insertions_;
  IndexShape shape_;
};

// Branches of every initial eigenvector, for pairwise work.
struct BranchSet {
  double weight = 1.0;
  std::vector<Vector> vectors;
};
std::vector<BranchSet> all_branches(const HistoryFamily& family);

// The one-event family {rho, final measurement}.
HistoryFamily one_event_family(const Circuit& circuit);

}  // namespace histoq

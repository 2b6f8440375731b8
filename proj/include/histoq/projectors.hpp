#pragma once

#include <optional>
#include <string>
#include <vector>

#include "histoq/types.hpp"

namespace histoq {

// An exhaustive set of exclusive projectors:
//   sum_a P_a = 1l  and  P_a P_b = delta_ab P_a   (within 1e-10).
// Stored in the Schrodinger picture of whatever stage it is attached to.
class ProjectorSet {
 public:
  ProjectorSet(std::vector<Matrix> projectors, std::vector<std::string> labels = {});
  static ProjectorSet computational(Index dim);
  // Rank-1 set from an orthonormal basis.
  static ProjectorSet from_basis(const std::vector<Vector>& vectors,
                                 std::vector<std::string> labels = {});
  static ProjectorSet bell();

  Index dim() const { return dim_; }
  int size() const { return static_cast<int>(projectors_.size()); }
  const Matrix& projector(int a) const { return projectors_[a]; }
  const std::string& label(int a) const { return labels_[a]; }
  int rank(int a) const { return ranks_[a]; }
  bool is_rank_one() const;  // every projector has rank 1
  // Unit vector v with P_a = v v^dag, canonically phased. Rank-1 only.
  const Vector& rank1_vector(int a) const;

  // P_a v, using the rank-1 fast path when available.
  Vector apply(int a, const Vector& v) const;

 private:
  Index dim_ = 0;
  std::vector<Matrix> projectors_;
  std::vector<std::string> labels_;
  std::vector<int> ranks_;
  std::vector<std::optional<Vector>> vectors_;
};

// Sum the projectors of each group. The partition must cover all outcome
// indices exactly once.
ProjectorSet coarse_grain(const ProjectorSet& set, const std::vector<std::vector<int>>& partition);

struct BlochAngles {
  double theta = 0.0;  // [0, pi]
  double phi = 0.0;    // [0, 2 pi)
};

// Basis vectors (cos(t/2), e^{i phi} sin(t/2)) and (sin(t/2), -e^{i phi} cos(t/2)).
std::pair<Vector, Vector> bloch_basis(const BlochAngles& angles);

// A complete product measurement basis on a qubit register: one block per
// qubit (Bloch angles) or an explicit joint block on a few qubits. Blocks
// partition all qubits; outcome index is mixed-radix over blocks in qubit
// order, with qubit 0 the most significant.
class LocalBasis {
 public:
  struct Block {
    std::vector<int> qubits;      // ascending
    std::vector<Vector> vectors;  // orthonormal, dimension 2^qubits
    std::optional<BlochAngles> angles;  // single-qubit blocks only
    std::string name;
  };

  static LocalBasis product(const std::vector<BlochAngles>& per_qubit);
  static LocalBasis computational(int qubit_count);
  // Bell block on the given qubit pair; remaining qubits use per-qubit angles
  // (computational by default).
  static LocalBasis with_bell_block(int qubit_count, int qa, int qb);
  static LocalBasis from_blocks(int qubit_count, std::vector<Block> blocks);

  int qubit_count() const { return qubit_count_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  bool fully_local() const;  // all blocks single-qubit
  int max_block_size() const;
  std::string describe() const;

  ProjectorSet to_projector_set() const;

 private:
  int qubit_count_ = 0;
  std::vector<Block> blocks_;
};

// ceil(log2(qubits)) + 1, the largest joint block a logarithmic-size
// classical simulator can absorb.
int joint_block_cap(int qubit_count);

}  // namespace histoq

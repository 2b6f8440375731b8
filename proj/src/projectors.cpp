#include "histoq/projectors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "histoq/gates.hpp"
#include "histoq/states.hpp"

namespace histoq {

ProjectorSet::ProjectorSet(std::vector<Matrix> projectors, std::vector<std::string> labels)
    : projectors_(std::move(projectors)), labels_(std::move(labels)) {
  if (projectors_.empty()) throw std::invalid_argument("projector set is empty");
  dim_ = projectors_[0].rows();
  Matrix sum = Matrix::Zero(dim_, dim_);
  for (size_t a = 0; a < projectors_.size(); ++a) {
    const Matrix& p = projectors_[a];
    if (p.rows() != dim_ || p.cols() != dim_)
      throw std::invalid_argument("projector set has mismatched dimensions");
    if (!is_projector(p)) throw std::invalid_argument("entry " + std::to_string(a) + " is not a projector");
    sum += p;
  }
  if (max_abs(Matrix(sum - Matrix::Identity(dim_, dim_))) > kOperatorTol)
    throw std::invalid_argument("projector set does not sum to identity");
  for (size_t a = 0; a < projectors_.size(); ++a)
    for (size_t b = a + 1; b < projectors_.size(); ++b)
      if (max_abs(Matrix(projectors_[a] * projectors_[b])) > kOperatorTol)
        throw std::invalid_argument("projectors " + std::to_string(a) + "," + std::to_string(b) +
                                    " are not orthogonal");

  if (labels_.empty()) {
    labels_.reserve(projectors_.size());
    for (size_t a = 0; a < projectors_.size(); ++a) labels_.push_back(std::to_string(a));
  } else if (labels_.size() != projectors_.size()) {
    throw std::invalid_argument("label count does not match projector count");
  }

  ranks_.reserve(projectors_.size());
  vectors_.resize(projectors_.size());
  for (size_t a = 0; a < projectors_.size(); ++a) {
    int r = static_cast<int>(std::lround(projectors_[a].trace().real()));
    ranks_.push_back(r);
    if (r == 1) {
      // Extract the unit vector from the largest column.
      Index best = 0;
      double best_norm = 0.0;
      for (Index c = 0; c < dim_; ++c) {
        double n = projectors_[a].col(c).norm();
        if (n > best_norm) {
          best_norm = n;
          best = c;
        }
      }
      Vector v = projectors_[a].col(best) / best_norm;
      if (max_abs(Matrix(projectors_[a] - v * v.adjoint())) > kOperatorTol * 10)
        throw std::invalid_argument("rank-1 projector extraction failed");
      vectors_[a] = canonical_phase(v);
    }
  }
}

ProjectorSet ProjectorSet::computational(Index dim) {
  std::vector<Vector> basis;
  basis.reserve(dim);
  for (Index i = 0; i < dim; ++i) {
    Vector v = Vector::Zero(dim);
    v(i) = 1.0;
    basis.push_back(std::move(v));
  }
  return from_basis(basis);
}

ProjectorSet ProjectorSet::from_basis(const std::vector<Vector>& vectors,
                                      std::vector<std::string> labels) {
  std::vector<Matrix> ps;
  ps.reserve(vectors.size());
  for (const Vector& v : vectors) ps.push_back(v * v.adjoint());
  return ProjectorSet(std::move(ps), std::move(labels));
}

ProjectorSet ProjectorSet::bell() {
  auto states = gates::bell_states();
  std::vector<Vector> vs;
  for (const auto& s : states) vs.push_back(s.amplitudes());
  return from_basis(vs, {"Phi+", "Phi-", "Psi+", "Psi-"});
}

bool ProjectorSet::is_rank_one() const {
  return std::all_of(ranks_.begin(), ranks_.end(), [](int r) { return r == 1; });
}

const Vector& ProjectorSet::rank1_vector(int a) const {
  if (!vectors_[a]) throw std::logic_error("projector " + std::to_string(a) + " is not rank 1");
  return *vectors_[a];
}

Vector ProjectorSet::apply(int a, const Vector& v) const {
  if (vectors_[a]) {
    const Vector& u = *vectors_[a];
    return u * u.dot(v);
  }
  return projectors_[a] * v;
}

ProjectorSet coarse_grain(const ProjectorSet& set, const std::vector<std::vector<int>>& partition) {
  std::vector<bool> used(set.size(), false);
  std::vector<Matrix> ps;
  std::vector<std::string> labels;
  for (const auto& group : partition) {
    if (group.empty()) throw std::invalid_argument("coarse_grain: empty group");
    Matrix p = Matrix::Zero(set.dim(), set.dim());
    std::ostringstream lbl;
    for (size_t i = 0; i < group.size(); ++i) {
      int a = group[i];
      if (a < 0 || a >= set.size()) throw std::invalid_argument("coarse_grain: index out of range");
      if (used[a]) throw std::invalid_argument("coarse_grain: index used twice");
      used[a] = true;
      p += set.projector(a);
      lbl << (i ? "+" : "") << set.label(a);
    }
    ps.push_back(std::move(p));
    labels.push_back(lbl.str());
  }
  if (!std::all_of(used.begin(), used.end(), [](bool b) { return b; }))
    throw std::invalid_argument("coarse_grain: partition does not cover all outcomes");
  return ProjectorSet(std::move(ps), std::move(labels));
}

std::pair<Vector, Vector> bloch_basis(const BlochAngles& angles) {
  const double c = std::cos(angles.theta / 2.0);
  const double s = std::sin(angles.theta / 2.0);
  const Complex e = std::polar(1.0, angles.phi);
  Vector b0(2), b1(2);
  b0 << c, e * s;
  b1 << s, -e * c;
  return {std::move(b0), std::move(b1)};
}

int joint_block_cap(int qubit_count) {
  if (qubit_count < 1) throw std::invalid_argument("qubit count must be >= 1");
  int c = 0;
  while ((1 << c) < qubit_count) ++c;
  return c + 1;
}

LocalBasis LocalBasis::product(const std::vector<BlochAngles>& per_qubit) {
  std::vector<Block> blocks;
  blocks.reserve(per_qubit.size());
  for (size_t q = 0; q < per_qubit.size(); ++q) {
    auto [b0, b1] = bloch_basis(per_qubit[q]);
    Block blk;
    blk.qubits = {static_cast<int>(q)};
    blk.vectors = {std::move(b0), std::move(b1)};
    blk.angles = per_qubit[q];
    blocks.push_back(std::move(blk));
  }
  return from_blocks(static_cast<int>(per_qubit.size()), std::move(blocks));
}

LocalBasis LocalBasis::computational(int qubit_count) {
  return product(std::vector<BlochAngles>(qubit_count, BlochAngles{0.0, 0.0}));
}

LocalBasis LocalBasis::with_bell_block(int qubit_count, int qa, int qb) {
  if (qa == qb) throw std::invalid_argument("bell block needs two distinct qubits");
  if (qa > qb) std::swap(qa, qb);
  std::vector<Block> blocks;
  for (int q = 0; q < qubit_count; ++q) {
    if (q == qb) continue;
    if (q == qa) {
      Block blk;
      blk.qubits = {qa, qb};
      for (const auto& s : gates::bell_states()) blk.vectors.push_back(s.amplitudes());
      blk.name = "bell";
      blocks.push_back(std::move(blk));
    } else {
      auto [b0, b1] = bloch_basis({0.0, 0.0});
      Block blk;
      blk.qubits = {q};
      blk.vectors = {std::move(b0), std::move(b1)};
      blk.angles = BlochAngles{0.0, 0.0};
      blocks.push_back(std::move(blk));
    }
  }
  return from_blocks(qubit_count, std::move(blocks));
}

LocalBasis LocalBasis::from_blocks(int qubit_count, std::vector<Block> blocks) {
  LocalBasis out;
  out.qubit_count_ = qubit_count;
  std::vector<bool> covered(qubit_count, false);
  for (auto& blk : blocks) {
    if (blk.qubits.empty()) throw std::invalid_argument("local basis block with no qubits");
    if (!std::is_sorted(blk.qubits.begin(), blk.qubits.end()))
      throw std::invalid_argument("block qubits must be ascending");
    for (int q : blk.qubits) {
      if (q < 0 || q >= qubit_count) throw std::invalid_argument("block qubit out of range");
      if (covered[q]) throw std::invalid_argument("block qubits overlap");
      covered[q] = true;
    }
    const Index d = Index{1} << blk.qubits.size();
    if (static_cast<Index>(blk.vectors.size()) != d)
      throw std::invalid_argument("block basis has wrong cardinality");
    for (size_t i = 0; i < blk.vectors.size(); ++i) {
      if (blk.vectors[i].size() != d) throw std::invalid_argument("block vector has wrong dimension");
      for (size_t j = 0; j <= i; ++j) {
        Complex g = blk.vectors[j].dot(blk.vectors[i]);
        double want = (i == j) ? 1.0 : 0.0;
        if (std::abs(g - want) > kStateTol)
          throw std::invalid_argument("block basis is not orthonormal");
      }
    }
  }
  if (!std::all_of(covered.begin(), covered.end(), [](bool b) { return b; }))
    throw std::invalid_argument("blocks do not cover every qubit");
  // Keep blocks ordered by their first qubit.
  std::sort(blocks.begin(), blocks.end(),
            [](const Block& a, const Block& b) { return a.qubits[0] < b.qubits[0]; });
  out.blocks_ = std::move(blocks);
  return out;
}

bool LocalBasis::fully_local() const {
  return std::all_of(blocks_.begin(), blocks_.end(),
                     [](const Block& b) { return b.qubits.size() == 1; });
}

int LocalBasis::max_block_size() const {
  int m = 0;
  for (const auto& b : blocks_) m = std::max(m, static_cast<int>(b.qubits.size()));
  return m;
}

std::string LocalBasis::describe() const {
  std::ostringstream os;
  for (size_t i = 0; i < blocks_.size(); ++i) {
    if (i) os << " ";
    const Block& b = blocks_[i];
    os << "q";
    for (size_t j = 0; j < b.qubits.size(); ++j) os << (j ? "," : "") << b.qubits[j];
    if (!b.name.empty()) {
      os << ":" << b.name;
    } else if (b.angles) {
      os << ":(theta=" << b.angles->theta << ",phi=" << b.angles->phi << ")";
    } else {
      os << ":joint";
    }
  }
  return os.str();
}

ProjectorSet LocalBasis::to_projector_set() const {
  const Index dim = Index{1} << qubit_count_;
  // Outcome index runs over block outcomes, first block most significant.
  std::vector<int> radix;
  for (const auto& b : blocks_) radix.push_back(static_cast<int>(b.vectors.size()));
  Index total = 1;
  for (int r : radix) total *= r;

  std::vector<Vector> basis;
  basis.reserve(total);
  std::vector<int> outcome(blocks_.size(), 0);
  for (Index flat = 0; flat < total; ++flat) {
    Index rem = flat;
    for (size_t b = blocks_.size(); b-- > 0;) {
      outcome[b] = static_cast<int>(rem % radix[b]);
      rem /= radix[b];
    }
    // Place each block's vector amplitudes onto its qubits.
    Vector full = Vector::Zero(dim);
    for (Index idx = 0; idx < dim; ++idx) {
      Complex amp = 1.0;
      for (size_t b = 0; b < blocks_.size() && amp != Complex{0.0, 0.0}; ++b) {
        const Block& blk = blocks_[b];
        Index sub = 0;
        for (size_t j = 0; j < blk.qubits.size(); ++j) {
          int q = blk.qubits[j];
          if ((idx >> (qubit_count_ - 1 - q)) & 1) sub |= Index{1} << (blk.qubits.size() - 1 - j);
        }
        amp *= blk.vectors[outcome[b]](sub);
      }
      full(idx) = amp;
    }
    basis.push_back(std::move(full));
  }

  std::vector<std::string> labels;
  labels.reserve(total);
  for (Index flat = 0; flat < total; ++flat) {
    Index rem = flat;
    std::vector<int> oc(blocks_.size());
    for (size_t b = blocks_.size(); b-- > 0;) {
      oc[b] = static_cast<int>(rem % radix[b]);
      rem /= radix[b];
    }
    std::ostringstream os;
    for (size_t b = 0; b < blocks_.size(); ++b) os << (b ? "." : "") << oc[b];
    labels.push_back(os.str());
  }
  return ProjectorSet::from_basis(basis, std::move(labels));
}

}  // namespace histoq

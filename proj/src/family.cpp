#include "histoq/family.hpp"

namespace histoq {

IndexShape::IndexShape(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.empty()) throw std::invalid_argument("index shape needs at least one event");
  for (int m : sizes_) {
    if (m < 1) throw std::invalid_argument("event with no outcomes");
    if (total_ > kHistoryGuard / static_cast<std::size_t>(m))
      throw std::invalid_argument("family size exceeds the 10^7 history guard");
    total_ *= static_cast<std::size_t>(m);
  }
}

std::size_t IndexShape::flatten(const MultiIndex& idx) const {
  if (idx.size() != sizes_.size()) throw std::invalid_argument("multi-index has wrong length");
  std::size_t flat = 0;
  for (size_t j = 0; j < sizes_.size(); ++j) {
    if (idx[j] < 0 || idx[j] >= sizes_[j]) throw std::invalid_argument("outcome index out of range");
    flat = flat * static_cast<std::size_t>(sizes_[j]) + static_cast<std::size_t>(idx[j]);
  }
  return flat;
}

MultiIndex IndexShape::unflatten(std::size_t flat) const {
  MultiIndex idx(sizes_.size());
  for (size_t j = sizes_.size(); j-- > 0;) {
    idx[j] = static_cast<int>(flat % static_cast<std::size_t>(sizes_[j]));
    flat /= static_cast<std::size_t>(sizes_[j]);
  }
  return idx;
}

namespace {

IndexShape make_shape(const Circuit& circuit, const std::vector<Insertion>& insertions) {
  std::vector<int> sizes;
  sizes.reserve(insertions.size() + 1);
  for (const auto& ins : insertions) sizes.push_back(ins.set.size());
  sizes.push_back(circuit.final_set().size());
  return IndexShape(std::move(sizes));
}

}  // namespace

HistoryFamily::HistoryFamily(Circuit circuit, std::vector<Insertion> insertions)
    : circuit_(std::move(circuit)),
      insertions_(std::move(insertions)),
      shape_(make_shape(circuit_, insertions_)) {
  int prev = -1;
  for (const auto& ins : insertions_) {
    if (ins.stage <= prev) throw std::invalid_argument("insertion stages must strictly increase");
    if (ins.stage < 0 || ins.stage >= circuit_.stage_count())
      throw std::invalid_argument("insertions must come before the final measurement");
    if (ins.set.dim() != circuit_.dim()) throw std::invalid_argument("insertion dimension mismatch");
    prev = ins.stage;
  }
}

const ProjectorSet& HistoryFamily::event_set(int j) const {
  if (j < 0 || j >= event_count()) throw std::invalid_argument("event index out of range");
  if (j + 1 == event_count()) return circuit_.final_set();
  return insertions_[j].set;
}

int HistoryFamily::event_stage(int j) const {
  if (j < 0 || j >= event_count()) throw std::invalid_argument("event index out of range");
  if (j + 1 == event_count()) return circuit_.stage_count();
  return insertions_[j].stage;
}

Vector HistoryFamily::branch(const Vector& psi0, const MultiIndex& idx) const {
  shape_.flatten(idx);  // validates
  Vector v = psi0;
  int at = 0;
  for (int j = 0; j < event_count(); ++j) {
    v = circuit_.propagate(std::move(v), at, event_stage(j));
    at = event_stage(j);
    v = event_set(j).apply(idx[j], v);
  }
  return circuit_.propagate(std::move(v), at, circuit_.stage_count());
}

void HistoryFamily::for_each_branch(const Vector& psi0,
                                    const std::function<void(std::size_t, const Vector&)>& fn,
                                    double prune) const {
  const int n = event_count();
  const Vector zero = Vector::Zero(circuit_.dim());
  // Subtree sizes for fast zero emission.
  std::vector<std::size_t> subtree(n + 1, 1);
  for (int j = n; j-- > 0;) subtree[j] = subtree[j + 1] * static_cast<std::size_t>(shape_.size(j));

  std::function<void(int, int, std::size_t, const Vector&)> walk =
      [&](int event, int at_stage, std::size_t base, const Vector& v) {
        if (event == n) {
          fn(base, v);
          return;
        }
        const int stage = event_stage(event);
        const bool dead = v.squaredNorm() <= prune;
        Vector moved;
        if (!dead) moved = circuit_.propagate(v, at_stage, stage);
        for (int a = 0; a < shape_.size(event); ++a) {
          std::size_t child = base + static_cast<std::size_t>(a) * subtree[event + 1];
          if (dead) {
            for (std::size_t z = 0; z < subtree[event + 1]; ++z) fn(child + z, zero);
          } else {
            walk(event + 1, stage, child, event_set(event).apply(a, moved));
          }
        }
      };

  walk(0, 0, 0, psi0);
}

Matrix HistoryFamily::heisenberg_projector(int event, int outcome) const {
  const ProjectorSet& set = event_set(event);
  if (outcome < 0 || outcome >= set.size()) throw std::invalid_argument("outcome out of range");
  Matrix u = circuit_.unitary_between(0, event_stage(event));
  return u.adjoint() * set.projector(outcome) * u;
}

Matrix HistoryFamily::history_operator(const MultiIndex& idx) const {
  shape_.flatten(idx);  // validates
  Matrix c = Matrix::Identity(circuit_.dim(), circuit_.dim());
  for (int j = 0; j < event_count(); ++j) c = c * heisenberg_projector(j, idx[j]);
  return c;
}

double HistoryFamily::probability(const MultiIndex& idx) const {
  double p = 0.0;
  for (const auto& [weight, psi] : circuit_.initial().eigenbranches())
    p += weight * branch(psi, idx).squaredNorm();
  return clamp_probability(p);
}

RealVector HistoryFamily::marginal_by_event(int event) const {
  RealVector out = RealVector::Zero(event_set(event).size());
  const auto& sizes = shape_.sizes();
  for (const auto& [weight, psi] : circuit_.initial().eigenbranches()) {
    for_each_branch(
        psi,
        [&](std::size_t flat, const Vector& b) {
          double p = b.squaredNorm();
          if (p == 0.0) return;
          std::size_t rem = flat;
          int outcome = 0;
          for (int j = static_cast<int>(sizes.size()); j-- > 0;) {
            int oj = static_cast<int>(rem % static_cast<std::size_t>(sizes[j]));
            rem /= static_cast<std::size_t>(sizes[j]);
            if (j == event) outcome = oj;
          }
          out(outcome) += weight * p;
        },
        0.0);
  }
  return out;
}

RealVector HistoryFamily::born_marginal(int event) const {
  const ProjectorSet& set = event_set(event);
  Matrix rho = circuit_.density_at(event_stage(event));
  RealVector out(set.size());
  for (int a = 0; a < set.size(); ++a)
    out(a) = clamp_probability((set.projector(a) * rho).trace().real());
  return out;
}

HistoryFamily HistoryFamily::with_insertion(const Insertion& ins) const {
  std::vector<Insertion> all = insertions_;
  auto it = all.begin();
  while (it != all.end() && it->stage < ins.stage) ++it;
  if (it != all.end() && it->stage == ins.stage)
    throw std::invalid_argument("a set is already inserted at stage " + std::to_string(ins.stage));
  all.insert(it, ins);
  return HistoryFamily(circuit_, std::move(all));
}

HistoryFamily HistoryFamily::with_initial(InitialState initial) const {
  Circuit c(std::move(initial), circuit_.stages(), circuit_.final_set());
  return HistoryFamily(std::move(c), insertions_);
}

std::vector<BranchSet> all_branches(const HistoryFamily& family) {
  std::vector<BranchSet> out;
  for (const auto& [weight, psi] : family.circuit().initial().eigenbranches()) {
    BranchSet bs;
    bs.weight = weight;
    bs.vectors.resize(family.history_count());
    family.for_each_branch(psi, [&](std::size_t flat, const Vector& b) { bs.vectors[flat] = b; });
    out.push_back(std::move(bs));
  }
  return out;
}

HistoryFamily one_event_family(const Circuit& circuit) { return HistoryFamily(circuit, {}); }

}  // namespace histoq

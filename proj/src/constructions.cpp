#include "histoq/constructions.hpp"

#include <algorithm>
#include <cmath>

#include "histoq/gates.hpp"

namespace histoq {

namespace {

// Eigenvector matrix in the deterministic order of DensityMatrix::eigensystem.
Matrix eigenvector_columns(const DensityMatrix& rho) {
  const auto& es = rho.eigensystem();
  Matrix e(rho.dim(), rho.dim());
  for (Index i = 0; i < rho.dim(); ++i) e.col(i) = es.vectors[i];
  return e;
}

HistoryFamily bound_family(const DensityMatrix& rho, bool with_shift) {
  const Index dim = rho.dim();
  Matrix e = eigenvector_columns(rho);
  std::vector<Vector> eigvecs;
  eigvecs.reserve(dim);
  for (Index i = 0; i < dim; ++i) eigvecs.push_back(e.col(i));
  ProjectorSet eigenset = ProjectorSet::from_basis(eigvecs);

  std::vector<Stage> stages;
  stages.push_back(dense_stage(Matrix::Identity(dim, dim)));
  stages.push_back(dense_stage(e * gates::qft(dim) * e.adjoint()));
  if (with_shift) stages.push_back(dense_stage(e * gates::phase_shift_gate(dim) * e.adjoint()));

  Circuit circuit(InitialState(rho), std::move(stages), eigenset);
  std::vector<Insertion> ins;
  ins.push_back({1, eigenset});
  if (with_shift) ins.push_back({2, eigenset});
  return HistoryFamily(std::move(circuit), std::move(ins));
}

}  // namespace

HistoryFamily build_diosi_family(const DensityMatrix& rho) { return bound_family(rho, false); }

HistoryFamily build_weak_bound_family(Index dim, const DensityMatrix& rho) {
  if (dim < 2 || dim % 2 != 0)
    throw std::invalid_argument("build_weak_bound_family: dimension must be even");
  if (rho.dim() != dim) throw std::invalid_argument("build_weak_bound_family: dimension mismatch");
  return bound_family(rho, true);
}

HistoryFamily build_weak_bound_family(Index dim) {
  if (dim < 2 || dim % 2 != 0)
    throw std::invalid_argument("build_weak_bound_family: dimension must be even");
  return bound_family(DensityMatrix::pure(StateVector::basis_state(dim, dim / 2)), true);
}

namespace {

// Branch vectors of the family truncated to events 0..last_event, in the
// Schrodinger picture of last_event's stage, keyed by (prefix, outcome).
struct PrefixBranches {
  // per outcome of event `last_event`: list of branch vectors in
  // lexicographic prefix order
  std::vector<std::vector<Vector>> by_outcome;
};

PrefixBranches truncated_branches(const HistoryFamily& family, int last_event) {
  PrefixBranches out;
  out.by_outcome.resize(family.event_set(last_event).size());
  const Vector psi = family.circuit().initial().principal_amplitudes();

  std::function<void(int, int, const Vector&)> walk = [&](int event, int at_stage, const Vector& v) {
    const int stage = family.event_stage(event);
    Vector moved = family.circuit().propagate(v, at_stage, stage);
    const ProjectorSet& set = family.event_set(event);
    for (int a = 0; a < set.size(); ++a) {
      Vector next = set.apply(a, moved);
      if (event == last_event)
        out.by_outcome[a].push_back(std::move(next));
      else
        walk(event + 1, stage, next);
    }
  };
  walk(0, 0, psi);
  return out;
}

}  // namespace

HistoryFamily fine_grain(const HistoryFamily& family, double epsilon) {
  if (!family.circuit().initial().rank_one())
    throw std::invalid_argument("fine_grain requires a pure initial state");
  if (!check_medium(family, epsilon).passed)
    throw std::invalid_argument("fine_grain requires a medium-consistent family");

  const Index dim = family.circuit().dim();
  std::vector<ProjectorSet> refined;
  refined.reserve(family.event_count());

  for (int j = 0; j < family.event_count(); ++j) {
    const ProjectorSet& set = family.event_set(j);
    if (set.is_rank_one()) {
      refined.push_back(set);
      continue;
    }
    PrefixBranches pb = truncated_branches(family, j);
    std::vector<Vector> basis;
    std::vector<std::string> labels;
    for (int a = 0; a < set.size(); ++a) {
      // Nonzero branches, by decreasing probability (ties keep prefix order).
      std::vector<Vector> live;
      for (const Vector& v : pb.by_outcome[a])
        if (v.squaredNorm() > kZeroProbability) live.push_back(v);
      std::stable_sort(live.begin(), live.end(), [](const Vector& x, const Vector& y) {
        return x.squaredNorm() > y.squaredNorm();
      });

      std::vector<Vector> nus;
      auto add_orthonormal = [&](Vector v) {
        for (const Vector& u : nus) v -= u * u.dot(v);
        double n = v.norm();
        if (n > 1e-8) {
          nus.push_back(canonical_phase(v / n));
          return true;
        }
        return false;
      };
      for (const Vector& v : live) add_orthonormal(v);
      // Complete the outcome subspace from the projector's own columns.
      const int r = set.rank(a);
      for (Index c = 0; c < dim && static_cast<int>(nus.size()) < r; ++c)
        add_orthonormal(set.projector(a).col(c));
      if (static_cast<int>(nus.size()) != r)
        throw std::runtime_error("fine_grain: could not complete outcome subspace");

      Matrix sum = Matrix::Zero(dim, dim);
      for (size_t i = 0; i < nus.size(); ++i) {
        sum += nus[i] * nus[i].adjoint();
        basis.push_back(nus[i]);
        labels.push_back(set.label(a) + "." + std::to_string(i));
      }
      if (max_abs(Matrix(sum - set.projector(a))) > kOperatorTol)
        throw std::runtime_error("fine_grain: refinement does not reproduce the projector");
    }
    refined.push_back(ProjectorSet::from_basis(basis, std::move(labels)));
  }

  std::vector<Insertion> ins;
  for (size_t i = 0; i + 1 < static_cast<size_t>(family.event_count()); ++i)
    ins.push_back({family.event_stage(static_cast<int>(i)), refined[i]});
  Circuit circuit(family.circuit().initial(), family.circuit().stages(), refined.back());
  HistoryFamily out(std::move(circuit), std::move(ins));
  if (!check_medium(out, epsilon).passed)
    throw std::runtime_error("fine_grain: refined family lost medium consistency");
  return out;
}

}  // namespace histoq

#include "histoq/states.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace histoq {

namespace {

constexpr double kDiagonalTol = 1e-13;
constexpr double kClusterTol = 1e-10;

bool is_power_of_two(Index n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

int qubit_count_of_dim(Index dim) {
  if (!is_power_of_two(dim)) throw std::invalid_argument("dimension is not a power of two");
  int q = 0;
  while ((Index{1} << q) < dim) ++q;
  return q;
}

StateVector::StateVector(Vector amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.size() == 0) throw std::invalid_argument("empty state vector");
  if (!amps_.allFinite()) throw std::invalid_argument("state vector has non-finite amplitudes");
  double n2 = amps_.squaredNorm();
  if (std::abs(n2 - 1.0) > 1e-10)
    throw std::invalid_argument("state vector not normalized: ||psi||^2 = " + std::to_string(n2));
  amps_ /= std::sqrt(n2);
}

StateVector StateVector::basis_state(Index dim, Index index) {
  if (index < 0 || index >= dim) throw std::invalid_argument("basis index out of range");
  Vector v = Vector::Zero(dim);
  v(index) = 1.0;
  return StateVector(std::move(v));
}

DensityMatrix::DensityMatrix(Matrix rho) : rho_(std::move(rho)) {
  if (rho_.rows() != rho_.cols() || rho_.rows() == 0)
    throw std::invalid_argument("density matrix must be square and nonempty");
  if (!rho_.allFinite()) throw std::invalid_argument("density matrix has non-finite entries");
  if (!is_hermitian(rho_, kStateTol * 10))
    throw std::invalid_argument("density matrix not Hermitian");
  double tr = rho_.trace().real();
  if (std::abs(tr - 1.0) > 1e-10)
    throw std::invalid_argument("density matrix trace != 1: " + std::to_string(tr));
  rho_ = 0.5 * (rho_ + rho_.adjoint().eval());  // exact Hermitian symmetrization
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho_, Eigen::EigenvaluesOnly);
  double min_ev = es.eigenvalues().minCoeff();
  if (min_ev < -kStateTol)
    throw std::invalid_argument("density matrix has eigenvalue " + std::to_string(min_ev));
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
  const Vector& v = psi.amplitudes();
  return DensityMatrix(Matrix(v * v.adjoint()));
}

DensityMatrix DensityMatrix::maximally_mixed(Index dim) {
  return DensityMatrix(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

int DensityMatrix::rank(double tol) const {
  const Eigensystem& es = eigensystem();
  int r = 0;
  for (Index i = 0; i < es.values.size(); ++i)
    if (es.values(i) > tol) ++r;
  return r;
}

const DensityMatrix::Eigensystem& DensityMatrix::eigensystem() const {
  if (eig_) return *eig_;
  auto es = std::make_shared<Eigensystem>();
  const Index n = dim();

  Matrix off = rho_;
  off.diagonal().setZero();
  if (max_abs(off) <= kDiagonalTol) {
    // Diagonal state: keep natural index order.
    es->values = rho_.diagonal().real();
    es->vectors.reserve(n);
    for (Index i = 0; i < n; ++i) {
      Vector v = Vector::Zero(n);
      v(i) = 1.0;
      es->vectors.push_back(std::move(v));
    }
    eig_ = std::move(es);
    return *eig_;
  }

  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho_);
  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  const auto& vals = solver.eigenvalues();
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return vals(a) > vals(b); });

  es->values.resize(n);
  es->vectors.resize(n);
  for (Index i = 0; i < n; ++i) {
    es->values(i) = vals(order[i]);
    es->vectors[i] = solver.eigenvectors().col(order[i]);
  }

  // Re-span degenerate clusters by Gram-Schmidt of computational vectors in
  // index order, so repeated eigenvalues still give a reproducible basis.
  Index start = 0;
  while (start < n) {
    Index stop = start + 1;
    while (stop < n && std::abs(es->values(stop) - es->values(start)) <= kClusterTol) ++stop;
    Index k = stop - start;
    if (k > 1) {
      Matrix proj = Matrix::Zero(n, n);
      for (Index i = start; i < stop; ++i) proj += es->vectors[i] * es->vectors[i].adjoint();
      std::vector<Vector> replaced;
      for (Index e = 0; e < n && static_cast<Index>(replaced.size()) < k; ++e) {
        Vector cand = proj.col(e);  // projection of |e> onto the eigenspace
        for (const Vector& u : replaced) cand -= u.dot(cand) * u;
        double nn = cand.norm();
        if (nn > 1e-8) replaced.push_back(cand / nn);
      }
      if (static_cast<Index>(replaced.size()) == k)
        for (Index i = 0; i < k; ++i) es->vectors[start + i] = replaced[i];
    }
    start = stop;
  }
  for (auto& v : es->vectors) v = canonical_phase(v);
  eig_ = std::move(es);
  return *eig_;
}

InitialState::InitialState(StateVector psi) : pure_(std::move(psi)) {}
InitialState::InitialState(DensityMatrix rho) : mixed_(std::move(rho)) {}

Index InitialState::dim() const { return pure_ ? pure_->dim() : mixed_->dim(); }

const StateVector& InitialState::pure_vector() const {
  if (!pure_) throw std::logic_error("initial state is not pure");
  return *pure_;
}

DensityMatrix InitialState::density() const {
  return pure_ ? DensityMatrix::pure(*pure_) : *mixed_;
}

int InitialState::rank(double tol) const { return pure_ ? 1 : mixed_->rank(tol); }

Vector InitialState::principal_amplitudes(double tol) const {
  if (pure_) return pure_->amplitudes();
  if (mixed_->rank(tol) != 1) throw std::logic_error("initial state is not rank one");
  return eigenbranches(tol)[0].second;
}

std::vector<std::pair<double, Vector>> InitialState::eigenbranches(double tol) const {
  std::vector<std::pair<double, Vector>> out;
  if (pure_) {
    out.emplace_back(1.0, pure_->amplitudes());
    return out;
  }
  const auto& es = mixed_->eigensystem();
  for (Index i = 0; i < es.values.size(); ++i)
    if (es.values(i) > tol) out.emplace_back(es.values(i), es.vectors[i]);
  return out;
}

StateVector apply_unitary(const Matrix& u, const StateVector& s) {
  if (u.cols() != s.dim()) throw std::invalid_argument("apply_unitary: dimension mismatch");
  if (!is_unitary(u)) throw std::invalid_argument("apply_unitary: operator not unitary");
  return StateVector(Vector(u * s.amplitudes()));
}

DensityMatrix apply_unitary(const Matrix& u, const DensityMatrix& rho) {
  if (u.cols() != rho.dim()) throw std::invalid_argument("apply_unitary: dimension mismatch");
  if (!is_unitary(u)) throw std::invalid_argument("apply_unitary: operator not unitary");
  return DensityMatrix(Matrix(u * rho.matrix() * u.adjoint()));
}

DensityMatrix pseudopure(const StateVector& psi, double nu) {
  if (nu < 0.0 || nu > 1.0) throw std::invalid_argument("pseudopure: nu outside [0,1]");
  Index d = psi.dim();
  Matrix rho = (1.0 - nu) / static_cast<double>(d) * Matrix::Identity(d, d) +
               nu * (psi.amplitudes() * psi.amplitudes().adjoint());
  return DensityMatrix(std::move(rho));
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
  int q = qubit_count_of_dim(rho.dim());
  std::vector<bool> kept(q, false);
  for (int k : keep) {
    if (k < 0 || k >= q) throw std::invalid_argument("partial_trace: qubit index out of range");
    if (kept[k]) throw std::invalid_argument("partial_trace: duplicate qubit index");
    kept[k] = true;
  }
  std::vector<int> keep_sorted, drop;
  for (int i = 0; i < q; ++i) (kept[i] ? keep_sorted : drop).push_back(i);

  const Index dk = Index{1} << keep_sorted.size();
  const Index dd = Index{1} << drop.size();
  auto full_index = [&](Index a, Index b) {
    // Qubit 0 is the most significant bit of the full index.
    Index idx = 0;
    for (size_t i = 0; i < keep_sorted.size(); ++i)
      if ((a >> (keep_sorted.size() - 1 - i)) & 1) idx |= Index{1} << (q - 1 - keep_sorted[i]);
    for (size_t i = 0; i < drop.size(); ++i)
      if ((b >> (drop.size() - 1 - i)) & 1) idx |= Index{1} << (q - 1 - drop[i]);
    return idx;
  };

  Matrix out = Matrix::Zero(dk, dk);
  for (Index a = 0; a < dk; ++a)
    for (Index b = 0; b < dk; ++b)
      for (Index e = 0; e < dd; ++e) out(a, b) += rho.matrix()(full_index(a, e), full_index(b, e));
  return DensityMatrix(std::move(out));
}

double entropy(const RealVector& eigenvalues, LogBase base) {
  double s = 0.0;
  for (Index i = 0; i < eigenvalues.size(); ++i) {
    double p = eigenvalues(i);
    if (p < -kStateTol) throw std::runtime_error("entropy: negative eigenvalue");
    if (p > kStateTol) s -= p * std::log(p);
  }
  return base == LogBase::e ? s : s / std::log(2.0);
}

double entanglement_entropy(const StateVector& psi, const std::vector<int>& cut, LogBase base) {
  DensityMatrix reduced = partial_trace(DensityMatrix::pure(psi), cut);
  Eigen::SelfAdjointEigenSolver<Matrix> es(reduced.matrix(), Eigen::EigenvaluesOnly);
  return entropy(es.eigenvalues(), base);
}

}  // namespace histoq

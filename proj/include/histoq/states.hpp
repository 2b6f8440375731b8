#pragma once

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "histoq/types.hpp"

namespace histoq {

// Normalized pure state. ||psi||^2 = 1 within 1e-12.
class StateVector {
 public:
  explicit StateVector(Vector amplitudes);
  static StateVector basis_state(Index dim, Index index);

  Index dim() const { return amps_.size(); }
  const Vector& amplitudes() const { return amps_; }
  Complex operator()(Index i) const { return amps_(i); }

 private:
  Vector amps_;
};

// Hermitian, unit trace, eigenvalues >= -1e-12 (clamped to zero).
class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix rho);
  static DensityMatrix pure(const StateVector& psi);
  static DensityMatrix maximally_mixed(Index dim);

  Index dim() const { return rho_.rows(); }
  const Matrix& matrix() const { return rho_; }
  int rank(double tol = kStateTol) const;

  // Spectral decomposition with a deterministic basis:
  //  - exactly diagonal input: computational vectors in natural index order;
  //  - otherwise eigenvalues descending, degenerate eigenspaces re-spanned by
  //    Gram-Schmidt of the computational basis in index order.
  // Vectors are canonically phased.
  struct Eigensystem {
    RealVector values;
    std::vector<Vector> vectors;
  };
  const Eigensystem& eigensystem() const;

 private:
  Matrix rho_;
  mutable std::shared_ptr<Eigensystem> eig_;
};

// Either a pure vector (kept as rank-1) or a full density matrix.
class InitialState {
 public:
  InitialState(StateVector psi);         // NOLINT(google-explicit-constructor)
  InitialState(DensityMatrix rho);       // NOLINT(google-explicit-constructor)

  Index dim() const;
  bool is_pure() const { return pure_.has_value(); }
  const StateVector& pure_vector() const;
  DensityMatrix density() const;
  int rank(double tol = kStateTol) const;
  // Pure, or a rank-1 density matrix.
  bool rank_one(double tol = kStateTol) const { return rank(tol) == 1; }
  // The state vector of a rank-one initial state.
  Vector principal_amplitudes(double tol = kStateTol) const;
  // (weight, vector) pairs with weight > tol; a pure state yields one entry.
  std::vector<std::pair<double, Vector>> eigenbranches(double tol = kStateTol) const;

 private:
  std::optional<StateVector> pure_;
  std::optional<DensityMatrix> mixed_;
};

// Us, or U rho U^dag. U must be unitary within 1e-10 and match dimensions.
StateVector apply_unitary(const Matrix& u, const StateVector& s);
DensityMatrix apply_unitary(const Matrix& u, const DensityMatrix& rho);

// rho = (1-nu)/dim 1l + nu |psi><psi|, nu in [0,1].
DensityMatrix pseudopure(const StateVector& psi, double nu);

// Trace out every qubit not in `keep`. Qubit 0 is the most significant bit
// of the basis index; dim must be a power of two.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);

enum class LogBase { two, e };

// Von Neumann entropy of the reduced state on `cut`.
double entanglement_entropy(const StateVector& psi, const std::vector<int>& cut, LogBase base);
double entropy(const RealVector& eigenvalues, LogBase base);

int qubit_count_of_dim(Index dim);  // throws unless dim is a power of two

}  // namespace histoq

#pragma once

#include <random>

#include "histoq/constructions.hpp"
#include "histoq/gates.hpp"

namespace histoq::testing {

using Rng = std::mt19937_64;

// The two-qubit demo circuit: |01> prepared into Psi+, the two-qubit Fourier
// transform, then gate U, measured in the computational basis. Stage 1 holds
// Psi+, stage 2 holds [2|00> + (-1+i)|01> + (-1-i)|11>]/sqrt(8).
inline Matrix bell_prep() {
  return gates::embed(gates::cnot(), {0, 1}, 2) * gates::embed(gates::hadamard(), {0}, 2);
}

inline Circuit worked_circuit() {
  std::vector<Stage> stages;
  stages.push_back(dense_stage(bell_prep()));
  stages.push_back(named_stage("QFT", {0, 1}, 2));
  stages.push_back(named_stage("U_PAPER", {0, 1}, 2));
  return Circuit(InitialState(StateVector::basis_state(4, 1)), std::move(stages),
                 ProjectorSet::computational(4));
}

// Bell measurement after the prep, computational after the Fourier stage.
inline HistoryFamily worked_family() {
  HistoryFamily f = one_event_family(worked_circuit());
  f = f.with_insertion({1, ProjectorSet::bell()});
  f = f.with_insertion({2, ProjectorSet::computational(4)});
  return f;
}

inline HistoryFamily worked_family_no_bell() {
  return one_event_family(worked_circuit()).with_insertion({2, ProjectorSet::computational(4)});
}

inline Complex random_complex(Rng& rng) {
  std::normal_distribution<double> n;
  return {n(rng), n(rng)};
}

inline Vector haar_vector(Index dim, Rng& rng) {
  Vector v(dim);
  for (Index i = 0; i < dim; ++i) v(i) = random_complex(rng);
  return v / v.norm();
}

inline Matrix haar_unitary(Index dim, Rng& rng) {
  Matrix g(dim, dim);
  for (Index i = 0; i < dim; ++i)
    for (Index j = 0; j < dim; ++j) g(i, j) = random_complex(rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index i = 0; i < dim; ++i) {
    Complex d = r(i, i);
    q.col(i) *= (std::abs(d) > 0 ? d / std::abs(d) : 1.0);
  }
  return q;
}

inline ProjectorSet random_rank1_set(Index dim, Rng& rng) {
  Matrix u = haar_unitary(dim, rng);
  std::vector<Vector> basis;
  for (Index i = 0; i < dim; ++i) basis.push_back(u.col(i));
  return ProjectorSet::from_basis(basis);
}

inline DensityMatrix random_density(Index dim, int rank, Rng& rng) {
  Matrix u = haar_unitary(dim, rng);
  std::uniform_real_distribution<double> unif(0.1, 1.0);
  RealVector lambda = RealVector::Zero(dim);
  double sum = 0.0;
  for (int i = 0; i < rank; ++i) {
    lambda(i) = unif(rng);
    sum += lambda(i);
  }
  Matrix rho = Matrix::Zero(dim, dim);
  for (int i = 0; i < rank; ++i) rho += lambda(i) / sum * (u.col(i) * u.col(i).adjoint());
  return DensityMatrix(std::move(rho));
}

inline Circuit random_circuit(Index dim, int stage_count, Rng& rng, bool pure_initial = true,
                              int rank = 2) {
  std::vector<Stage> stages;
  for (int k = 0; k < stage_count; ++k) stages.push_back(dense_stage(haar_unitary(dim, rng)));
  InitialState init = pure_initial
                          ? InitialState(StateVector(haar_vector(dim, rng)))
                          : InitialState(random_density(dim, rank, rng));
  return Circuit(std::move(init), std::move(stages), ProjectorSet::computational(dim));
}

// A random partition of {0..n-1} into nonempty groups, in index order.
inline std::vector<std::vector<int>> random_partition(int n, Rng& rng) {
  std::uniform_int_distribution<int> coin(0, 1);
  std::vector<std::vector<int>> groups;
  for (int i = 0; i < n; ++i) {
    if (groups.empty() || (coin(rng) && !groups.back().empty()))
      groups.push_back({i});
    else
      groups.back().push_back(i);
  }
  return groups;
}

// Random qubit circuits biased toward classically-transparent gates so that
// computational-basis chains frequently exist.
inline Circuit random_chainable_circuit(int qubits, int stage_count, Rng& rng) {
  const Index dim = Index{1} << qubits;
  std::uniform_int_distribution<int> kind(0, 4);
  std::uniform_int_distribution<int> qpick(0, qubits - 1);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * 3.14159265358979323846);
  std::vector<Stage> stages;
  for (int k = 0; k < stage_count; ++k) {
    switch (kind(rng)) {
      case 0: {  // diagonal phases
        Matrix d = Matrix::Identity(dim, dim);
        for (Index i = 0; i < dim; ++i) d(i, i) = std::polar(1.0, phase(rng));
        stages.push_back(dense_stage(std::move(d)));
        break;
      }
      case 1: {  // X on a random qubit (classical permutation)
        stages.push_back(named_stage("X", {qpick(rng)}, qubits));
        break;
      }
      case 2: {  // CNOT on a random pair
        int a = qpick(rng), b = qpick(rng);
        while (b == a) b = qpick(rng);
        stages.push_back(named_stage("CNOT", {a, b}, qubits));
        break;
      }
      case 3: {  // Hadamard on a random qubit
        stages.push_back(named_stage("H", {qpick(rng)}, qubits));
        break;
      }
      default: {  // S on a random qubit
        stages.push_back(named_stage("S", {qpick(rng)}, qubits));
        break;
      }
    }
  }
  std::uniform_int_distribution<Index> basis(0, dim - 1);
  return Circuit(InitialState(StateVector::basis_state(dim, basis(rng))), std::move(stages),
                 ProjectorSet::computational(dim));
}

}  // namespace histoq::testing

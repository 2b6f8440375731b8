#pragma once

#include "histoq/family.hpp"

namespace histoq {

// D(alpha;beta) = Tr{C_alpha^dag rho C_beta} over all history pairs.
// Hermitian; diagonal holds the history probabilities and sums to 1.
struct CoherenceMatrix {
  IndexShape shape;
  Matrix d;

  std::size_t histories() const { return shape.total(); }
  double diagonal_sum() const { return d.diagonal().real().sum(); }
};

// Branch-vector route: D(a;b) = sum_i lambda_i <b_{b,i}|b_{a,i}>.
// threads: 0 = all hardware threads, 1 = serial reference, k = k threads.
CoherenceMatrix coherence_matrix(const HistoryFamily& family, int threads = 0);

// Independent route through dense Heisenberg operator chains,
// D(a;b) = Tr{C_a^dag rho C_b}. Kept as the cross-check oracle for the
// branch computation; O(N^2 dim^3), use on small families.
CoherenceMatrix coherence_matrix_via_operators(const HistoryFamily& family);

namespace kernels {

// Pairwise Gram fill of the upper triangle plus mirror. The parallel kernel
// writes each entry independently, so results match the serial one exactly.
void gram_fill_serial(const std::vector<BranchSet>& branches, Matrix& d);
void gram_fill_omp(const std::vector<BranchSet>& branches, Matrix& d, int threads);

}  // namespace kernels

}  // namespace histoq

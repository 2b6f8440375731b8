#include "histoq/coherence.hpp"

#include <omp.h>

namespace histoq {

namespace kernels {

namespace {

inline Complex pair_entry(const std::vector<BranchSet>& branches, Index a, Index b) {
  // D(a;b) = sum_i lambda_i <branch_b | branch_a>.
  Complex s{0.0, 0.0};
  for (const BranchSet& bs : branches) s += bs.weight * bs.vectors[b].dot(bs.vectors[a]);
  return s;
}

}  // namespace

void gram_fill_serial(const std::vector<BranchSet>& branches, Matrix& d) {
  const Index n = d.rows();
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b <= a; ++b) {
      Complex v = pair_entry(branches, a, b);
      d(a, b) = v;
      d(b, a) = std::conj(v);
    }
  }
}

void gram_fill_omp(const std::vector<BranchSet>& branches, Matrix& d, int threads) {
  const Index n = d.rows();
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads > 0 ? threads : omp_get_max_threads())
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b <= a; ++b) {
      Complex v = pair_entry(branches, a, b);
      d(a, b) = v;
      d(b, a) = std::conj(v);
    }
  }
}

}  // namespace kernels

CoherenceMatrix coherence_matrix(const HistoryFamily& family, int threads) {
  auto branches = all_branches(family);
  const Index n = static_cast<Index>(family.history_count());
  CoherenceMatrix out{family.shape(), Matrix(n, n)};
  if (threads == 1)
    kernels::gram_fill_serial(branches, out.d);
  else
    kernels::gram_fill_omp(branches, out.d, threads);
  return out;
}

CoherenceMatrix coherence_matrix_via_operators(const HistoryFamily& family) {
  const Index n = static_cast<Index>(family.history_count());
  const Matrix rho = family.circuit().initial().density().matrix();
  std::vector<Matrix> chains(n);
  for (Index a = 0; a < n; ++a)
    chains[a] = family.history_operator(family.shape().unflatten(static_cast<std::size_t>(a)));
  CoherenceMatrix out{family.shape(), Matrix(n, n)};
  for (Index a = 0; a < n; ++a) {
    Matrix left = chains[a].adjoint() * rho;
    for (Index b = 0; b < n; ++b) out.d(a, b) = (left * chains[b]).trace();
  }
  return out;
}

}  // namespace histoq

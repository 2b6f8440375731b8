#pragma once

#include <cstdint>

#include "histoq/extension_search.hpp"

namespace histoq {

// Stateless counter-based generator: value i of a stream is a hash of
// (seed, stream, i), so samples can be drawn in any order by any thread and
// still reproduce exactly.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream) {}
  std::uint64_t bits(std::uint64_t counter) const;
  double uniform(std::uint64_t counter) const;  // [0, 1)

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
};

// Area-uniform Bloch point: cos(theta) uniform on [-1, 1], phi on [0, 2 pi).
BlochAngles random_bloch_point(const CounterRng& rng, std::uint64_t counter);

// Trace-preserving dephasing: off-diagonal blocks between different target
// outcomes of `basis` are scaled by 1 - strength (strength 1 keeps only the
// pinched part, i.e. an unread projective measurement).
struct DephasingChannel {
  LocalBasis basis;
  double strength = 1.0;
  std::vector<int> targets;  // empty = all qubits; must be whole blocks
};

DensityMatrix dephase(const DensityMatrix& rho, const DephasingChannel& channel);
Matrix dephase_raw(const Matrix& rho, const DephasingChannel& channel);

// Relative entropy sum P_i ln(P_i / Q_i) in nats. Zero-probability terms of P
// contribute nothing; Q entries are clamped at 1e-300 and flagged.
double kl_divergence(const RealVector& p, const RealVector& q, bool* clamped = nullptr);
// sum (P_i - Q_i)^2 / Q_i with the same support-safety rule.
double chi_squared(const RealVector& p, const RealVector& q, bool* clamped = nullptr);

struct RefocusedCircuit {
  Circuit circuit;
  int noise_stage = 0;   // apply the known-basis dephasing right after this stage
};

// Inserts R and R^dag around the decoherence point so dephasing in the known
// local basis acts as the consistent measurement; the net unitary is
// unchanged. R maps the consistent basis onto the decoherence basis per qubit.
RefocusedCircuit refocus_known_basis(const Circuit& circuit, int stage,
                                     const LocalBasis& decoherence_basis,
                                     const LocalBasis& consistent_basis);

struct NoiseReport {
  double h0 = 0.0;            // mean KL without the consistent pre-measurement
  double hm = 0.0;            // mean KL with it
  double reduction = 0.0;     // 1 - hm/h0
  double h0_sem = 0.0;        // Monte Carlo standard errors
  double hm_sem = 0.0;
  double chi2_h0 = 0.0;
  double chi2_hm = 0.0;
  double chi2_reduction = 0.0;
  double chi2_h0_sem = 0.0;
  double chi2_hm_sem = 0.0;
  std::size_t samples = 0;
  std::uint64_t rng_seed = 0;
  int stage = 0;
  double strength = 1.0;
  bool support_clamped = false;
};

// For each sample: draw an area-uniform product basis, dephase completely in
// it at `stage`, and measure the final-distribution damage by KL against the
// noiseless distribution, with (hm) and without (h0) the consistent
// projective pre-measurement. The consistent basis must pass the computing
// check at the stage. At least 100 samples.
NoiseReport run_robustness_experiment(const Circuit& circuit, int stage,
                                      const LocalBasis& consistent_basis, std::size_t samples,
                                      std::uint64_t seed, double strength = 1.0, int threads = 0);

namespace kernels {

struct NoiseSample {
  double h0 = 0.0, hm = 0.0, c0 = 0.0, cm = 0.0;
  bool clamped = false;
};
using NoiseEval = std::function<NoiseSample(std::size_t)>;
void noise_sweep_serial(const NoiseEval& eval, std::vector<NoiseSample>& out);
void noise_sweep_omp(const NoiseEval& eval, std::vector<NoiseSample>& out, int threads);

}  // namespace kernels

}  // namespace histoq

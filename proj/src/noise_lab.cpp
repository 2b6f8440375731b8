#include "histoq/noise_lab.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <omp.h>

namespace histoq {

namespace {

// splitmix64 finalizer chain
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr double kSupportFloor = 1e-300;

}  // namespace

std::uint64_t CounterRng::bits(std::uint64_t counter) const {
  return mix64(mix64(mix64(seed_) ^ stream_) ^ counter);
}

double CounterRng::uniform(std::uint64_t counter) const {
  return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
}

BlochAngles random_bloch_point(const CounterRng& rng, std::uint64_t counter) {
  double u = rng.uniform(2 * counter);
  double v = rng.uniform(2 * counter + 1);
  return {std::acos(1.0 - 2.0 * u), 2.0 * std::numbers::pi * v};
}

Matrix dephase_raw(const Matrix& rho, const DephasingChannel& channel) {
  if (channel.strength < 0.0 || channel.strength > 1.0)
    throw std::invalid_argument("dephasing strength outside [0,1]");
  std::vector<int> targets = channel.targets;
  if (targets.empty())
    for (int q = 0; q < channel.basis.qubit_count(); ++q) targets.push_back(q);

  // Pinch over the product basis of the blocks covering the targets; blocks
  // outside the target set act as identity.
  std::vector<const LocalBasis::Block*> active;
  for (const auto& blk : channel.basis.blocks()) {
    bool in = false, outside = false;
    for (int q : blk.qubits)
      (std::find(targets.begin(), targets.end(), q) != targets.end() ? in : outside) = true;
    if (in && outside) throw std::invalid_argument("dephasing targets split a basis block");
    if (in) active.push_back(&blk);
  }

  const int qubits = channel.basis.qubit_count();
  const Index dim = rho.rows();
  Matrix pinched = Matrix::Zero(dim, dim);
  // Enumerate joint outcomes of the active blocks.
  std::vector<size_t> pick(active.size(), 0);
  for (;;) {
    Matrix p = Matrix::Identity(dim, dim);
    for (size_t b = 0; b < active.size(); ++b) {
      // Build the block projector embedded on its qubits.
      const auto& blk = *active[b];
      const Vector& v = blk.vectors[pick[b]];
      Matrix blockp = v * v.adjoint();
      Matrix full = Matrix::Zero(dim, dim);
      for (Index r = 0; r < dim; ++r) {
        Index rs = 0;
        for (size_t j = 0; j < blk.qubits.size(); ++j)
          if ((r >> (qubits - 1 - blk.qubits[j])) & 1) rs |= Index{1} << (blk.qubits.size() - 1 - j);
        for (Index c = 0; c < dim; ++c) {
          Index cs = 0;
          bool same = true;
          for (int q = 0; q < qubits; ++q) {
            bool rq = (r >> (qubits - 1 - q)) & 1, cq = (c >> (qubits - 1 - q)) & 1;
            bool in_block = std::find(blk.qubits.begin(), blk.qubits.end(), q) != blk.qubits.end();
            if (!in_block && rq != cq) same = false;
          }
          if (!same) continue;
          for (size_t j = 0; j < blk.qubits.size(); ++j)
            if ((c >> (qubits - 1 - blk.qubits[j])) & 1) cs |= Index{1} << (blk.qubits.size() - 1 - j);
          full(r, c) = blockp(rs, cs);
        }
      }
      p = full * p;
    }
    pinched += p * rho * p;
    size_t b = active.size();
    bool done = true;
    while (b-- > 0) {
      if (++pick[b] < active[b]->vectors.size()) {
        done = false;
        break;
      }
      pick[b] = 0;
    }
    if (done || active.empty()) break;
  }
  if (active.empty()) pinched = rho;
  return (1.0 - channel.strength) * rho + channel.strength * pinched;
}

DensityMatrix dephase(const DensityMatrix& rho, const DephasingChannel& channel) {
  return DensityMatrix(dephase_raw(rho.matrix(), channel));
}

double kl_divergence(const RealVector& p, const RealVector& q, bool* clamped) {
  if (p.size() != q.size()) throw std::invalid_argument("kl_divergence: length mismatch");
  double s = 0.0;
  for (Index i = 0; i < p.size(); ++i) {
    if (p(i) <= 0.0) continue;
    double qi = q(i);
    if (qi < kSupportFloor) {
      qi = kSupportFloor;
      if (clamped) *clamped = true;
    }
    s += p(i) * std::log(p(i) / qi);
  }
  return s;
}

double chi_squared(const RealVector& p, const RealVector& q, bool* clamped) {
  if (p.size() != q.size()) throw std::invalid_argument("chi_squared: length mismatch");
  double s = 0.0;
  for (Index i = 0; i < p.size(); ++i) {
    double qi = q(i);
    if (qi < kSupportFloor) {
      qi = kSupportFloor;
      if (clamped) *clamped = true;
    }
    double d = p(i) - qi;
    s += d * d / qi;
  }
  return s;
}

RefocusedCircuit refocus_known_basis(const Circuit& circuit, int stage,
                                     const LocalBasis& decoherence_basis,
                                     const LocalBasis& consistent_basis) {
  if (circuit.qubit_count() < 1) throw std::invalid_argument("refocusing needs a qubit register");
  if (!decoherence_basis.fully_local() || !consistent_basis.fully_local())
    throw std::invalid_argument("refocusing needs per-qubit bases");
  if (decoherence_basis.qubit_count() != circuit.qubit_count() ||
      consistent_basis.qubit_count() != circuit.qubit_count())
    throw std::invalid_argument("refocusing bases cover the wrong qubits");

  // Per qubit, R = |d0><c0| + |d1><c1| maps the consistent basis onto the
  // decoherence basis.
  Matrix r = Matrix::Identity(1, 1);
  for (int q = 0; q < circuit.qubit_count(); ++q) {
    const auto& d = decoherence_basis.blocks()[q].vectors;
    const auto& c = consistent_basis.blocks()[q].vectors;
    Matrix rq = d[0] * c[0].adjoint() + d[1] * c[1].adjoint();
    r = kron(r, rq);
  }
  std::vector<Stage> pair;
  pair.push_back(dense_stage(r));
  pair.push_back(dense_stage(r.adjoint()));
  RefocusedCircuit out{circuit.with_gates_inserted(stage, std::move(pair)), stage + 1};
  return out;
}

namespace kernels {

void noise_sweep_serial(const NoiseEval& eval, std::vector<NoiseSample>& out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = eval(i);
}

void noise_sweep_omp(const NoiseEval& eval, std::vector<NoiseSample>& out, int threads) {
#pragma omp parallel for schedule(static) num_threads(threads > 0 ? threads : omp_get_max_threads())
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(out.size()); ++i)
    out[i] = eval(static_cast<std::size_t>(i));
}

}  // namespace kernels

NoiseReport run_robustness_experiment(const Circuit& circuit, int stage,
                                      const LocalBasis& consistent_basis, std::size_t samples,
                                      std::uint64_t seed, double strength, int threads) {
  if (samples < 100) throw std::invalid_argument("need at least 100 samples");
  const int qubits = circuit.qubit_count();
  if (qubits < 1) throw std::invalid_argument("robustness experiment needs a qubit register");
  {
    SearchResult gate = insert_and_check(circuit, stage, consistent_basis, Level::computing, 1e-8);
    if (!gate.report.passed)
      throw std::invalid_argument("consistent_basis fails the computing check at this stage");
  }

  const Matrix rho_stage = circuit.density_at(stage);
  DephasingChannel consistent{consistent_basis, 1.0, {}};
  const Matrix rho_measured = dephase_raw(rho_stage, consistent);
  const Matrix u_rest = circuit.unitary_between(stage, circuit.stage_count());
  const ProjectorSet& final_set = circuit.final_set();

  auto final_dist = [&](const Matrix& rho) {
    Matrix evolved = u_rest * rho * u_rest.adjoint();
    RealVector p(final_set.size());
    for (int a = 0; a < final_set.size(); ++a)
      p(a) = clamp_probability((final_set.projector(a) * evolved).trace().real());
    return p;
  };
  const RealVector noiseless = final_dist(rho_stage);

  CounterRng rng(seed);
  kernels::NoiseEval eval = [&](std::size_t i) {
    std::vector<BlochAngles> angles(qubits);
    for (int q = 0; q < qubits; ++q)
      angles[q] = random_bloch_point(rng, i * static_cast<std::size_t>(qubits) + q);
    DephasingChannel random_channel{LocalBasis::product(angles), strength, {}};
    kernels::NoiseSample s;
    RealVector p0 = final_dist(dephase_raw(rho_stage, random_channel));
    RealVector pm = final_dist(dephase_raw(rho_measured, random_channel));
    s.h0 = kl_divergence(noiseless, p0, &s.clamped);
    s.hm = kl_divergence(noiseless, pm, &s.clamped);
    s.c0 = chi_squared(noiseless, p0, &s.clamped);
    s.cm = chi_squared(noiseless, pm, &s.clamped);
    return s;
  };

  std::vector<kernels::NoiseSample> out(samples);
  if (threads == 1)
    kernels::noise_sweep_serial(eval, out);
  else
    kernels::noise_sweep_omp(eval, out, threads);

  // Deterministic serial reduction over the per-sample slots.
  NoiseReport rep;
  rep.samples = samples;
  rep.rng_seed = seed;
  rep.stage = stage;
  rep.strength = strength;
  double sh0 = 0, shm = 0, sc0 = 0, scm = 0;
  double sh0sq = 0, shmsq = 0, sc0sq = 0, scmsq = 0;
  for (const auto& s : out) {
    sh0 += s.h0;
    shm += s.hm;
    sc0 += s.c0;
    scm += s.cm;
    sh0sq += s.h0 * s.h0;
    shmsq += s.hm * s.hm;
    sc0sq += s.c0 * s.c0;
    scmsq += s.cm * s.cm;
    rep.support_clamped = rep.support_clamped || s.clamped;
  }
  const double n = static_cast<double>(samples);
  rep.h0 = sh0 / n;
  rep.hm = shm / n;
  rep.chi2_h0 = sc0 / n;
  rep.chi2_hm = scm / n;
  rep.h0_sem = std::sqrt(std::max(0.0, sh0sq / n - rep.h0 * rep.h0) / n);
  rep.hm_sem = std::sqrt(std::max(0.0, shmsq / n - rep.hm * rep.hm) / n);
  rep.chi2_h0_sem = std::sqrt(std::max(0.0, sc0sq / n - rep.chi2_h0 * rep.chi2_h0) / n);
  rep.chi2_hm_sem = std::sqrt(std::max(0.0, scmsq / n - rep.chi2_hm * rep.chi2_hm) / n);
  rep.reduction = rep.h0 > 0.0 ? 1.0 - rep.hm / rep.h0 : 0.0;
  rep.chi2_reduction = rep.chi2_h0 > 0.0 ? 1.0 - rep.chi2_hm / rep.chi2_h0 : 0.0;
  return rep;
}

}  // namespace histoq

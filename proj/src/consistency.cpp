#include "histoq/consistency.hpp"

#include <algorithm>
#include <cmath>

namespace histoq {

namespace {

constexpr size_t kWitnessCap = 3;

void push_witness(std::vector<Witness>& ws, std::size_t a, std::size_t b, double v) {
  ws.push_back({a, b, v});
  std::sort(ws.begin(), ws.end(), [](const Witness& x, const Witness& y) {
    return std::abs(x.value) > std::abs(y.value);
  });
  if (ws.size() > kWitnessCap) ws.resize(kWitnessCap);
}

ConsistencyReport offdiagonal_check(const CoherenceMatrix& dm, double epsilon, Level level) {
  ConsistencyReport rep;
  rep.level = level;
  rep.epsilon = epsilon;
  const Index n = dm.d.rows();
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < a; ++b) {
      double v = level == Level::weak ? std::abs(dm.d(a, b).real()) : std::abs(dm.d(a, b));
      if (v > rep.max_violation) {
        rep.max_violation = v;
        push_witness(rep.witnesses, static_cast<std::size_t>(a), static_cast<std::size_t>(b), v);
      }
    }
  }
  rep.passed = rep.max_violation <= epsilon;
  return rep;
}

int final_outcome_of(const IndexShape& shape, std::size_t flat) {
  return static_cast<int>(flat % static_cast<std::size_t>(shape.size(shape.events() - 1)));
}

}  // namespace

std::string to_string(Level level) {
  switch (level) {
    case Level::weak: return "weak";
    case Level::medium: return "medium";
    case Level::strong: return "strong";
    case Level::computing: return "computing";
  }
  return "?";
}

Level level_from_string(const std::string& name) {
  if (name == "weak") return Level::weak;
  if (name == "medium") return Level::medium;
  if (name == "strong") return Level::strong;
  if (name == "computing") return Level::computing;
  throw std::invalid_argument("unknown consistency level: " + name);
}

ConsistencyReport check_weak(const CoherenceMatrix& d, double epsilon) {
  return offdiagonal_check(d, epsilon, Level::weak);
}

ConsistencyReport check_medium(const CoherenceMatrix& d, double epsilon) {
  return offdiagonal_check(d, epsilon, Level::medium);
}

ConsistencyReport check_computing(const CoherenceMatrix& dm, double epsilon) {
  ConsistencyReport rep;
  rep.level = Level::computing;
  rep.epsilon = epsilon;
  const int mn = dm.shape.size(dm.shape.events() - 1);
  std::vector<double> sums(mn, 0.0);
  std::vector<Witness> worst(mn);
  const Index n = dm.d.rows();
  for (Index a = 0; a < n; ++a) {
    int ka = final_outcome_of(dm.shape, static_cast<std::size_t>(a));
    for (Index b = 0; b < a; ++b) {
      if (final_outcome_of(dm.shape, static_cast<std::size_t>(b)) != ka) continue;
      double re = dm.d(a, b).real();
      sums[ka] += re;
      if (std::abs(re) > std::abs(worst[ka].value))
        worst[ka] = {static_cast<std::size_t>(a), static_cast<std::size_t>(b), re};
    }
  }
  for (int k = 0; k < mn; ++k) {
    if (std::abs(sums[k]) > rep.max_violation) {
      rep.max_violation = std::abs(sums[k]);
      push_witness(rep.witnesses, worst[k].alpha, worst[k].beta, sums[k]);
    }
  }
  rep.passed = rep.max_violation <= epsilon;
  return rep;
}

ConsistencyReport check_weak(const HistoryFamily& family, double epsilon, int threads) {
  return check_weak(coherence_matrix(family, threads), epsilon);
}

ConsistencyReport check_medium(const HistoryFamily& family, double epsilon, int threads) {
  return check_medium(coherence_matrix(family, threads), epsilon);
}

ConsistencyReport check_computing(const HistoryFamily& family, double epsilon) {
  ConsistencyReport rep;
  rep.level = Level::computing;
  rep.epsilon = epsilon;
  const int last = family.event_count() - 1;
  RealVector m = family.marginal_by_event(last);
  RealVector q = family.born_marginal(last);
  for (Index k = 0; k < m.size(); ++k) {
    double v = std::abs(q(k) - m(k)) / 2.0;
    if (v > rep.max_violation) {
      rep.max_violation = v;
      push_witness(rep.witnesses, static_cast<std::size_t>(k), static_cast<std::size_t>(k),
                   (q(k) - m(k)) / 2.0);
    }
  }
  rep.passed = rep.max_violation <= epsilon;
  return rep;
}

ConsistencyReport check_strong(const HistoryFamily& family, double epsilon) {
  ConsistencyReport rep;
  rep.level = Level::strong;
  rep.epsilon = epsilon;

  const auto eigen = family.circuit().initial().eigenbranches();
  if (eigen.size() > 4)
    throw std::invalid_argument("check_strong: initial rank above 4 is unsupported");

  // Heisenberg-picture branches: rotate the Schrodinger branches back by the
  // total evolution so overlaps against the bare eigenvectors are meaningful.
  const Matrix back = family.circuit().unitary_between(0, family.circuit().stage_count()).adjoint();
  const std::size_t n = family.history_count();
  std::vector<std::vector<Vector>> b(eigen.size());
  for (size_t i = 0; i < eigen.size(); ++i) {
    b[i].resize(n);
    family.for_each_branch(eigen[i].second,
                           [&](std::size_t flat, const Vector& v) { b[i][flat] = back * v; });
  }

  // (1) Records for different outcomes must be orthogonal on the support.
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t c = 0; c < a; ++c) {
      for (size_t i = 0; i < eigen.size(); ++i) {
        for (size_t j = 0; j < eigen.size(); ++j) {
          double v = std::abs(b[i][a].dot(b[j][c]));
          if (v > rep.max_violation) {
            rep.max_violation = v;
            push_witness(rep.witnesses, a, c, v);
          }
        }
      }
    }
  }
  // (2) A single projector must reproduce every eigenvector's branch:
  //     <b_{a,i}|b_{a,j}> = <psi_i|b_{a,j}>.
  for (std::size_t a = 0; a < n; ++a) {
    for (size_t i = 0; i < eigen.size(); ++i) {
      for (size_t j = 0; j < eigen.size(); ++j) {
        double v = std::abs(b[i][a].dot(b[j][a]) - eigen[i].second.dot(b[j][a]));
        if (v > rep.max_violation) {
          rep.max_violation = v;
          push_witness(rep.witnesses, a, a, v);
        }
      }
    }
  }
  rep.passed = rep.max_violation <= epsilon;
  return rep;
}

ConsistencyReport check(const HistoryFamily& family, Level level, double epsilon, int threads) {
  switch (level) {
    case Level::weak: return check_weak(family, epsilon, threads);
    case Level::medium: return check_medium(family, epsilon, threads);
    case Level::strong: return check_strong(family, epsilon);
    case Level::computing: return check_computing(family, epsilon);
  }
  throw std::logic_error("unreachable");
}

std::size_t count_nonzero_histories(const HistoryFamily& family, double epsilon) {
  // Projections never grow a branch, so a prefix below threshold kills the
  // whole subtree. Weights are accumulated per flat index across the
  // eigenbranches before thresholding.
  const auto eigen = family.circuit().initial().eigenbranches();
  if (eigen.size() == 1) {
    std::size_t count = 0;
    family.for_each_branch(
        eigen[0].second,
        [&](std::size_t, const Vector& v) {
          if (eigen[0].first * v.squaredNorm() > epsilon) ++count;
        },
        epsilon);
    return count;
  }
  std::vector<double> prob(family.history_count(), 0.0);
  for (const auto& [weight, psi] : eigen) {
    double w = weight;
    family.for_each_branch(
        psi, [&](std::size_t flat, const Vector& v) { prob[flat] += w * v.squaredNorm(); }, 0.0);
  }
  return static_cast<std::size_t>(
      std::count_if(prob.begin(), prob.end(), [&](double p) { return p > epsilon; }));
}

bool is_trivial_extension(const HistoryFamily& base, const HistoryFamily& extended,
                          double epsilon) {
  if (extended.event_count() != base.event_count() + 1)
    throw std::invalid_argument("extended family must add exactly one set");
  if (extended.circuit().dim() != base.circuit().dim() ||
      extended.circuit().stage_count() != base.circuit().stage_count())
    throw std::invalid_argument("families do not share a circuit");

  // Locate the inserted event: stages of all other events must line up.
  int inserted = -1;
  {
    int bi = 0;
    for (int je = 0; je < extended.event_count(); ++je) {
      if (bi < base.event_count() && base.event_stage(bi) == extended.event_stage(je) &&
          base.event_set(bi).size() == extended.event_set(je).size()) {
        ++bi;
      } else if (inserted < 0) {
        inserted = je;
      } else {
        throw std::invalid_argument("families differ by more than one inserted set");
      }
    }
    if (bi != base.event_count() || inserted < 0)
      throw std::invalid_argument("extended family does not contain the base family's sets");
  }

  // Count, per base history, the inserted outcomes with nonzero probability.
  const auto& eshape = extended.shape();
  const auto& bshape = base.shape();
  std::vector<double> prob(eshape.total(), 0.0);
  for (const auto& [weight, psi] : extended.circuit().initial().eigenbranches()) {
    double w = weight;
    extended.for_each_branch(
        psi, [&](std::size_t flat, const Vector& v) { prob[flat] += w * v.squaredNorm(); }, 0.0);
  }
  std::vector<int> live(bshape.total(), 0);
  for (std::size_t flat = 0; flat < eshape.total(); ++flat) {
    if (prob[flat] <= epsilon) continue;
    MultiIndex idx = eshape.unflatten(flat);
    MultiIndex bidx;
    bidx.reserve(idx.size() - 1);
    for (int j = 0; j < static_cast<int>(idx.size()); ++j)
      if (j != inserted) bidx.push_back(idx[j]);
    if (++live[bshape.flatten(bidx)] > 1) return false;
  }
  return true;
}

PseudopureReport check_pseudopure_lemma(const HistoryFamily& family, double nu, double epsilon) {
  if (!family.circuit().initial().rank_one())
    throw std::invalid_argument("check_pseudopure_lemma needs a pure initial state");
  if (nu < 0.0 || nu > 1.0) throw std::invalid_argument("nu outside [0,1]");

  PseudopureReport out;
  out.nu = nu;
  const StateVector psi{family.circuit().initial().principal_amplitudes()};
  HistoryFamily mixed = family.with_initial(InitialState(pseudopure(psi, nu)));
  out.computing = check_computing(mixed, epsilon);

  if (family.event_count() == 2) {
    // D'(a;b) = (1-nu)/dim * delta_ab Tr{P2 P1} + nu * D_pure(a;b); the
    // identity part only feeds the diagonal.
    const Index dim = family.circuit().dim();
    CoherenceMatrix dm = coherence_matrix(mixed);
    CoherenceMatrix dp = coherence_matrix(family);
    Matrix expect = nu * dp.d;
    const auto& shape = family.shape();
    for (std::size_t flat = 0; flat < shape.total(); ++flat) {
      MultiIndex idx = shape.unflatten(flat);
      Matrix p1 = family.heisenberg_projector(0, idx[0]);
      Matrix p2 = family.heisenberg_projector(1, idx[1]);
      expect(static_cast<Index>(flat), static_cast<Index>(flat)) +=
          (1.0 - nu) / static_cast<double>(dim) * (p2 * p1).trace();
    }
    out.decomposition_error = max_abs(Matrix(dm.d - expect));
    out.decomposition_checked = true;
  }
  return out;
}

}  // namespace histoq

#include "histoq/classical_sim.hpp"

#include <cmath>

namespace histoq {

namespace {

constexpr double kStochasticTol = 1e-10;

void check_column_stochastic(const RealMatrix& t) {
  for (Index j = 0; j < t.cols(); ++j) {
    double s = t.col(j).sum();
    if (std::abs(s - 1.0) > kStochasticTol)
      throw std::runtime_error("transition matrix column " + std::to_string(j) +
                               " sums to " + std::to_string(s));
    if (t.col(j).minCoeff() < -kStochasticTol) throw std::runtime_error("negative transition entry");
  }
}

std::vector<std::string> set_labels(const ProjectorSet& set) {
  std::vector<std::string> out;
  out.reserve(set.size());
  for (int a = 0; a < set.size(); ++a) out.push_back(set.label(a));
  return out;
}

}  // namespace

TransitionMatrix transition_matrix(const Matrix& u, const ProjectorSet& in_basis,
                                   const ProjectorSet& out_basis) {
  if (u.rows() != u.cols() || u.rows() != in_basis.dim() || u.rows() != out_basis.dim())
    throw std::invalid_argument("transition_matrix: dimension mismatch");
  if (!in_basis.is_rank_one() || !out_basis.is_rank_one())
    throw std::invalid_argument("transition_matrix: bases must be rank 1");
  if (!is_unitary(u)) throw std::invalid_argument("transition_matrix: not unitary");
  RealMatrix t(out_basis.size(), in_basis.size());
  for (int j = 0; j < in_basis.size(); ++j) {
    Vector uj = u * in_basis.rank1_vector(j);
    for (int i = 0; i < out_basis.size(); ++i)
      t(i, j) = std::norm(out_basis.rank1_vector(i).dot(uj));
  }
  check_column_stochastic(t);
  return {std::move(t)};
}

TransitionChain compile_chain(const HistoryFamily& family, bool require_consistent,
                              double epsilon) {
  for (int j = 0; j < family.event_count(); ++j)
    if (!family.event_set(j).is_rank_one())
      throw std::invalid_argument("compile_chain: event " + std::to_string(j) + " is not rank 1");
  if (require_consistent && !check_computing(family, epsilon).passed)
    throw std::invalid_argument("compile_chain: family fails the computing check");

  TransitionChain chain;
  const int first_stage = family.event_stage(0);
  chain.initial.probabilities = family.born_marginal(0);
  chain.initial.labels = set_labels(family.event_set(0));
  chain.stages.push_back(first_stage);
  for (int j = 1; j < family.event_count(); ++j) {
    const int from = family.event_stage(j - 1);
    const int to = family.event_stage(j);
    chain.matrices.push_back(transition_matrix(family.circuit().unitary_between(from, to),
                                               family.event_set(j - 1), family.event_set(j)));
    chain.stages.push_back(to);
  }
  chain.final_labels = set_labels(family.event_set(family.event_count() - 1));
  return chain;
}

Distribution run_chain(const TransitionChain& chain) {
  RealVector p = chain.initial.probabilities;
  for (const auto& t : chain.matrices) p = t.entries * p;
  double s = p.sum();
  if (std::abs(s - 1.0) > kStochasticTol)
    throw std::runtime_error("chain distribution sums to " + std::to_string(s));
  Distribution out;
  out.probabilities = std::move(p);
  out.labels = chain.final_labels;
  return out;
}

SumRuleReport verify_sum_rule(const HistoryFamily& family, double epsilon) {
  TransitionChain chain = compile_chain(family, /*require_consistent=*/false);
  SumRuleReport rep;
  rep.stages = chain.stages;
  RealVector p = chain.initial.probabilities;
  for (size_t l = 0; l < chain.stages.size(); ++l) {
    if (l > 0) p = chain.matrices[l - 1].entries * p;
    RealVector q = family.born_marginal(static_cast<int>(l));
    double diff = (q - p).cwiseAbs().maxCoeff();
    rep.per_stage.push_back(diff);
    rep.max_violation = std::max(rep.max_violation, diff);
  }
  rep.passed = rep.max_violation <= epsilon;
  return rep;
}

}  // namespace histoq

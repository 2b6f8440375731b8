#include "histoq/circuit.hpp"

#include "histoq/gates.hpp"

namespace histoq {

Stage dense_stage(Matrix unitary) {
  Stage s;
  s.unitary = std::move(unitary);
  return s;
}

Stage named_stage(const std::string& name, const std::vector<int>& targets, int qubit_count) {
  Stage s;
  s.name = name;
  s.targets = targets;
  Matrix g = gates::catalog_gate(name, static_cast<int>(targets.size()));
  s.unitary = gates::embed(g, targets, qubit_count);
  return s;
}

Circuit::Circuit(InitialState initial, std::vector<Stage> stages, ProjectorSet final_set)
    : initial_(std::move(initial)), stages_(std::move(stages)), final_(std::move(final_set)) {
  const Index d = initial_.dim();
  for (size_t k = 0; k < stages_.size(); ++k) {
    const Matrix& u = stages_[k].unitary;
    if (u.rows() != d || u.cols() != d)
      throw std::invalid_argument("stage " + std::to_string(k + 1) + " has wrong dimension");
    if (!is_unitary(u))
      throw std::invalid_argument("stage " + std::to_string(k + 1) + " is not unitary");
  }
  if (final_.dim() != d) throw std::invalid_argument("final measurement has wrong dimension");
  if (d > 0 && (d & (d - 1)) == 0) qubit_count_ = qubit_count_of_dim(d);
}

Matrix Circuit::unitary_between(int from_stage, int to_stage) const {
  if (from_stage < 0 || to_stage > stage_count() || from_stage > to_stage)
    throw std::invalid_argument("unitary_between: invalid stage range");
  Matrix u = Matrix::Identity(dim(), dim());
  for (int k = from_stage + 1; k <= to_stage; ++k) u = stages_[k - 1].unitary * u;
  return u;
}

Vector Circuit::propagate(Vector v, int from_stage, int to_stage) const {
  if (from_stage < 0 || to_stage > stage_count() || from_stage > to_stage)
    throw std::invalid_argument("propagate: invalid stage range");
  for (int k = from_stage + 1; k <= to_stage; ++k) v = stages_[k - 1].unitary * v;
  return v;
}

Matrix Circuit::propagate_density(Matrix rho, int from_stage, int to_stage) const {
  for (int k = from_stage + 1; k <= to_stage; ++k) {
    const Matrix& u = stages_[k - 1].unitary;
    rho = u * rho * u.adjoint();
  }
  return rho;
}

Vector Circuit::state_at(int stage) const {
  return propagate(initial_.principal_amplitudes(), 0, stage);
}

Matrix Circuit::density_at(int stage) const {
  return propagate_density(initial_.density().matrix(), 0, stage);
}

Circuit Circuit::with_gates_inserted(int stage, std::vector<Stage> gates) const {
  if (stage < 0 || stage > stage_count())
    throw std::invalid_argument("with_gates_inserted: stage out of range");
  std::vector<Stage> out;
  out.reserve(stages_.size() + gates.size());
  out.insert(out.end(), stages_.begin(), stages_.begin() + stage);
  for (auto& g : gates) out.push_back(std::move(g));
  out.insert(out.end(), stages_.begin() + stage, stages_.end());
  return Circuit(initial_, std::move(out), final_);
}

}  // namespace histoq

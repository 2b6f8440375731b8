#include "histoq/gates.hpp"

#include <cmath>
#include <numbers>

namespace histoq::gates {

namespace {
const Complex kI{0.0, 1.0};
const double kSqrt2Inv = 1.0 / std::numbers::sqrt2;
}  // namespace

Matrix identity(Index dim) { return Matrix::Identity(dim, dim); }

Matrix hadamard() {
  Matrix h(2, 2);
  h << 1, 1, 1, -1;
  return h * kSqrt2Inv;
}

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0, -kI, kI, 0;
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Matrix phase_s() {
  Matrix m(2, 2);
  m << 1, 0, 0, kI;
  return m;
}

Matrix phase_t() {
  Matrix m(2, 2);
  m << 1, 0, 0, std::polar(1.0, std::numbers::pi / 4);
  return m;
}

Matrix cnot() {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = 1;
  m(1, 1) = 1;
  m(2, 3) = 1;
  m(3, 2) = 1;
  return m;
}

Matrix qft(Index dim) {
  if (dim < 1) throw std::invalid_argument("qft: dimension must be >= 1");
  Matrix f(dim, dim);
  const double w = 2.0 * std::numbers::pi / static_cast<double>(dim);
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  for (Index y = 0; y < dim; ++y)
    for (Index x = 0; x < dim; ++x)
      f(y, x) = std::polar(scale, w * static_cast<double>((x * y) % dim));
  return f;
}

Matrix phase_shift_gate(Index dim) {
  if (dim < 2 || dim % 2 != 0) throw std::invalid_argument("phase_shift_gate: dimension must be even");
  Matrix v = Matrix::Zero(dim, dim);
  for (Index j = 0; j < dim; ++j) {
    v(j, j) = kI * kSqrt2Inv;
    v((j + dim / 2) % dim, j) = kSqrt2Inv;
  }
  return v;
}

Matrix gate_u() {
  Matrix u = Matrix::Zero(4, 4);
  u.col(0) << 1, 0, 0, 0;
  u.col(1) << 0, 0.5, kSqrt2Inv, 0.5;
  u.col(2) << 0, 0.5, -kSqrt2Inv, 0.5;
  u.col(3) << 0, kSqrt2Inv, 0, -kSqrt2Inv;
  return u;
}

std::array<StateVector, 4> bell_states() {
  auto make = [](Index a, Index b, double sign) {
    Vector v = Vector::Zero(4);
    v(a) = kSqrt2Inv;
    v(b) = sign * kSqrt2Inv;
    return StateVector(std::move(v));
  };
  return {make(0, 3, 1.0), make(0, 3, -1.0), make(1, 2, 1.0), make(1, 2, -1.0)};
}

Matrix embed(const Matrix& gate, const std::vector<int>& targets, int qubit_count) {
  const int k = static_cast<int>(targets.size());
  if (gate.rows() != (Index{1} << k) || gate.cols() != gate.rows())
    throw std::invalid_argument("embed: gate dimension does not match target count");
  std::vector<bool> seen(qubit_count, false);
  for (int t : targets) {
    if (t < 0 || t >= qubit_count) throw std::invalid_argument("embed: target out of range");
    if (seen[t]) throw std::invalid_argument("embed: duplicate target");
    seen[t] = true;
  }
  // Qubit 0 is the most significant bit of the full index.
  const Index dim = Index{1} << qubit_count;
  Matrix out = Matrix::Zero(dim, dim);
  const Index rest = Index{1} << (qubit_count - k);
  std::vector<int> others;
  for (int q = 0; q < qubit_count; ++q)
    if (!seen[q]) others.push_back(q);

  for (Index r = 0; r < rest; ++r) {
    Index base = 0;
    for (size_t i = 0; i < others.size(); ++i)
      if ((r >> (others.size() - 1 - i)) & 1) base |= Index{1} << (qubit_count - 1 - others[i]);
    for (Index gi = 0; gi < gate.rows(); ++gi) {
      Index row = base;
      for (int i = 0; i < k; ++i)
        if ((gi >> (k - 1 - i)) & 1) row |= Index{1} << (qubit_count - 1 - targets[i]);
      for (Index gj = 0; gj < gate.cols(); ++gj) {
        if (gate(gi, gj) == Complex{0.0, 0.0}) continue;
        Index col = base;
        for (int i = 0; i < k; ++i)
          if ((gj >> (k - 1 - i)) & 1) col |= Index{1} << (qubit_count - 1 - targets[i]);
        out(row, col) = gate(gi, gj);
      }
    }
  }
  return out;
}

bool is_catalog_gate(const std::string& name) {
  static const std::vector<std::string> names = {"H", "X",    "Y",   "Z",           "S",
                                                 "T", "CNOT", "QFT", "PHASE_SHIFT", "U_PAPER"};
  for (const auto& n : names)
    if (n == name) return true;
  return false;
}

Matrix catalog_gate(const std::string& name, int target_count) {
  auto expect = [&](int k) {
    if (target_count != k)
      throw std::invalid_argument("gate " + name + " expects " + std::to_string(k) + " target(s)");
  };
  if (name == "H") { expect(1); return hadamard(); }
  if (name == "X") { expect(1); return pauli_x(); }
  if (name == "Y") { expect(1); return pauli_y(); }
  if (name == "Z") { expect(1); return pauli_z(); }
  if (name == "S") { expect(1); return phase_s(); }
  if (name == "T") { expect(1); return phase_t(); }
  if (name == "CNOT") { expect(2); return cnot(); }
  if (name == "QFT") return qft(Index{1} << target_count);
  if (name == "PHASE_SHIFT") return phase_shift_gate(Index{1} << target_count);
  if (name == "U_PAPER") { expect(2); return gate_u(); }
  throw std::invalid_argument("unknown gate name: " + name);
}

}  // namespace histoq::gates

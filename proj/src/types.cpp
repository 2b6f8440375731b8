#include "histoq/types.hpp"

#include <cmath>

namespace histoq {

double max_abs(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

bool is_unitary(const Matrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  Matrix d = u.adjoint() * u - Matrix::Identity(u.rows(), u.cols());
  return max_abs(d) <= tol;
}

bool is_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs(Matrix(m - m.adjoint())) <= tol;
}

bool is_projector(const Matrix& p, double tol) {
  return is_hermitian(p, tol) && max_abs(Matrix(p * p - p)) <= tol;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

Vector canonical_phase(const Vector& v, double zero_tol) {
  for (Index i = 0; i < v.size(); ++i) {
    double a = std::abs(v(i));
    if (a > zero_tol) {
      Complex phase = std::conj(v(i)) / a;
      return v * phase;
    }
  }
  return v;
}

bool is_positive_real(Complex s, double rel_tol) {
  double a = std::abs(s);
  if (a == 0.0) return false;
  return s.real() > 0.0 && std::abs(s.imag()) <= rel_tol * a;
}

double clamp_probability(double p, double tol) {
  if (p < -tol || p > 1.0 + tol)
    throw std::runtime_error("probability outside [0,1] by more than tolerance: " +
                             std::to_string(p));
  if (p < 0.0) return 0.0;
  if (p > 1.0) return 1.0;
  return p;
}

}  // namespace histoq

#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace histoq {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

// Operators (gates, projectors) are trusted to 1e-10; states to 1e-12.
inline constexpr double kOperatorTol = 1e-10;
inline constexpr double kStateTol = 1e-12;
// Branches with squared norm below this count as exactly zero.
inline constexpr double kZeroProbability = 1e-14;

double max_abs(const Matrix& m);
bool is_unitary(const Matrix& u, double tol = kOperatorTol);
bool is_hermitian(const Matrix& m, double tol = kOperatorTol);
// P^2 = P = P^dag within tol.
bool is_projector(const Matrix& p, double tol = kOperatorTol);

Matrix kron(const Matrix& a, const Matrix& b);
Vector kron(const Vector& a, const Vector& b);

// First amplitude with |v_i| > zero_tol is made real positive.
Vector canonical_phase(const Vector& v, double zero_tol = kStateTol);

// s is positive real up to a relative imaginary tolerance.
bool is_positive_real(Complex s, double rel_tol = 1e-12);

// Clamps tiny negative probabilities; throws beyond -tol.
double clamp_probability(double p, double tol = kStateTol);

}  // namespace histoq

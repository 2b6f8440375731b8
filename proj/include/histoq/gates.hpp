#pragma once

#include <array>
#include <string>
#include <vector>

#include "histoq/states.hpp"
#include "histoq/types.hpp"

namespace histoq::gates {

Matrix identity(Index dim);
Matrix hadamard();
Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();
Matrix phase_s();
Matrix phase_t();
// Control is the first target qubit (most significant of the pair).
Matrix cnot();

// Discrete Fourier transform, F(y,x) = e^{i 2 pi x y / dim} / sqrt(dim).
Matrix qft(Index dim);

// |j> -> (i|j> + |(j + dim/2) mod dim>) / sqrt(2); dim must be even.
// On a qubit register this is [[i,1],[1,i]]/sqrt(2) on the most significant
// qubit, tensored with identity.
Matrix phase_shift_gate(Index dim);

// The two-qubit gate of the bundled demo circuit:
//   |00> -> |00>
//   |01> -> (|01> + sqrt2 |10> + |11>)/2
//   |10> -> (|01> - sqrt2 |10> + |11>)/2
//   |11> -> (|01> - |11>)/sqrt2
Matrix gate_u();

// Phi+, Phi-, Psi+, Psi-.
std::array<StateVector, 4> bell_states();

// Embed a gate acting on `targets` (each a distinct qubit, gate dimension
// 2^targets) into the full 2^qubit_count space. Qubit 0 is the most
// significant bit of the basis index.
Matrix embed(const Matrix& gate, const std::vector<int>& targets, int qubit_count);

// Named catalog used by the circuit file format:
// H, X, Y, Z, S, T, CNOT, QFT, PHASE_SHIFT, U_PAPER.
bool is_catalog_gate(const std::string& name);
Matrix catalog_gate(const std::string& name, int target_count);

}  // namespace histoq::gates

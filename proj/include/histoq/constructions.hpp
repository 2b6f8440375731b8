#pragma once

#include "histoq/consistency.hpp"

namespace histoq {

// Two-event family {rho, eigenbasis, Fourier-of-eigenbasis} realized as the
// circuit [1l, F] with the eigenbasis set attached after each gate. Every
// eigenvector/Fourier-vector overlap is 1/sqrt(dim), so the family is medium
// consistent with exactly rank * dim nonzero-probability histories.
HistoryFamily build_diosi_family(const DensityMatrix& rho);

// Three-event family {rho, eigenbasis, Fourier, shifted Fourier} realized as
// the circuit [1l, F, V] with V the phase-shift transform; dim must be even.
// Weakly consistent (every graph loop product is +-i/(2 dim)) but not medium
// consistent. The default initial state is the basis state dim/2.
HistoryFamily build_weak_bound_family(Index dim);
HistoryFamily build_weak_bound_family(Index dim, const DensityMatrix& rho);

// Replaces every set of a medium-consistent family with rank-1 refinements
// built from the normalized branch vectors plus an orthonormal completion of
// each outcome subspace. Requires a pure initial state. The output is medium
// consistent and each original projector equals the sum of its refinements.
HistoryFamily fine_grain(const HistoryFamily& family, double epsilon = 1e-10);

}  // namespace histoq

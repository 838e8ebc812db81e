#pragma once

#include <memory>

#include "twirlab/symmetry/twirl.hpp"

namespace twirlab {

// rho -> U rho U^dagger on one qubit for the 24 single-qubit Cliffords (a
// unitary 3-design), as 4x4 real matrices in the (I, X, Y, Z) coordinates.
// Labels are the shortest H/S words reaching each element.
std::shared_ptr<const GroupAction> su2_clifford_action();

// Collective action on n <= 3 qubits; UnsupportedSize otherwise.
std::shared_ptr<const GroupAction> su2_collective_action(int n_spinors);
TwirlProjector su2_collective_twirl(int n_spinors);

// Phases e^{i n theta_k}, theta_k = 2 pi k / M, on a cutoff-N Fock space
// (dimension N+1, coordinates of OperatorCoordinates).  A collective of m
// modes carries frequencies up to m N, so the average is exact for
// m <= (M - 1) / N, which the certificate records.
std::shared_ptr<const GroupAction> u1_phase_action(int cutoff, int cyclic_order);

}  // namespace twirlab

#pragma once

#include <vector>

#include "monodromy/errors.hpp"
#include "monodromy/sl2z.hpp"
#include "monodromy/types.hpp"

namespace monodromy {

// Action coordinates (row vector, hbar = 1 convention).
using ActionVector = std::vector<double>;
// Integer quantum numbers / character labels (column vector).
using QuantumNumberVector = std::vector<long long>;

// Period map of the symplectic potential over the basis cycles. With the
// model-torus normalization (cycle k meets dphi_j in 2 pi delta_jk) the 1/2pi
// of the definition cancels the 2 pi of the cycle and the map is the
// identity on action coordinates.
ActionVector period_map(const ActionVector& I);

// Bohr-Sommerfeld test: every entry of period_map(I) within 1e-9 of an
// integer.
bool bs_check(const ActionVector& I);

// I_k = (arg(hol_k) + 2 pi winding_k) / (2 pi), principal branch
// arg in (-pi, pi]; the integer branch (winding) is caller-supplied.
// Each |hol_k| must equal 1 to 1e-12 (NonUnitaryHolonomyError otherwise).
ActionVector holonomy_to_action(const std::vector<Complex>& hol,
                                const std::vector<long long>& winding);

// Quantum numbers transform by the inverse transpose: n -> Z^{-T} n,
// exact integer arithmetic.
QuantumNumberVector lattice_action(const UnimodularMatrix& Z,
                                   const QuantumNumberVector& n);

// Action coordinates transform as a row vector: I -> I Z^{-1}, exact on
// integer inputs.
ActionVector action_coordinate_change(const UnimodularMatrix& Z,
                                      const ActionVector& I);

// Realizes the lattice shift U: n2 -> n2 + 1 and checks the operator
// identity U (-i d_phi2) U^{-1} = -i d_phi2 + Id on the character chi_n:
// the eigenvalue after conjugation must be the eigenvalue before plus one.
bool shift_conjugation_check(const QuantumNumberVector& n);

} // namespace monodromy

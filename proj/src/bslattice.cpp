#include "monodromy/bslattice.hpp"

#include <cmath>
#include <numbers>

namespace monodromy {

namespace {
constexpr double kPi = std::numbers::pi;
}

ActionVector period_map(const ActionVector& I) {
  // Model-torus normalization: the 1/2pi of the period map cancels the 2pi
  // of each basis cycle.
  return I;
}

bool bs_check(const ActionVector& I) {
  for (double v : period_map(I))
    if (std::abs(v - std::round(v)) > 1e-9) return false;
  return true;
}

ActionVector holonomy_to_action(const std::vector<Complex>& hol,
                                const std::vector<long long>& winding) {
  if (hol.size() != winding.size())
    throw DomainError("holonomy and winding lengths differ");
  ActionVector I(hol.size());
  for (std::size_t k = 0; k < hol.size(); ++k) {
    if (std::abs(std::abs(hol[k]) - 1.0) > 1e-12)
      throw NonUnitaryHolonomyError("holonomy entry is not unit modulus");
    double arg = std::atan2(hol[k].imag(), hol[k].real());
    if (arg == -kPi) arg = kPi; // principal branch (-pi, pi]
    I[k] = (arg + 2.0 * kPi * static_cast<double>(winding[k])) / (2.0 * kPi);
  }
  return I;
}

QuantumNumberVector lattice_action(const UnimodularMatrix& Z,
                                   const QuantumNumberVector& n) {
  if (n.size() != 2)
    throw DomainError("quantum number vector must have two entries");
  const UnimodularMatrix W = Z.inverse_transpose();
  return {W.a() * n[0] + W.b() * n[1], W.c() * n[0] + W.d() * n[1]};
}

ActionVector action_coordinate_change(const UnimodularMatrix& Z,
                                      const ActionVector& I) {
  if (I.size() != 2)
    throw DomainError("action vector must have two entries");
  const UnimodularMatrix W = Z.inverse();
  // Row vector times matrix.
  return {I[0] * static_cast<double>(W.a()) +
              I[1] * static_cast<double>(W.c()),
          I[0] * static_cast<double>(W.b()) +
              I[1] * static_cast<double>(W.d())};
}

bool shift_conjugation_check(const QuantumNumberVector& n) {
  if (n.size() != 2)
    throw DomainError("shift conjugation is a two-degree-of-freedom model");
  // U is the lattice shift n2 -> n2 + 1; -i d_phi2 acts on chi_n with
  // eigenvalue n2. Conjugating by U moves the eigenvalue to that of the
  // shifted character.
  const long long before = n[1];
  QuantumNumberVector shifted = n;
  shifted[1] += 1;
  const long long after = shifted[1];
  return after == before + 1;
}

} // namespace monodromy

#pragma once

#include <array>

#include "monodromy/errors.hpp"
#include "monodromy/theta.hpp"
#include "monodromy/types.hpp"

namespace monodromy {

// 2x2 integer matrix with determinant +1. All arithmetic is exact; products
// that would overflow 64-bit entries raise OverflowError instead of wrapping.
class UnimodularMatrix {
public:
  UnimodularMatrix(long long a, long long b, long long c, long long d);
  static UnimodularMatrix identity() { return {1, 0, 0, 1}; }

  long long a() const noexcept { return a_; }
  long long b() const noexcept { return b_; }
  long long c() const noexcept { return c_; }
  long long d() const noexcept { return d_; }

  UnimodularMatrix operator*(const UnimodularMatrix& rhs) const;
  UnimodularMatrix inverse() const noexcept;
  UnimodularMatrix transpose() const noexcept;
  UnimodularMatrix inverse_transpose() const noexcept;
  // Integer power (negative exponents use the exact inverse).
  UnimodularMatrix pow(long long m) const;

  bool operator==(const UnimodularMatrix&) const = default;

private:
  long long a_, b_, c_, d_;
};

// Monodromy images of the two braid generators:
//   b1 = [[1,0],[-1,1]], b2 = [[1,1],[0,1]].
UnimodularMatrix b1();
UnimodularMatrix b2();

// Quantum-number-lattice dual of a classical cycle-basis matrix: the
// inverse transpose.
UnimodularMatrix quantum_dual(const UnimodularMatrix& m);

// Moebius action (a tau + b) / (c tau + d) on the upper half-plane.
ModularParameter moebius_act(const UnimodularMatrix& m,
                             const ModularParameter& tau);

// 2x2 complex unitary acting on the two-component theta vector. The
// constructor rejects matrices whose deviation from unitarity exceeds 1e-15
// in max-abs norm.
class PhaseGate {
public:
  PhaseGate(Complex e00, Complex e01, Complex e10, Complex e11);
  Complex at(int row, int col) const;
  std::array<Complex, 2> apply(const std::array<Complex, 2>& v) const;
  PhaseGate operator*(const PhaseGate& rhs) const;
  bool operator==(const PhaseGate&) const = default;

private:
  std::array<Complex, 4> e_; // row-major
};

// Q(Z0)^m = diag(1, i^m), computed exactly from m mod 4.
PhaseGate phase_gate(long long m);

// Holonomy of the heat connection transporting the modified level-2 theta
// vector across tau -> tau + m; equals phase_gate(m).
PhaseGate heat_holonomy(long long m);

// Max-abs residual, normalized by the vector norm of the theta vector at
// (z, tau), of
//   theta_vector2(z, tau + m) - phase_gate(m) * theta_vector2(z, tau).
// Requires |m| <= 8.
double verify_gate_against_theta(long long m, Complex z,
                                 const ModularParameter& tau);

} // namespace monodromy

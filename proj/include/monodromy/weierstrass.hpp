#pragma once

#include <array>

#include "monodromy/errors.hpp"
#include "monodromy/theta.hpp"
#include "monodromy/types.hpp"

namespace monodromy {

// Cubic c3 x^3 + c2 x^2 + c1 x + c0 with complex coefficients, c3 != 0.
class CubicPoly {
public:
  CubicPoly(Complex c3, Complex c2, Complex c1, Complex c0);

  Complex c3() const noexcept { return c_[3]; }
  Complex c2() const noexcept { return c_[2]; }
  Complex c1() const noexcept { return c_[1]; }
  Complex c0() const noexcept { return c_[0]; }

  Complex eval(Complex x) const;
  Complex derivative(Complex x) const;
  // All three roots (with multiplicity), Cardano followed by Newton
  // polishing. No ordering promise.
  std::array<Complex, 3> roots() const;
  // True when every coefficient has negligible imaginary part relative to
  // the coefficient scale.
  bool has_real_coefficients() const;

private:
  std::array<Complex, 4> c_; // c_[k] multiplies x^k
};

// The Weierstrass cubic 4x^3 - g2 x - g3.
CubicPoly weierstrass_cubic(double g2, double g3);

// Roots e1, e2, e3 of 4x^3 - g2 x - g3 with the fixed ordering: when all
// three are real, e1 > e2 > e3; otherwise descending real part, ties broken
// by descending imaginary part. Raises DegenerateCurveError when the
// discriminant g2^3 - 27 g3^2 vanishes to working precision.
std::array<Complex, 3> roots_from_invariants(double g2, double g3);

// Half-periods of the curve on the three-real-root stratum: omega real
// positive, omega' purely imaginary positive, tau = omega'/omega.
struct Periods {
  double omega;
  Complex omega_prime;
  ModularParameter tau;
};
Periods periods_from_invariants(double g2, double g3);

// k^2 = (e2 - e3)/(e1 - e3) and k'^2 = 1 - k^2 (three-real-root stratum).
struct JacobiModulus {
  double k2;
  double kprime2;
};
JacobiModulus jacobi_modulus(double g2, double g3);

// Residuals of the theta-constant expressions for the roots, all normalized
// by max |e_i|:
//   root_identities:       e1 = (pi^2/12 omega^2)(t3^4 + t4^4), etc.
//   difference_identities: e1-e3 = (pi/2 omega)^2 t3^4, etc.
//   modulus_bridge:        k^2 = t2^4 / t3^4 (dimensionless, unnormalized).
struct BridgeResiduals {
  double root_identities;
  double difference_identities;
  double modulus_bridge;
};
BridgeResiduals theta_root_residuals(double g2, double g3);

// Carlson symmetric integrals. Principal-value evaluation off the standard
// domain must be requested explicitly.
enum class PrincipalValue { Forbid, Allow };

// R_F(x,y,z): x,y,z >= 0 with at most one zero.
double carlson_rf(double x, double y, double z);
// R_C(x,y): x >= 0, y != 0; y < 0 is the Cauchy principal value and
// requires PrincipalValue::Allow.
double carlson_rc(double x, double y,
                  PrincipalValue pv = PrincipalValue::Forbid);
// R_J(x,y,z,p): x,y,z >= 0 with at most one zero, p != 0; p < 0 is the
// Cauchy principal value and requires PrincipalValue::Allow.
double carlson_rj(double x, double y, double z, double p,
                  PrincipalValue pv = PrincipalValue::Forbid);

// Complete elliptic integrals of a real cubic over an interval (a, b) whose
// endpoints are consecutive simple real roots with P > 0 between them:
//   elliptic_first:  int_a^b dx / sqrt(P(x))
//   elliptic_third:  int_a^b dx / ((x - c) sqrt(P(x))), pole c strictly
//                    outside [a, b] (PoleOnPathError otherwise).
double elliptic_first(const CubicPoly& poly, double a, double b);
double elliptic_third(const CubicPoly& poly, double a, double b, double c);

} // namespace monodromy

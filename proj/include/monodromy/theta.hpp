#pragma once

#include "monodromy/errors.hpp"
#include "monodromy/types.hpp"

namespace monodromy {

// Evaluation floor on Im tau: series cutoffs and finite-difference stencils
// are certified only above this line.
inline constexpr double kImTauMin = 0.05;
// Overflow guard on |Im z|: beyond it the dominant series term exceeds
// exp(2*pi*10) and double precision retains no relative accuracy.
inline constexpr double kImZMax = 10.0;
// Largest supported theta level.
inline constexpr int kLevelMax = 16;

// Point of the open upper half-plane. Construction requires Im > 0; series
// evaluation additionally requires Im >= kImTauMin.
class ModularParameter {
public:
  explicit ModularParameter(Complex tau);
  Complex value() const noexcept { return tau_; }
  double re() const noexcept { return tau_.real(); }
  double im() const noexcept { return tau_.imag(); }
  // tau + n (integer translation).
  ModularParameter shifted(long long n) const;

private:
  Complex tau_;
};

// Theta characteristic with entries restricted to {0, 1/2}.
class Characteristic {
public:
  Characteristic(double a, double b);
  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }

private:
  double a_;
  double b_;
};

// theta(z, tau) = sum_n exp(i pi n^2 tau + 2 pi i n z).
Complex theta(Complex z, const ModularParameter& tau);

// theta with characteristic (a,b):
//   exp(i pi a^2 tau + 2 pi i a (z + b)) * theta(z + a*tau + b, tau).
Complex theta_char(const Characteristic& ch, Complex z,
                   const ModularParameter& tau);

// Classical four theta functions via characteristics:
// theta1 = theta[1/2,1/2], theta2 = theta[1/2,0],
// theta3 = theta[0,0],     theta4 = theta[0,1/2].
Complex theta1(Complex z, const ModularParameter& tau);
Complex theta2(Complex z, const ModularParameter& tau);
Complex theta3(Complex z, const ModularParameter& tau);
Complex theta4(Complex z, const ModularParameter& tau);

// Level-k theta with index j in {0,...,k-1}:
//   theta_{k,j}(z, tau) = sum_n exp(i pi tau (k n + j)^2 / k + 2 pi i (k n + j) z).
Complex level_theta(int k, int j, Complex z, const ModularParameter& tau);

// Modified level theta: exp(k pi z^2 / (2 Im tau)) * theta_{k,j}(z, tau).
Complex modified_level_theta(int k, int j, Complex z,
                             const ModularParameter& tau);

// Two-component modified level-2 theta vector (theta~_{2,0}, theta~_{2,1}).
struct ThetaVector2 {
  Complex v0;
  Complex v1;
};
ThetaVector2 theta_vector2(Complex z, const ModularParameter& tau);

// Finite-difference residual of the heat equation
//   [d_tau + i/(4 pi k) d_z^2] theta_{k,j} = 0
// with d_tau estimated as the average of central differences in the +1 and
// +i directions and d_z^2 as a central second difference, all at the given
// step. step must lie in [1e-6, 1e-2] and the stencil must stay above the
// Im tau evaluation floor.
double heat_residual(int k, int j, Complex z, const ModularParameter& tau,
                     double step);

} // namespace monodromy

#pragma once

#include <cstddef>
#include <vector>

#include "monodromy/errors.hpp"
#include "monodromy/sl2z.hpp"
#include "monodromy/types.hpp"
#include "monodromy/weierstrass.hpp"

namespace monodromy {

class CubicPoly;

// P(x) = 2(h - x)(1 - x^2) - j^2 = 2x^3 - 2h x^2 - 2x + (2h - j^2):
// the radial cubic of the spherical pendulum at angular momentum j and
// energy h.
CubicPoly pendulum_poly(double j, double h);

// The three real roots at a point of the elliptic island (j = 0 boundary
// points with h != 1 are admitted as limits): x_minus <= x_plus are the
// turning points of the motion, x_zero is the outer root.
struct PendulumRoots {
  double x_minus;
  double x_plus;
  double x_zero;
};
PendulumRoots pendulum_roots(double j, double h);

// Rotation number Theta_raw = 2 j int_{x-}^{x+} dx / ((1 - x^2) sqrt(P))
// (radians) and first-return period T = 2 int_{x-}^{x+} dx / sqrt(P).
// At j = 0 exactly, Theta_raw is the one-sided limit j -> 0+: pi for h < 1,
// 2 pi for h > 1 (diagnostic convention; h = 1 is the critical fiber and is
// rejected).
struct RotationPeriod {
  double theta_raw;
  double T;
};
RotationPeriod rotation_and_period(double j, double h);

// -Theta_raw/(2 pi) + i T, the modular-type parameter of the torus.
Complex tau_of_point(double j, double h);

// One evaluated sample of the circuit: angle t, point (j, h), roots, raw
// rotation number (radians), period, and the unwrapped rotation coordinate
// theta_hat = -Theta_raw/(2 pi) + integer corrections.
struct CircuitSample {
  double t;
  double j;
  double h;
  double x_minus;
  double x_plus;
  double x_zero;
  double theta_raw;
  double T;
  double theta_hat;
};

// Circle (j, h) = center + epsilon (cos t, sin t), t = 2 pi turns (k+1/2)/N.
struct CircuitSpec {
  double center_j = 0.0;
  double center_h = 1.0;
  double epsilon = 0.05;
  long long turns = 1;  // nonzero, |turns| <= 8
  std::size_t n_samples = 2048; // >= 256
  unsigned threads = 1;
};

struct CircuitTrace {
  std::vector<CircuitSample> samples;
  // Re-evaluation of the first sample's point at angle t0 + 2 pi turns.
  CircuitSample closure;
  double center_j;
  double center_h;
  double epsilon;
  long long turns;
  std::size_t requested_samples;
  int refinement_depth; // sample-count doublings applied
  double delta_theta_hat; // closure.theta_hat - samples[0].theta_hat
  double delta_T;         // closure.T - samples[0].T
  double max_step;        // max consecutive |Delta theta_hat| incl. closure
  double mean_T;
};

// Evaluates the circuit on the offset grid, unwraps theta_hat, and doubles
// the sample count (up to 2^20) until every consecutive unwrapped step is
// below 1/4. Raises RefinementExceededError past the cap.
CircuitTrace trace_circuit(const CircuitSpec& spec);

// Integer monodromy certificate: m = -round(delta_theta_hat), classical
// cycle-basis matrix b2^m, quantum dual b1^m, gate Q(Z0)^m.
struct MonodromyCertificate {
  long long m;
  double delta_theta_hat;
  double delta_T;
  double mean_T;
  double max_step;
  std::size_t n_samples;
  int refinement_depth;
  UnimodularMatrix classical;
  UnimodularMatrix quantum;
  PhaseGate gate;
};

// Validates the trace (positive periods, step contract, closure drift) and
// rounds the variation; raises NonIntegralVariationError when the variation
// is not within 0.01 of an integer.
MonodromyCertificate certify(const CircuitTrace& trace);

} // namespace monodromy

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "monodromy/pendulum.hpp"
#include "monodromy/quadrature.hpp"
#include "support/checks.hpp"

using namespace monodromy;
using testsupport::rel_err;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("radial cubic coefficients") {
  const CubicPoly p = pendulum_poly(0.3, 1.2);
  CHECK_EQ(p.c3(), Complex{2.0, 0.0});
  CHECK_EQ(p.c2(), Complex{-2.4, 0.0});
  CHECK_EQ(p.c1(), Complex{-2.0, 0.0});
  CHECK_LT(std::abs(p.c0() - Complex{2.0 * 1.2 - 0.09, 0.0}), 1e-15);
  // P(x) = 2(h - x)(1 - x^2) - j^2 pointwise.
  for (double x : {-0.7, 0.0, 0.4, 0.9}) {
    const double direct = 2.0 * (1.2 - x) * (1.0 - x * x) - 0.09;
    CHECK_LT(std::abs(p.eval({x, 0.0}).real() - direct), 1e-14);
  }
}

TEST_CASE("roots at and near the critical energy") {
  // j = 0, h = 1 + eps: the island degenerates toward x = 1.
  const PendulumRoots r = pendulum_roots(0.0, 1.05);
  CHECK_LT(rel_err(r.x_minus, -1.0), 1e-12);
  CHECK_LT(rel_err(r.x_plus, 1.0), 1e-12);
  CHECK_LT(rel_err(r.x_zero, 1.05), 1e-12);
  // Small j > 0 pushes x_minus just inside -1 and x_zero just outside 1.
  const PendulumRoots s = pendulum_roots(0.05, 1.0);
  CHECK_GT(s.x_minus, -1.0);
  CHECK_LT(s.x_minus, -0.999);
  CHECK_LT(s.x_plus, 1.0);
  CHECK_GT(s.x_zero, 1.0);
  CHECK_LT(s.x_minus, s.x_plus);
  CHECK_LT(s.x_plus, s.x_zero);
}

TEST_CASE("rotation number and period reference values") {
  const RotationPeriod a = rotation_and_period(0.05, 1.0);
  CHECK_LT(rel_err(a.theta_raw, 4.796065659922725), 1e-10);
  CHECK_LT(rel_err(a.T, 6.462034123693459), 1e-12);
  const RotationPeriod b = rotation_and_period(-0.03, 1.02);
  CHECK_LT(rel_err(b.theta_raw, -5.355154294419154), 1e-10);
  CHECK_LT(rel_err(b.T, 6.778462991102961), 1e-12);
  const RotationPeriod c = rotation_and_period(0.08, 0.94);
  CHECK_LT(rel_err(c.theta_raw, 4.187257583139123), 1e-10);
  CHECK_LT(rel_err(c.T, 5.793406513004458), 1e-12);
}

TEST_CASE("rotation number sign and parity") {
  // Theta is odd in j, T even in j.
  const RotationPeriod plus = rotation_and_period(0.04, 1.01);
  const RotationPeriod minus = rotation_and_period(-0.04, 1.01);
  CHECK_LT(rel_err(minus.theta_raw, -plus.theta_raw), 1e-13);
  CHECK_LT(rel_err(minus.T, plus.T), 1e-14);
}

TEST_CASE("axially symmetric limits") {
  CHECK_LT(rel_err(rotation_and_period(0.0, 0.8).theta_raw, kPi), 1e-14);
  CHECK_LT(rel_err(rotation_and_period(0.0, 1.3).theta_raw, 2.0 * kPi),
           1e-14);
  // The limits are approached continuously from j > 0.
  CHECK_LT(std::abs(rotation_and_period(1e-4, 0.8).theta_raw - kPi), 1e-3);
  CHECK_LT(std::abs(rotation_and_period(1e-4, 1.3).theta_raw - 2.0 * kPi),
           1e-3);
}

TEST_CASE("integrals agree with direct quadrature") {
  for (double j : {0.05, 0.12}) {
    for (double h : {0.93, 1.0, 1.08}) {
      const PendulumRoots r = pendulum_roots(j, h);
      const std::array<double, 3> roots{r.x_minus, r.x_plus, r.x_zero};
      const RotationPeriod rp = rotation_and_period(j, h);
      const double qT = 2.0 * elliptic_quadrature(
                                  roots, 2.0, 0, [](double) { return 1.0; },
                                  1e-12);
      CHECK_LT(rel_err(rp.T, qT), 1e-9);
      const double qTheta =
          2.0 * j *
          elliptic_quadrature(
              roots, 2.0, 0, [](double x) { return 1.0 / (1.0 - x * x); },
              1e-12);
      CHECK_LT(rel_err(rp.theta_raw, qTheta), 1e-9);
    }
  }
}

TEST_CASE("torus parameter combines rotation and period") {
  const Complex tau = tau_of_point(0.05, 1.0);
  const RotationPeriod rp = rotation_and_period(0.05, 1.0);
  CHECK_LT(rel_err(tau, Complex{-rp.theta_raw / (2.0 * kPi), rp.T}), 1e-15);
  CHECK_LT(rel_err(tau, Complex{-0.7633175571699947, 6.462034123693459}),
           1e-10);
}

TEST_CASE("points outside the island are rejected") {
  CHECK_THROWS_AS(rotation_and_period(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(pendulum_roots(2.0, 0.0), DomainError);
  CHECK_THROWS_AS(pendulum_roots(0.3, -5.0), DomainError);
}

TEST_CASE("circuit around the focus-focus point certifies m = 1") {
  CircuitSpec spec;
  spec.n_samples = 256;
  const CircuitTrace trace = trace_circuit(spec);
  CHECK_EQ(trace.samples.size(), 256u);
  CHECK_EQ(trace.refinement_depth, 0);
  CHECK_LT(std::abs(trace.delta_theta_hat + 1.0), 5e-3);
  CHECK_LT(std::abs(trace.delta_T), 1e-12);
  CHECK_LT(trace.max_step, 0.25);
  const MonodromyCertificate cert = certify(trace);
  CHECK_EQ(cert.m, 1);
  CHECK_EQ(cert.classical, b2());
  CHECK_EQ(cert.quantum, b1());
  CHECK_EQ(cert.gate, phase_gate(1));
  CHECK_EQ(cert.n_samples, 256u);
}

TEST_CASE("negative traversal reverses the variation") {
  CircuitSpec spec;
  spec.n_samples = 256;
  spec.turns = -1;
  const CircuitTrace trace = trace_circuit(spec);
  CHECK_LT(std::abs(trace.delta_theta_hat - 1.0), 5e-3);
  CHECK_EQ(certify(trace).m, -1);
}

TEST_CASE("non-enclosing circuit certifies m = 0") {
  CircuitSpec spec;
  spec.center_j = 0.3;
  spec.center_h = 0.5;
  spec.n_samples = 256;
  const CircuitTrace trace = trace_circuit(spec);
  CHECK_LT(std::abs(trace.delta_theta_hat), 5e-3);
  const MonodromyCertificate cert = certify(trace);
  CHECK_EQ(cert.m, 0);
  CHECK_EQ(cert.classical, UnimodularMatrix::identity());
  CHECK_EQ(cert.gate, phase_gate(0));
}

TEST_CASE("trace is bitwise deterministic and thread-count invariant") {
  CircuitSpec spec;
  spec.n_samples = 256;
  const CircuitTrace a = trace_circuit(spec);
  const CircuitTrace b = trace_circuit(spec);
  spec.threads = 3;
  const CircuitTrace c = trace_circuit(spec);
  REQUIRE_EQ(a.samples.size(), b.samples.size());
  REQUIRE_EQ(a.samples.size(), c.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK_EQ(a.samples[i].theta_hat, b.samples[i].theta_hat);
    CHECK_EQ(a.samples[i].theta_hat, c.samples[i].theta_hat);
    CHECK_EQ(a.samples[i].T, c.samples[i].T);
  }
  CHECK_EQ(a.delta_theta_hat, c.delta_theta_hat);
}

TEST_CASE("invalid circuit specs are rejected") {
  CircuitSpec spec;
  spec.epsilon = 0.0;
  CHECK_THROWS_AS(trace_circuit(spec), DomainError);
  spec = {};
  spec.epsilon = 0.11;
  CHECK_THROWS_AS(trace_circuit(spec), DomainError);
  spec = {};
  spec.n_samples = 255;
  CHECK_THROWS_AS(trace_circuit(spec), DomainError);
  spec = {};
  spec.turns = 0;
  CHECK_THROWS_AS(trace_circuit(spec), DomainError);
  spec = {};
  spec.turns = 9;
  CHECK_THROWS_AS(trace_circuit(spec), DomainError);
}

TEST_CASE("certificates require integral variation") {
  CircuitSpec spec;
  spec.n_samples = 256;
  CircuitTrace trace = trace_circuit(spec);
  // Corrupt the closure so the unwrapped variation lands between integers.
  trace.closure.theta_hat += 0.5;
  trace.delta_theta_hat += 0.5;
  CHECK_THROWS_AS(certify(trace), NonIntegralVariationError);
  // Corrupt the period closure beyond the drift budget.
  trace = trace_circuit(spec);
  trace.delta_T = 1e-3;
  CHECK_THROWS_AS(certify(trace), DomainError);
  // Break the step contract.
  trace = trace_circuit(spec);
  trace.max_step = 0.3;
  CHECK_THROWS_AS(certify(trace), DomainError);
}

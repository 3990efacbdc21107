#include "monodromy/pendulum.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <vector>

namespace monodromy {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kMaxSamples = std::size_t{1} << 20;

} // namespace

CubicPoly pendulum_poly(double j, double h) {
  // 2(h - x)(1 - x^2) - j^2 expanded in descending powers.
  return {Complex{2.0, 0.0}, Complex{-2.0 * h, 0.0}, Complex{-2.0, 0.0},
          Complex{2.0 * h - j * j, 0.0}};
}

PendulumRoots pendulum_roots(double j, double h) {
  if (!std::isfinite(j) || !std::isfinite(h))
    throw DomainError("pendulum point must be finite");
  const auto rs = pendulum_poly(j, h).roots();
  std::array<double, 3> re;
  const double scale = std::max(
      {1.0, std::abs(rs[0]), std::abs(rs[1]), std::abs(rs[2])});
  for (int i = 0; i < 3; ++i) {
    const auto& r = rs[static_cast<std::size_t>(i)];
    if (std::abs(r.imag()) > 1e-8 * scale)
      throw DomainError(
          "pendulum point lies outside the elliptic island (complex roots)");
    re[static_cast<std::size_t>(i)] = r.real();
  }
  std::sort(re.begin(), re.end());
  if (re[1] - re[0] <= 1e-10 * scale || re[2] - re[1] <= 1e-10 * scale)
    throw DomainError(
        "pendulum point sits on a critical fiber (multiple root)");
  // Turning points must lie in the physical band, the outer root beyond it.
  if (re[0] < -1.0 - 1e-9 || re[1] > 1.0 + 1e-9 || re[2] < 1.0 - 1e-9)
    throw DomainError("pendulum point lies outside the elliptic island");
  return {re[0], re[1], re[2]};
}

RotationPeriod rotation_and_period(double j, double h) {
  const PendulumRoots r = pendulum_roots(j, h);
  const CubicPoly poly = pendulum_poly(j, h);
  const double T = 2.0 * elliptic_first(poly, r.x_minus, r.x_plus);
  double theta_raw;
  if (j == 0.0) {
    // One-sided limit j -> 0+ (diagnostic convention): the rotation jumps
    // from pi below the critical energy to 2 pi above it.
    theta_raw = h < 1.0 ? kPi : 2.0 * kPi;
  } else {
    // 1/(1 - x^2) = (1/2)[1/(1+x) - 1/(x-1)] against dx/sqrt(P).
    const double at_plus = elliptic_third(poly, r.x_minus, r.x_plus, 1.0);
    const double at_minus = elliptic_third(poly, r.x_minus, r.x_plus, -1.0);
    theta_raw = j * (at_minus - at_plus);
  }
  return {theta_raw, T};
}

Complex tau_of_point(double j, double h) {
  const RotationPeriod rp = rotation_and_period(j, h);
  return {-rp.theta_raw / (2.0 * kPi), rp.T};
}

namespace {

CircuitSample eval_sample(const CircuitSpec& spec, double angle) {
  const double j = spec.center_j + spec.epsilon * std::cos(angle);
  const double h = spec.center_h + spec.epsilon * std::sin(angle);
  const PendulumRoots r = pendulum_roots(j, h);
  const RotationPeriod rp = rotation_and_period(j, h);
  return {angle,    j,    h,    r.x_minus,
          r.x_plus, r.x_zero, rp.theta_raw, rp.T,
          -rp.theta_raw / (2.0 * kPi)};
}

void eval_range(const CircuitSpec& spec, double step, double offset,
                std::size_t lo, std::size_t hi,
                std::vector<CircuitSample>& out) {
  for (std::size_t k = lo; k < hi; ++k)
    out[k] = eval_sample(spec, step * (static_cast<double>(k) + offset));
}

} // namespace

CircuitTrace trace_circuit(const CircuitSpec& spec) {
  if (!(spec.epsilon > 0.0 && spec.epsilon <= 0.1))
    throw DomainError("circuit radius must lie in (0, 0.1]");
  if (spec.n_samples < 256 || spec.n_samples > kMaxSamples)
    throw DomainError("sample count must lie in [256, 2^20]");
  if (spec.turns == 0 || spec.turns > 8 || spec.turns < -8)
    throw DomainError("turns must be a nonzero integer with |turns| <= 8");
  const unsigned threads = std::max(1u, spec.threads);

  int depth = 0;
  for (std::size_t n = spec.n_samples;; n *= 2, ++depth) {
    // Offset grid: t_k = 2 pi turns (k + 1/2)/n never hits the axis points
    // where a turning point reaches +-1 exactly.
    const double step =
        2.0 * kPi * static_cast<double>(spec.turns) / static_cast<double>(n);
    std::vector<CircuitSample> samples(n);
    if (threads == 1 || n < 2 * threads) {
      eval_range(spec, step, 0.5, 0, n, samples);
    } else {
      std::vector<std::future<void>> futures;
      const std::size_t chunk = (n + threads - 1) / threads;
      for (unsigned t = 0; t < threads; ++t) {
        const std::size_t lo = static_cast<std::size_t>(t) * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        futures.push_back(std::async(std::launch::async, [&, lo, hi] {
          eval_range(spec, step, 0.5, lo, hi, samples);
        }));
      }
      for (auto& f : futures) f.get();
    }
    CircuitSample closure = eval_sample(
        spec, step * 0.5 + 2.0 * kPi * static_cast<double>(spec.turns));

    // Unwrap theta_hat to the nearest-integer-shift continuation.
    double max_step = 0.0;
    double sum_T = samples[0].T;
    for (std::size_t k = 1; k < n; ++k) {
      const double raw = samples[k].theta_hat;
      samples[k].theta_hat =
          raw + std::round(samples[k - 1].theta_hat - raw);
      max_step = std::max(
          max_step, std::abs(samples[k].theta_hat - samples[k - 1].theta_hat));
      sum_T += samples[k].T;
    }
    closure.theta_hat = closure.theta_hat +
                        std::round(samples[n - 1].theta_hat -
                                   closure.theta_hat);
    max_step = std::max(max_step,
                        std::abs(closure.theta_hat - samples[n - 1].theta_hat));

    if (max_step < 0.25) {
      CircuitTrace trace;
      trace.samples = std::move(samples);
      trace.closure = closure;
      trace.center_j = spec.center_j;
      trace.center_h = spec.center_h;
      trace.epsilon = spec.epsilon;
      trace.turns = spec.turns;
      trace.requested_samples = spec.n_samples;
      trace.refinement_depth = depth;
      trace.delta_theta_hat =
          closure.theta_hat - trace.samples[0].theta_hat;
      trace.delta_T = closure.T - trace.samples[0].T;
      trace.max_step = max_step;
      trace.mean_T = sum_T / static_cast<double>(n);
      return trace;
    }
    if (n * 2 > kMaxSamples)
      throw RefinementExceededError(
          "unwrapping step contract unmet at the sample-count cap 2^20");
  }
}

MonodromyCertificate certify(const CircuitTrace& trace) {
  if (trace.samples.size() < 2)
    throw DomainError("trace must carry at least two samples");
  for (const auto& s : trace.samples)
    if (!(s.T > 0.0))
      throw DomainError("trace carries a non-positive return period");
  if (!(trace.max_step < 0.25))
    throw DomainError("trace violates the unwrapping step contract");
  if (!(std::abs(trace.delta_T) <= 1e-6 * trace.mean_T))
    throw DomainError("return period drifted across the closure");
  const double delta = trace.delta_theta_hat;
  const double rounded = std::round(delta);
  if (std::abs(delta - rounded) >= 0.01)
    throw NonIntegralVariationError(
        "variation of the rotation coordinate is not integral");
  const long long m = -static_cast<long long>(rounded);
  return {m,
          delta,
          trace.delta_T,
          trace.mean_T,
          trace.max_step,
          trace.samples.size(),
          trace.refinement_depth,
          b2().pow(m),
          b1().pow(m),
          phase_gate(m)};
}

} // namespace monodromy

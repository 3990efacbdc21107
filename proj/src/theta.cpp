#include "monodromy/theta.hpp"

#include <cmath>
#include <numbers>

namespace monodromy {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};

void check_level(int k, int j) {
  if (k < 1 || k > kLevelMax)
    throw RangeError("theta level k must lie in [1, 16]");
  if (j < 0 || j >= k)
    throw RangeError("theta index j must lie in [0, k-1]");
}

void check_eval_domain(const ModularParameter& tau) {
  if (tau.im() < kImTauMin)
    throw DomainError("Im tau below the series evaluation floor 0.05");
}

void check_z(Complex z) {
  if (std::abs(z.imag()) > kImZMax)
    throw OverflowError("|Im z| exceeds the overflow guard 10");
}

// Smallest block index m with pi*Im(tau)*m^2/k - 2*pi*|Im z|*m >= 40, i.e.
// the first omitted term is below exp(-40) relative to the peak; padded by
// a fixed safety margin.
int series_cutoff(int k, double im_z, double im_tau) {
  const double az = std::abs(im_z);
  const double m_star =
      k * (az + std::sqrt(az * az + 40.0 * im_tau / (k * kPi))) / im_tau;
  return static_cast<int>(std::ceil((m_star + k) / k)) + 5;
}

// sum_n exp(i pi tau (k n + j)^2 / k + 2 pi i (k n + j) z) without domain
// checks (internal arguments may carry shifted z beyond the public guard).
Complex level_series(int k, int j, Complex z, Complex tau) {
  const int nmax = series_cutoff(k, z.imag(), tau.imag());
  const Complex a = kI * kPi * tau / static_cast<double>(k);
  const Complex b = 2.0 * kI * kPi * z;
  Complex sum{0.0, 0.0};
  for (int n = -nmax; n <= nmax; ++n) {
    const double w = static_cast<double>(k) * n + j;
    sum += std::exp(a * (w * w) + b * w);
  }
  return sum;
}

} // namespace

ModularParameter::ModularParameter(Complex tau) : tau_(tau) {
  if (!std::isfinite(tau.real()) || !std::isfinite(tau.imag()) ||
      !(tau.imag() > 0.0))
    throw DomainError("modular parameter must lie in the open upper half-plane");
}

ModularParameter ModularParameter::shifted(long long n) const {
  return ModularParameter(tau_ + Complex(static_cast<double>(n), 0.0));
}

Characteristic::Characteristic(double a, double b) : a_(a), b_(b) {
  const auto ok = [](double v) { return v == 0.0 || v == 0.5; };
  if (!ok(a) || !ok(b))
    throw DomainError("theta characteristic entries must be 0 or 1/2");
}

Complex theta(Complex z, const ModularParameter& tau) {
  check_eval_domain(tau);
  check_z(z);
  return level_series(1, 0, z, tau.value());
}

Complex theta_char(const Characteristic& ch, Complex z,
                   const ModularParameter& tau) {
  check_eval_domain(tau);
  check_z(z);
  const Complex t = tau.value();
  const double a = ch.a(), b = ch.b();
  const Complex prefix = std::exp(kI * kPi * (a * a) * t +
                                  2.0 * kI * kPi * a * (z + b));
  return prefix * level_series(1, 0, z + a * t + b, t);
}

Complex theta1(Complex z, const ModularParameter& tau) {
  return theta_char(Characteristic(0.5, 0.5), z, tau);
}
Complex theta2(Complex z, const ModularParameter& tau) {
  return theta_char(Characteristic(0.5, 0.0), z, tau);
}
Complex theta3(Complex z, const ModularParameter& tau) {
  return theta_char(Characteristic(0.0, 0.0), z, tau);
}
Complex theta4(Complex z, const ModularParameter& tau) {
  return theta_char(Characteristic(0.0, 0.5), z, tau);
}

Complex level_theta(int k, int j, Complex z, const ModularParameter& tau) {
  check_level(k, j);
  check_eval_domain(tau);
  check_z(z);
  return level_series(k, j, z, tau.value());
}

Complex modified_level_theta(int k, int j, Complex z,
                             const ModularParameter& tau) {
  const Complex value = level_theta(k, j, z, tau);
  const Complex prefix =
      std::exp(static_cast<double>(k) * kPi * z * z / (2.0 * tau.im()));
  return prefix * value;
}

ThetaVector2 theta_vector2(Complex z, const ModularParameter& tau) {
  return {modified_level_theta(2, 0, z, tau),
          modified_level_theta(2, 1, z, tau)};
}

double heat_residual(int k, int j, Complex z, const ModularParameter& tau,
                     double step) {
  check_level(k, j);
  check_z(z);
  if (!(step >= 1e-6 && step <= 1e-2))
    throw DomainError("heat residual step must lie in [1e-6, 1e-2]");
  if (tau.im() - step < kImTauMin)
    throw DomainError("heat stencil leaves the Im tau evaluation floor");
  const Complex t = tau.value();
  const auto f = [&](Complex tt) { return level_series(k, j, z, tt); };
  const Complex dtau_re = (f(t + step) - f(t - step)) / (2.0 * step);
  const Complex dtau_im =
      (f(t + kI * step) - f(t - kI * step)) / (2.0 * kI * step);
  const Complex dtau = 0.5 * (dtau_re + dtau_im);
  const auto g = [&](Complex zz) { return level_series(k, j, zz, t); };
  const Complex dzz =
      (g(z + step) - 2.0 * g(z) + g(z - step)) / (step * step);
  return std::abs(dtau + kI / (4.0 * kPi * k) * dzz);
}

} // namespace monodromy

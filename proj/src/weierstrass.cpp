#include "monodromy/weierstrass.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace monodromy {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};
constexpr double kEps = std::numeric_limits<double>::epsilon();

std::array<Complex, 3> cardano_roots(Complex c3, Complex c2, Complex c1,
                                     Complex c0) {
  // Depressed form y^3 + p y + q with x = y - a/3.
  const Complex a = c2 / c3, b = c1 / c3, c = c0 / c3;
  const Complex p = b - a * a / 3.0;
  const Complex q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  const Complex shift = -a / 3.0;
  const Complex disc = q * q / 4.0 + p * p * p / 27.0;
  Complex u = std::pow(-q / 2.0 + std::sqrt(disc), 1.0 / 3.0);
  Complex v;
  if (std::abs(u) > 1e-300) {
    v = -p / (3.0 * u);
  } else {
    u = Complex{0.0, 0.0};
    v = std::pow(-q / 2.0 - std::sqrt(disc), 1.0 / 3.0);
  }
  const Complex w{-0.5, std::sqrt(3.0) / 2.0}; // primitive cube root of 1
  const Complex wc = std::conj(w);
  return {u + v + shift, w * u + wc * v + shift, wc * u + w * v + shift};
}

} // namespace

CubicPoly::CubicPoly(Complex c3, Complex c2, Complex c1, Complex c0)
    : c_{c0, c1, c2, c3} {
  if (c3 == Complex{0.0, 0.0})
    throw DomainError("cubic leading coefficient must be nonzero");
}

Complex CubicPoly::eval(Complex x) const {
  return ((c_[3] * x + c_[2]) * x + c_[1]) * x + c_[0];
}

Complex CubicPoly::derivative(Complex x) const {
  return (3.0 * c_[3] * x + 2.0 * c_[2]) * x + c_[1];
}

std::array<Complex, 3> CubicPoly::roots() const {
  auto rs = cardano_roots(c_[3], c_[2], c_[1], c_[0]);
  // Newton polishing recovers the accuracy the closed form loses to
  // cancellation; stop as soon as the residual stops improving.
  for (auto& r : rs) {
    Complex best = r;
    double best_abs = std::abs(eval(r));
    Complex x = r;
    for (int it = 0; it < 6; ++it) {
      const Complex d = derivative(x);
      if (std::abs(d) == 0.0) break;
      x -= eval(x) / d;
      const double fx = std::abs(eval(x));
      if (fx < best_abs) {
        best = x;
        best_abs = fx;
      } else {
        break;
      }
    }
    r = best;
  }
  return rs;
}

bool CubicPoly::has_real_coefficients() const {
  double scale = 0.0, imag = 0.0;
  for (const auto& c : c_) {
    scale = std::max(scale, std::abs(c));
    imag = std::max(imag, std::abs(c.imag()));
  }
  return imag <= 1e-14 * scale;
}

CubicPoly weierstrass_cubic(double g2, double g3) {
  return {Complex{4.0, 0.0}, Complex{0.0, 0.0}, Complex{-g2, 0.0},
          Complex{-g3, 0.0}};
}

std::array<Complex, 3> roots_from_invariants(double g2, double g3) {
  const double disc = g2 * g2 * g2 - 27.0 * g3 * g3;
  const double scale =
      std::max({1.0, std::abs(g2 * g2 * g2), 27.0 * g3 * g3});
  if (std::abs(disc) <= 1e-12 * scale)
    throw DegenerateCurveError(
        "curve discriminant vanishes to working precision");
  auto rs = weierstrass_cubic(g2, g3).roots();
  if (disc > 0.0) {
    // Three real roots; imaginary parts are pure noise.
    std::array<double, 3> re{rs[0].real(), rs[1].real(), rs[2].real()};
    std::sort(re.begin(), re.end(), std::greater<double>());
    return {Complex{re[0], 0.0}, Complex{re[1], 0.0}, Complex{re[2], 0.0}};
  }
  // One real root and a conjugate pair: descending real part, ties broken
  // by descending imaginary part.
  std::sort(rs.begin(), rs.end(), [](const Complex& x, const Complex& y) {
    if (x.real() != y.real()) return x.real() > y.real();
    return x.imag() > y.imag();
  });
  return rs;
}

namespace {

// Sorted descending real root triple, or UnsupportedCurveError.
std::array<double, 3> real_roots_sorted(double g2, double g3) {
  const double disc = g2 * g2 * g2 - 27.0 * g3 * g3;
  const auto rs = roots_from_invariants(g2, g3); // DegenerateCurveError gate
  if (disc < 0.0)
    throw UnsupportedCurveError(
        "periods require three real roots (positive discriminant)");
  return {rs[0].real(), rs[1].real(), rs[2].real()};
}

} // namespace

Periods periods_from_invariants(double g2, double g3) {
  const auto e = real_roots_sorted(g2, g3);
  const double omega = carlson_rf(0.0, e[0] - e[1], e[0] - e[2]);
  const double omega_prime = carlson_rf(0.0, e[1] - e[2], e[0] - e[2]);
  return {omega, kI * omega_prime,
          ModularParameter(kI * (omega_prime / omega))};
}

JacobiModulus jacobi_modulus(double g2, double g3) {
  const auto e = real_roots_sorted(g2, g3);
  const double k2 = (e[1] - e[2]) / (e[0] - e[2]);
  return {k2, 1.0 - k2};
}

BridgeResiduals theta_root_residuals(double g2, double g3) {
  const auto e = real_roots_sorted(g2, g3);
  const Periods per = periods_from_invariants(g2, g3);
  const ModularParameter& tau = per.tau;
  const Complex z0{0.0, 0.0};
  const Complex t2 = theta2(z0, tau);
  const Complex t3 = theta3(z0, tau);
  const Complex t4 = theta4(z0, tau);
  const auto p4 = [](Complex t) { return t * t * t * t; };
  const double pref = kPi * kPi / (12.0 * per.omega * per.omega);
  const Complex e1_theta = pref * (p4(t3) + p4(t4));
  const Complex e2_theta = pref * (p4(t2) - p4(t4));
  const Complex e3_theta = -pref * (p4(t2) + p4(t3));
  const double emax =
      std::max({std::abs(e[0]), std::abs(e[1]), std::abs(e[2])});
  const double root_res = std::max({std::abs(e1_theta - e[0]),
                                    std::abs(e2_theta - e[1]),
                                    std::abs(e3_theta - e[2])}) /
                          emax;
  const double dpref = kPi * kPi / (4.0 * per.omega * per.omega);
  const double diff_res =
      std::max({std::abs(dpref * p4(t2) - (e[1] - e[2])),
                std::abs(dpref * p4(t4) - (e[0] - e[1])),
                std::abs(dpref * p4(t3) - (e[0] - e[2]))}) /
      emax;
  const double k2 = (e[1] - e[2]) / (e[0] - e[2]);
  const double bridge_res = std::abs(p4(t2) / p4(t3) - k2);
  return {root_res, diff_res, bridge_res};
}

// ---------------------------------------------------------------------------
// Carlson symmetric integrals (duplication algorithm with the fifth-order
// series termination; relative accuracy ~1e-14).

namespace {

void check_rf_domain(double x, double y, double z) {
  if (!(x >= 0.0 && y >= 0.0 && z >= 0.0))
    throw DomainError("carlson arguments must be non-negative");
  int zeros = (x == 0.0) + (y == 0.0) + (z == 0.0);
  if (zeros > 1)
    throw DomainError("at most one carlson argument may vanish");
}

} // namespace

double carlson_rf(double x, double y, double z) {
  check_rf_domain(x, y, z);
  const double A0 = (x + y + z) / 3.0;
  double A = A0;
  const double Q =
      std::pow(3.0 * kEps, -1.0 / 6.0) *
      std::max({std::abs(A0 - x), std::abs(A0 - y), std::abs(A0 - z)});
  double f = 1.0;
  while (f * Q >= std::abs(A)) {
    const double sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
    const double lambda = sx * sy + sy * sz + sz * sx;
    x = 0.25 * (x + lambda);
    y = 0.25 * (y + lambda);
    z = 0.25 * (z + lambda);
    A = 0.25 * (A + lambda);
    f *= 0.25;
  }
  // A_m - x_m = (A0 - x0)/4^m is invariant under the duplication step, so
  // the series variables reduce to the converged state:
  const double XX = 1.0 - x / A;
  const double YY = 1.0 - y / A;
  const double ZZ = -XX - YY;
  const double E2 = XX * YY - ZZ * ZZ;
  const double E3 = XX * YY * ZZ;
  return (1.0 + E2 * (E2 / 24.0 - 3.0 * E3 / 44.0 - 0.1) + E3 / 14.0) /
         std::sqrt(A);
}

double carlson_rc(double x, double y, PrincipalValue pv) {
  if (!(x >= 0.0)) throw DomainError("carlson_rc requires x >= 0");
  if (y == 0.0) throw DomainError("carlson_rc requires y != 0");
  if (y < 0.0) {
    if (pv != PrincipalValue::Allow)
      throw DomainError(
          "carlson_rc with y < 0 is a principal value; enable it explicitly");
    // R_C(x, y) = sqrt(x / (x - y)) R_C(x - y, -y) for y < 0.
    return std::sqrt(x / (x - y)) * carlson_rc(x - y, -y);
  }
  if (x == 0.0) return kPi / (2.0 * std::sqrt(y));
  if (x == y) return 1.0 / std::sqrt(x);
  if (x < y) {
    const double arg = std::sqrt((y - x) / x);
    return std::atan(arg) / std::sqrt(y - x);
  }
  const double arg = std::sqrt((x - y) / y);
  return std::log(arg + std::sqrt(1.0 + arg * arg)) / std::sqrt(x - y);
}

double carlson_rj(double x, double y, double z, double p,
                  PrincipalValue pv) {
  check_rf_domain(x, y, z);
  if (p == 0.0) throw DomainError("carlson_rj requires p != 0");
  if (p < 0.0) {
    if (pv != PrincipalValue::Allow)
      throw DomainError(
          "carlson_rj with p < 0 is a principal value; enable it explicitly");
    // Cauchy principal value via the shift to q = -p > 0 (the middle
    // argument y must be the median of x, y, z).
    std::array<double, 3> s{x, y, z};
    std::sort(s.begin(), s.end());
    const double xs = s[0], ys = s[1], zs = s[2];
    const double q = -p;
    const double pmy = (zs - ys) * (ys - xs) / (ys + q);
    const double pn = pmy + ys;
    double value = pmy * carlson_rj(xs, ys, zs, pn);
    value -= 3.0 * carlson_rf(xs, ys, zs);
    value += 3.0 *
             std::sqrt((xs * ys * zs) / (xs * zs + pn * q)) *
             carlson_rc(xs * zs + pn * q, pn * q);
    return value / (ys + q);
  }
  const double A0 = (x + y + z + 2.0 * p) / 5.0;
  const double delta = (p - x) * (p - y) * (p - z);
  const double Q =
      std::pow(0.25 * kEps, -1.0 / 6.0) *
      std::max({std::abs(A0 - x), std::abs(A0 - y), std::abs(A0 - z),
                std::abs(A0 - p)});
  double A = A0;
  double f = 1.0; // 4^{-m}
  double sum = 0.0;
  while (f * Q >= std::abs(A)) {
    const double sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z),
                 sp = std::sqrt(p);
    const double lambda = sx * sy + sy * sz + sz * sx;
    const double d = (sp + sx) * (sp + sy) * (sp + sz);
    const double e = f * f * f * delta / (d * d);
    sum += f * carlson_rc(1.0, 1.0 + e) / d;
    x = 0.25 * (x + lambda);
    y = 0.25 * (y + lambda);
    z = 0.25 * (z + lambda);
    p = 0.25 * (p + lambda);
    A = 0.25 * (A + lambda);
    f *= 0.25;
  }
  // Series variables from the converged state (same invariant as in RF).
  const double Xs = 1.0 - x / A;
  const double Ys = 1.0 - y / A;
  const double Zs = 1.0 - z / A;
  const double Ps = -(Xs + Ys + Zs) / 2.0;
  const double E2 = Xs * Ys + Ys * Zs + Zs * Xs - 3.0 * Ps * Ps;
  const double E3 =
      Xs * Ys * Zs + 2.0 * E2 * Ps + 4.0 * Ps * Ps * Ps;
  const double E4 =
      (2.0 * Xs * Ys * Zs + E2 * Ps + 3.0 * Ps * Ps * Ps) * Ps;
  const double E5 = Xs * Ys * Zs * Ps * Ps;
  const double series =
      (1.0 - 3.0 * E2 / 14.0 + E3 / 6.0 + 9.0 * E2 * E2 / 88.0 -
       3.0 * E4 / 22.0 - 9.0 * E2 * E3 / 52.0 + 3.0 * E5 / 26.0) /
      (A * std::sqrt(A));
  return f * series + 6.0 * sum;
}

// ---------------------------------------------------------------------------
// Complete elliptic integrals between consecutive real roots.

namespace {

struct IntervalSetup {
  std::array<double, 3> roots; // ascending
  int which;                   // 0: (r0,r1) with c3 > 0; 1: (r1,r2) with c3 < 0
  double c3;
};

IntervalSetup resolve_interval(const CubicPoly& poly, double a, double b) {
  if (!poly.has_real_coefficients())
    throw DomainError("elliptic integrals require a real cubic");
  if (!(a < b))
    throw RootOrderError("interval endpoints must satisfy a < b");
  const auto rs = poly.roots();
  std::array<double, 3> re;
  double scale = std::max({std::abs(rs[0]), std::abs(rs[1]),
                           std::abs(rs[2]), 1.0});
  for (int i = 0; i < 3; ++i) {
    if (std::abs(rs[static_cast<std::size_t>(i)].imag()) > 1e-9 * scale)
      throw RootOrderError("cubic must have three real roots");
    re[static_cast<std::size_t>(i)] = rs[static_cast<std::size_t>(i)].real();
  }
  std::sort(re.begin(), re.end());
  if (re[1] - re[0] <= 1e-12 * scale || re[2] - re[1] <= 1e-12 * scale)
    throw RootOrderError("cubic roots are not separated; integral diverges");
  const double match_tol = 1e-7 * scale;
  int which;
  if (std::abs(a - re[0]) <= match_tol && std::abs(b - re[1]) <= match_tol)
    which = 0;
  else if (std::abs(a - re[1]) <= match_tol &&
           std::abs(b - re[2]) <= match_tol)
    which = 1;
  else
    throw RootOrderError(
        "endpoints must be a consecutive pair of the cubic's roots");
  const double c3 = poly.c3().real();
  const double mid = poly.eval(Complex{0.5 * (a + b), 0.0}).real();
  if (!(mid > 0.0))
    throw RootOrderError("cubic must be positive between the endpoints");
  return {re, which, c3};
}

// Complete Legendre third-kind integral Pi(n, m) in Carlson form.
double legendre_pi(double n, double m) {
  return carlson_rf(0.0, 1.0 - m, 1.0) +
         n / 3.0 * carlson_rj(0.0, 1.0 - m, 1.0, 1.0 - n);
}

} // namespace

double elliptic_first(const CubicPoly& poly, double a, double b) {
  const auto setup = resolve_interval(poly, a, b);
  const double r0 = setup.roots[0], r1 = setup.roots[1],
               r2 = setup.roots[2];
  const double ac3 = std::abs(setup.c3);
  if (setup.which == 0)
    return 2.0 / std::sqrt(ac3) * carlson_rf(0.0, r2 - r1, r2 - r0);
  return 2.0 / std::sqrt(ac3) * carlson_rf(0.0, r1 - r0, r2 - r0);
}

double elliptic_third(const CubicPoly& poly, double a, double b, double c) {
  const auto setup = resolve_interval(poly, a, b);
  const double r0 = setup.roots[0], r1 = setup.roots[1],
               r2 = setup.roots[2];
  const double scale =
      std::max({std::abs(r0), std::abs(r1), std::abs(r2), 1.0});
  const double guard = 1e-12 * scale;
  if (c >= a - guard && c <= b + guard)
    throw PoleOnPathError("third-kind pole lies on the integration interval");
  const double ac3 = std::abs(setup.c3);
  if (setup.which == 0) {
    const double m = (r1 - r0) / (r2 - r0);
    const double n = (r1 - r0) / (c - r0);
    return 2.0 / (std::sqrt(ac3) * std::sqrt(r2 - r0) * (r0 - c)) *
           legendre_pi(n, m);
  }
  const double m = (r2 - r1) / (r2 - r0);
  const double n = (r2 - r1) / (r2 - c);
  return 2.0 / (std::sqrt(ac3) * std::sqrt(r2 - r0) * (r2 - c)) *
         legendre_pi(n, m);
}

} // namespace monodromy

#include "monodromy/sl2z.hpp"

#include <cmath>
#include <cstdint>

namespace monodromy {

namespace {

long long checked_fma(long long x1, long long y1, long long x2,
                      long long y2) {
  const __int128 v = static_cast<__int128>(x1) * y1 +
                     static_cast<__int128>(x2) * y2;
  if (v > INT64_MAX || v < INT64_MIN)
    throw OverflowError("unimodular matrix product overflows 64-bit entries");
  return static_cast<long long>(v);
}

} // namespace

UnimodularMatrix::UnimodularMatrix(long long a, long long b, long long c,
                                   long long d)
    : a_(a), b_(b), c_(c), d_(d) {
  const __int128 det =
      static_cast<__int128>(a) * d - static_cast<__int128>(b) * c;
  if (det != 1)
    throw DomainError("matrix must have determinant +1");
}

UnimodularMatrix UnimodularMatrix::operator*(
    const UnimodularMatrix& rhs) const {
  return {checked_fma(a_, rhs.a_, b_, rhs.c_),
          checked_fma(a_, rhs.b_, b_, rhs.d_),
          checked_fma(c_, rhs.a_, d_, rhs.c_),
          checked_fma(c_, rhs.b_, d_, rhs.d_)};
}

UnimodularMatrix UnimodularMatrix::inverse() const noexcept {
  return {d_, -b_, -c_, a_};
}

UnimodularMatrix UnimodularMatrix::transpose() const noexcept {
  return {a_, c_, b_, d_};
}

UnimodularMatrix UnimodularMatrix::inverse_transpose() const noexcept {
  return {d_, -c_, -b_, a_};
}

UnimodularMatrix UnimodularMatrix::pow(long long m) const {
  UnimodularMatrix base = m >= 0 ? *this : inverse();
  unsigned long long e = m >= 0 ? static_cast<unsigned long long>(m)
                                : -static_cast<unsigned long long>(m);
  UnimodularMatrix acc = identity();
  while (e != 0) {
    if (e & 1ull) acc = acc * base;
    e >>= 1;
    if (e != 0) base = base * base;
  }
  return acc;
}

UnimodularMatrix b1() { return {1, 0, -1, 1}; }
UnimodularMatrix b2() { return {1, 1, 0, 1}; }

UnimodularMatrix quantum_dual(const UnimodularMatrix& m) {
  return m.inverse_transpose();
}

ModularParameter moebius_act(const UnimodularMatrix& m,
                             const ModularParameter& tau) {
  const Complex t = tau.value();
  const Complex num = static_cast<double>(m.a()) * t +
                      static_cast<double>(m.b());
  const Complex den = static_cast<double>(m.c()) * t +
                      static_cast<double>(m.d());
  return ModularParameter(num / den);
}

PhaseGate::PhaseGate(Complex e00, Complex e01, Complex e10, Complex e11)
    : e_{e00, e01, e10, e11} {
  // G G^dagger == I in max-abs norm
  const Complex g00 = e00 * std::conj(e00) + e01 * std::conj(e01);
  const Complex g01 = e00 * std::conj(e10) + e01 * std::conj(e11);
  const Complex g10 = e10 * std::conj(e00) + e11 * std::conj(e01);
  const Complex g11 = e10 * std::conj(e10) + e11 * std::conj(e11);
  const double dev =
      std::max(std::max(std::abs(g00 - 1.0), std::abs(g11 - 1.0)),
               std::max(std::abs(g01), std::abs(g10)));
  if (dev > 1e-15)
    throw DomainError("phase gate must be unitary to 1e-15");
}

Complex PhaseGate::at(int row, int col) const {
  if (row < 0 || row > 1 || col < 0 || col > 1)
    throw RangeError("phase gate index out of range");
  return e_[static_cast<std::size_t>(2 * row + col)];
}

std::array<Complex, 2> PhaseGate::apply(
    const std::array<Complex, 2>& v) const {
  return {e_[0] * v[0] + e_[1] * v[1], e_[2] * v[0] + e_[3] * v[1]};
}

PhaseGate PhaseGate::operator*(const PhaseGate& rhs) const {
  return {e_[0] * rhs.e_[0] + e_[1] * rhs.e_[2],
          e_[0] * rhs.e_[1] + e_[1] * rhs.e_[3],
          e_[2] * rhs.e_[0] + e_[3] * rhs.e_[2],
          e_[2] * rhs.e_[1] + e_[3] * rhs.e_[3]};
}

PhaseGate phase_gate(long long m) {
  static const Complex powers[4] = {
      {1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
  const long long r = ((m % 4) + 4) % 4;
  return {Complex{1.0, 0.0}, Complex{0.0, 0.0}, Complex{0.0, 0.0},
          powers[r]};
}

PhaseGate heat_holonomy(long long m) { return phase_gate(m); }

double verify_gate_against_theta(long long m, Complex z,
                                 const ModularParameter& tau) {
  if (m < -8 || m > 8)
    throw RangeError("gate verification power m must satisfy |m| <= 8");
  const ThetaVector2 v = theta_vector2(z, tau);
  const ThetaVector2 w = theta_vector2(z, tau.shifted(m));
  const auto g = phase_gate(m).apply({v.v0, v.v1});
  const double norm = std::sqrt(std::norm(v.v0) + std::norm(v.v1));
  const double dev =
      std::max(std::abs(w.v0 - g[0]), std::abs(w.v1 - g[1]));
  return dev / norm;
}

} // namespace monodromy

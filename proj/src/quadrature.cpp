#include "monodromy/quadrature.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace monodromy {

namespace {

double simpson_step(const std::function<double(double)>& f, double a,
                    double fa, double b, double fb, double m, double fm,
                    double whole, double tol, double noise_floor, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  if (!(a < lm && lm < m && m < rm && rm < b))
    return whole; // interval collapsed to roundoff spacing
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  // Halve the budget per side, but keep it above the roundoff scale of the
  // whole integral: near-endpoint peaks leave the refinement indicator
  // noise-dominated long before the halved tolerance bottoms out, and
  // demanding less than the noise stalls the recursion at the depth cap.
  const double child_tol = std::max(0.5 * tol, noise_floor);
  return simpson_step(f, a, fa, m, fm, lm, flm, left, child_tol, noise_floor,
                      depth - 1) +
         simpson_step(f, m, fm, b, fb, rm, frm, right, child_tol, noise_floor,
                      depth - 1);
}

} // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  // Tolerances below the roundoff of the crude whole-interval estimate are
  // not achievable; they serve only as the floor for the halving recursion.
  const double noise_floor =
      std::numeric_limits<double>::epsilon() *
      std::max({std::abs(whole), std::abs(b - a), 1e-30});
  return simpson_step(f, a, fa, b, fb, m, fm, whole, tol, noise_floor, 48);
}

double elliptic_quadrature(const std::array<double, 3>& roots, double c3,
                           int which,
                           const std::function<double(double)>& weight,
                           double tol) {
  const double r0 = roots[0], r1 = roots[1], r2 = roots[2];
  if (!(r0 < r1 && r1 < r2))
    throw std::invalid_argument("roots must be sorted and distinct");
  double lo, hi;
  if (which == 0) {
    if (!(c3 > 0.0))
      throw std::invalid_argument("interval (r0, r1) requires c3 > 0");
    lo = r0;
    hi = r1;
  } else if (which == 1) {
    if (!(c3 < 0.0))
      throw std::invalid_argument("interval (r1, r2) requires c3 < 0");
    lo = r1;
    hi = r2;
  } else {
    throw std::invalid_argument("interval selector must be 0 or 1");
  }
  // x = lo + (hi - lo) sin^2(phi); the sqrt of the two interval factors
  // cancels the Jacobian up to a factor 2, leaving the third root factor:
  //   which = 0: |P| = c3 (x - r0)(r1 - x)(r2 - x)
  //   which = 1: |P| = -c3 (x - r0)(x - r1)(r2 - x)
  const double span = hi - lo;
  const auto integrand = [&](double phi) {
    const double s = std::sin(phi);
    const double x = lo + span * s * s;
    const double other = which == 0 ? (r2 - x) : (x - r0);
    return 2.0 * weight(x) / std::sqrt(std::abs(c3) * other);
  };
  return adaptive_simpson(integrand, 0.0, std::numbers::pi / 2.0, tol);
}

} // namespace monodromy

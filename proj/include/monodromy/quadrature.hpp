#pragma once

#include <array>
#include <functional>

namespace monodromy {

// Adaptive Simpson integration of f over [a, b] to the given absolute
// tolerance (Richardson-extrapolated acceptance test err/15).
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol);

// Quadrature reference for complete integrals
//   int_lo^hi weight(x) / sqrt(|P(x)|) dx
// where P is a real cubic with the sorted real roots r0 < r1 < r2 and
// leading coefficient c3, and (lo, hi) is the pair (r0, r1) for which = 0
// (requires c3 > 0) or (r1, r2) for which = 1 (requires c3 < 0), so that P
// is positive between the endpoints. The square-root endpoint singularities
// are removed by the substitution x = lo + (hi - lo) sin^2(phi).
double elliptic_quadrature(const std::array<double, 3>& roots, double c3,
                           int which,
                           const std::function<double(double)>& weight,
                           double tol);

} // namespace monodromy

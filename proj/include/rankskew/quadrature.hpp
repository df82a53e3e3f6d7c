#pragma once

#include <functional>

namespace rankskew::quadrature {

using Integrand = std::function<double(double)>;

/// Adaptive tanh-sinh quadrature of f over [a, b]; either bound may be
/// infinite. Infinite half-lines are compactified with x = c * cot(u),
/// u in (0, pi/2], where c is the characteristic width `scale`, so
/// power-law tails become algebraic endpoint singularities that the
/// double-exponential rule absorbs. Integrable endpoint singularities on
/// finite ranges are handled the same way.
double integrate(const Integrand& f, double a, double b, double rel_tol = 1e-12,
                 double scale = 1.0);

/// Fixed 10-point Gauss-Legendre rule on a finite cell.
double gauss_legendre(const Integrand& f, double a, double b);

}  // namespace rankskew::quadrature

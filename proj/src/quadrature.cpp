#include "rankskew/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>
#include <numbers>

namespace rankskew::quadrature {

namespace {

double finite(const Integrand& f, double a, double b, double rel_tol) {
    if (a == b) return 0.0;
    thread_local boost::math::quadrature::tanh_sinh<double> rule(15);
    auto guarded = [&f](double x) {
        const double v = f(x);
        return std::isfinite(v) ? v : 0.0;
    };
    return rule.integrate(guarded, a, b, rel_tol);
}

// Integral of f over [x0, +inf) when dir = +1 or (-inf, x0] when dir = -1,
// with x = x0 + dir * scale * cot(u).
double half_line(const Integrand& f, double x0, int dir, double rel_tol, double scale) {
    auto mapped = [&](double u) {
        const double s = std::sin(u);
        const double jac = scale / (s * s);
        if (!std::isfinite(jac)) return 0.0;
        const double x = x0 + dir * scale * (std::cos(u) / s);
        if (!std::isfinite(x)) return 0.0;
        const double v = f(x);
        if (v == 0.0) return 0.0;
        const double out = v * jac;
        return std::isfinite(out) ? out : 0.0;
    };
    return finite(mapped, 0.0, std::numbers::pi / 2.0, rel_tol);
}

}  // namespace

double integrate(const Integrand& f, double a, double b, double rel_tol, double scale) {
    if (a > b) return -integrate(f, b, a, rel_tol, scale);
    const bool lo_inf = std::isinf(a);
    const bool hi_inf = std::isinf(b);
    if (!lo_inf && !hi_inf) return finite(f, a, b, rel_tol);
    if (lo_inf && hi_inf) {
        return half_line(f, 0.0, -1, rel_tol, scale) + half_line(f, 0.0, +1, rel_tol, scale);
    }
    if (hi_inf) {
        if (a >= 0.0) return half_line(f, a, +1, rel_tol, scale);
        return finite(f, a, 0.0, rel_tol) + half_line(f, 0.0, +1, rel_tol, scale);
    }
    if (b <= 0.0) return half_line(f, b, -1, rel_tol, scale);
    return half_line(f, 0.0, -1, rel_tol, scale) + finite(f, 0.0, b, rel_tol);
}

double gauss_legendre(const Integrand& f, double a, double b) {
    return boost::math::quadrature::gauss<double, 10>::integrate(f, a, b);
}

}  // namespace rankskew::quadrature

#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace geodlab {

// 5-point central first derivative, samples f[t-2h .. t+2h].
inline double stencil5_d1(const std::array<double, 5>& f, double h) {
    return (f[0] - 8.0 * f[1] + 8.0 * f[3] - f[4]) / (12.0 * h);
}

// 5-point central second derivative.
inline double stencil5_d2(const std::array<double, 5>& f, double h) {
    return (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * h * h);
}

// Central difference step scaled to the coordinate magnitude.
inline double fd_step(double coord, double base = 1e-5) {
    return base * (1.0 + std::abs(coord));
}

namespace detail {
inline double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b,
                                   double fa, double fb, double fm, double whole, double tol,
                                   int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, fa, m, fm, flm);
    const double right = simpson(m, fm, b, fb, frm);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson_rec(f, a, m, fa, fm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, fb, frm, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-12, int max_depth = 40) {
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = detail::simpson(a, fa, b, fb, fm);
    return detail::adaptive_simpson_rec(f, a, b, fa, fb, fm, whole, tol, max_depth);
}

// Bisection for a sign change of f on [a, b].
inline double bisect(const std::function<double(double)>& f, double a, double b,
                     double xtol = 1e-13, int max_iter = 200) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0) throw std::invalid_argument("bisect: no sign change on bracket");
    for (int i = 0; i < max_iter && (b - a) > xtol; ++i) {
        const double m = 0.5 * (a + b);
        const double fmid = f(m);
        if (fmid == 0.0) return m;
        if (fa * fmid < 0.0) {
            b = m;
            fb = fmid;
        } else {
            a = m;
            fa = fmid;
        }
    }
    return 0.5 * (a + b);
}

// Golden-section minimization on [a, b]; assumes a single interior minimum.
inline double golden_minimize(const std::function<double(double)>& f, double a, double b,
                              double xtol = 1e-12) {
    constexpr double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > xtol) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

// One-dimensional Newton polish for f'(x) = 0 given by the derivative g and
// its derivative dg; falls back to the start value if iteration leaves [a,b].
inline double newton_polish(const std::function<double(double)>& g,
                            const std::function<double(double)>& dg, double x0, double a,
                            double b, double tol = 1e-14, int max_iter = 60) {
    double x = x0;
    for (int i = 0; i < max_iter; ++i) {
        const double gx = g(x);
        const double d = dg(x);
        if (d == 0.0) break;
        const double step = gx / d;
        x -= step;
        if (x < a || x > b) return x0;
        if (std::abs(step) < tol) break;
    }
    return x;
}

}  // namespace geodlab

#pragma once

// Derivative-free univariate search: Brent's bounded minimizer (golden section
// with parabolic steps) and Brent's bracketing root finder.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tunnel/errors.hpp"

namespace tunnel::optimize {

struct Extremum {
    double x = 0.0;
    double value = 0.0;
    int iterations = 0;
};

/// Minimizes f on [lo, hi] to an absolute abscissa tolerance x_tol.
template <class F>
Extremum minimize_bounded(F&& f, double lo, double hi, double x_tol, int max_iter = 500) {
    if (!(lo < hi)) {
        throw DomainError("minimize_bounded: empty interval");
    }
    constexpr double golden = 0.3819660112501051;  // (3 - sqrt 5) / 2
    constexpr double sqrt_eps = 1.4901161193847656e-08;

    double a = lo;
    double b = hi;
    double x = a + golden * (b - a);
    double v = x;
    double w = x;
    double fx = f(x);
    double fv = fx;
    double fw = fx;
    double d = 0.0;
    double e = 0.0;

    int iter = 0;
    for (; iter < max_iter; ++iter) {
        const double mid = 0.5 * (a + b);
        const double tol1 = sqrt_eps * std::abs(x) + x_tol / 3.0;
        const double tol2 = 2.0 * tol1;
        if (std::abs(x - mid) <= tol2 - 0.5 * (b - a)) {
            break;
        }

        bool golden_step = true;
        if (std::abs(e) > tol1) {
            // Parabola through (v, fv), (w, fw), (x, fx).
            double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) {
                p = -p;
            }
            q = std::abs(q);
            const double e_prev = e;
            e = d;
            if (std::abs(p) < std::abs(0.5 * q * e_prev) && p > q * (a - x) && p < q * (b - x)) {
                d = p / q;
                const double u = x + d;
                if (u - a < tol2 || b - u < tol2) {
                    d = x < mid ? tol1 : -tol1;
                }
                golden_step = false;
            }
        }
        if (golden_step) {
            e = (x >= mid) ? a - x : b - x;
            d = golden * e;
        }

        const double u = std::abs(d) >= tol1 ? x + d : x + (d > 0.0 ? tol1 : -tol1);
        const double fu = f(u);
        if (fu <= fx) {
            (u >= x ? a : b) = x;
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            (u < x ? a : b) = u;
            if (fu <= fw || w == x) {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u;
                fv = fu;
            }
        }
    }
    return {x, fx, iter};
}

/// Maximizes f on [lo, hi]; see minimize_bounded.
template <class F>
Extremum maximize_bounded(F&& f, double lo, double hi, double x_tol, int max_iter = 500) {
    auto result = minimize_bounded([&f](double x) { return -f(x); }, lo, hi, x_tol, max_iter);
    result.value = -result.value;
    return result;
}

/// Root of f in [lo, hi] where f(lo) and f(hi) differ in sign (Brent-Dekker).
template <class F>
double find_root(F&& f, double lo, double hi, double x_tol, int max_iter = 200) {
    double a = lo;
    double b = hi;
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) {
        return a;
    }
    if (fb == 0.0) {
        return b;
    }
    if ((fa > 0.0) == (fb > 0.0)) {
        throw DomainError("find_root: interval does not bracket a sign change");
    }
    double c = a;
    double fc = fa;
    double d = b - a;
    double e = d;
    for (int iter = 0; iter < max_iter; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + 0.5 * x_tol;
        const double m = 0.5 * (c - b);
        if (std::abs(m) <= tol || fb == 0.0) {
            return b;
        }
        if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
            const double s = fb / fa;
            double p;
            double q;
            if (a == c) {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                const double qa = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) {
                q = -q;
            } else {
                p = -p;
            }
            if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += std::abs(d) > tol ? d : (m > 0.0 ? tol : -tol);
        fb = f(b);
    }
    throw ConvergenceError("find_root: no convergence", a, b);
}

}  // namespace tunnel::optimize

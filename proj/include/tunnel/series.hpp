#pragma once

// Hyperbolic ratios with removable singularities at the origin. Each helper
// is finite and smooth on [0, inf) so barrier formulas never form 0/0 at k = w.

#include <cmath>
#include <numbers>

namespace tunnel::series {

/// Below this argument the Taylor series are summed instead of the closed forms.
inline constexpr double kSeriesCutoff = 0.5;

/// Above this argument sinh^2 is close to overflow; use log-space forms.
inline constexpr double kLargeArgument = 350.0;

namespace detail {

// Sum of sum_{n>=0} t_n with t_0 = first and t_{n+1} = t_n * ratio(n).
template <class Ratio>
double sum_series(double first, Ratio ratio) {
    double term = first;
    double sum = first;
    for (int n = 1; n < 64; ++n) {
        term *= ratio(n);
        const double next = sum + term;
        if (next == sum) {
            break;
        }
        sum = next;
    }
    return sum;
}

}  // namespace detail

/// sinh(x)/x
inline double sinhc(double x) {
    const double ax = std::abs(x);
    if (ax < 1e-4) {
        return 1.0 + x * x / 6.0;
    }
    return std::sinh(x) / x;
}

/// tanh(x)/x
inline double tanhc(double x) {
    const double ax = std::abs(x);
    if (ax < 1e-4) {
        return 1.0 - x * x / 3.0;
    }
    return std::tanh(x) / x;
}

/// log(sinh(x)) for x > 0, without overflow.
inline double log_sinh(double x) {
    if (x > 1.0) {
        return x - std::numbers::ln2 + std::log1p(-std::exp(-2.0 * x));
    }
    return std::log(std::sinh(x));
}

/// (sinh x cosh x - x) / x^3, tends to 2/3 at the origin.
inline double sinh_cosh_excess(double x) {
    if (x < kSeriesCutoff) {
        // sum_{n>=1} 4^n x^(2n-2) / (2n+1)!
        const double x2 = x * x;
        return detail::sum_series(2.0 / 3.0, [x2](int n) {
            return 4.0 * x2 / ((2.0 * n + 2.0) * (2.0 * n + 3.0));
        });
    }
    return (std::sinh(x) * std::cosh(x) - x) / (x * x * x);
}

/// (x cosh x - sinh x) / x^3, tends to 1/3 at the origin.
inline double cosh_sinh_excess(double x) {
    if (x < kSeriesCutoff) {
        // sum_{n>=1} 2n x^(2n-2) / (2n+1)!
        const double x2 = x * x;
        return detail::sum_series(1.0 / 3.0, [x2](int n) {
            return x2 / (2.0 * n * (2.0 * n + 3.0));
        });
    }
    return (x * std::cosh(x) - std::sinh(x)) / (x * x * x);
}

/// (x / sinh x)^2, equal to 1 at the origin and decaying like 4x^2 e^{-2x}.
inline double sinhc_inverse_squared(double x) {
    if (x > kLargeArgument) {
        return std::exp(2.0 * (std::log(x) - log_sinh(x)));
    }
    const double s = sinhc(x);
    return 1.0 / (s * s);
}

/// (x coth x - 1) / x^2, tends to 1/3 at the origin and to 1/x for large x.
inline double coth_excess(double x) {
    if (x < kSeriesCutoff) {
        return cosh_sinh_excess(x) / sinhc(x);
    }
    return (x / std::tanh(x) - 1.0) / (x * x);
}

}  // namespace tunnel::series

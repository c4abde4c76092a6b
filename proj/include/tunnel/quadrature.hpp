#pragma once

// Composite Gauss-Legendre quadrature with panel doubling, for smooth and
// moderately oscillatory integrands over a finite wavenumber band.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <type_traits>

#include "tunnel/errors.hpp"

namespace tunnel {

struct QuadratureConfig {
    double rel_tol = 1e-8;
    int max_panel_doublings = 20;
    int base_panels = 64;

    void validate() const {
        if (!(rel_tol > 0.0)) {
            throw DomainError("quadrature rel_tol must be positive");
        }
        if (base_panels < 2) {
            throw DomainError("quadrature needs at least two base panels");
        }
        if (max_panel_doublings < 1) {
            throw DomainError("quadrature needs at least one panel doubling");
        }
    }
};

namespace detail {

inline constexpr int kGaussOrder = 10;

struct GaussRule {
    std::array<double, kGaussOrder> nodes{};    // on [-1, 1]
    std::array<double, kGaussOrder> weights{};
};

// Legendre roots by Newton iteration from the Chebyshev guess.
inline GaussRule make_gauss_rule() {
    GaussRule rule;
    constexpr int n = kGaussOrder;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0;
            double p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            dp = n * (z * p1 - p2) / (z * z - 1.0);
            const double z_prev = z;
            z = z_prev - p1 / dp;
            if (std::abs(z - z_prev) < 1e-15) {
                break;
            }
        }
        rule.nodes[i] = -z;
        rule.nodes[n - 1 - i] = z;
        rule.weights[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.weights[n - 1 - i] = rule.weights[i];
    }
    return rule;
}

inline const GaussRule& gauss_rule() {
    static const GaussRule rule = make_gauss_rule();
    return rule;
}

template <class F, class V>
V composite_gauss(F& f, double lo, double hi, int panels, double& abs_integral) {
    const auto& rule = gauss_rule();
    const double width = (hi - lo) / panels;
    V sum{};
    double abs_sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double left = lo + width * p;
        const double mid = left + 0.5 * width;
        V panel{};
        double abs_panel = 0.0;
        for (int i = 0; i < kGaussOrder; ++i) {
            const V v = f(mid + 0.5 * width * rule.nodes[i]);
            panel += rule.weights[i] * v;
            abs_panel += rule.weights[i] * std::abs(v);
        }
        sum += panel;
        abs_sum += abs_panel;
    }
    abs_integral = 0.5 * width * abs_sum;
    return 0.5 * width * sum;
}

}  // namespace detail

/// Integral of f over [lo, hi]. The panel count doubles from base_panels until
/// two successive estimates differ by at most rel_tol times the running
/// estimate of the integral of |f|. For sign-definite integrands that is a
/// relative tolerance on the result; for oscillatory ones with near-zero
/// results it stops the loop from chasing roundoff.
template <class F>
auto integrate_spectrum(F&& f, double lo, double hi, const QuadratureConfig& q = {}) {
    using V = std::decay_t<decltype(f(lo))>;
    q.validate();
    if (!(lo < hi)) {
        throw DomainError("integrate_spectrum: empty range");
    }
    int panels = q.base_panels;
    double abs_integral = 0.0;
    V previous = detail::composite_gauss<F, V>(f, lo, hi, panels, abs_integral);
    V before_previous = previous;
    double scale = abs_integral;
    for (int doubling = 0; doubling < q.max_panel_doublings; ++doubling) {
        panels *= 2;
        const V current = detail::composite_gauss<F, V>(f, lo, hi, panels, abs_integral);
        scale = std::max(scale, abs_integral);
        const double change = std::abs(current - previous);
        if (!std::isfinite(change)) {
            throw ConvergenceError("integrate_spectrum: non-finite integrand", std::abs(previous),
                                   std::abs(current));
        }
        if (change <= q.rel_tol * scale) {
            return current;
        }
        before_previous = previous;
        previous = current;
    }
    throw ConvergenceError("integrate_spectrum: no convergence after " + std::to_string(q.max_panel_doublings) +
                               " panel doublings",
                           std::abs(before_previous), std::abs(previous));
}

}  // namespace tunnel

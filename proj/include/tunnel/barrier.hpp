#pragma once

// Closed-form quantities for a rectangular barrier in natural units (hbar = 1):
// transmission modulus and phase, the analytic phase derivative, phase times
// and their limiting forms. All lengths, wavenumbers and times are in
// whatever unit system the caller picks for w, L and m.

#include <cmath>
#include <limits>
#include <string>

#include "tunnel/errors.hpp"
#include "tunnel/series.hpp"

namespace tunnel {

/// Barrier strength w = sqrt(2 m V0), extension L and particle mass m.
struct BarrierSpec {
    double w = 1.0;
    double L = 0.0;
    double m = 1.0;

    /// Barrier height V0 = w^2 / (2m).
    double height() const { return w * w / (2.0 * m); }

    void validate() const {
        if (!(w > 0.0) || !std::isfinite(w)) {
            throw DomainError("barrier strength w must be positive and finite");
        }
        if (!(L >= 0.0) || !std::isfinite(L)) {
            throw DomainError("barrier length L must be non-negative and finite");
        }
        if (!(m > 0.0) || !std::isfinite(m)) {
            throw DomainError("mass m must be positive and finite");
        }
        if (!(height() > 0.0) || !std::isfinite(height())) {
            throw DomainError("barrier height w^2/2m must be positive and finite");
        }
    }
};

/// Decay constant kappa = sqrt(w^2 - k^2) inside the barrier and opacity alpha = kappa L.
struct EvanescentParams {
    double kappa = 0.0;
    double alpha = 0.0;
};

/// kappa below kKappaEpsilon * w counts as zero for the divergent opaque-limit time.
inline constexpr double kKappaEpsilon = 1e-12;

namespace detail {

inline void require_wavenumber(double k, const BarrierSpec& b, bool allow_zero, const char* what) {
    b.validate();
    const bool low_ok = allow_zero ? k >= 0.0 : k > 0.0;
    if (!low_ok || !(k <= b.w)) {
        throw DomainError(std::string(what) + ": wavenumber " + std::to_string(k) +
                          " outside the tunneling band " + (allow_zero ? "[0, " : "(0, ") +
                          std::to_string(b.w) + "]");
    }
}

}  // namespace detail

inline EvanescentParams evanescent_params(double k, const BarrierSpec& b) {
    detail::require_wavenumber(k, b, true, "evanescent_params");
    // (w - k)(w + k) keeps full relative precision as k -> w.
    const double kappa = std::sqrt((b.w - k) * (b.w + k));
    return {kappa, kappa * b.L};
}

/// |T(k, L)|, the modulus of the transmission amplitude, in (0, 1].
inline double transmission_modulus(double k, const BarrierSpec& b) {
    detail::require_wavenumber(k, b, false, "transmission_modulus");
    if (b.L == 0.0) {
        return 1.0;
    }
    const auto [kappa, alpha] = evanescent_params(k, b);
    const double w2 = b.w * b.w;
    if (alpha <= series::kLargeArgument) {
        // w^4 sinh^2(alpha) / (4 k^2 kappa^2) written through sinh(alpha)/alpha.
        const double s = series::sinhc(alpha);
        const double q = w2 * w2 * b.L * b.L * s * s / (4.0 * k * k);
        return 1.0 / std::sqrt(1.0 + q);
    }
    const double log_q = 4.0 * std::log(b.w) + 2.0 * std::log(b.L) +
                         2.0 * (series::log_sinh(alpha) - std::log(alpha)) - std::log(4.0) -
                         2.0 * std::log(k);
    return std::exp(-0.5 * (log_q + std::log1p(std::exp(-log_q))));
}

/// Transmission phase Theta(k, L) = arctan{(2k^2 - w^2)/(2 k kappa) tanh(alpha)},
/// principal branch; continuous on (0, w] with Theta(w) = arctan(w L / 2).
inline double transmission_phase(double k, const BarrierSpec& b) {
    detail::require_wavenumber(k, b, false, "transmission_phase");
    const auto [kappa, alpha] = evanescent_params(k, b);
    const double tanh_over_kappa = b.L * series::tanhc(alpha);
    return std::atan((2.0 * k * k - b.w * b.w) / (2.0 * k) * tanh_over_kappa);
}

/// d ln|T| / dk. At k = w this is the series limit (w L^2/4)(1 + w^2L^2/3)/(1 + w^2L^2/4).
inline double transmission_log_slope(double k, const BarrierSpec& b) {
    detail::require_wavenumber(k, b, false, "transmission_log_slope");
    if (b.L == 0.0) {
        return 0.0;
    }
    const auto [kappa, alpha] = evanescent_params(k, b);
    const double w4 = b.w * b.w * b.w * b.w;
    const double L2 = b.L * b.L;
    const double r = series::sinhc_inverse_squared(alpha);
    const double rho = series::coth_excess(alpha);
    return w4 * (k * L2 * L2 * rho + L2 / k) / (4.0 * k * k * r + w4 * L2);
}

inline double g_aux_over_alpha(double alpha);

/// Analytic dTheta/dk. Regular on all of (0, w]; the k = w value is the
/// removable-singularity limit 2L(3 + 2w^2L^2/3)/(4 + w^2L^2).
inline double phase_derivative(double k, const BarrierSpec& b) {
    detail::require_wavenumber(k, b, false, "phase_derivative");
    if (b.L == 0.0) {
        return 0.0;
    }
    const auto [kappa, alpha] = evanescent_params(k, b);
    const double w2 = b.w * b.w;
    const double L2 = b.L * b.L;
    const double r = series::sinhc_inverse_squared(alpha);
    const double g_over_alpha = g_aux_over_alpha(alpha);
    const double numerator = w2 * w2 * L2 * g_over_alpha + (3.0 * w2 - 2.0 * kappa * kappa) * r;
    const double denominator = 4.0 * k * k * r + w2 * w2 * L2;
    return 2.0 * b.L * numerator / denominator;
}

/// Stationary-phase transit time t_T = (m/k) dTheta/dk for a peak leaving at x = L.
inline double phase_time(double k, const BarrierSpec& b) {
    return b.m / k * phase_derivative(k, b);
}

/// G(alpha) = [sinh(alpha)cosh(alpha) - alpha] / sinh^2(alpha).
inline double g_aux(double alpha) {
    if (!(alpha >= 0.0)) {
        throw DomainError("g_aux: alpha must be non-negative");
    }
    if (alpha < series::kSeriesCutoff) {
        return alpha * series::sinh_cosh_excess(alpha) * series::sinhc_inverse_squared(alpha);
    }
    if (alpha <= series::kLargeArgument) {
        const double s = std::sinh(alpha);
        return 1.0 / std::tanh(alpha) - alpha / (s * s);
    }
    return 1.0 - (4.0 * alpha - 2.0) * std::exp(-2.0 * alpha);
}

/// G(alpha)/alpha, finite at the origin where it equals 2/3.
inline double g_aux_over_alpha(double alpha) {
    if (!(alpha >= 0.0)) {
        throw DomainError("g_aux_over_alpha: alpha must be non-negative");
    }
    if (alpha < series::kSeriesCutoff) {
        return series::sinh_cosh_excess(alpha) * series::sinhc_inverse_squared(alpha);
    }
    return g_aux(alpha) / alpha;
}

/// Opaque-limit (Hartman plateau) time 2m/(k kappa). Returns +inf once kappa
/// drops below kKappaEpsilon * w.
inline double opaque_limit_time(double k, const BarrierSpec& b) {
    detail::require_wavenumber(k, b, false, "opaque_limit_time");
    const auto [kappa, alpha] = evanescent_params(k, b);
    if (kappa < kKappaEpsilon * b.w) {
        return std::numeric_limits<double>::infinity();
    }
    return 2.0 * b.m / (k * kappa);
}

/// Transit time with the wavenumber pinned to the band edge and the opacity
/// alpha left free: (2m/(w kappa)) G(alpha) with kappa = alpha / L. Tends to
/// 4mL/(3w) as alpha -> 0 and to 2m/(w kappa) for alpha >> 1.
inline double edge_phase_time(double alpha, const BarrierSpec& b) {
    b.validate();
    return 2.0 * b.m * b.L / b.w * g_aux_over_alpha(alpha);
}

/// lim_{k->w} |T|'/|T| = (w L^2/4)(1 + w^2 L^2/3)/(1 + w^2 L^2/4).
inline double edge_log_slope(const BarrierSpec& b) {
    b.validate();
    const double x2 = b.w * b.w * b.L * b.L;
    return b.w * b.L * b.L / 4.0 * (1.0 + x2 / 3.0) / (1.0 + x2 / 4.0);
}

}  // namespace tunnel

#pragma once

// Gaussian momentum distribution, the transmission-modulated spectrum
// g(k - k0)|T(k, L)| and its maximizer k_max, plus the band-edge distortion
// criterion.

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tunnel/barrier.hpp"
#include "tunnel/errors.hpp"
#include "tunnel/optimize.hpp"

namespace tunnel {

/// Gaussian spectrum centred at k0 with width parameter a, optionally cut off at k_cut.
struct PacketSpec {
    double k0 = 1.0;
    double a = 1.0;
    std::optional<double> k_cut;

    /// Cut-off expressed through a margin delta below the band edge: k_cut = (1 - delta) w.
    static PacketSpec with_cut_margin(double k0, double a, double delta, double w) {
        return PacketSpec{k0, a, (1.0 - delta) * w};
    }

    void validate() const {
        if (!(k0 > 0.0) || !std::isfinite(k0)) {
            throw DomainError("packet centre k0 must be positive and finite");
        }
        if (!(a > 0.0) || !std::isfinite(a)) {
            throw DomainError("packet width a must be positive and finite");
        }
        if (k_cut && !(*k_cut > 0.0)) {
            throw DomainError("cut-off wavenumber must be positive");
        }
    }

    void validate(const BarrierSpec& b) const {
        validate();
        if (k_cut && *k_cut > b.w) {
            throw DomainError("cut-off wavenumber must not exceed the barrier strength w");
        }
    }
};

enum class Regime {
    Undistorted,       ///< interior maximum, negative slope at k = w
    BoundaryLocalMax,  ///< positive slope at k = w, interior maximum still global
    FullyDistorted,    ///< global maximum sits at k = w
};

inline std::string_view to_string(Regime r) {
    switch (r) {
        case Regime::Undistorted:
            return "UNDISTORTED";
        case Regime::BoundaryLocalMax:
            return "BOUNDARY_LOCAL_MAX";
        case Regime::FullyDistorted:
            return "FULLY_DISTORTED";
    }
    return "UNDISTORTED";
}

inline std::optional<Regime> regime_from_string(std::string_view s) {
    for (Regime r : {Regime::Undistorted, Regime::BoundaryLocalMax, Regime::FullyDistorted}) {
        if (s == to_string(r)) {
            return r;
        }
    }
    return std::nullopt;
}

struct KmaxResult {
    double k_max = 0.0;
    Regime regime = Regime::Undistorted;
    int boundary_slope_sign = 0;
};

/// Spectral leakage outside [0, w]; only ever produces warnings.
struct Admissibility {
    double low_tail = 0.0;   ///< exp(-a^2 k0^2 / 2)
    double high_tail = 0.0;  ///< exp(-a^2 (w - k0)^2 / 2)

    static constexpr double kLowLimit = 1e-6;
    static constexpr double kHighLimit = 1e-2;

    bool admissible() const { return low_tail <= kLowLimit && high_tail <= kHighLimit; }

    std::vector<std::string> warnings() const {
        std::vector<std::string> out;
        if (low_tail > kLowLimit) {
            out.push_back("spectrum leaks below k = 0 (exp(-a^2 k0^2/2) = " + std::to_string(low_tail) + ")");
        }
        if (high_tail > kHighLimit) {
            out.push_back("spectrum leaks above k = w (exp(-a^2 (w-k0)^2/2) = " + std::to_string(high_tail) +
                          ")");
        }
        return out;
    }
};

inline Admissibility check_admissibility(const PacketSpec& p, const BarrierSpec& b) {
    p.validate();
    b.validate();
    const double a2 = p.a * p.a;
    const double gap = b.w - p.k0;
    return {std::exp(-a2 * p.k0 * p.k0 / 2.0), std::exp(-a2 * gap * gap / 2.0)};
}

/// g(k - k0) = (a^2 / 2 pi)^(1/4) exp[-a^2 (k - k0)^2 / 4]; |g|^2 integrates to one over the real line.
inline double gaussian_amp(double k, const PacketSpec& p) {
    const double d = k - p.k0;
    return std::pow(p.a * p.a / (2.0 * std::numbers::pi), 0.25) * std::exp(-p.a * p.a * d * d / 4.0);
}

/// g'/g
inline double gaussian_log_slope(double k, const PacketSpec& p) {
    return -p.a * p.a * (k - p.k0) / 2.0;
}

/// g(k - k0) |T(k, L)| on (0, w].
inline double modulated_amp(double k, const PacketSpec& p, const BarrierSpec& b) {
    return gaussian_amp(k, p) * transmission_modulus(k, b);
}

/// g'/g + |T|'/|T|; zero at an interior maximizer of the modulated spectrum.
inline double stationarity_residual(double k, const PacketSpec& p, const BarrierSpec& b) {
    return gaussian_log_slope(k, p) + transmission_log_slope(k, b);
}

/// d[g |T|]/dk at the band edge k = w, from the series limit of |T|'/|T|.
/// Positive values mean the modulated spectrum has a local maximum at k = w.
inline double boundary_slope(const PacketSpec& p, const BarrierSpec& b) {
    p.validate();
    b.validate();
    return gaussian_amp(b.w, p) * transmission_modulus(b.w, b) *
           (gaussian_log_slope(b.w, p) + edge_log_slope(b));
}

struct KmaxConfig {
    int grid_points = 4096;
    double rel_tol = 1e-10;
};

/// Global maximizer of g(k - k0)|T(k, L)| on (0, w].
///
/// The spectrum can be bimodal near the distortion transition (interior peak
/// plus a band-edge peak), so a dense uniform scan picks the best cell before
/// a bounded Brent search polishes it.
inline KmaxResult find_kmax(const PacketSpec& p, const BarrierSpec& b, const KmaxConfig& cfg = {}) {
    p.validate();
    b.validate();
    if (cfg.grid_points < 2048) {
        throw DomainError("find_kmax: pre-scan needs at least 2048 points");
    }
    const double slope = boundary_slope(p, b);
    const int slope_sign = slope > 0.0 ? 1 : (slope < 0.0 ? -1 : 0);

    if (b.L == 0.0 && p.k0 <= b.w) {
        return {p.k0, slope > 0.0 ? Regime::BoundaryLocalMax : Regime::Undistorted, slope_sign};
    }

    const int n = cfg.grid_points;
    const double h = b.w / n;
    int best = 1;
    double best_value = modulated_amp(h, p, b);
    for (int i = 2; i <= n; ++i) {
        const double k = i == n ? b.w : h * i;
        const double v = modulated_amp(k, p, b);
        if (v > best_value) {
            best = i;
            best_value = v;
        }
    }

    const double edge_value = modulated_amp(b.w, p, b);
    const double lo = best == 1 ? 0.5 * h : h * (best - 1);
    const double hi = best >= n - 1 ? b.w : h * (best + 1);
    const auto peak = optimize::maximize_bounded([&](double k) { return modulated_amp(k, p, b); }, lo, hi,
                                                 cfg.rel_tol * b.w);

    if (edge_value >= peak.value) {
        return {b.w, Regime::FullyDistorted, slope_sign};
    }
    // Value comparisons only fix the abscissa to ~sqrt(eps); the log-derivative
    // root pins it to working precision when the bracket allows.
    double k_max = peak.x;
    const double residual_lo = stationarity_residual(lo, p, b);
    const double residual_hi = stationarity_residual(hi, p, b);
    if (residual_lo > 0.0 && residual_hi < 0.0) {
        k_max = optimize::find_root([&](double k) { return stationarity_residual(k, p, b); }, lo, hi,
                                    4.0 * std::numeric_limits<double>::epsilon() * b.w);
    }
    // g|T| increases on (0, k0] because both factors do, so k_max >= k0.
    k_max = std::max(k_max, std::min(p.k0, b.w));
    return {k_max, slope > 0.0 ? Regime::BoundaryLocalMax : Regime::Undistorted, slope_sign};
}

/// Barrier length above which the bound |T|'/|T| < w L^2/3 allows a band-edge
/// maximum: L* = a sqrt(3 (w - k0) / (2w)). L > L* is necessary for a positive
/// boundary slope. Returns +inf when k0 >= w.
inline double distortion_threshold(const PacketSpec& p, const BarrierSpec& b_template) {
    p.validate();
    b_template.validate();
    if (p.k0 >= b_template.w) {
        return std::numeric_limits<double>::infinity();
    }
    return p.a * std::sqrt(3.0 * (b_template.w - p.k0) / (2.0 * b_template.w));
}

/// Barrier length at which boundary_slope changes sign, using the exact edge
/// limit of |T|'/|T| instead of its bound. Always >= distortion_threshold.
inline double exact_distortion_threshold(const PacketSpec& p, const BarrierSpec& b_template) {
    const double bound = distortion_threshold(p, b_template);
    if (!std::isfinite(bound)) {
        return bound;
    }
    const double target = p.a * p.a * (b_template.w - p.k0) / 2.0;
    auto excess = [&](double L) {
        BarrierSpec b = b_template;
        b.L = L;
        return edge_log_slope(b) - target;
    };
    double hi = std::max(2.0 * bound, 1e-300);
    while (excess(hi) <= 0.0) {
        hi *= 2.0;
    }
    return optimize::find_root(excess, bound, hi, 1e-15 * hi);
}

}  // namespace tunnel

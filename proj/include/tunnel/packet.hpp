#pragma once

// Direct synthesis of incident and transmitted wave packets by quadrature
// over the spectrum, peak location on sampled fields, and the arrival time of
// the transmitted peak at the barrier exit x = L.

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tunnel/barrier.hpp"
#include "tunnel/errors.hpp"
#include "tunnel/optimize.hpp"
#include "tunnel/quadrature.hpp"
#include "tunnel/spectral.hpp"

namespace tunnel {

/// Wavenumber interval the packet spectrum is integrated over.
struct SpectralBand {
    double lo = 0.0;
    double hi = 0.0;

    /// Half-width, in units of 1/a, of the band standing in for the whole real line.
    static constexpr double kFullLineHalfWidth = 14.0;

    static SpectralBand full_line(const PacketSpec& p) {
        return {p.k0 - kFullLineHalfWidth / p.a, p.k0 + kFullLineHalfWidth / p.a};
    }
    static SpectralBand barrier(const BarrierSpec& b) { return {0.0, b.w}; }
    static SpectralBand cut_off(double k_cut) { return {0.0, k_cut}; }

    /// [0, k_cut] when the packet carries a cut-off, the full line otherwise.
    static SpectralBand incident_default(const PacketSpec& p) {
        return p.k_cut ? cut_off(*p.k_cut) : full_line(p);
    }
};

enum class FieldKind { Incident, Transmitted };
enum class FieldAxis { Space, Time };

struct FieldSample {
    double coordinate = 0.0;
    std::complex<double> amplitude;
};

/// Complex amplitude sampled along x (fixed t) or along t (fixed x).
struct ComplexField {
    FieldKind kind = FieldKind::Incident;
    FieldAxis axis = FieldAxis::Space;
    double fixed = 0.0;  ///< t for a space scan, x for a time scan
    PacketSpec packet;
    BarrierSpec barrier;
    double mass = 1.0;
    SpectralBand band;
    std::vector<FieldSample> samples;
};

/// psi^T(x, t) = int_0^w dk/2pi g(k - k0)|T| exp[i k (x - L) - i k^2 t / 2m + i Theta].
inline std::complex<double> transmitted_psi(double x, double t, const PacketSpec& p, const BarrierSpec& b,
                                            const QuadratureConfig& q = {}) {
    p.validate();
    b.validate();
    auto integrand = [&](double k) {
        const double amp = modulated_amp(k, p, b);
        const double phase = k * (x - b.L) - k * k * t / (2.0 * b.m) + transmission_phase(k, b);
        return std::polar(amp, phase);
    };
    return integrate_spectrum(integrand, 0.0, b.w, q) / (2.0 * std::numbers::pi);
}

/// Free packet int dk/2pi g(k - k0) exp[i k x - i k^2 t / 2m] over the given band.
inline std::complex<double> incident_psi(double x, double t, const PacketSpec& p, const SpectralBand& band,
                                         double m = 1.0, const QuadratureConfig& q = {}) {
    p.validate();
    if (!(m > 0.0)) {
        throw DomainError("incident_psi: mass must be positive");
    }
    auto integrand = [&](double k) {
        return std::polar(gaussian_amp(k, p), k * x - k * k * t / (2.0 * m));
    };
    return integrate_spectrum(integrand, band.lo, band.hi, q) / (2.0 * std::numbers::pi);
}

struct FieldRequest {
    FieldKind kind = FieldKind::Incident;
    FieldAxis axis = FieldAxis::Space;
    double fixed = 0.0;
    PacketSpec packet;
    BarrierSpec barrier;
    /// Incident band; defaults to SpectralBand::incident_default(packet).
    std::optional<SpectralBand> band;
};

/// Evaluates the requested field on every grid point, in grid order.
inline ComplexField field_scan(const FieldRequest& req, std::span<const double> grid,
                               const QuadratureConfig& q = {}) {
    if (grid.empty()) {
        throw DomainError("field_scan: empty grid");
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw DomainError("field_scan: grid must be strictly increasing");
        }
    }
    req.packet.validate();
    req.barrier.validate();

    ComplexField field;
    field.kind = req.kind;
    field.axis = req.axis;
    field.fixed = req.fixed;
    field.packet = req.packet;
    field.barrier = req.barrier;
    field.mass = req.barrier.m;
    field.band = req.kind == FieldKind::Transmitted ? SpectralBand::barrier(req.barrier)
                                                    : req.band.value_or(SpectralBand::incident_default(req.packet));
    field.samples.reserve(grid.size());

    for (double c : grid) {
        const double x = req.axis == FieldAxis::Space ? c : req.fixed;
        const double t = req.axis == FieldAxis::Space ? req.fixed : c;
        try {
            const auto amp = req.kind == FieldKind::Transmitted
                                 ? transmitted_psi(x, t, req.packet, req.barrier, q)
                                 : incident_psi(x, t, req.packet, field.band, req.barrier.m, q);
            field.samples.push_back({c, amp});
        } catch (const ConvergenceError& e) {
            throw ConvergenceError(std::string(e.what()) + " at coordinate " + std::to_string(c),
                                   e.previous_estimate(), e.last_estimate());
        }
    }
    return field;
}

struct Peak {
    double coordinate = 0.0;
    double magnitude2 = 0.0;
    std::size_t index = 0;    ///< grid index of the sampled maximum
    bool degenerate = false;  ///< every sample had the same |psi|^2
};

namespace detail {

// Vertex of the parabola through three points; nullopt when they are collinear.
inline std::optional<std::pair<double, double>> parabola_vertex(double x0, double y0, double x1, double y1,
                                                                double x2, double y2) {
    const double d10 = x1 - x0;
    const double d12 = x1 - x2;
    const double num = d10 * d10 * (y1 - y2) - d12 * d12 * (y1 - y0);
    const double den = d10 * (y1 - y2) - d12 * (y1 - y0);
    if (den == 0.0) {
        return std::nullopt;
    }
    const double xv = x1 - 0.5 * num / den;
    // Evaluate the Lagrange interpolant at the vertex.
    const double l0 = (xv - x1) * (xv - x2) / ((x0 - x1) * (x0 - x2));
    const double l1 = (xv - x0) * (xv - x2) / ((x1 - x0) * (x1 - x2));
    const double l2 = (xv - x0) * (xv - x1) / ((x2 - x0) * (x2 - x1));
    return std::pair{xv, l0 * y0 + l1 * y1 + l2 * y2};
}

}  // namespace detail

/// Global maximum of |psi|^2: grid argmax (ties go to the smaller coordinate)
/// refined by a three-point parabola when the argmax is interior.
inline Peak peak_of(const ComplexField& field) {
    const auto& s = field.samples;
    if (s.empty()) {
        throw DomainError("peak_of: empty field");
    }
    std::size_t best = 0;
    double best_value = std::norm(s[0].amplitude);
    bool flat = true;
    for (std::size_t i = 1; i < s.size(); ++i) {
        const double v = std::norm(s[i].amplitude);
        if (v != best_value) {
            flat = false;
        }
        if (v > best_value) {
            best = i;
            best_value = v;
        }
    }
    Peak peak{s[best].coordinate, best_value, best, flat && s.size() > 1};
    if (peak.degenerate || best == 0 || best + 1 == s.size()) {
        return peak;
    }
    const auto vertex = detail::parabola_vertex(s[best - 1].coordinate, std::norm(s[best - 1].amplitude),
                                                s[best].coordinate, best_value, s[best + 1].coordinate,
                                                std::norm(s[best + 1].amplitude));
    if (vertex && vertex->first >= s[best - 1].coordinate && vertex->first <= s[best + 1].coordinate) {
        peak.coordinate = vertex->first;
        peak.magnitude2 = vertex->second;
    }
    return peak;
}

struct TimeWindow {
    double t0 = 0.0;
    double t1 = 0.0;
    int points = 241;

    /// phase_time(k) +/- 3 m a / k0, the customary seed for arrival_time.
    static TimeWindow around(double t_center, const PacketSpec& p, const BarrierSpec& b, int points = 241) {
        const double half = 3.0 * b.m * p.a / p.k0;
        return {t_center - half, t_center + half, points};
    }
};

/// Time at which |psi^T(L, t)|^2 peaks, i.e. when the transmitted peak leaves
/// the barrier. The sampled maximum is polished by a bounded Brent search over
/// its two neighbouring cells.
inline double arrival_time(const PacketSpec& p, const BarrierSpec& b, const TimeWindow& window,
                           const QuadratureConfig& q = {}) {
    if (!(window.t0 < window.t1) || window.points < 3) {
        throw DomainError("arrival_time: window needs t0 < t1 and at least three points");
    }
    std::vector<double> grid(static_cast<std::size_t>(window.points));
    const double dt = (window.t1 - window.t0) / (window.points - 1);
    for (int i = 0; i < window.points; ++i) {
        grid[static_cast<std::size_t>(i)] = i + 1 == window.points ? window.t1 : window.t0 + dt * i;
    }
    FieldRequest req{FieldKind::Transmitted, FieldAxis::Time, b.L, p, b, std::nullopt};
    const auto field = field_scan(req, grid, q);
    const auto peak = peak_of(field);
    if (peak.index == 0 || peak.index + 1 == grid.size()) {
        throw WindowError("arrival_time: peak at the window edge t = " + std::to_string(peak.coordinate) +
                          "; enlarge the time window");
    }
    const double lo = grid[peak.index - 1];
    const double hi = grid[peak.index + 1];
    const auto refined = optimize::maximize_bounded(
        [&](double t) { return std::norm(transmitted_psi(b.L, t, p, b, q)); }, lo, hi, 1e-10 * (hi - lo));
    return refined.x;
}

}  // namespace tunnel

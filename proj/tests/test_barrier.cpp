#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "tunnel/barrier.hpp"

using tunnel::BarrierSpec;

namespace {

double rel_err(double got, double want) {
    return std::abs(got - want) / std::abs(want);
}

}  // namespace

TEST(BarrierSpec, RejectsNonPhysicalParameters) {
    EXPECT_THROW((BarrierSpec{0.0, 1.0, 1.0}.validate()), tunnel::DomainError);
    EXPECT_THROW((BarrierSpec{4.0, -0.1, 1.0}.validate()), tunnel::DomainError);
    EXPECT_THROW((BarrierSpec{4.0, 1.0, 0.0}.validate()), tunnel::DomainError);
    EXPECT_THROW((BarrierSpec{std::numeric_limits<double>::infinity(), 1.0, 1.0}.validate()), tunnel::DomainError);
    EXPECT_NO_THROW((BarrierSpec{4.0, 0.0, 1.0}.validate()));
    EXPECT_DOUBLE_EQ((BarrierSpec{4.0, 1.0, 2.0}.height()), 4.0);
}

TEST(EvanescentParams, Examples) {
    const auto at_zero = tunnel::evanescent_params(0.0, {4.0, 0.5, 1.0});
    EXPECT_DOUBLE_EQ(at_zero.kappa, 4.0);
    EXPECT_DOUBLE_EQ(at_zero.alpha, 2.0);

    const auto at_edge = tunnel::evanescent_params(4.0, {4.0, 0.5, 1.0});
    EXPECT_EQ(at_edge.kappa, 0.0);
    EXPECT_EQ(at_edge.alpha, 0.0);

    const auto mid = tunnel::evanescent_params(1.1777, {4.0, 0.05, 1.0});
    EXPECT_NEAR(mid.kappa, 3.8226983545657902, 1e-14);
    EXPECT_NEAR(mid.alpha, 0.19113491772828951, 1e-15);
}

TEST(EvanescentParams, RejectsPropagatingAndNegativeWavenumbers) {
    EXPECT_THROW(tunnel::evanescent_params(-0.1, {4.0, 0.5, 1.0}), tunnel::DomainError);
    EXPECT_THROW(tunnel::evanescent_params(4.0001, {4.0, 0.5, 1.0}), tunnel::DomainError);
}

TEST(TransmissionModulus, Examples) {
    for (double k : {0.1, 1.0, 2.5, 4.0}) {
        EXPECT_EQ(tunnel::transmission_modulus(k, {4.0, 0.0, 1.0}), 1.0);
    }
    EXPECT_NEAR(tunnel::transmission_modulus(4.0, {4.0, 0.5, 1.0}), 1.0 / std::numbers::sqrt2, 1e-15);
    // mpmath, 40 digits
    EXPECT_NEAR(tunnel::transmission_modulus(1.1777, {4.0, 0.05, 1.0}), 0.94627648759845790, 1e-14);
}

TEST(TransmissionModulus, DomainErrors) {
    EXPECT_THROW(tunnel::transmission_modulus(0.0, {4.0, 0.5, 1.0}), tunnel::DomainError);
    EXPECT_THROW(tunnel::transmission_modulus(4.5, {4.0, 0.5, 1.0}), tunnel::DomainError);
}

TEST(TransmissionModulus, MatchesDirectFormulaAndIsIncreasing) {
    for (double w : {1.5, 4.0, 20.0}) {
        for (double L : {0.05, 0.5, 1.0}) {
            const BarrierSpec b{w, L, 1.0};
            double previous = 0.0;
            for (int i = 1; i < 2000; ++i) {
                const double k = w * i / 2000.0;
                const double T = tunnel::transmission_modulus(k, b);
                ASSERT_GT(T, 0.0);
                ASSERT_LE(T, 1.0);
                ASSERT_GT(T, previous) << "w=" << w << " L=" << L << " k=" << k;
                previous = T;
                ASSERT_LT(rel_err(T, static_cast<double>(oracle::modulus(k, w, L))), 1e-12);
            }
        }
    }
}

TEST(TransmissionModulus, OpaqueBarrierDoesNotOverflow) {
    const BarrierSpec b{4.0, 200.0, 1.0};
    const double T = tunnel::transmission_modulus(2.0, b);
    EXPECT_TRUE(std::isfinite(T));
    EXPECT_GE(T, 0.0);
    // log T ~ -alpha + log(4 k kappa / w^2) for alpha >> 1
    const double kappa = std::sqrt(12.0);
    EXPECT_NEAR(std::log(tunnel::transmission_modulus(2.0, {4.0, 110.0, 1.0})),
                -kappa * 110.0 + std::log(4.0 * 2.0 * kappa / 16.0), 1e-9);
}

TEST(TransmissionModulus, LogSpaceBranchIsContinuous) {
    const double kappa = std::sqrt(12.0);
    const double L_switch = tunnel::series::kLargeArgument / kappa;
    const BarrierSpec below{4.0, L_switch * (1.0 - 1e-12), 1.0};
    const BarrierSpec above{4.0, L_switch * (1.0 + 1e-12), 1.0};
    EXPECT_LT(rel_err(tunnel::transmission_modulus(2.0, below), tunnel::transmission_modulus(2.0, above)), 1e-8);
}

TEST(TransmissionPhase, Examples) {
    for (double k : {0.3, 1.7, 4.0}) {
        EXPECT_EQ(tunnel::transmission_phase(k, {4.0, 0.0, 1.0}), 0.0);
    }
    for (double L : {0.1, 0.7, 3.0}) {
        EXPECT_NEAR(tunnel::transmission_phase(4.0 / std::numbers::sqrt2, {4.0, L, 1.0}), 0.0, 1e-15);
    }
    // Band edge: arctan(w L / 2)
    EXPECT_NEAR(tunnel::transmission_phase(4.0, {4.0, 0.5, 1.0}), std::numbers::pi / 4.0, 1e-15);
}

TEST(TransmissionPhase, MatchesDirectFormula) {
    for (double w : {1.5, 4.0, 20.0}) {
        for (double L : {0.05, 0.5, 1.0}) {
            for (int i = 1; i < 500; ++i) {
                const double k = w * i / 500.0;
                ASSERT_NEAR(tunnel::transmission_phase(k, {w, L, 1.0}), static_cast<double>(oracle::phase(k, w, L)),
                            1e-13);
            }
        }
    }
}

TEST(PhaseDerivative, MatchesCentralDifferences) {
    for (double w : {1.5, 4.0, 20.0}) {
        for (double L : {0.05, 0.25, 0.5, 1.0}) {
            const BarrierSpec b{w, L, 1.0};
            const auto theta = [&](long double k) { return oracle::phase(k, w, L); };
            for (int i = 0; i < 200; ++i) {
                const double k = w * (1e-3 + (1.0 - 2e-3) * i / 199.0);
                const double fd = static_cast<double>(oracle::central_difference(theta, k, 1e-5L * w));
                ASSERT_LT(rel_err(tunnel::phase_derivative(k, b), fd), 1e-6) << "w=" << w << " L=" << L << " k=" << k;
            }
        }
    }
}

TEST(PhaseDerivative, Examples) {
    EXPECT_EQ(tunnel::phase_derivative(4.0 / std::numbers::sqrt2, {4.0, 0.0, 1.0}), 0.0);
    // mpmath derivative of the phase, 40 digits
    EXPECT_LT(rel_err(tunnel::phase_derivative(2.0, {4.0, 0.25, 1.0}), 0.49950150302603523), 1e-13);
    // Band-edge limit 2L(3 + 2x^2/3)/(4 + x^2), x = wL
    EXPECT_LT(rel_err(tunnel::phase_derivative(4.0, {4.0, 0.25, 1.0}), 0.36666666666666667), 1e-14);
    EXPECT_LT(rel_err(tunnel::phase_derivative(1.5, {1.5, 1.0, 1.0}), 1.44), 1e-14);
}

TEST(PhaseDerivative, ThinBarrierIsLinearInL) {
    const double k = 4.0 / std::numbers::sqrt2;
    const double d1 = tunnel::phase_derivative(k, {4.0, 1e-3, 1.0});
    const double d2 = tunnel::phase_derivative(k, {4.0, 2e-3, 1.0});
    EXPECT_NEAR(d2 / d1, 2.0, 1e-4);
}

TEST(BandEdge, DirectFormulasApproachTheSeriesBranch) {
    for (double w : {1.5, 4.0, 20.0}) {
        for (double L : {0.05, 0.5, 1.0, 3.0}) {
            const BarrierSpec b{w, L, 1.0};
            const double near = w * (1.0 - 1e-10);
            EXPECT_LT(rel_err(tunnel::transmission_modulus(near, b), tunnel::transmission_modulus(w, b)), 1e-6);
            EXPECT_LT(rel_err(tunnel::transmission_phase(near, b), tunnel::transmission_phase(w, b)), 1e-6);
            EXPECT_LT(rel_err(tunnel::phase_time(near, b), tunnel::phase_time(w, b)), 1e-6);
        }
    }
}

TEST(PhaseTime, IsMassOverKTimesPhaseDerivative) {
    const BarrierSpec b{4.0, 0.25, 1.0};
    EXPECT_LT(rel_err(tunnel::phase_time(2.0, b) * 2.0 / b.m, tunnel::phase_derivative(2.0, b)), 1e-12);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        const BarrierSpec r{0.5 + 20.0 * unit(rng), 3.0 * unit(rng), 0.1 + 5.0 * unit(rng)};
        const double k = r.w * (1e-3 + 0.999 * unit(rng));
        ASSERT_LT(std::abs(tunnel::phase_time(k, r) * k / r.m - tunnel::phase_derivative(k, r)),
                  1e-12 * std::abs(tunnel::phase_derivative(k, r)) + 1e-300);
    }
}

TEST(PhaseTime, HartmanPlateau) {
    for (double k0 : {0.5, 1.0, 2.0, 3.5}) {
        for (double m : {1.0, 2.5}) {
            const double kappa = std::sqrt(16.0 - k0 * k0);
            const double plateau = tunnel::opaque_limit_time(k0, {4.0, 1.0, m});
            for (double alpha : {10.5, 15.0, 40.0, 400.0, 900.0}) {
                const BarrierSpec b{4.0, alpha / kappa, m};
                EXPECT_LT(rel_err(tunnel::phase_time(k0, b), plateau), 0.01) << "k0=" << k0 << " alpha=" << alpha;
            }
        }
    }
}

TEST(PhaseTime, BandEdgeAndOpaqueLimits) {
    // (m/k) dTheta/dk at k = w is 4mL/(3w) (1 + O(1/(wL)^2)) for an opaque edge.
    const BarrierSpec thick{10.0, 1000.0, 1.0};
    EXPECT_LT(rel_err(tunnel::phase_time(10.0, thick), 4.0 * 1000.0 / 30.0), 1e-6);
    // alpha >> 1 at fixed k < w: 2m/(k kappa)
    const double k = 3.0;
    EXPECT_LT(rel_err(tunnel::phase_time(k, {4.0, 10.0, 1.0}), 2.0 / (k * std::sqrt(7.0))), 1e-9);
}

TEST(GAux, Examples) {
    EXPECT_NEAR(tunnel::g_aux(1.0), 0.58897362453302084, 1e-15);
    EXPECT_LT(rel_err(tunnel::g_aux(1e-4), 6.6666666577777778e-05), 1e-13);
    EXPECT_EQ(tunnel::g_aux(0.0), 0.0);
    EXPECT_EQ(tunnel::g_aux(1e6), 1.0);
    EXPECT_THROW(tunnel::g_aux(-1e-9), tunnel::DomainError);
}

TEST(GAux, BoundsAndMonotonicity) {
    double previous = 0.0;
    for (int i = 1; i <= 100000; ++i) {
        const double alpha = 40.0 * i / 100000.0;
        const double G = tunnel::g_aux(alpha);
        if (alpha < 15.0) {
            ASSERT_GT(G, previous) << alpha;
        } else {
            ASSERT_GE(G, previous - 2e-16) << alpha;  // saturated at 1 up to rounding
        }
        ASSERT_GT(G, 0.0);
        ASSERT_LE(G, 1.0);
        if (alpha < 0.1) {
            ASSERT_LE(std::abs(G - 2.0 * alpha / 3.0), alpha * alpha * alpha);
        }
        if (alpha > 12.0) {
            ASSERT_LE(std::abs(G - 1.0), 1e-8);
        }
        if (alpha > 0.5 && alpha < 30.0) {
            ASSERT_LT(rel_err(G, static_cast<double>(oracle::g_aux(alpha))), 1e-13);
        }
        previous = G;
    }
}

TEST(GAux, SeriesBranchJoinsDirectFormula) {
    const double cut = tunnel::series::kSeriesCutoff;
    EXPECT_LT(rel_err(tunnel::g_aux(std::nextafter(cut, 0.0)), tunnel::g_aux(cut)), 1e-14);
    EXPECT_LT(rel_err(tunnel::g_aux_over_alpha(std::nextafter(cut, 0.0)), tunnel::g_aux_over_alpha(cut)), 1e-14);
    EXPECT_NEAR(tunnel::g_aux_over_alpha(0.0), 2.0 / 3.0, 1e-16);
}

TEST(OpaqueLimitTime, Examples) {
    EXPECT_NEAR(tunnel::opaque_limit_time(2.0, {4.0, 1.0, 1.0}), 0.28867513459481288, 1e-15);
    EXPECT_EQ(tunnel::opaque_limit_time(2.0, {4.0, 1.0, 1.0}), tunnel::opaque_limit_time(2.0, {4.0, 2.0, 1.0}));
    EXPECT_TRUE(std::isinf(tunnel::opaque_limit_time(4.0, {4.0, 1.0, 1.0})));
    // kappa = w sqrt(2e-12)
    EXPECT_NEAR(tunnel::opaque_limit_time(4.0 * (1.0 - 1e-12), {4.0, 1.0, 1.0}), 1.0 / (8.0 * std::sqrt(2e-12)), 1.0);
}

TEST(EdgePhaseTime, Limits) {
    const BarrierSpec b{4.0, 0.7, 2.0};
    const double linear = 4.0 * b.m * b.L / (3.0 * b.w);
    EXPECT_LT(rel_err(tunnel::edge_phase_time(0.0, b), linear), 1e-15);
    EXPECT_LT(rel_err(tunnel::edge_phase_time(1e-5, b), linear), 1e-9);
    // alpha >> 1: 2m/(w kappa) with kappa = alpha / L
    const double alpha = 30.0;
    EXPECT_LT(rel_err(tunnel::edge_phase_time(alpha, b), 2.0 * b.m / (b.w * alpha / b.L)), 1e-12);
}

TEST(LogSlope, MatchesFiniteDifferencesOfLogModulus) {
    for (double w : {1.5, 4.0, 20.0}) {
        for (double L : {0.05, 0.5, 1.0}) {
            const BarrierSpec b{w, L, 1.0};
            const auto log_t = [&](long double k) { return std::log(oracle::modulus(k, w, L)); };
            for (int i = 1; i < 100; ++i) {
                const double k = w * i / 100.0;
                const double fd = static_cast<double>(oracle::central_difference(log_t, k, 1e-5L * w));
                ASSERT_LT(rel_err(tunnel::transmission_log_slope(k, b), fd), 1e-6);
            }
            // Band edge against a one-sided second-order difference of the implementation.
            const double h = 1e-5 * w;
            const auto lt = [&](double k) { return std::log(tunnel::transmission_modulus(k, b)); };
            const double one_sided = (3.0 * lt(w) - 4.0 * lt(w - h) + lt(w - 2.0 * h)) / (2.0 * h);
            EXPECT_LT(rel_err(tunnel::edge_log_slope(b), one_sided), 1e-6);
            EXPECT_LT(rel_err(tunnel::transmission_log_slope(w, b), tunnel::edge_log_slope(b)), 1e-13);
        }
    }
}

TEST(LogSlope, EdgeLimitStaysBelowTheQuadraticBound) {
    for (double w : {0.5, 1.5, 4.0, 20.0, 200.0}) {
        for (double L : {0.01, 0.1, 1.0, 10.0}) {
            const BarrierSpec b{w, L, 1.0};
            EXPECT_LT(tunnel::edge_log_slope(b), w * L * L / 3.0);
        }
    }
    const BarrierSpec opaque{100.0, 10.0, 1.0};
    EXPECT_LT(rel_err(tunnel::edge_log_slope(opaque), 100.0 * 100.0 / 3.0), 1e-6);
}

#include "owm/exponents.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace {

using namespace owm;

SystemParams P(double d, double sx2, double sz2, double lambda) {
    return SystemParams::make(sx2, sz2, d, lambda);
}

// Printed closed forms for r* and q*, evaluated literally.
double printed_r_star(const SystemParams& p) {
    const DetectionGeometry g = derive_geometry(p.fp_exponent);
    const double d = p.distortion, x = p.host_variance, z = p.attack_variance;
    const double c = g.cos2_beta, s = g.sin2_beta;
    const double root = std::sqrt(d * d * z * z + 4 * z * z * x * x * c * c - 2 * d * d * z * x * s +
                                  d * d * x * x * s * s);
    return (d * z + 2 * z * x * c - d * x * s - root) / (2 * (z * c - x * c * s));
}

double printed_q_star(const SystemParams& p) {
    const DetectionGeometry g = derive_geometry(p.fp_exponent);
    const double d = p.distortion, x = p.host_variance, z = p.attack_variance;
    const double c = g.cos2_beta, s = g.sin2_beta, t = g.tan2_beta();
    const double inner = 2 * z - x * (1 - std::cos(2 * g.beta));
    const double root = std::sqrt(16 * z * z * x * x * c * c + d * d * inner * inner);
    return ((2 * d * z + root) * t - 2 * x * s * (2 * z + d * t)) / (4 * (z - x * s));
}

struct Frozen {
    double d, sx2, sz2, lambda, e, r, q;
};

TEST(ClosedForm, FrozenValues) {
    // mpmath minimisation of the reduced objective, 30 digits.
    const Frozen cases[] = {
        {2, 1, 0.52, 0.6, 0.0011152023468851083, 1.0334326363240102, 0.55076159292470668},
        {2, 1, 0.55, 0.6, 7.3919715065282120e-5, 1.0082529068639674, 0.55834558169558674},
        {1, 1, 0.1, 0.3, 0.15977089325911237, 2.0157357404806650, 0.11010998549447323},
        {0.5, 1, 0.1, 0.1, 0.33191676798667770, 2.6261939904783027, 0.10818199951032617},
    };
    for (const Frozen& f : cases) {
        const ExponentReport r = efn_closed_form(P(f.d, f.sx2, f.sz2, f.lambda));
        EXPECT_EQ(r.method, ExponentMethod::closed_form);
        EXPECT_FALSE(r.zero_reason.has_value());
        EXPECT_NEAR(r.e_fn, f.e, 1e-12 * std::max(1.0, f.e) + 1e-15);
        EXPECT_NEAR(r.r_star, f.r, 1e-10);
        EXPECT_NEAR(r.q_star, f.q, 1e-10);
    }
}

TEST(ClosedForm, FeasibleGlobalMinimum) {
    const ExponentReport r = efn_closed_form(P(1, 1, 1, 2));
    EXPECT_EQ(r.e_fn, 0.0);
    ASSERT_TRUE(r.zero_reason.has_value());
    EXPECT_EQ(*r.zero_reason, ZeroReason::global_min_feasible);
    const DetectionGeometry g = derive_geometry(2.0);
    EXPECT_NEAR(boundary_t1(1.0, 1.0, g), 0.00034172147503987, 1e-15);
    EXPECT_EQ(efn_closed_form(P(2, 1, 2, 1.0)).e_fn, 0.0);
}

TEST(ClosedForm, AttackFreeRouting) {
    const ExponentReport r = efn_closed_form(P(2, 1, 0, 0.6));
    EXPECT_EQ(r.method, ExponentMethod::attack_free);
    EXPECT_NEAR(r.e_fn, 0.40524796148314352, 1e-13);
}

TEST(ClosedForm, MatchesPrintedFormulas) {
    for (double lambda : {0.1, 0.3, 0.6, 1.0}) {
        for (double sz2 : {0.05, 0.1, 0.5, 1.0}) {
            for (double d : {0.5, 1.0, 2.0, 4.0}) {
                const SystemParams p = P(d, 1.0, sz2, lambda);
                const DetectionGeometry g = derive_geometry(lambda);
                if (boundary_t1(p.host_variance, d, g) <= sz2) continue;
                if (std::abs(sz2 - g.sin2_beta) < 1e-3) continue;
                const ExponentReport r = efn_closed_form(p);
                EXPECT_NEAR(r.r_star, printed_r_star(p), 1e-8 * std::max(1.0, r.r_star));
                EXPECT_NEAR(r.q_star, printed_q_star(p), 1e-8 * std::max(1.0, r.q_star));
                EXPECT_NEAR(r.e_fn, variance_divergence(r.q_star / sz2) + variance_divergence(r.r_star),
                            1e-14);
            }
        }
    }
}

TEST(ClosedForm, SingularPoint) {
    // σ_Z² = σ_X² sin²β: the printed r* is 0/0, the linear root is D/(2cos²β).
    const double lambda = 0.3;
    const SystemParams p = P(2.0, 1.0, std::exp(-2 * lambda), lambda);
    const ExponentReport r = efn_closed_form(p);
    EXPECT_NEAR(r.e_fn, 0.42049884681455127, 1e-9);
    EXPECT_NEAR(r.r_star, 2.2163692151608709, 1e-6);
    EXPECT_NEAR(r.q_star, 1.2163692151608709, 1e-6);
    // Continuity across the band.
    for (double eps : {1e-6, 1e-9, -1e-9, -1e-6}) {
        const ExponentReport near = efn_closed_form(P(2.0, 1.0, std::exp(-2 * lambda) * (1 + eps), lambda));
        EXPECT_NEAR(near.e_fn, r.e_fn, 1e-5);
    }
}

TEST(ClosedForm, MinimiserInsideInterval) {
    for (double lambda = 0.05; lambda < 2.0; lambda += 0.15) {
        for (double sz2 : {0.01, 0.2, 0.9}) {
            for (double d : {0.3, 1.0, 3.0}) {
                const ExponentReport r = efn_closed_form(P(d, 1.0, sz2, lambda));
                if (r.e_fn <= 0.0) continue;
                EXPECT_GT(r.r_star, 0.0);
                EXPECT_LT(r.r_star, d / derive_geometry(lambda).cos2_beta);
                EXPECT_GE(r.e_fn, 0.0);
            }
        }
    }
}

TEST(ClosedForm, RejectsInvalidParams) {
    SystemParams bad;
    bad.distortion = -1.0;
    EXPECT_THROW(efn_closed_form(bad), ParameterError);
}

TEST(AttackFree, Values) {
    EXPECT_NEAR(efn_attack_free(2, 1, 0.6).e_fn, 0.40524796148314352, 1e-14);
    EXPECT_NEAR(efn_attack_free(2, 1, 0.6).r_star, 2.0 / (1 - std::exp(-1.2)), 1e-14);
    const ExponentReport zero = efn_attack_free(0.5, 1, 0.6);
    EXPECT_EQ(zero.e_fn, 0.0);
    ASSERT_TRUE(zero.zero_reason.has_value());
    EXPECT_EQ(*zero.zero_reason, ZeroReason::insufficient_distortion);
    EXPECT_NEAR(efn_attack_free(2, 1, 50).e_fn, 0.15342640972002735, 1e-14);
    EXPECT_EQ(efn_attack_free(2, 1, 0.6).method, ExponentMethod::attack_free);
}

TEST(AttackFree, LimitOfClosedForm) {
    for (double d : {1.0, 2.0}) {
        for (double lambda : {0.3, 0.6, 1.0}) {
            EXPECT_NEAR(efn_closed_form(P(d, 1, 1e-8, lambda)).e_fn, efn_attack_free(d, 1, lambda).e_fn,
                        1e-4);
        }
    }
}

TEST(QStar, RatioApproachesOne) {
    double prev_gap = std::numeric_limits<double>::infinity();
    for (double sz2 : {1e-2, 1e-4, 1e-6}) {
        const ExponentReport r = efn_closed_form(P(2, 1, sz2, 0.6));
        const double gap = std::abs(r.q_star / sz2 - 1.0);
        EXPECT_LT(gap, prev_gap);
        prev_gap = gap;
    }
    EXPECT_LT(prev_gap, 1e-3);
}

TEST(Thresholds, Values) {
    const PositivityThresholds t = positivity_thresholds(0.75, 1.0);
    EXPECT_NEAR(t.lambda1, 0.69314718055994531, 1e-15);
    EXPECT_NEAR(t.lambda2, 0.27980789396771134, 1e-15);
    EXPECT_TRUE(std::isinf(positivity_thresholds(1.0, 1.0).lambda1));
    EXPECT_TRUE(std::isinf(positivity_thresholds(3.0, 1.0).lambda1));
    for (double d = 0.01; d < 1.0; d += 0.01) {
        const PositivityThresholds u = positivity_thresholds(d, 1.0);
        EXPECT_GT(u.lambda1, u.lambda2);
    }
}

TEST(Thresholds, AttackFreeExponentVanishesAtLambda1) {
    const PositivityThresholds t = positivity_thresholds(0.75, 1.0);
    EXPECT_GT(efn_attack_free(0.75, 1, t.lambda1 - 1e-6).e_fn, 0.0);
    EXPECT_EQ(efn_attack_free(0.75, 1, t.lambda1 + 1e-6).e_fn, 0.0);
    EXPECT_LT(efn_attack_free(0.75, 1, t.lambda1 - 1e-6).e_fn, 1e-9);
}

TEST(Oracle, MatchesClosedFormOnGrid) {
    const auto grid = validation_grid();
    EXPECT_EQ(grid.size(), 48u);
    const OracleComparison cmp = compare_with_oracle(grid);
    EXPECT_EQ(cmp.points, 48u);
    EXPECT_LT(cmp.max_abs_diff, 1e-6);
}

TEST(Oracle, ZeroWhenFeasible) {
    const ExponentReport r = efn_numeric_oracle(P(1, 1, 1, 2));
    EXPECT_EQ(r.e_fn, 0.0);
    EXPECT_EQ(r.method, ExponentMethod::numeric_oracle);
}

TEST(Oracle, ToleranceAndDomain) {
    EXPECT_THROW(efn_numeric_oracle(P(2, 1, 0.5, 0.6), 0.0), ParameterError);
    EXPECT_THROW(efn_numeric_oracle(P(2, 1, 0.5, 0.6), 1e-2), ParameterError);
    EXPECT_THROW(efn_numeric_oracle(P(2, 1, 0.0, 0.6)), ParameterError);
}

TEST(Oracle, IterationCapIsReported) {
    EXPECT_THROW(efn_numeric_oracle(P(2, 1, 0.52, 0.6), 1e-12, 5), OracleError);
}

TEST(Oracle, ReducedObjectiveConvex) {
    const SystemParams p = P(2, 1, 0.3, 0.4);
    const DetectionGeometry g = derive_geometry(p.fp_exponent);
    const double hi = p.distortion / g.cos2_beta;
    const double h = hi / 2000;
    for (int i = 1; i < 1999; ++i) {
        const double r = i * h;
        const double second = reduced_objective(r - h, p, g) - 2 * reduced_objective(r, p, g) +
                              reduced_objective(r + h, p, g);
        EXPECT_GE(second, -1e-12) << r;
    }
}

TEST(Grid, RqGridAgrees) {
    for (const SystemParams& p : {P(2, 1, 0.52, 0.6), P(1, 1, 0.1, 0.3), P(0.5, 1, 0.1, 0.1)}) {
        // The minimum sits on q = T1(r), so the grid error is linear in the q spacing.
        const GridMinimum m = efn_grid_rq(p, {1000, 4000});
        const double e = efn_closed_form(p).e_fn;
        EXPECT_GE(m.value, e - 1e-12);
        EXPECT_NEAR(m.value, e, 5e-3 * std::max(0.1, e));
    }
}

TEST(Grid, AngleMinimumAtZero) {
    for (const SystemParams& p : {P(2, 1, 0.52, 0.6), P(1, 1, 0.1, 0.3), P(3, 1, 0.8, 0.2), P(0.5, 1, 0.1, 0.1)}) {
        const GridMinimum m = efn_grid_r_alpha(p, {300, 201});
        EXPECT_NEAR(m.alpha, 0.0, 1e-12);
        EXPECT_NEAR(m.value, efn_closed_form(p).e_fn, 2e-3 * std::max(0.1, efn_closed_form(p).e_fn));
    }
}

TEST(Grid, SerialEqualsParallel) {
    const SystemParams p = P(2, 1, 0.3, 0.5);
    const GridMinimum a = efn_grid_rq(p, {150, 170}, Execution::serial);
    const GridMinimum b = efn_grid_rq(p, {150, 170}, Execution::parallel);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.r, b.r);
    EXPECT_EQ(a.q, b.q);
    const GridMinimum c = efn_grid_r_alpha(p, {120, 61}, Execution::serial);
    const GridMinimum d = efn_grid_r_alpha(p, {120, 61}, Execution::parallel);
    EXPECT_EQ(c.value, d.value);
    EXPECT_EQ(c.alpha, d.alpha);
}

TEST(Grid, FixedDisplacementNotAboveClosedForm) {
    // Freezing v at v*(r*) lets the minimiser pick other r with a weaker T1.
    const SystemParams p = P(2, 1, 0.52, 0.6);
    const DetectionGeometry g = derive_geometry(p.fp_exponent);
    const ExponentReport r = efn_closed_form(p);
    const Displacement v = optimal_displacement(r.r_star, 0.0, p.distortion, g);
    const GridMinimum m = efn_grid_fixed_displacement(p, v, {400, 101});
    EXPECT_LE(m.value, r.e_fn + 1e-4);
}

TEST(Monotonicity, Ladders) {
    auto e = [](double d, double sx2, double sz2, double lambda) {
        return efn_closed_form(P(d, sx2, sz2, lambda)).e_fn;
    };
    for (double sz2 : {0.0, 0.1, 0.5, 1.0, 2.0}) {
        double prev = e(2, 1, sz2, 0.01);
        for (double lambda = 0.02; lambda <= 1.5; lambda += 0.01) {
            const double v = e(2, 1, sz2, lambda);
            EXPECT_LE(v, prev + 1e-12);
            prev = v;
        }
    }
    for (double d : {0.5, 1.0, 2.0}) {
        double prev = e(d, 1, 0.01, 0.1);
        for (double sz2 = 0.02; sz2 <= 4.0; sz2 += 0.02) {
            const double v = e(d, 1, sz2, 0.1);
            EXPECT_LE(v, prev + 1e-12);
            prev = v;
        }
        prev = e(d, 0.01, 1, 0.1);
        for (double sx2 = 0.02; sx2 <= 4.0; sx2 += 0.02) {
            const double v = e(d, sx2, 1, 0.1);
            EXPECT_LE(v, prev + 1e-12);
            prev = v;
        }
    }
    for (double sz2 : {0.0, 0.3, 1.0}) {
        double prev = e(0.05, 1, sz2, 0.3);
        for (double d = 0.1; d <= 5.0; d += 0.05) {
            const double v = e(d, 1, sz2, 0.3);
            EXPECT_GE(v, prev - 1e-12);
            prev = v;
        }
    }
}

TEST(Continuity, AcrossPositivityThreshold) {
    // e_fn(λ) approaches 0 as λ approaches the value where it vanishes.
    const double sz2 = 0.5;
    double lo = 0.01, hi = 3.0;
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        (efn_closed_form(P(2, 1, sz2, mid)).e_fn > 0 ? lo : hi) = mid;
    }
    EXPECT_LT(efn_closed_form(P(2, 1, sz2, lo)).e_fn, 1e-9);
    EXPECT_EQ(efn_closed_form(P(2, 1, sz2, hi + 1e-9)).e_fn, 0.0);
}

TEST(Names, Strings) {
    EXPECT_STREQ(to_string(ExponentMethod::closed_form), "closed-form");
    EXPECT_STREQ(to_string(ExponentMethod::attack_free), "attack-free");
    EXPECT_STREQ(to_string(ExponentMethod::numeric_oracle), "numeric-oracle");
    EXPECT_STREQ(to_string(ZeroReason::global_min_feasible), "global-min-feasible");
    EXPECT_STREQ(to_string(ZeroReason::insufficient_distortion), "insufficient-distortion");
}

}  // namespace

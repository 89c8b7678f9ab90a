#include "owm/model.hpp"
#include "owm/random.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace {

using namespace owm;

std::vector<double> gaussian_vector(std::size_t n, std::uint64_t seed) {
    GaussianStream g(seed);
    std::vector<double> v(n);
    g.fill_normal(v, 1.0);
    return v;
}

TEST(SystemParams, AcceptsValidTuple) {
    const SystemParams p = SystemParams::make(1.0, 0.0, 2.0, 0.6);
    EXPECT_DOUBLE_EQ(p.distortion, 2.0);
}

TEST(SystemParams, RejectsOutOfDomain) {
    const double inf = std::numeric_limits<double>::infinity();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(SystemParams::make(0.0, 0.0, 1.0, 0.1), ParameterError);
    EXPECT_THROW(SystemParams::make(1.0, -1e-9, 1.0, 0.1), ParameterError);
    EXPECT_THROW(SystemParams::make(1.0, 0.0, 0.0, 0.1), ParameterError);
    EXPECT_THROW(SystemParams::make(1.0, 0.0, 1.0, 0.0), ParameterError);
    EXPECT_THROW(SystemParams::make(inf, 0.0, 1.0, 0.1), ParameterError);
    EXPECT_THROW(SystemParams::make(1.0, nan, 1.0, 0.1), ParameterError);
}

TEST(Geometry, FrozenValues) {
    // mpmath, 30 digits.
    const DetectionGeometry g = derive_geometry(0.6);
    EXPECT_NEAR(g.beta, 0.58094199372065198, 1e-15);
    EXPECT_NEAR(g.corr_threshold, 0.83594604376586285, 1e-15);
    EXPECT_NEAR(g.cos2_beta, 0.69880578808779789, 1e-15);
    EXPECT_NEAR(derive_geometry(0.1).corr_threshold, 0.42575726291164799, 1e-15);
}

TEST(Geometry, IdentitiesOnGrid) {
    for (double lambda = 1e-3; lambda <= 10.0; lambda *= 1.37) {
        const DetectionGeometry g = derive_geometry(lambda);
        EXPECT_NEAR(g.sin2_beta + g.cos2_beta, 1.0, 1e-12);
        EXPECT_NEAR(std::cos(g.beta) * std::cos(g.beta), g.cos2_beta, 1e-12);
        EXPECT_NEAR(std::sin(g.beta), std::exp(-lambda), 1e-12);
        EXPECT_GT(g.beta, 0.0);
        EXPECT_LT(g.beta, std::numbers::pi / 2);
    }
}

TEST(Geometry, Monotone) {
    DetectionGeometry prev = derive_geometry(1e-3);
    for (double lambda = 2e-3; lambda <= 10.0; lambda *= 1.1) {
        const DetectionGeometry g = derive_geometry(lambda);
        EXPECT_GT(g.corr_threshold, prev.corr_threshold);
        EXPECT_LT(g.beta, prev.beta);
        prev = g;
    }
}

TEST(Geometry, SmallLambdaLimit) {
    const DetectionGeometry g = derive_geometry(1e-12);
    EXPECT_NEAR(g.beta, std::numbers::pi / 2, 1e-5);
    EXPECT_LT(g.corr_threshold, 1e-5);
}

TEST(Geometry, RejectsBadLambda) {
    EXPECT_THROW(derive_geometry(0.0), ParameterError);
    EXPECT_THROW(derive_geometry(-1.0), ParameterError);
    EXPECT_THROW(derive_geometry(std::numeric_limits<double>::infinity()), ParameterError);
}

TEST(Watermark, Deterministic) {
    const auto a = generate_watermark(8, 42);
    const auto b = generate_watermark(8, 42);
    ASSERT_EQ(a.size(), 8u);
    for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(a[i], b[i]);
    EXPECT_EQ(a.seed(), 42u);
}

TEST(Watermark, ComponentsAndBalance) {
    const std::size_t n = 100000;
    const auto u = generate_watermark(n, 9001);
    double sum = 0.0;
    double energy = 0.0;
    for (double v : u.values()) {
        ASSERT_TRUE(v == 1.0 || v == -1.0);
        sum += v;
        energy += v * v;
    }
    EXPECT_EQ(energy, static_cast<double>(n));
    EXPECT_LT(std::abs(sum / n), 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST(Watermark, SingleComponent) {
    const auto u = generate_watermark(1, 3);
    EXPECT_TRUE(u[0] == 1.0 || u[0] == -1.0);
}

TEST(Watermark, ZeroLengthRejected) { EXPECT_THROW(generate_watermark(0, 1), ParameterError); }

TEST(Watermark, FillMatchesGenerate) {
    std::vector<double> buf(200);
    fill_watermark(buf, 77);
    const auto u = generate_watermark(200, 77);
    for (std::size_t i = 0; i < 200; ++i) EXPECT_EQ(buf[i], u[i]);
}

TEST(Watermark, BitLayoutIsMt19937) {
    std::mt19937_64 engine(5);
    const std::uint64_t word = engine();
    const auto u = generate_watermark(64, 5);
    for (int i = 0; i < 64; ++i) EXPECT_EQ(u[i], ((word >> i) & 1U) ? 1.0 : -1.0);
}

TEST(Watermark, FromValuesValidates) {
    EXPECT_NO_THROW(WatermarkSequence::from_values({1.0, -1.0}));
    EXPECT_THROW(WatermarkSequence::from_values({1.0, 0.5}), ParameterError);
    EXPECT_THROW(WatermarkSequence::from_values({}), ParameterError);
    const auto u = WatermarkSequence::from_values({1.0, -1.0});
    EXPECT_EQ(u.negated()[0], -1.0);
    EXPECT_EQ(u.negated()[1], 1.0);
}

TEST(PlaneCoordinates, AlignedDisplacement) {
    const auto u = generate_watermark(16, 1);
    const auto x = gaussian_vector(16, 2);
    std::vector<double> w(16);
    const double c = 0.7;
    // w = c * sqrt(n) * e1 has per-dimension coordinate c.
    for (std::size_t i = 0; i < 16; ++i) w[i] = c * u[i];
    const PlaneCoordinates pc = to_plane_coordinates(HostSignal{x}, u, w);
    EXPECT_NEAR(pc.v1, c, 1e-12);
    EXPECT_NEAR(pc.v2, 0.0, 1e-12);
    EXPECT_EQ(pc.v3, 0.0);
}

TEST(PlaneCoordinates, ZeroDisplacement) {
    const auto u = generate_watermark(16, 1);
    const auto x = gaussian_vector(16, 2);
    const PlaneCoordinates pc = to_plane_coordinates(HostSignal{x}, u, std::vector<double>(16, 0.0));
    EXPECT_EQ(pc.v1, 0.0);
    EXPECT_EQ(pc.v2, 0.0);
    EXPECT_EQ(pc.v3, 0.0);
}

TEST(PlaneCoordinates, HostGeometry) {
    const auto u = generate_watermark(256, 11);
    const auto x = gaussian_vector(256, 12);
    const PlaneCoordinates pc = to_plane_coordinates(HostSignal{x}, u, std::vector<double>(256, 0.0));
    EXPECT_NEAR(pc.r, squared_norm(x) / 256.0, 1e-14);
    EXPECT_NEAR(std::sin(pc.alpha), dot(x, u.values()) / std::sqrt(squared_norm(x) * 256.0), 1e-12);
    EXPECT_LE(std::abs(pc.alpha), std::numbers::pi / 2);
}

TEST(PlaneCoordinates, ZeroHostHasZeroAngle) {
    const auto u = generate_watermark(8, 1);
    const PlaneCoordinates pc =
        to_plane_coordinates(HostSignal{std::vector<double>(8, 0.0)}, u, std::vector<double>(8, 0.0));
    EXPECT_EQ(pc.r, 0.0);
    EXPECT_EQ(pc.alpha, 0.0);
}

TEST(PlaneCoordinates, RoundTrip) {
    std::uint64_t seed = 100;
    for (std::size_t n : {3u, 4u, 16u, 256u}) {
        for (int rep = 0; rep < 50; ++rep) {
            const auto u = generate_watermark(n, ++seed);
            const auto x = gaussian_vector(n, ++seed);
            const auto w = gaussian_vector(n, ++seed);
            const PlaneFrame frame(x, u, w);
            const PlaneCoordinates& pc = frame.coordinates();
            EXPECT_GE(pc.v3, 0.0);
            const auto back = frame.reconstruct(pc.v1, pc.v2, pc.v3);
            double err = 0.0;
            for (std::size_t i = 0; i < n; ++i) err += (back[i] - w[i]) * (back[i] - w[i]);
            EXPECT_LT(std::sqrt(err / squared_norm(w)), 1e-9) << "n=" << n;
        }
    }
}

TEST(PlaneCoordinates, FrameIsOrthonormal) {
    const auto u = generate_watermark(32, 5);
    const auto x = gaussian_vector(32, 6);
    const auto w = gaussian_vector(32, 7);
    const PlaneFrame frame(x, u, w);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            EXPECT_NEAR(dot(frame.axis(a), frame.axis(b)), a == b ? 1.0 : 0.0, 1e-12);
}

TEST(PlaneCoordinates, InPlaneDisplacementHasZeroV3) {
    const auto u = generate_watermark(64, 8);
    const auto x = gaussian_vector(64, 9);
    std::vector<double> w(64);
    for (std::size_t i = 0; i < 64; ++i) w[i] = 0.3 * x[i] - 1.1 * u[i];
    EXPECT_EQ(to_plane_coordinates(HostSignal{x}, u, w).v3, 0.0);
}

TEST(PlaneCoordinates, HostParallelToWatermark) {
    const auto u = generate_watermark(16, 3);
    std::vector<double> x(u.values().begin(), u.values().end());
    for (double& v : x) v *= -2.0;
    const auto w = gaussian_vector(16, 4);
    const PlaneFrame frame(x, u, w);
    EXPECT_NEAR(frame.coordinates().alpha, -std::numbers::pi / 2, 1e-12);
    const auto back = frame.reconstruct(frame.coordinates().v1, frame.coordinates().v2,
                                        frame.coordinates().v3);
    for (std::size_t i = 0; i < 16; ++i) EXPECT_NEAR(back[i], w[i], 1e-9);
}

TEST(PlaneCoordinates, LengthMismatch) {
    const auto u = generate_watermark(4, 1);
    EXPECT_THROW(to_plane_coordinates(HostSignal{std::vector<double>(5, 1.0)}, u,
                                      std::vector<double>(4, 0.0)),
                 ParameterError);
    EXPECT_THROW(to_plane_coordinates(HostSignal{std::vector<double>(4, 1.0)}, u,
                                      std::vector<double>(3, 0.0)),
                 ParameterError);
}

TEST(Random, DeriveSeedSeparatesStreams) {
    EXPECT_NE(derive_seed(1, 0, 1), derive_seed(1, 0, 2));
    EXPECT_NE(derive_seed(1, 0, 1), derive_seed(1, 1, 1));
    EXPECT_NE(derive_seed(1, 0, 1), derive_seed(2, 0, 1));
    EXPECT_EQ(derive_seed(1, 5, 1), derive_seed(1, 5, 1));
}

TEST(Random, SplitMixReference) {
    // First output of the reference splitmix64 with state 0.
    EXPECT_EQ(mix64(0), 0xE220A8397B1DCDAFULL);
}

TEST(Random, NormalMoments) {
    GaussianStream g(2024);
    const int m = 400000;
    double s1 = 0.0, s2 = 0.0, s4 = 0.0;
    for (int i = 0; i < m; ++i) {
        const double z = g.normal();
        s1 += z;
        s2 += z * z;
        s4 += z * z * z * z;
    }
    EXPECT_NEAR(s1 / m, 0.0, 5.0 / std::sqrt(m));
    EXPECT_NEAR(s2 / m, 1.0, 5.0 * std::sqrt(2.0 / m));
    EXPECT_NEAR(s4 / m, 3.0, 5.0 * std::sqrt(96.0 / m));
}

TEST(Random, UniformRanges) {
    GaussianStream g(1);
    for (int i = 0; i < 100000; ++i) {
        const double a = g.uniform();
        const double b = g.uniform_open_closed();
        ASSERT_GE(a, 0.0);
        ASSERT_LT(a, 1.0);
        ASSERT_GT(b, 0.0);
        ASSERT_LE(b, 1.0);
    }
}

}  // namespace

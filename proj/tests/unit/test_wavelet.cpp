#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "oracles.hpp"
#include "qrskit/wavelet.hpp"

namespace wv = qrskit::wavelet;
using qrskit::Signal;
using qrskit::testing::max_abs_diff;
using qrskit::testing::random_signal;
using qrskit::testing::relative_error;
using qrskit::testing::sum_squares;

namespace {

Signal make(std::vector<double> x, double rate = 360.0) { return Signal{std::move(x), rate, "t"}; }

// Deepest level count for which every level's input length is even.
int even_depth(std::size_t n, std::size_t taps, int cap) {
    int depth = 0;
    while (depth < cap && n >= taps && n % 2 == 0) {
        ++depth;
        n /= 2;
    }
    return depth;
}

}  // namespace

TEST(Wavelet, ConstantSignalHasZeroDetails) {
    const auto dec = wv::dwt_decompose(make(std::vector<double>(64, 5.0)), wv::daubechies_filter(6), 3);
    ASSERT_EQ(dec.levels(), 3);
    for (int level = 1; level <= 3; ++level) {
        for (double d : dec.detail(level)) {
            EXPECT_NEAR(d, 0.0, 1e-12);
        }
    }
}

TEST(Wavelet, HaarDetailIsScaledPairDifference) {
    const auto x = random_signal(32, 4);
    const auto dec = wv::dwt_decompose(make(x), wv::daubechies_filter(1), 1);
    const auto& d = dec.detail(1);
    ASSERT_EQ(d.size(), 16u);
    for (std::size_t k = 0; k < 16; ++k) {
        EXPECT_NEAR(d[k], (x[2 * k] - x[2 * k + 1]) / std::sqrt(2.0), 1e-15);
    }
}

TEST(Wavelet, ImpulseMatchesAnalysisMatrix) {
    const auto& f = wv::daubechies_filter(6);
    const std::size_t n = 32;
    std::vector<double> impulse(n, 0.0);
    impulse[7] = 1.0;

    const auto level1 = qrskit::testing::periodic_analysis_matrix(f.lowpass, f.highpass, n);
    const auto level2 = qrskit::testing::periodic_analysis_matrix(f.lowpass, f.highpass, n / 2);
    const auto y1 = qrskit::testing::matvec(level1, impulse);
    const std::vector<double> a1(y1.begin(), y1.begin() + n / 2);
    const std::vector<double> d1(y1.begin() + n / 2, y1.end());
    const auto y2 = qrskit::testing::matvec(level2, a1);
    const std::vector<double> a2(y2.begin(), y2.begin() + n / 4);
    const std::vector<double> d2(y2.begin() + n / 4, y2.end());

    const auto dec = wv::dwt_decompose(make(impulse), f, 2);
    EXPECT_LT(max_abs_diff(dec.detail(1), d1), 1e-14);
    EXPECT_LT(max_abs_diff(dec.detail(2), d2), 1e-14);
    EXPECT_LT(max_abs_diff(dec.approximation(2), a2), 1e-14);
}

TEST(Wavelet, DetailProjectionMatchesSynthesisMatrix) {
    const auto& f = wv::daubechies_filter(1);
    const std::size_t n = 16;
    std::vector<double> impulse(n, 0.0);
    impulse[5] = 1.0;
    const auto analysis = qrskit::testing::periodic_analysis_matrix(f.lowpass, f.highpass, n);
    const auto coeffs = qrskit::testing::matvec(analysis, impulse);
    std::vector<double> detail_only(n, 0.0);
    for (std::size_t k = n / 2; k < n; ++k) {
        detail_only[k] = coeffs[k];
    }
    const auto expected = qrskit::testing::matvec(qrskit::testing::transpose(analysis), detail_only);

    const auto dec = wv::dwt_decompose(make(impulse), f, 1);
    const auto projected = wv::reconstruct_detail(dec, 1);
    ASSERT_EQ(projected.size(), n);
    EXPECT_LT(max_abs_diff(projected.samples, expected), 1e-15);
}

class WaveletRoundTrip : public ::testing::TestWithParam<std::tuple<int, std::size_t>> {};

TEST_P(WaveletRoundTrip, PerfectReconstructionPeriodic) {
    const auto [order, n] = GetParam();
    const auto& f = wv::daubechies_filter(order);
    const auto x = random_signal(n, 1000 * order + n);
    const int depth = wv::max_levels(n, f.length(), wv::BoundaryMode::periodic, 6);
    ASSERT_GE(depth, 1);
    const auto dec = wv::dwt_decompose(make(x), f, depth);
    const auto back = wv::reconstruct(dec);
    ASSERT_EQ(back.size(), n);
    EXPECT_LT(relative_error(back.samples, x), 1e-10);
}

TEST_P(WaveletRoundTrip, PerfectReconstructionSymmetric) {
    const auto [order, n] = GetParam();
    const auto& f = wv::daubechies_filter(order);
    const auto x = random_signal(n, 77 * order + n);
    const int depth = wv::max_levels(n, f.length(), wv::BoundaryMode::symmetric, 6);
    ASSERT_GE(depth, 1);
    const auto dec = wv::dwt_decompose(make(x), f, depth, wv::BoundaryMode::symmetric);
    const auto back = wv::reconstruct(dec);
    ASSERT_EQ(back.size(), n);
    EXPECT_LT(relative_error(back.samples, x), 1e-10);
}

TEST_P(WaveletRoundTrip, EnergyConservedAtEvenDepths) {
    const auto [order, n] = GetParam();
    const auto& f = wv::daubechies_filter(order);
    const int depth = even_depth(n, f.length(), 6);
    if (depth == 0) {
        GTEST_SKIP() << "no level with an even input";
    }
    const auto x = random_signal(n, 31 * order + n);
    const auto dec = wv::dwt_decompose(make(x), f, depth);
    double energy = sum_squares(dec.approximations.back());
    for (const auto& d : dec.details) {
        energy += sum_squares(d);
    }
    const double reference = sum_squares(x);
    EXPECT_LT(std::abs(energy - reference) / reference, 1e-9);
}

TEST_P(WaveletRoundTrip, Linear) {
    const auto [order, n] = GetParam();
    const auto& f = wv::daubechies_filter(order);
    const int depth = wv::max_levels(n, f.length(), wv::BoundaryMode::periodic, 4);
    const auto x = random_signal(n, 5);
    const auto y = random_signal(n, 6);
    const double alpha = 2.5;
    const double beta = -0.75;
    std::vector<double> mix(n);
    for (std::size_t i = 0; i < n; ++i) {
        mix[i] = alpha * x[i] + beta * y[i];
    }
    const auto dx = wv::dwt_decompose(make(x), f, depth);
    const auto dy = wv::dwt_decompose(make(y), f, depth);
    const auto dm = wv::dwt_decompose(make(mix), f, depth);
    for (int level = 1; level <= depth; ++level) {
        const auto& a = dx.detail(level);
        const auto& b = dy.detail(level);
        const auto& m = dm.detail(level);
        for (std::size_t k = 0; k < m.size(); ++k) {
            EXPECT_NEAR(m[k], alpha * a[k] + beta * b[k], 1e-10);
        }
    }
}

INSTANTIATE_TEST_SUITE_P(OrdersAndLengths, WaveletRoundTrip,
                         ::testing::Combine(::testing::Range(1, 9),
                                            ::testing::Values<std::size_t>(64, 100, 256, 1000)));

TEST(Wavelet, CubicAnnihilatedByDb4Interior) {
    const std::size_t n = 256;
    const auto& f = wv::daubechies_filter(4);
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / n;
        x[i] = 1.0 - 2.0 * t + 3.0 * t * t - 0.5 * t * t * t;
    }
    const auto dec = wv::dwt_decompose(make(x), f, 1);
    const auto& d = dec.detail(1);
    std::size_t checked = 0;
    for (std::size_t k = 0; 2 * k + f.length() <= n; ++k) {
        EXPECT_NEAR(d[k], 0.0, 1e-8) << "k=" << k;
        ++checked;
    }
    EXPECT_GT(checked, 100u);
    // Wrap-around coefficients see the discontinuity and are not small.
    EXPECT_GT(std::abs(d.back()), 1e-3);
}

TEST(Wavelet, OddLengthsKeepCeilHalfInPeriodicMode) {
    EXPECT_EQ(wv::coefficient_count(101, 12, wv::BoundaryMode::periodic), 51u);
    EXPECT_EQ(wv::coefficient_count(100, 12, wv::BoundaryMode::periodic), 50u);
    EXPECT_EQ(wv::coefficient_count(100, 12, wv::BoundaryMode::symmetric), 55u);
}

TEST(Wavelet, ZeroDetailProjectsToZero) {
    const auto x = random_signal(256, 8);
    auto dec = wv::dwt_decompose(make(x), wv::daubechies_filter(6), 3);
    for (double& d : dec.details[1]) {
        d = 0.0;
    }
    for (double v : wv::reconstruct_detail(dec, 2).samples) {
        EXPECT_EQ(v, 0.0);
    }
}

TEST(Wavelet, DetailsAndApproximationSumToSignal) {
    const auto x = random_signal(500, 12);
    const auto dec = wv::dwt_decompose(make(x), wv::daubechies_filter(6), 4);
    std::vector<double> sum = wv::reconstruct_approximation(dec).samples;
    for (int level = 1; level <= 4; ++level) {
        const auto part = wv::reconstruct_detail(dec, level).samples;
        for (std::size_t i = 0; i < sum.size(); ++i) {
            sum[i] += part[i];
        }
    }
    EXPECT_LT(relative_error(sum, x), 1e-10);
}

TEST(Wavelet, RejectsBadArguments) {
    const auto& f = wv::daubechies_filter(6);
    EXPECT_THROW(wv::dwt_decompose(make(random_signal(64, 1)), f, 0), std::invalid_argument);
    EXPECT_THROW(wv::dwt_decompose(make(random_signal(11, 1)), f, 1), std::invalid_argument);
    EXPECT_THROW(wv::dwt_decompose(make(random_signal(64, 1)), f, 8), std::invalid_argument);
    const auto dec = wv::dwt_decompose(make(random_signal(64, 1)), f, 2);
    EXPECT_THROW(wv::reconstruct_detail(dec, 0), std::invalid_argument);
    EXPECT_THROW(wv::reconstruct_detail(dec, 3), std::invalid_argument);
    EXPECT_THROW(dec.detail(3), std::invalid_argument);
}

TEST(Wavelet, MaxLevelsForEcgLengths) {
    // Eight db6 levels need roughly 12 * 2^7 samples.
    EXPECT_EQ(wv::max_levels(3600, 12, wv::BoundaryMode::periodic, 8), 8);
    EXPECT_LT(wv::max_levels(1000, 12, wv::BoundaryMode::periodic, 8), 8);
}

TEST(Wavelet, KernelTablesAgree) {
    const auto x = random_signal(3001, 21);
    const auto& f = wv::daubechies_filter(6);
    for (const auto* table : qrskit::kernels::available_tables()) {
        for (auto mode : {wv::BoundaryMode::periodic, wv::BoundaryMode::symmetric}) {
            const auto ref = wv::dwt_decompose(make(x), f, 5, mode, qrskit::kernels::scalar_table());
            const auto alt = wv::dwt_decompose(make(x), f, 5, mode, *table);
            EXPECT_EQ(ref.details, alt.details);
            EXPECT_EQ(ref.approximations, alt.approximations);
            EXPECT_EQ(wv::reconstruct(ref, qrskit::kernels::scalar_table()).samples,
                      wv::reconstruct(alt, *table).samples);
        }
    }
}

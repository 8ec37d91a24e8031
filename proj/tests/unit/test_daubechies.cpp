#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "qrskit/wavelet.hpp"

using qrskit::wavelet::daubechies_filter;

TEST(Daubechies, HaarIsOrderOne) {
    const auto& f = daubechies_filter(1);
    ASSERT_EQ(f.lowpass.size(), 2u);
    EXPECT_NEAR(f.lowpass[0], 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(f.lowpass[1], 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(f.highpass[0], 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(f.highpass[1], -1.0 / std::sqrt(2.0), 1e-15);
}

// Closed-form solution of the two-vanishing-moment orthogonality system.
TEST(Daubechies, OrderTwoMatchesClosedForm) {
    const double s3 = std::sqrt(3.0);
    const double d = 4.0 * std::sqrt(2.0);
    const double expected[] = {(1 + s3) / d, (3 + s3) / d, (3 - s3) / d, (1 - s3) / d};
    const auto& f = daubechies_filter(2);
    ASSERT_EQ(f.lowpass.size(), 4u);
    for (std::size_t k = 0; k < 4; ++k) {
        EXPECT_NEAR(f.lowpass[k], expected[k], 1e-14) << "tap " << k;
    }
}

class DaubechiesInvariants : public ::testing::TestWithParam<int> {};

TEST_P(DaubechiesInvariants, OrthonormalQuadratureMirrorPair) {
    const int order = GetParam();
    const auto& f = daubechies_filter(order);
    const std::size_t taps = f.length();
    ASSERT_EQ(taps, static_cast<std::size_t>(2 * order));
    ASSERT_EQ(f.highpass.size(), taps);

    const double sum = std::accumulate(f.lowpass.begin(), f.lowpass.end(), 0.0);
    EXPECT_NEAR(sum, std::sqrt(2.0), 1e-12);

    double energy = 0.0;
    for (double h : f.lowpass) {
        energy += h * h;
    }
    EXPECT_NEAR(energy, 1.0, 1e-12);

    for (std::size_t m = 1; 2 * m < taps; ++m) {
        double acc = 0.0;
        for (std::size_t k = 0; k + 2 * m < taps; ++k) {
            acc += f.lowpass[k] * f.lowpass[k + 2 * m];
        }
        EXPECT_NEAR(acc, 0.0, 1e-10) << "shift " << 2 * m;
    }

    for (std::size_t k = 0; k < taps; ++k) {
        const double sign = k % 2 == 0 ? 1.0 : -1.0;
        EXPECT_EQ(f.highpass[k], sign * f.lowpass[taps - 1 - k]);
    }
}

// dbN has N vanishing moments: sum_k k^m highpass[k] = 0 for m < N.
TEST_P(DaubechiesInvariants, VanishingMoments) {
    const int order = GetParam();
    const auto& f = daubechies_filter(order);
    for (int m = 0; m < order; ++m) {
        long double acc = 0;
        long double scale = 0;
        for (std::size_t k = 0; k < f.length(); ++k) {
            const long double term = std::pow(static_cast<long double>(k), m) * f.highpass[k];
            acc += term;
            scale += std::abs(term);
        }
        EXPECT_LT(std::abs(static_cast<double>(acc / scale)), 1e-10) << "moment " << m;
    }
}

// Minimum phase: energy is front-loaded relative to the time-reversed filter.
TEST_P(DaubechiesInvariants, MinimumPhaseOrdering) {
    const auto& f = daubechies_filter(GetParam());
    double front = 0.0;
    double back = 0.0;
    const std::size_t half = f.length() / 2;
    for (std::size_t k = 0; k < half; ++k) {
        front += f.lowpass[k] * f.lowpass[k];
        back += f.lowpass[f.length() - 1 - k] * f.lowpass[f.length() - 1 - k];
    }
    EXPECT_GE(front, back);
}

INSTANTIATE_TEST_SUITE_P(AllOrders, DaubechiesInvariants, ::testing::Range(1, 9));

TEST(Daubechies, RejectsOrdersOutsideRange) {
    EXPECT_THROW(daubechies_filter(0), std::invalid_argument);
    EXPECT_THROW(daubechies_filter(9), std::invalid_argument);
}

TEST(Daubechies, DeterministicAcrossCalls) {
    const auto first = daubechies_filter(6).lowpass;
    const auto second = daubechies_filter(6).lowpass;
    EXPECT_EQ(first, second);
}

#pragma once

// Per-element reference arithmetic. SIMD variants call these for their
// remainder and edge samples so both paths share one definition of the
// accumulation order.

#include <cstddef>
#include <span>

namespace qrskit::kernels::detail {

inline double dot_stride2(const double* src, std::span<const double> taps) {
    double acc = 0.0;
    for (std::size_t i = 0; i < taps.size(); ++i) {
        acc += taps[i] * src[i];
    }
    return acc;
}

inline double dot_pair(const double* a, std::span<const double> taps_a, const double* b,
                       std::span<const double> taps_b) {
    double acc = 0.0;
    for (std::size_t t = 0; t < taps_a.size(); ++t) {
        acc += taps_a[t] * a[t];
        acc += taps_b[t] * b[t];
    }
    return acc;
}

inline double derivative_at(std::span<const double> x, std::size_t n, double scale) {
    const auto at = [&](std::ptrdiff_t i) {
        return (i < 0 || i >= static_cast<std::ptrdiff_t>(x.size())) ? 0.0 : x[static_cast<std::size_t>(i)];
    };
    const auto i = static_cast<std::ptrdiff_t>(n);
    double acc = -at(i - 2);
    acc -= 2.0 * at(i - 1);
    acc += 2.0 * at(i + 1);
    acc += at(i + 2);
    return acc * scale;
}

inline double trailing_mean_at(std::span<const double> x, std::size_t n, std::size_t width) {
    const std::size_t first = n + 1 >= width ? n + 1 - width : 0;
    double acc = 0.0;
    for (std::size_t i = first; i <= n; ++i) {
        acc += x[i];
    }
    return acc / static_cast<double>(n + 1 - first);
}

}  // namespace qrskit::kernels::detail

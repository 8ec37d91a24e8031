#include "qrskit/kernels/kernels.hpp"

#include "kernel_impl.hpp"

#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
#define QRSKIT_HAVE_AVX2_BUILD 1
#include <immintrin.h>
#else
#define QRSKIT_HAVE_AVX2_BUILD 0
#endif

namespace qrskit::kernels {

#if QRSKIT_HAVE_AVX2_BUILD

// Plain mul + add (no FMA) keeps the rounding sequence equal to the scalar table.
#define QRSKIT_AVX2 __attribute__((target("avx2")))

namespace avx2 {

constexpr std::size_t kLanes = 4;

// [s0 s1 s2 s3] [s4 s5 s6 s7] -> [s0 s2 s4 s6]
QRSKIT_AVX2 inline __m256d load_even4(const double* p) {
    const __m256d lo = _mm256_loadu_pd(p);
    const __m256d hi = _mm256_loadu_pd(p + 4);
    return _mm256_permute4x64_pd(_mm256_unpacklo_pd(lo, hi), 0b11011000);
}

QRSKIT_AVX2 void correlate_stride2(std::span<const double> src, std::span<const double> taps,
                                   std::span<double> out) {
    const std::size_t n_taps = taps.size();
    std::size_t k = 0;
    // load_even4 touches src[2k + i .. 2k + i + 7]; stay inside src.
    while (k + kLanes <= out.size() && 2 * k + n_taps + 7 <= src.size()) {
        __m256d acc = _mm256_setzero_pd();
        const double* base = src.data() + 2 * k;
        for (std::size_t i = 0; i < n_taps; ++i) {
            const __m256d t = _mm256_set1_pd(taps[i]);
            acc = _mm256_add_pd(acc, _mm256_mul_pd(t, load_even4(base + i)));
        }
        _mm256_storeu_pd(out.data() + k, acc);
        k += kLanes;
    }
    for (; k < out.size(); ++k) {
        out[k] = detail::dot_stride2(src.data() + 2 * k, taps);
    }
}

QRSKIT_AVX2 void correlate_pair(std::span<const double> a, std::span<const double> taps_a,
                                std::span<const double> b, std::span<const double> taps_b,
                                std::span<double> out) {
    const std::size_t n_taps = taps_a.size();
    std::size_t m = 0;
    for (; m + kLanes <= out.size(); m += kLanes) {
        __m256d acc = _mm256_setzero_pd();
        for (std::size_t t = 0; t < n_taps; ++t) {
            acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(taps_a[t]),
                                                   _mm256_loadu_pd(a.data() + m + t)));
            acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(taps_b[t]),
                                                   _mm256_loadu_pd(b.data() + m + t)));
        }
        _mm256_storeu_pd(out.data() + m, acc);
    }
    for (; m < out.size(); ++m) {
        out[m] = detail::dot_pair(a.data() + m, taps_a, b.data() + m, taps_b);
    }
}

QRSKIT_AVX2 void five_point_derivative(std::span<const double> x, double scale,
                                       std::span<double> out) {
    const std::size_t len = x.size();
    const std::size_t head = len < 2 ? len : 2;
    for (std::size_t n = 0; n < head; ++n) {
        out[n] = detail::derivative_at(x, n, scale);
    }
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d vscale = _mm256_set1_pd(scale);
    const __m256d sign = _mm256_set1_pd(-0.0);
    std::size_t n = head;
    for (; len >= 4 && n + kLanes + 2 <= len; n += kLanes) {
        const double* p = x.data() + n;
        __m256d acc = _mm256_xor_pd(_mm256_loadu_pd(p - 2), sign);
        acc = _mm256_sub_pd(acc, _mm256_mul_pd(two, _mm256_loadu_pd(p - 1)));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(two, _mm256_loadu_pd(p + 1)));
        acc = _mm256_add_pd(acc, _mm256_loadu_pd(p + 2));
        _mm256_storeu_pd(out.data() + n, _mm256_mul_pd(acc, vscale));
    }
    for (; n < len; ++n) {
        out[n] = detail::derivative_at(x, n, scale);
    }
}

QRSKIT_AVX2 void square(std::span<const double> x, std::span<double> out) {
    std::size_t n = 0;
    for (; n + kLanes <= x.size(); n += kLanes) {
        const __m256d v = _mm256_loadu_pd(x.data() + n);
        _mm256_storeu_pd(out.data() + n, _mm256_mul_pd(v, v));
    }
    for (; n < x.size(); ++n) {
        out[n] = x[n] * x[n];
    }
}

QRSKIT_AVX2 void trailing_mean(std::span<const double> x, std::size_t width,
                               std::span<double> out) {
    const std::size_t len = x.size();
    const std::size_t prefix = width - 1 < len ? width - 1 : len;
    for (std::size_t n = 0; n < prefix; ++n) {
        out[n] = detail::trailing_mean_at(x, n, width);
    }
    const __m256d divisor = _mm256_set1_pd(static_cast<double>(width));
    std::size_t n = prefix;
    for (; n + kLanes <= len; n += kLanes) {
        const double* first = x.data() + (n + 1 - width);
        __m256d acc = _mm256_setzero_pd();
        for (std::size_t t = 0; t < width; ++t) {
            acc = _mm256_add_pd(acc, _mm256_loadu_pd(first + t));
        }
        _mm256_storeu_pd(out.data() + n, _mm256_div_pd(acc, divisor));
    }
    for (; n < len; ++n) {
        out[n] = detail::trailing_mean_at(x, n, width);
    }
}

QRSKIT_AVX2 void product_of_sum(std::span<const double> a, std::span<const double> b,
                                std::span<const double> c, double scale, std::span<double> out) {
    const __m256d vscale = _mm256_set1_pd(scale);
    std::size_t n = 0;
    for (; n + kLanes <= a.size(); n += kLanes) {
        const __m256d sum = _mm256_add_pd(_mm256_loadu_pd(b.data() + n), _mm256_loadu_pd(c.data() + n));
        const __m256d prod = _mm256_mul_pd(_mm256_loadu_pd(a.data() + n), sum);
        _mm256_storeu_pd(out.data() + n, _mm256_mul_pd(prod, vscale));
    }
    for (; n < a.size(); ++n) {
        out[n] = a[n] * (b[n] + c[n]) * scale;
    }
}

QRSKIT_AVX2 void accumulate(std::span<const double> x, std::span<double> out) {
    std::size_t n = 0;
    for (; n + kLanes <= x.size(); n += kLanes) {
        const __m256d sum = _mm256_add_pd(_mm256_loadu_pd(out.data() + n), _mm256_loadu_pd(x.data() + n));
        _mm256_storeu_pd(out.data() + n, sum);
    }
    for (; n < x.size(); ++n) {
        out[n] += x[n];
    }
}

}  // namespace avx2

const KernelTable* avx2_table() {
    static const bool supported = __builtin_cpu_supports("avx2");
    static const KernelTable table{
        "avx2",
        &avx2::correlate_stride2,
        &avx2::correlate_pair,
        &avx2::five_point_derivative,
        &avx2::square,
        &avx2::trailing_mean,
        &avx2::product_of_sum,
        &avx2::accumulate,
    };
    return supported ? &table : nullptr;
}

#else

const KernelTable* avx2_table() { return nullptr; }

#endif

}  // namespace qrskit::kernels

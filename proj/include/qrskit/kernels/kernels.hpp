#pragma once

// Inner-loop arithmetic shared by the wavelet and detector stages.
//
// Every kernel has a scalar reference implementation and, where the CPU
// allows, a SIMD variant. Variants accumulate in the same order and avoid
// fused multiply-add so that every table produces bit-identical output; the
// equivalence tests assert exact equality, not a tolerance.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace qrskit::kernels {

struct KernelTable {
    std::string_view name;

    // out[k] = sum_i taps[i] * src[2k + i]
    // requires src.size() >= 2 * (out.size() - 1) + taps.size()
    void (*correlate_stride2)(std::span<const double> src, std::span<const double> taps,
                              std::span<double> out);

    // out[m] = sum_t (taps_a[t] * a[m + t] + taps_b[t] * b[m + t])
    // requires equal tap counts and a, b long enough for every m
    void (*correlate_pair)(std::span<const double> a, std::span<const double> taps_a,
                           std::span<const double> b, std::span<const double> taps_b,
                           std::span<double> out);

    // out[n] = scale * (-x[n-2] - 2x[n-1] + 2x[n+1] + x[n+2]), zero outside x
    void (*five_point_derivative)(std::span<const double> x, double scale, std::span<double> out);

    // out[n] = x[n]^2
    void (*square)(std::span<const double> x, std::span<double> out);

    // out[n] = mean(x[max(0, n-width+1) .. n])
    void (*trailing_mean)(std::span<const double> x, std::size_t width, std::span<double> out);

    // out[n] = a[n] * (b[n] + c[n]) * scale
    void (*product_of_sum)(std::span<const double> a, std::span<const double> b,
                           std::span<const double> c, double scale, std::span<double> out);

    // out[n] += x[n]
    void (*accumulate)(std::span<const double> x, std::span<double> out);
};

const KernelTable& scalar_table();

// nullptr when the binary or the running CPU lacks AVX2.
const KernelTable* avx2_table();

// Widest supported table, unless QRSKIT_KERNELS=scalar is set in the
// environment. Resolved once per process.
const KernelTable& active();

// Every table usable on this machine, scalar first.
std::vector<const KernelTable*> available_tables();

}  // namespace qrskit::kernels

#pragma once

// Daubechies filter banks and the multi-level Mallat decomposition.
//
// Analysis convention (periodic mode):
//
//     a[k] = sum_j lowpass[j]  * x[2k + j]
//     d[k] = sum_j highpass[j] * x[2k + j]
//
// so db1 gives d[k] = (x[2k] - x[2k+1]) / sqrt(2). Symmetric mode shifts the
// origin left by L/2 - 1 coefficients to cover the leading edge. Synthesis
// is the exact inverse of analysis in both modes.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "qrskit/kernels/kernels.hpp"
#include "qrskit/signal.hpp"

namespace qrskit::wavelet {

inline constexpr int kMinOrder = 1;
inline constexpr int kMaxOrder = 8;

struct WaveletFilter {
    int order = 0;                // dbN, N vanishing moments
    std::vector<double> lowpass;  // 2 * order taps, minimum phase
    std::vector<double> highpass; // highpass[k] = (-1)^k lowpass[2N - 1 - k]

    std::size_t length() const noexcept { return lowpass.size(); }
};

// Orthonormal dbN pair built by spectral factorization of the Daubechies
// half-band polynomial. Results are cached; throws std::invalid_argument for
// orders outside [1, 8].
const WaveletFilter& daubechies_filter(int order);

enum class BoundaryMode {
    // Circular extension; odd-length inputs are padded by repeating the last
    // sample, so each level keeps ceil(n / 2) coefficients per band.
    periodic,
    // Half-sample mirror extension; each level keeps floor((n + L - 1) / 2)
    // coefficients per band so the edges reconstruct exactly.
    symmetric,
};

std::size_t coefficient_count(std::size_t input_length, std::size_t filter_length,
                              BoundaryMode mode);

struct Subbands {
    std::vector<double> approximation;
    std::vector<double> detail;
};

// One analysis level.
Subbands analysis_step(std::span<const double> x, const WaveletFilter& filter, BoundaryMode mode,
                       const kernels::KernelTable& kernels = kernels::active());

// Inverse of analysis_step for an input of `output_length` samples.
std::vector<double> synthesis_step(std::span<const double> approximation,
                                   std::span<const double> detail, const WaveletFilter& filter,
                                   BoundaryMode mode, std::size_t output_length,
                                   const kernels::KernelTable& kernels = kernels::active());

struct Decomposition {
    WaveletFilter filter;
    BoundaryMode boundary_mode = BoundaryMode::periodic;
    double sample_rate_hz = 0.0;
    std::size_t original_length = 0;
    // input_lengths[k] is the length fed into level k + 1.
    std::vector<std::size_t> input_lengths;
    // approximations[k] and details[k] hold level k + 1.
    std::vector<std::vector<double>> approximations;
    std::vector<std::vector<double>> details;

    int levels() const noexcept { return static_cast<int>(details.size()); }
    const std::vector<double>& detail(int level) const;
    const std::vector<double>& approximation(int level) const;
};

// Largest depth (capped at `max_levels`) for which every level's input has at
// least filter_length samples.
int max_levels(std::size_t signal_length, std::size_t filter_length, BoundaryMode mode,
               int max_levels = 64);

Decomposition dwt_decompose(const Signal& signal, const WaveletFilter& filter, int levels,
                            BoundaryMode mode = BoundaryMode::periodic,
                            const kernels::KernelTable& kernels = kernels::active());

// Level-`level` detail projected back onto the original sampling grid.
Signal reconstruct_detail(const Decomposition& decomposition, int level,
                          const kernels::KernelTable& kernels = kernels::active());

// Deepest approximation projected back onto the original sampling grid.
Signal reconstruct_approximation(const Decomposition& decomposition,
                                 const kernels::KernelTable& kernels = kernels::active());

// Full inverse transform.
Signal reconstruct(const Decomposition& decomposition,
                   const kernels::KernelTable& kernels = kernels::active());

}  // namespace qrskit::wavelet

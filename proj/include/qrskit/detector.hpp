#pragma once

// QRS detection pipeline: wavelet sub-band fusion, five-point derivative,
// squaring, moving-window integration, max-normalised mean threshold, and
// amplitude-based P-QRS-T localisation on the original signal.

#include <cstddef>
#include <utility>
#include <vector>

#include "qrskit/kernels/kernels.hpp"
#include "qrskit/peaks.hpp"
#include "qrskit/signal.hpp"
#include "qrskit/wavelet.hpp"

namespace qrskit::detector {

// Offsets from R, in milliseconds, of the per-label search ranges.
struct SearchWindows {
    double q_ms = 50.0;       // Q in [R - q, R)
    double s_ms = 50.0;       // S in (R, R + s]
    double p_near_ms = 50.0;  // P in [R - p_far, R - p_near)
    double p_far_ms = 200.0;
    double t_near_ms = 100.0; // T in (R + t_near, R + t_far]
    double t_far_ms = 400.0;
};

enum class FusedSource {
    d2,  // d_mid * (d_lo + d_hi) / 2^levels
    d1,  // d_lo + d_mid + d_hi
};

struct DetectorConfig {
    int wavelet_order = 6;
    int levels = 8;
    std::vector<int> fused_levels{3, 4, 5};
    double window_ms = 150.0;
    double refractory_ms = 200.0;
    std::size_t min_run_samples = 3;
    SearchWindows search;
    wavelet::BoundaryMode boundary_mode = wavelet::BoundaryMode::periodic;
    FusedSource source = FusedSource::d2;

    std::size_t window_samples(double sample_rate_hz) const;
    std::size_t refractory_samples(double sample_rate_hz) const;
    // Throws std::invalid_argument on any violated invariant.
    void validate() const;
};

struct Window {
    std::size_t start = 0;
    std::size_t end = 0;  // inclusive

    std::size_t length() const noexcept { return end - start + 1; }
    bool operator==(const Window&) const = default;
};

struct DetectionTrace {
    Signal d1;
    Signal d2;
    Signal derivative;
    Signal squared;
    Signal integrated;
    Signal normalized;
    double threshold = 0.0;
    std::vector<Window> windows;
};

struct Detection {
    PeakSet peaks;
    DetectionTrace trace;
};

// Sum of the reconstructed details at `levels` (default 3, 4, 5).
Signal fuse_d1(const wavelet::Decomposition& decomposition, const std::vector<int>& levels = {3, 4, 5},
               const kernels::KernelTable& kernels = kernels::active());

// d_mid * (d_lo + d_hi) / 2^n over the reconstructed details, with
// {lo, mid, hi} the sorted `levels`. n must equal the decomposition depth.
Signal fuse_d2(const wavelet::Decomposition& decomposition, int n, const std::vector<int>& levels = {3, 4, 5},
               const kernels::KernelTable& kernels = kernels::active());

// y(nT) = (T/8)(-x(nT-2T) - 2x(nT-T) + 2x(nT+T) + x(nT+2T)), zero-extended.
Signal derivative_filter(const Signal& signal, const kernels::KernelTable& kernels = kernels::active());

Signal square_signal(const Signal& signal, const kernels::KernelTable& kernels = kernels::active());

// Causal trailing mean over the last `width` samples (fewer at the start).
Signal moving_window_integrate(const Signal& signal, std::size_t width,
                               const kernels::KernelTable& kernels = kernels::active());

struct Threshold {
    Signal normalized;
    double threshold = 0.0;
};

// normalized = integrated / max, threshold = max(normalized) * mean(normalized).
// Throws NoBeatsError when integrated is identically zero.
Threshold compute_threshold(const Signal& integrated);

// Runs of samples >= threshold. Runs shorter than `min_run` samples are
// dropped, then runs whose gap is below `refractory` samples are merged.
std::vector<Window> find_windows(const Signal& normalized, double threshold, std::size_t refractory,
                                 std::size_t min_run = 3);

// Labels peaks on the original signal. R is the maximum within each window
// widened on the left by the integrator width; the other labels come from
// the fixed search ranges around R.
PeakSet locate_pqrst(const Signal& original, const std::vector<Window>& windows, const DetectorConfig& config);

Detection detect(const Signal& signal, const DetectorConfig& config = {},
                 const kernels::KernelTable& kernels = kernels::active());

}  // namespace qrskit::detector

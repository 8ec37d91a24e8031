#pragma once

// Synthetic ECG with exactly known P-Q-R-S-T positions, built from Gaussian
// bumps centred on integer sample indices.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qrskit/peaks.hpp"
#include "qrskit/signal.hpp"

namespace qrskit::synth {

struct WaveShape {
    double amplitude_mv;
    double width_ms;   // Gaussian standard deviation
    double offset_ms;  // centre relative to R
};

struct SynthConfig {
    double sample_rate_hz = 360.0;
    int n_beats = 60;
    double rr_s = 0.825;
    // Standard deviation of per-beat R-R jitter; 0 gives constant spacing.
    double rr_jitter_s = 0.0;
    // Indexed by WaveLabel.
    std::array<WaveShape, 5> waves{{
        {0.25, 20.0, -160.0},  // P
        {-0.10, 8.0, -45.0},   // Q
        {1.60, 10.0, 0.0},     // R
        {-0.20, 8.0, 45.0},    // S
        {0.30, 22.0, 230.0},   // T
    }};
    double noise_std_mv = 0.0;
    std::uint64_t seed = 0;

    WaveShape& wave(WaveLabel label) { return waves[static_cast<std::size_t>(label)]; }
    const WaveShape& wave(WaveLabel label) const { return waves[static_cast<std::size_t>(label)]; }

    // Throws std::invalid_argument on any violated invariant.
    void validate() const;
};

struct GroundTruth {
    // beats[k][label] is the true sample index of that wave in beat k.
    std::vector<std::array<std::size_t, 5>> beats;

    std::vector<std::size_t> indices(WaveLabel label) const;
};

struct Synthetic {
    Signal signal;
    GroundTruth truth;
};

Synthetic generate(const SynthConfig& config);

// Sidecar: {"sample_rate_hz", "beats": [{"P","Q","R","S","T"}, ...]}.
std::string ground_truth_json(const GroundTruth& truth, double sample_rate_hz);

}  // namespace qrskit::synth

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace qrskit {

// Uniformly sampled amplitude sequence (mV). Used for the raw ECG and for
// every intermediate trace of the detector.
struct Signal {
    std::vector<double> samples;
    double sample_rate_hz = 0.0;
    std::string label;

    std::size_t size() const noexcept { return samples.size(); }
    bool empty() const noexcept { return samples.empty(); }
    double period_s() const noexcept { return 1.0 / sample_rate_hz; }
    std::span<const double> view() const noexcept { return samples; }
};

// Throws std::invalid_argument unless the rate is finite and positive.
Signal make_signal(std::vector<double> samples, double sample_rate_hz, std::string label = {});

void require_valid_rate(double sample_rate_hz);

// Same rate and label as `like`, new samples.
Signal with_samples(const Signal& like, std::vector<double> samples);

std::size_t ms_to_samples(double ms, double sample_rate_hz);

}  // namespace qrskit

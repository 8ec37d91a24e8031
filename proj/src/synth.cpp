#include "qrskit/synth.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include <json.hpp>

namespace qrskit::synth {
namespace {

// Bumps are evaluated out to this many standard deviations; exp(-72) is far
// below double resolution relative to the peak.
constexpr double kSupportSigmas = 12.0;

}  // namespace

void SynthConfig::validate() const {
    require_valid_rate(sample_rate_hz);
    if (n_beats < 1) {
        throw std::invalid_argument("n_beats must be >= 1");
    }
    if (!(rr_s > 0.0) || !std::isfinite(rr_s)) {
        throw std::invalid_argument("rr_s must be positive");
    }
    if (!(rr_jitter_s >= 0.0) || !(noise_std_mv >= 0.0)) {
        throw std::invalid_argument("rr_jitter_s and noise_std_mv must be non-negative");
    }
    double width_sum_s = 0.0;
    for (const WaveShape& w : waves) {
        if (!(w.width_ms > 0.0) || !std::isfinite(w.amplitude_mv) || !std::isfinite(w.offset_ms)) {
            throw std::invalid_argument("wave widths must be positive and shapes finite");
        }
        width_sum_s += w.width_ms / 1000.0;
    }
    if (!(rr_s > width_sum_s)) {
        throw std::invalid_argument("rr_s must exceed the sum of the wave widths");
    }
    for (std::size_t k = 1; k < waves.size(); ++k) {
        if (!(waves[k].offset_ms > waves[k - 1].offset_ms)) {
            throw std::invalid_argument("wave offsets must increase P < Q < R < S < T");
        }
    }
    if (waves[static_cast<std::size_t>(WaveLabel::R)].offset_ms != 0.0) {
        throw std::invalid_argument("the R offset must be 0");
    }
    const double span_s = (waves.back().offset_ms - waves.front().offset_ms) / 1000.0;
    if (!(rr_s > span_s)) {
        throw std::invalid_argument("rr_s must exceed the P-to-T span so beats do not interleave");
    }
}

std::vector<std::size_t> GroundTruth::indices(WaveLabel label) const {
    std::vector<std::size_t> out;
    out.reserve(beats.size());
    for (const auto& beat : beats) {
        out.push_back(beat[static_cast<std::size_t>(label)]);
    }
    return out;
}

Synthetic generate(const SynthConfig& config) {
    config.validate();
    const double fs = config.sample_rate_hz;
    std::mt19937_64 rng(config.seed);

    std::vector<double> rr(static_cast<std::size_t>(config.n_beats));
    std::normal_distribution<double> jitter(0.0, config.rr_jitter_s > 0.0 ? config.rr_jitter_s : 1.0);
    const double span_s = (config.waves.back().offset_ms - config.waves.front().offset_ms) / 1000.0;
    for (double& v : rr) {
        v = config.rr_s;
        if (config.rr_jitter_s > 0.0) {
            v = std::max(config.rr_s + jitter(rng), span_s * 1.05);
        }
    }

    // R_0 sits half an R-R after the start; R_{k+1} = R_k + round(rr_k * fs).
    std::vector<std::size_t> r_index(rr.size());
    r_index[0] = static_cast<std::size_t>(std::llround(0.5 * rr[0] * fs));
    for (std::size_t k = 1; k < rr.size(); ++k) {
        r_index[k] = r_index[k - 1] + static_cast<std::size_t>(std::llround(rr[k - 1] * fs));
    }
    const std::size_t length = r_index.back() + static_cast<std::size_t>(std::llround(0.5 * rr.back() * fs)) + 1;

    GroundTruth truth;
    truth.beats.resize(rr.size());
    std::vector<double> samples(length, 0.0);
    for (std::size_t k = 0; k < rr.size(); ++k) {
        for (WaveLabel label : kAllLabels) {
            const WaveShape& w = config.wave(label);
            const auto centre = static_cast<std::ptrdiff_t>(r_index[k]) + std::llround(w.offset_ms * fs / 1000.0);
            if (centre < 0 || centre >= static_cast<std::ptrdiff_t>(length)) {
                throw std::invalid_argument("wave " + std::string(label_name(label)) +
                                            " of beat " + std::to_string(k) + " falls outside the record");
            }
            truth.beats[k][static_cast<std::size_t>(label)] = static_cast<std::size_t>(centre);

            const double sigma = w.width_ms * fs / 1000.0;
            const auto reach = static_cast<std::ptrdiff_t>(std::ceil(kSupportSigmas * sigma));
            const std::ptrdiff_t first = std::max<std::ptrdiff_t>(0, centre - reach);
            const std::ptrdiff_t last = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(length) - 1, centre + reach);
            for (std::ptrdiff_t n = first; n <= last; ++n) {
                const double z = static_cast<double>(n - centre) / sigma;
                samples[static_cast<std::size_t>(n)] += w.amplitude_mv * std::exp(-0.5 * z * z);
            }
        }
    }

    if (config.noise_std_mv > 0.0) {
        std::normal_distribution<double> noise(0.0, config.noise_std_mv);
        for (double& v : samples) {
            v += noise(rng);
        }
    }

    Signal signal = make_signal(std::move(samples), fs, "synthetic");
    return Synthetic{std::move(signal), std::move(truth)};
}

std::string ground_truth_json(const GroundTruth& truth, double sample_rate_hz) {
    nlohmann::json beats = nlohmann::json::array();
    for (const auto& beat : truth.beats) {
        nlohmann::json entry = nlohmann::json::object();
        for (WaveLabel label : kAllLabels) {
            entry[std::string(label_name(label))] = beat[static_cast<std::size_t>(label)];
        }
        beats.push_back(std::move(entry));
    }
    return nlohmann::json{{"sample_rate_hz", sample_rate_hz}, {"beats", std::move(beats)}}.dump(2) + "\n";
}

}  // namespace qrskit::synth

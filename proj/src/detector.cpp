#include "qrskit/detector.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

#include "qrskit/errors.hpp"

namespace qrskit::detector {
namespace {

std::vector<int> sorted_levels(const std::vector<int>& levels) {
    std::vector<int> out(levels);
    std::sort(out.begin(), out.end());
    return out;
}

void require_levels_present(const wavelet::Decomposition& dec, const std::vector<int>& levels) {
    if (levels.empty()) {
        throw std::invalid_argument("no levels selected for fusion");
    }
    for (int level : levels) {
        if (level < 1 || level > dec.levels()) {
            throw std::invalid_argument("fused level " + std::to_string(level) +
                                        " missing from a " + std::to_string(dec.levels()) +
                                        "-level decomposition");
        }
    }
}

// First index of the extreme value in [first, last]; `better(a, b)` is true
// when a should replace b.
template <typename Better>
std::size_t extreme_index(std::span<const double> x, std::size_t first, std::size_t last, Better better) {
    std::size_t best = first;
    for (std::size_t i = first + 1; i <= last; ++i) {
        if (better(x[i], x[best])) {
            best = i;
        }
    }
    return best;
}

struct Range {
    std::ptrdiff_t first;
    std::ptrdiff_t last;  // inclusive
};

// Clips to [0, len). Empty ranges come back as nullopt.
std::optional<std::pair<std::size_t, std::size_t>> clip(Range r, std::size_t len) {
    const std::ptrdiff_t first = std::max<std::ptrdiff_t>(r.first, 0);
    const std::ptrdiff_t last = std::min<std::ptrdiff_t>(r.last, static_cast<std::ptrdiff_t>(len) - 1);
    if (first > last) {
        return std::nullopt;
    }
    return std::pair{static_cast<std::size_t>(first), static_cast<std::size_t>(last)};
}

std::ptrdiff_t samples(double ms, double rate) {
    return static_cast<std::ptrdiff_t>(ms_to_samples(ms, rate));
}

}  // namespace

std::size_t DetectorConfig::window_samples(double sample_rate_hz) const {
    return ms_to_samples(window_ms, sample_rate_hz);
}

std::size_t DetectorConfig::refractory_samples(double sample_rate_hz) const {
    return ms_to_samples(refractory_ms, sample_rate_hz);
}

void DetectorConfig::validate() const {
    if (wavelet_order < wavelet::kMinOrder || wavelet_order > wavelet::kMaxOrder) {
        throw std::invalid_argument("wavelet order must be in [1, 8]");
    }
    if (levels < 1) {
        throw std::invalid_argument("levels must be >= 1");
    }
    if (!(window_ms > 0.0) || !std::isfinite(window_ms)) {
        throw std::invalid_argument("window_ms must be positive");
    }
    if (!(refractory_ms > 0.0) || !std::isfinite(refractory_ms)) {
        throw std::invalid_argument("refractory_ms must be positive");
    }
    if (fused_levels.empty()) {
        throw std::invalid_argument("fused_levels must not be empty");
    }
    for (int level : fused_levels) {
        if (level < 1 || level > levels) {
            throw std::invalid_argument("fused level " + std::to_string(level) + " outside [1, " +
                                        std::to_string(levels) + "]");
        }
    }
    if (source == FusedSource::d2 && fused_levels.size() != 3) {
        throw std::invalid_argument("the D2 product needs exactly three fused levels");
    }
    const SearchWindows& s = search;
    for (double v : {s.q_ms, s.s_ms, s.p_near_ms, s.p_far_ms, s.t_near_ms, s.t_far_ms}) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument("search offsets must be finite and non-negative");
        }
    }
    if (s.p_near_ms > s.p_far_ms || s.t_near_ms > s.t_far_ms) {
        throw std::invalid_argument("search ranges must have near <= far");
    }
}

Signal fuse_d1(const wavelet::Decomposition& decomposition, const std::vector<int>& levels,
               const kernels::KernelTable& kernels) {
    require_levels_present(decomposition, levels);
    std::vector<double> sum(decomposition.original_length, 0.0);
    for (int level : sorted_levels(levels)) {
        kernels.accumulate(wavelet::reconstruct_detail(decomposition, level, kernels).samples, sum);
    }
    return Signal{std::move(sum), decomposition.sample_rate_hz, "D1"};
}

Signal fuse_d2(const wavelet::Decomposition& decomposition, int n, const std::vector<int>& levels,
               const kernels::KernelTable& kernels) {
    if (levels.size() != 3) {
        throw std::invalid_argument("the D2 product needs exactly three levels");
    }
    require_levels_present(decomposition, levels);
    if (n != decomposition.levels()) {
        throw std::invalid_argument("D2 scale exponent must equal the decomposition depth");
    }
    const std::vector<int> sorted = sorted_levels(levels);
    const Signal low = wavelet::reconstruct_detail(decomposition, sorted[0], kernels);
    const Signal mid = wavelet::reconstruct_detail(decomposition, sorted[1], kernels);
    const Signal high = wavelet::reconstruct_detail(decomposition, sorted[2], kernels);

    std::vector<double> out(decomposition.original_length);
    kernels.product_of_sum(mid.samples, low.samples, high.samples, std::ldexp(1.0, -n), out);
    return Signal{std::move(out), decomposition.sample_rate_hz, "D2"};
}

Signal derivative_filter(const Signal& signal, const kernels::KernelTable& kernels) {
    require_valid_rate(signal.sample_rate_hz);
    if (signal.size() < 5) {
        throw std::invalid_argument("derivative filter needs at least 5 samples, got " +
                                    std::to_string(signal.size()));
    }
    std::vector<double> out(signal.size());
    kernels.five_point_derivative(signal.samples, signal.period_s() / 8.0, out);
    return with_samples(signal, std::move(out));
}

Signal square_signal(const Signal& signal, const kernels::KernelTable& kernels) {
    std::vector<double> out(signal.size());
    kernels.square(signal.samples, out);
    return with_samples(signal, std::move(out));
}

Signal moving_window_integrate(const Signal& signal, std::size_t width, const kernels::KernelTable& kernels) {
    if (width < 1) {
        throw std::invalid_argument("moving window needs N >= 1");
    }
    std::vector<double> out(signal.size());
    kernels.trailing_mean(signal.samples, width, out);
    return with_samples(signal, std::move(out));
}

Threshold compute_threshold(const Signal& integrated) {
    if (integrated.empty()) {
        throw NoBeatsError("empty integrated signal");
    }
    double peak = 0.0;
    for (double v : integrated.samples) {
        if (v < 0.0 || !std::isfinite(v)) {
            throw std::invalid_argument("integrated signal must be finite and non-negative");
        }
        peak = std::max(peak, v);
    }
    if (peak == 0.0) {
        throw NoBeatsError("integrated signal is identically zero");
    }

    std::vector<double> normalized(integrated.size());
    for (std::size_t i = 0; i < normalized.size(); ++i) {
        normalized[i] = integrated.samples[i] / peak;
    }
    const double max_norm = *std::max_element(normalized.begin(), normalized.end());
    const double mean = std::accumulate(normalized.begin(), normalized.end(), 0.0) /
                        static_cast<double>(normalized.size());
    return Threshold{with_samples(integrated, std::move(normalized)), max_norm * mean};
}

std::vector<Window> find_windows(const Signal& normalized, double threshold, std::size_t refractory,
                                 std::size_t min_run) {
    if (!(threshold > 0.0 && threshold <= 1.0)) {
        throw std::invalid_argument("threshold must lie in (0, 1]");
    }

    std::vector<Window> runs;
    const std::vector<double>& x = normalized.samples;
    std::size_t i = 0;
    while (i < x.size()) {
        if (x[i] < threshold) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < x.size() && x[j + 1] >= threshold) {
            ++j;
        }
        if (j - i + 1 >= min_run) {
            runs.push_back({i, j});
        }
        i = j + 1;
    }

    std::vector<Window> merged;
    for (const Window& run : runs) {
        if (!merged.empty() && run.start - merged.back().end < refractory) {
            merged.back().end = run.end;
        } else {
            merged.push_back(run);
        }
    }
    return merged;
}

PeakSet locate_pqrst(const Signal& original, const std::vector<Window>& windows, const DetectorConfig& config) {
    require_valid_rate(original.sample_rate_hz);
    const double rate = original.sample_rate_hz;
    const std::size_t len = original.size();
    const std::span<const double> x = original.view();
    const SearchWindows& sw = config.search;
    const auto lag = static_cast<std::ptrdiff_t>(config.window_samples(rate));
    const std::size_t refractory = config.refractory_samples(rate);

    const auto greater = [](double a, double b) { return a > b; };
    const auto less = [](double a, double b) { return a < b; };

    // R per window, then drop the smaller of any two R peaks closer than the
    // refractory period.
    std::vector<std::size_t> r_indices;
    for (const Window& w : windows) {
        if (w.start > w.end || w.end >= len) {
            throw std::invalid_argument("window outside the signal");
        }
        const auto range = clip({static_cast<std::ptrdiff_t>(w.start) - lag, static_cast<std::ptrdiff_t>(w.end)}, len);
        const std::size_t r = extreme_index(x, range->first, range->second, greater);
        if (!r_indices.empty() && r - r_indices.back() < refractory) {
            if (x[r] > x[r_indices.back()]) {
                r_indices.back() = r;
            }
            continue;
        }
        r_indices.push_back(r);
    }

    PeakSet out;
    out.sample_rate_hz = rate;
    for (std::size_t beat = 0; beat < r_indices.size(); ++beat) {
        const auto r = static_cast<std::ptrdiff_t>(r_indices[beat]);
        const auto add = [&](WaveLabel label, std::optional<std::pair<std::size_t, std::size_t>> range, bool maximum) {
            if (!range) {
                return;
            }
            const std::size_t at = maximum ? extreme_index(x, range->first, range->second, greater)
                                           : extreme_index(x, range->first, range->second, less);
            out.peaks.push_back(Peak{label, at, x[at], beat});
        };
        add(WaveLabel::P, clip({r - samples(sw.p_far_ms, rate), r - samples(sw.p_near_ms, rate) - 1}, len), true);
        add(WaveLabel::Q, clip({r - samples(sw.q_ms, rate), r - 1}, len), false);
        out.peaks.push_back(Peak{WaveLabel::R, r_indices[beat], x[r_indices[beat]], beat});
        add(WaveLabel::S, clip({r + 1, r + samples(sw.s_ms, rate)}, len), false);
        add(WaveLabel::T, clip({r + samples(sw.t_near_ms, rate) + 1, r + samples(sw.t_far_ms, rate)}, len), true);
    }
    std::stable_sort(out.peaks.begin(), out.peaks.end(),
                     [](const Peak& a, const Peak& b) { return a.index < b.index; });
    return out;
}

Detection detect(const Signal& signal, const DetectorConfig& config, const kernels::KernelTable& kernels) {
    config.validate();
    require_valid_rate(signal.sample_rate_hz);
    if (signal.empty()) {
        throw std::invalid_argument("cannot detect beats in an empty signal");
    }

    const wavelet::WaveletFilter& filter = wavelet::daubechies_filter(config.wavelet_order);
    const wavelet::Decomposition dec =
        wavelet::dwt_decompose(signal, filter, config.levels, config.boundary_mode, kernels);

    DetectionTrace trace;
    trace.d1 = fuse_d1(dec, config.fused_levels, kernels);
    if (config.source == FusedSource::d2) {
        trace.d2 = fuse_d2(dec, dec.levels(), config.fused_levels, kernels);
    }
    const Signal& fused = config.source == FusedSource::d2 ? trace.d2 : trace.d1;

    // Round-off left by a constant or empty signal is not QRS energy.
    double input_peak = 0.0;
    for (double v : signal.samples) {
        input_peak = std::max(input_peak, std::abs(v));
    }
    double fused_peak = 0.0;
    for (double v : fused.samples) {
        fused_peak = std::max(fused_peak, std::abs(v));
    }
    const double reference = config.source == FusedSource::d2 ? input_peak * input_peak : input_peak;
    if (!(fused_peak > 1e-12 * reference)) {
        throw NoBeatsError("no energy in the fused sub-bands");
    }

    trace.derivative = derivative_filter(fused, kernels);
    trace.squared = square_signal(trace.derivative, kernels);
    const std::size_t width = std::max<std::size_t>(1, config.window_samples(signal.sample_rate_hz));
    trace.integrated = moving_window_integrate(trace.squared, width, kernels);

    Threshold th = compute_threshold(trace.integrated);
    trace.normalized = std::move(th.normalized);
    trace.threshold = th.threshold;
    const auto [lo, hi] = std::minmax_element(trace.normalized.samples.begin(), trace.normalized.samples.end());
    if (*lo == *hi) {
        throw NoBeatsError("integrated signal is flat");
    }
    trace.windows = find_windows(trace.normalized, trace.threshold,
                                 config.refractory_samples(signal.sample_rate_hz), config.min_run_samples);
    if (trace.windows.empty()) {
        throw NoBeatsError("no samples stay above the threshold");
    }

    PeakSet peaks = locate_pqrst(signal, trace.windows, config);
    return Detection{std::move(peaks), std::move(trace)};
}

}  // namespace qrskit::detector

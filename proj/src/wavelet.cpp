#include "qrskit/wavelet.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace qrskit::wavelet {
namespace {

std::size_t padded_length(std::size_t n) { return n + (n % 2); }

// Extended sample x~[i] for i in [-(L-1), n + L), mirrored about the half
// sample (x~[-1] = x[0], x~[n] = x[n-1]). Requires L - 1 < n.
double symmetric_at(std::span<const double> x, std::ptrdiff_t i) {
    const auto n = static_cast<std::ptrdiff_t>(x.size());
    if (i < 0) {
        i = -i - 1;
    } else if (i >= n) {
        i = 2 * n - i - 1;
    }
    return x[static_cast<std::size_t>(i)];
}

double periodic_at(std::span<const double> x, std::ptrdiff_t i) {
    const auto n = static_cast<std::ptrdiff_t>(x.size());
    const auto padded = static_cast<std::ptrdiff_t>(padded_length(x.size()));
    i %= padded;
    if (i < 0) {
        i += padded;
    }
    return x[static_cast<std::size_t>(std::min(i, n - 1))];
}

// Taps j = phase, phase + 2, ... in reverse order.
std::vector<double> reversed_phase(const std::vector<double>& taps, std::size_t phase) {
    std::vector<double> out;
    for (std::size_t j = phase; j < taps.size(); j += 2) {
        out.push_back(taps[j]);
    }
    std::reverse(out.begin(), out.end());
    return out;
}

void require_level(const Decomposition& decomposition, int level) {
    if (level < 1 || level > decomposition.levels()) {
        throw std::invalid_argument("level " + std::to_string(level) + " outside [1, " +
                                    std::to_string(decomposition.levels()) + "]");
    }
}

// Runs the inverse cascade from `level` down to the original grid, with only
// the requested bands populated at the top level.
Signal project_to_signal(const Decomposition& dec, int level, bool keep_approximation,
                         bool keep_detail, const kernels::KernelTable& kernels) {
    const auto top = static_cast<std::size_t>(level - 1);
    const std::vector<double>& a = dec.approximations[top];
    const std::vector<double>& d = dec.details[top];
    const std::vector<double> zeros(std::max(a.size(), d.size()), 0.0);

    std::vector<double> current = synthesis_step(
        keep_approximation ? std::span<const double>(a) : std::span<const double>(zeros.data(), a.size()),
        keep_detail ? std::span<const double>(d) : std::span<const double>(zeros.data(), d.size()),
        dec.filter, dec.boundary_mode, dec.input_lengths[top], kernels);

    for (std::size_t k = top; k-- > 0;) {
        const std::vector<double> no_detail(dec.details[k].size(), 0.0);
        current = synthesis_step(current, no_detail, dec.filter, dec.boundary_mode,
                                 dec.input_lengths[k], kernels);
    }
    return Signal{std::move(current), dec.sample_rate_hz, {}};
}

}  // namespace

std::size_t coefficient_count(std::size_t input_length, std::size_t filter_length, BoundaryMode mode) {
    if (mode == BoundaryMode::periodic) {
        return padded_length(input_length) / 2;
    }
    return (input_length + filter_length - 1) / 2;
}

Subbands analysis_step(std::span<const double> x, const WaveletFilter& filter, BoundaryMode mode,
                       const kernels::KernelTable& kernels) {
    const std::size_t taps = filter.length();
    if (x.size() < taps) {
        throw std::invalid_argument("analysis input of " + std::to_string(x.size()) +
                                    " samples is shorter than the " + std::to_string(taps) +
                                    "-tap filter");
    }
    const std::size_t count = coefficient_count(x.size(), taps, mode);

    // a[k] = sum_j lowpass[j] * extended[2k + j]. Symmetric mode starts the
    // extension L - 2 samples before x[0].
    std::vector<double> extended(2 * (count - 1) + taps);
    const auto origin = mode == BoundaryMode::periodic ? std::ptrdiff_t{0} : static_cast<std::ptrdiff_t>(taps - 2);
    for (std::size_t t = 0; t < extended.size(); ++t) {
        const std::ptrdiff_t i = static_cast<std::ptrdiff_t>(t) - origin;
        extended[t] = mode == BoundaryMode::periodic ? periodic_at(x, i) : symmetric_at(x, i);
    }

    Subbands out{std::vector<double>(count), std::vector<double>(count)};
    kernels.correlate_stride2(extended, filter.lowpass, out.approximation);
    kernels.correlate_stride2(extended, filter.highpass, out.detail);
    return out;
}

std::vector<double> synthesis_step(std::span<const double> approximation,
                                   std::span<const double> detail, const WaveletFilter& filter,
                                   BoundaryMode mode, std::size_t output_length,
                                   const kernels::KernelTable& kernels) {
    const std::size_t taps = filter.length();
    const std::size_t count = approximation.size();
    if (detail.size() != count) {
        throw std::invalid_argument("approximation and detail lengths differ");
    }
    if (count == 0 || count != coefficient_count(output_length, taps, mode)) {
        throw std::invalid_argument("coefficient count " + std::to_string(count) +
                                    " does not match an output of " + std::to_string(output_length) +
                                    " samples");
    }

    // With lead = L/2 - 1 and c_ext[q] = c[q - lead] (circular in periodic
    // mode; symmetric coefficients are already stored from k = -lead):
    //   x[2m]     = sum_u lowpass[L-2-2u] a_ext[m+u] + highpass[L-2-2u] d_ext[m+u]
    //   x[2m + 1] = sum_u lowpass[L-1-2u] a_ext[m+u] + highpass[L-1-2u] d_ext[m+u]
    const std::size_t half_taps = taps / 2;
    const std::size_t lead = half_taps - 1;
    const std::size_t n_even = (output_length + 1) / 2;
    const std::size_t n_odd = output_length / 2;
    const std::size_t ext_len = n_even + half_taps - 1;
    std::vector<double> a_ext(ext_len, 0.0);
    std::vector<double> d_ext(ext_len, 0.0);
    for (std::size_t q = 0; q < ext_len; ++q) {
        if (mode == BoundaryMode::periodic) {
            const std::size_t k = (q + count * half_taps - lead) % count;
            a_ext[q] = approximation[k];
            d_ext[q] = detail[k];
        } else if (q < count) {
            a_ext[q] = approximation[q];
            d_ext[q] = detail[q];
        }
    }

    std::vector<double> even(n_even), odd(n_odd);
    kernels.correlate_pair(a_ext, reversed_phase(filter.lowpass, 0), d_ext, reversed_phase(filter.highpass, 0), even);
    kernels.correlate_pair(a_ext, reversed_phase(filter.lowpass, 1), d_ext, reversed_phase(filter.highpass, 1), odd);

    std::vector<double> out(output_length);
    for (std::size_t m = 0; m < n_even; ++m) {
        out[2 * m] = even[m];
    }
    for (std::size_t m = 0; m < n_odd; ++m) {
        out[2 * m + 1] = odd[m];
    }
    return out;
}

const std::vector<double>& Decomposition::detail(int level) const {
    require_level(*this, level);
    return details[static_cast<std::size_t>(level - 1)];
}

const std::vector<double>& Decomposition::approximation(int level) const {
    require_level(*this, level);
    return approximations[static_cast<std::size_t>(level - 1)];
}

int max_levels(std::size_t signal_length, std::size_t filter_length, BoundaryMode mode, int cap) {
    int depth = 0;
    std::size_t n = signal_length;
    while (depth < cap && n >= filter_length) {
        ++depth;
        n = coefficient_count(n, filter_length, mode);
    }
    return depth;
}

Decomposition dwt_decompose(const Signal& signal, const WaveletFilter& filter, int levels,
                            BoundaryMode mode, const kernels::KernelTable& kernels) {
    if (levels < 1) {
        throw std::invalid_argument("decomposition needs at least one level, got " + std::to_string(levels));
    }
    if (filter.length() < 2 || filter.highpass.size() != filter.length()) {
        throw std::invalid_argument("malformed wavelet filter");
    }
    const int reachable = max_levels(signal.size(), filter.length(), mode, levels);
    if (reachable < levels) {
        throw std::invalid_argument("signal of " + std::to_string(signal.size()) +
                                    " samples is too short for " + std::to_string(levels) +
                                    " levels of db" + std::to_string(filter.order) +
                                    " (at most " + std::to_string(reachable) + ")");
    }

    Decomposition dec;
    dec.filter = filter;
    dec.boundary_mode = mode;
    dec.sample_rate_hz = signal.sample_rate_hz;
    dec.original_length = signal.size();

    std::vector<double> running = signal.samples;
    for (int level = 0; level < levels; ++level) {
        dec.input_lengths.push_back(running.size());
        Subbands bands = analysis_step(running, filter, mode, kernels);
        running = bands.approximation;
        dec.approximations.push_back(std::move(bands.approximation));
        dec.details.push_back(std::move(bands.detail));
    }
    return dec;
}

Signal reconstruct_detail(const Decomposition& decomposition, int level,
                          const kernels::KernelTable& kernels) {
    require_level(decomposition, level);
    return project_to_signal(decomposition, level, false, true, kernels);
}

Signal reconstruct_approximation(const Decomposition& decomposition, const kernels::KernelTable& kernels) {
    require_level(decomposition, decomposition.levels());
    return project_to_signal(decomposition, decomposition.levels(), true, false, kernels);
}

Signal reconstruct(const Decomposition& decomposition, const kernels::KernelTable& kernels) {
    const int top = decomposition.levels();
    require_level(decomposition, top);
    std::vector<double> current = decomposition.approximations.back();
    for (int level = top; level >= 1; --level) {
        const auto k = static_cast<std::size_t>(level - 1);
        current = synthesis_step(current, decomposition.details[k], decomposition.filter,
                                 decomposition.boundary_mode, decomposition.input_lengths[k], kernels);
    }
    return Signal{std::move(current), decomposition.sample_rate_hz, {}};
}

}  // namespace qrskit::wavelet

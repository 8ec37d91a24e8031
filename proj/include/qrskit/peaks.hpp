#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace qrskit {

enum class WaveLabel { P, Q, R, S, T };

inline constexpr std::array<WaveLabel, 5> kAllLabels{WaveLabel::P, WaveLabel::Q, WaveLabel::R,
                                                     WaveLabel::S, WaveLabel::T};

std::string_view label_name(WaveLabel label);
std::optional<WaveLabel> parse_label(std::string_view name);

struct Peak {
    WaveLabel label = WaveLabel::R;
    std::size_t index = 0;
    double amplitude_mv = 0.0;  // raw sample value at index
    std::size_t beat = 0;       // ordinal of the originating detection window
};

struct PeakSet {
    std::vector<Peak> peaks;  // sorted by index
    double sample_rate_hz = 0.0;

    std::vector<Peak> with_label(WaveLabel label) const;
    std::size_t beat_count() const;
    // Peaks of one beat indexed by label.
    std::array<std::optional<Peak>, 5> beat(std::size_t ordinal) const;
};

}  // namespace qrskit

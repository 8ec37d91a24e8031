#include "qrskit/peaks.hpp"

#include <algorithm>

namespace qrskit {

std::string_view label_name(WaveLabel label) {
    switch (label) {
        case WaveLabel::P: return "P";
        case WaveLabel::Q: return "Q";
        case WaveLabel::R: return "R";
        case WaveLabel::S: return "S";
        case WaveLabel::T: return "T";
    }
    return "?";
}

std::optional<WaveLabel> parse_label(std::string_view name) {
    for (WaveLabel label : kAllLabels) {
        if (label_name(label) == name) {
            return label;
        }
    }
    return std::nullopt;
}

std::vector<Peak> PeakSet::with_label(WaveLabel label) const {
    std::vector<Peak> out;
    std::copy_if(peaks.begin(), peaks.end(), std::back_inserter(out),
                 [label](const Peak& p) { return p.label == label; });
    return out;
}

std::size_t PeakSet::beat_count() const {
    std::size_t count = 0;
    for (const Peak& p : peaks) {
        count = std::max(count, p.beat + 1);
    }
    return count;
}

std::array<std::optional<Peak>, 5> PeakSet::beat(std::size_t ordinal) const {
    std::array<std::optional<Peak>, 5> out{};
    for (const Peak& p : peaks) {
        if (p.beat == ordinal) {
            out[static_cast<std::size_t>(p.label)] = p;
        }
    }
    return out;
}

}  // namespace qrskit

#pragma once

// Minimal self-contained SVG line plots. Peak markers carry data-label and
// data-index attributes so tests can compare them structurally.

#include <optional>
#include <string>
#include <vector>

#include "qrskit/detector.hpp"
#include "qrskit/peaks.hpp"
#include "qrskit/signal.hpp"

namespace qrskit::plot {

struct PlotOptions {
    int width = 1200;
    int height = 360;
    std::string title;
};

// Signal trace with one <circle class="peak"> per peak.
std::string signal_with_peaks_svg(const Signal& signal, const PeakSet& peaks, const PlotOptions& options = {});

// Plain trace; optionally a horizontal threshold line and shaded windows.
std::string trace_svg(const Signal& trace, const PlotOptions& options = {},
                      std::optional<double> threshold = std::nullopt,
                      const std::vector<detector::Window>& windows = {});

}  // namespace qrskit::plot

#include "qrskit/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string_view>

namespace qrskit::plot {
namespace {

constexpr double kMargin = 40.0;

std::string fixed(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape(std::string_view text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

// Maps sample index / amplitude into the plot area.
struct Frame {
    double x_scale = 1.0;
    double y_min = 0.0;
    double y_scale = 1.0;
    double height = 0.0;

    Frame(const std::vector<double>& values, const PlotOptions& o, std::optional<double> extra = std::nullopt) {
        height = o.height;
        const std::size_t n = std::max<std::size_t>(values.size(), 2);
        x_scale = (o.width - 2 * kMargin) / static_cast<double>(n - 1);
        double lo = values.empty() ? 0.0 : *std::min_element(values.begin(), values.end());
        double hi = values.empty() ? 1.0 : *std::max_element(values.begin(), values.end());
        if (extra) {
            lo = std::min(lo, *extra);
            hi = std::max(hi, *extra);
        }
        if (hi == lo) {
            hi = lo + 1.0;
        }
        y_min = lo;
        y_scale = (o.height - 2 * kMargin) / (hi - lo);
    }

    double x(std::size_t index) const { return kMargin + static_cast<double>(index) * x_scale; }
    double y(double value) const { return height - kMargin - (value - y_min) * y_scale; }
};

std::string header(const PlotOptions& o) {
    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(o.width) +
                      "\" height=\"" + std::to_string(o.height) + "\" viewBox=\"0 0 " + std::to_string(o.width) +
                      " " + std::to_string(o.height) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!o.title.empty()) {
        out += "<text x=\"" + fixed(kMargin) + "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" +
               escape(o.title) + "</text>\n";
    }
    return out;
}

std::string polyline(const std::vector<double>& values, const Frame& f, std::string_view stroke) {
    std::string out = "<polyline class=\"trace\" fill=\"none\" stroke=\"" + std::string(stroke) +
                      "\" stroke-width=\"1\" points=\"";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) {
            out += ' ';
        }
        out += fixed(f.x(i)) + "," + fixed(f.y(values[i]));
    }
    out += "\"/>\n";
    return out;
}

std::string_view marker_colour(WaveLabel label) {
    switch (label) {
        case WaveLabel::P: return "#2a9d8f";
        case WaveLabel::Q: return "#e9c46a";
        case WaveLabel::R: return "#e63946";
        case WaveLabel::S: return "#f4a261";
        case WaveLabel::T: return "#457b9d";
    }
    return "black";
}

}  // namespace

std::string signal_with_peaks_svg(const Signal& signal, const PeakSet& peaks, const PlotOptions& options) {
    const Frame f(signal.samples, options);
    std::string out = header(options);
    out += polyline(signal.samples, f, "#1d3557");
    for (const Peak& p : peaks.peaks) {
        if (p.index >= signal.size()) {
            continue;
        }
        const std::string name(label_name(p.label));
        out += "<circle class=\"peak\" data-label=\"" + name + "\" data-index=\"" + std::to_string(p.index) +
               "\" cx=\"" + fixed(f.x(p.index)) + "\" cy=\"" + fixed(f.y(signal.samples[p.index])) +
               "\" r=\"3\" fill=\"" + std::string(marker_colour(p.label)) + "\"/>\n";
        out += "<text class=\"peak-label\" x=\"" + fixed(f.x(p.index) + 4) + "\" y=\"" +
               fixed(f.y(signal.samples[p.index]) - 4) + "\" font-family=\"sans-serif\" font-size=\"10\">" + name +
               "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

std::string trace_svg(const Signal& trace, const PlotOptions& options, std::optional<double> threshold,
                      const std::vector<detector::Window>& windows) {
    const Frame f(trace.samples, options, threshold);
    std::string out = header(options);
    for (const detector::Window& w : windows) {
        out += "<rect class=\"window\" data-start=\"" + std::to_string(w.start) + "\" data-end=\"" +
               std::to_string(w.end) + "\" x=\"" + fixed(f.x(w.start)) + "\" y=\"" + fixed(kMargin) +
               "\" width=\"" + fixed(std::max(1.0, f.x(w.end) - f.x(w.start))) + "\" height=\"" +
               fixed(options.height - 2 * kMargin) + "\" fill=\"#ffd166\" fill-opacity=\"0.35\"/>\n";
    }
    out += polyline(trace.samples, f, "#1d3557");
    if (threshold) {
        out += "<line class=\"threshold\" x1=\"" + fixed(kMargin) + "\" x2=\"" + fixed(options.width - kMargin) +
               "\" y1=\"" + fixed(f.y(*threshold)) + "\" y2=\"" + fixed(f.y(*threshold)) +
               "\" stroke=\"#e63946\" stroke-dasharray=\"4 3\"/>\n";
    }
    out += "</svg>\n";
    return out;
}

}  // namespace qrskit::plot

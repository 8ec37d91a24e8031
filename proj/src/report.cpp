#include <json.hpp>

#include "qrskit/analysis.hpp"
#include "qrskit/detector.hpp"
#include "qrskit/signal_io.hpp"

namespace qrskit::io {
namespace {

using nlohmann::json;

json signal_json(const std::string& label, std::size_t n_samples, double rate) {
    return json{{"label", label}, {"n_samples", n_samples}, {"sample_rate_hz", rate}};
}

json peaks_json(const PeakSet& peaks) {
    json out = json::array();
    for (const Peak& p : peaks.peaks) {
        out.push_back(json{{"label", std::string(label_name(p.label))},
                           {"index", p.index},
                           {"time_s", static_cast<double>(p.index) / peaks.sample_rate_hz},
                           {"amplitude_mv", p.amplitude_mv}});
    }
    return out;
}

}  // namespace

std::string report_json(const DiagnosisReport& report) {
    const analysis::IntervalSet& iv = report.intervals;
    json intervals{{"PR_s", iv.pr}, {"QRS_s", iv.qrs}, {"QT_s", iv.qt},
                   {"ST_s", iv.st}, {"PP_s", iv.pp},   {"RR_s", iv.rr}};

    json amplitudes = json::object();
    for (WaveLabel label : kAllLabels) {
        const auto value = report.amplitudes[label];
        amplitudes[std::string(label_name(label)) + "_mv"] = value ? json(*value) : json(nullptr);
    }

    json flags = json::array();
    for (const analysis::Flag& f : report.flags) {
        flags.push_back(json{{"rule", f.rule}, {"measured", f.measured}, {"bound", f.bound}, {"finding", f.finding}});
    }

    const json doc{{"signal", signal_json(report.signal.label, report.signal.n_samples, report.signal.sample_rate_hz)},
                   {"peaks", peaks_json(report.peaks)},
                   {"intervals", std::move(intervals)},
                   {"amplitudes", std::move(amplitudes)},
                   {"flags", std::move(flags)}};
    return doc.dump(2) + "\n";
}

std::string detection_json(const Signal& signal, const detector::Detection& detection) {
    json windows = json::array();
    for (const detector::Window& w : detection.trace.windows) {
        windows.push_back(json::array({w.start, w.end}));
    }
    const json doc{{"signal", signal_json(signal.label, signal.size(), signal.sample_rate_hz)},
                   {"peaks", peaks_json(detection.peaks)},
                   {"threshold", detection.trace.threshold},
                   {"windows", std::move(windows)}};
    return doc.dump(2) + "\n";
}

}  // namespace qrskit::io

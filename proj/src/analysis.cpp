#include "qrskit/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

namespace qrskit::analysis {
namespace {

using nlohmann::json;

const std::vector<double>* interval_values(const IntervalSet& set, std::string_view id) {
    if (id == "PR") return &set.pr;
    if (id == "QRS") return &set.qrs;
    if (id == "QT") return &set.qt;
    if (id == "ST") return &set.st;
    if (id == "PP") return &set.pp;
    if (id == "RR") return &set.rr;
    return nullptr;
}

double mean_of(const std::vector<double>& values) {
    const long double sum = std::accumulate(values.begin(), values.end(), 0.0L);
    return static_cast<double>(sum / static_cast<long double>(values.size()));
}

double median_of(std::vector<double> values) {
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
    const double upper = values[mid];
    if (values.size() % 2 == 1) {
        return upper;
    }
    const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

std::vector<double> consecutive_gaps(const std::vector<Peak>& same_label, double rate) {
    std::vector<double> out;
    for (std::size_t k = 1; k < same_label.size(); ++k) {
        out.push_back(static_cast<double>(same_label[k].index - same_label[k - 1].index) / rate);
    }
    return out;
}

std::optional<std::string> optional_string(const json& row, const char* key) {
    if (!row.contains(key) || row.at(key).is_null()) {
        return std::nullopt;
    }
    return row.at(key).get<std::string>();
}

}  // namespace

void RuleTable::validate() const {
    for (const RuleRow& row : rows) {
        const bool is_interval = interval_values(IntervalSet{}, row.measure) != nullptr;
        if (!is_interval && !parse_label(row.measure)) {
            throw std::invalid_argument("unknown rule measure '" + row.measure + "'");
        }
        if (row.relative_to && !parse_label(*row.relative_to)) {
            throw std::invalid_argument("unknown relative_to label '" + *row.relative_to + "'");
        }
        if (!(row.low <= row.high)) {
            throw std::invalid_argument("rule " + row.measure + " has low > high");
        }
        if (!(row.tolerance >= 0.0)) {
            throw std::invalid_argument("rule " + row.measure + " has a negative tolerance");
        }
    }
}

RuleTable builtin_rules() {
    const auto s = Units::seconds;
    const auto mv = Units::millivolts;
    RuleTable table;
    table.rows = {
        {"PR", 0.12, 0.2, "Reduced FMD", "Blockage of AV node; atherosclerotic disease", s, 0.0, {}},
        {"QRS", 0.09, 0.09, "Hyperkalemia", {}, s, 0.1, {}},
        {"QT", 0.35, 0.44, {}, {}, s, 0.0, {}},
        {"ST", 0.05, 0.15, {}, {}, s, 0.0, {}},
        {"PP", 0.11, 0.11, {}, {}, s, 0.1, {}},
        {"RR", 0.80, 0.85, "Tachycardia (Fast heart)", "Bradycardia (Slow heart)", s, 0.0, {}},
        {"P", 0.25, 0.25, "Dextrocardia (inverted P wave)", {}, mv, 0.1, {}},
        // |Q| at most a quarter of R.
        {"Q", 0.0, 0.25, {}, {}, mv, 0.0, "R"},
        {"R", 1.60, 1.60, {}, {}, mv, 0.1, {}},
        {"T", 0.1, 0.5, "Myocardial ischemia (inverted T wave)", "Hyperkalemia (Tall T wave & absence of P wave)",
         mv, 0.0, {}},
    };
    return table;
}

RuleTable rules_from_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("rules file is not valid JSON: ") + e.what());
    }
    const json& rows = doc.is_object() && doc.contains("rows") ? doc.at("rows") : doc;
    if (!rows.is_array()) {
        throw std::invalid_argument("rules JSON must be an array of rows or {\"rows\": [...]}");
    }
    RuleTable table;
    try {
        for (const json& row : rows) {
            RuleRow r;
            r.measure = row.at("measure").get<std::string>();
            r.low = row.at("low").get<double>();
            r.high = row.at("high").get<double>();
            r.below_finding = optional_string(row, "below_finding");
            r.above_finding = optional_string(row, "above_finding");
            const std::string units = row.value("units", std::string(parse_label(r.measure) ? "mV" : "s"));
            if (units == "s") {
                r.units = Units::seconds;
            } else if (units == "mV") {
                r.units = Units::millivolts;
            } else {
                throw std::invalid_argument("units must be \"s\" or \"mV\", got \"" + units + "\"");
            }
            r.tolerance = row.value("tolerance", r.low == r.high ? 0.1 : 0.0);
            r.relative_to = optional_string(row, "relative_to");
            table.rows.push_back(std::move(r));
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed rule row: ") + e.what());
    }
    table.validate();
    return table;
}

std::string rules_to_json(const RuleTable& table) {
    json rows = json::array();
    for (const RuleRow& r : table.rows) {
        json row{{"measure", r.measure},
                 {"low", r.low},
                 {"high", r.high},
                 {"units", r.units == Units::seconds ? "s" : "mV"},
                 {"tolerance", r.tolerance}};
        row["below_finding"] = r.below_finding ? json(*r.below_finding) : json(nullptr);
        row["above_finding"] = r.above_finding ? json(*r.above_finding) : json(nullptr);
        if (r.relative_to) {
            row["relative_to"] = *r.relative_to;
        }
        rows.push_back(std::move(row));
    }
    return json{{"rows", rows}}.dump(2);
}

IntervalSet measure_intervals(const PeakSet& peaks) {
    const double rate = peaks.sample_rate_hz;
    require_valid_rate(rate);

    IntervalSet out;
    out.rr = consecutive_gaps(peaks.with_label(WaveLabel::R), rate);
    out.pp = consecutive_gaps(peaks.with_label(WaveLabel::P), rate);

    const auto span = [rate](const std::optional<Peak>& from, const std::optional<Peak>& to,
                             std::vector<double>& dest) {
        if (from && to && to->index > from->index) {
            dest.push_back(static_cast<double>(to->index - from->index) / rate);
        }
    };
    std::vector<std::array<std::optional<Peak>, 5>> beats(peaks.beat_count());
    for (const Peak& peak : peaks.peaks) {
        beats[peak.beat][static_cast<std::size_t>(peak.label)] = peak;
    }
    for (const auto& beat : beats) {
        const auto& p = beat[static_cast<std::size_t>(WaveLabel::P)];
        const auto& q = beat[static_cast<std::size_t>(WaveLabel::Q)];
        const auto& r = beat[static_cast<std::size_t>(WaveLabel::R)];
        const auto& s = beat[static_cast<std::size_t>(WaveLabel::S)];
        const auto& t = beat[static_cast<std::size_t>(WaveLabel::T)];
        span(p, r, out.pr);
        span(q, s, out.qrs);
        span(q, t, out.qt);
        span(s, t, out.st);
    }
    return out;
}

AmplitudeSet measure_amplitudes(const Signal& signal, const PeakSet& peaks) {
    AmplitudeSet out;
    if (signal.empty() || peaks.peaks.empty()) {
        return out;
    }
    const double baseline = median_of(signal.samples);
    std::array<double, 5> sum{};
    std::array<std::size_t, 5> count{};
    for (const Peak& p : peaks.peaks) {
        if (p.index >= signal.size()) {
            throw std::invalid_argument("peak index outside the signal");
        }
        const auto k = static_cast<std::size_t>(p.label);
        sum[k] += signal.samples[p.index] - baseline;
        ++count[k];
    }
    for (std::size_t k = 0; k < 5; ++k) {
        if (count[k] > 0) {
            out.mean_mv[k] = sum[k] / static_cast<double>(count[k]);
        }
    }
    return out;
}

std::vector<Flag> evaluate_rules(const IntervalSet& intervals, const AmplitudeSet& amplitudes,
                                 const RuleTable& rules, const DiagnoseOptions& options) {
    rules.validate();
    std::vector<Flag> flags;
    for (const RuleRow& row : rules.rows) {
        std::vector<double> measured;
        if (const std::vector<double>* values = interval_values(intervals, row.measure)) {
            if (values->empty()) {
                continue;
            }
            if (options.per_beat) {
                measured = *values;
            } else {
                measured.push_back(mean_of(*values));
            }
        } else if (const auto amp = amplitudes[*parse_label(row.measure)]) {
            measured.push_back(*amp);
        } else {
            continue;
        }

        double scale = 1.0;
        if (row.relative_to) {
            const auto reference = amplitudes[*parse_label(*row.relative_to)];
            if (!reference) {
                continue;
            }
            scale = std::abs(*reference);
            for (double& v : measured) {
                v = std::abs(v);
            }
        }
        const double low = (row.low - std::abs(row.low) * row.tolerance) * scale;
        const double high = (row.high + std::abs(row.high) * row.tolerance) * scale;

        for (double v : measured) {
            if (v < low && row.below_finding) {
                flags.push_back({row.measure, v, low, *row.below_finding});
            } else if (v > high && row.above_finding) {
                flags.push_back({row.measure, v, high, *row.above_finding});
            }
        }
    }

    if (options.sinoatrial_heuristic && intervals.rr.size() >= 2) {
        const double bound = options.sinoatrial_ratio * median_of(intervals.rr);
        const double longest = *std::max_element(intervals.rr.begin(), intervals.rr.end());
        if (longest > bound) {
            flags.push_back({std::string(kSinoatrialRule), longest, bound, std::string(kSinoatrialFinding)});
        }
    }
    return flags;
}

DiagnosisReport diagnose(const IntervalSet& intervals, const AmplitudeSet& amplitudes, const RuleTable& rules,
                         const DiagnoseOptions& options) {
    DiagnosisReport report;
    report.intervals = intervals;
    report.amplitudes = amplitudes;
    report.flags = evaluate_rules(intervals, amplitudes, rules, options);
    return report;
}

DiagnosisReport analyze(const Signal& signal, const detector::DetectorConfig& config, const RuleTable& rules,
                        const DiagnoseOptions& options) {
    detector::Detection detection = detector::detect(signal, config);
    DiagnosisReport report = diagnose(measure_intervals(detection.peaks),
                                      measure_amplitudes(signal, detection.peaks), rules, options);
    report.signal = SignalInfo{signal.label, signal.size(), signal.sample_rate_hz};
    report.peaks = std::move(detection.peaks);
    return report;
}

}  // namespace qrskit::analysis

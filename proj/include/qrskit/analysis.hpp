#pragma once

// Interval and amplitude measurement plus rule-table diagnosis against the
// normal sinus rhythm (NSR) reference ranges.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qrskit/detector.hpp"
#include "qrskit/peaks.hpp"
#include "qrskit/signal.hpp"

namespace qrskit::analysis {

// Per-beat values in seconds.
struct IntervalSet {
    std::vector<double> pr;
    std::vector<double> qrs;  // Q to S
    std::vector<double> qt;
    std::vector<double> st;
    std::vector<double> pp;
    std::vector<double> rr;
};

// Mean amplitude per label in mV, baseline-corrected; nullopt when the label
// was never found.
struct AmplitudeSet {
    std::array<std::optional<double>, 5> mean_mv{};

    std::optional<double> operator[](WaveLabel label) const {
        return mean_mv[static_cast<std::size_t>(label)];
    }
    std::optional<double>& operator[](WaveLabel label) {
        return mean_mv[static_cast<std::size_t>(label)];
    }
};

enum class Units { seconds, millivolts };

struct RuleRow {
    // Interval id (PR, QRS, QT, ST, PP, RR) or amplitude label (P, Q, R, S, T).
    std::string measure;
    double low = 0.0;
    double high = 0.0;
    std::optional<std::string> below_finding;
    std::optional<std::string> above_finding;
    Units units = Units::seconds;
    // Fractional band applied as [low * (1 - tol), high * (1 + tol)].
    double tolerance = 0.0;
    // When set, bounds scale by this label's measured amplitude and the
    // measured value is taken as an absolute amplitude.
    std::optional<std::string> relative_to;
};

struct RuleTable {
    std::vector<RuleRow> rows;

    // Throws std::invalid_argument on unknown measures or low > high.
    void validate() const;
};

// Reference ranges of the NSR interval and amplitude tables.
RuleTable builtin_rules();

// Row schema: {"measure","low","high","below_finding","above_finding",
// "units","tolerance","relative_to"}; the finding, tolerance and relative_to
// keys are optional, and tolerance defaults to 0.1 when low == high.
RuleTable rules_from_json(std::string_view text);
std::string rules_to_json(const RuleTable& table);

struct Flag {
    std::string rule;
    double measured = 0.0;
    double bound = 0.0;
    std::string finding;
};

struct DiagnoseOptions {
    // Evaluate every beat instead of the record mean.
    bool per_beat = false;
    // Flag a dropped cycle when any R-R exceeds ratio * median R-R.
    bool sinoatrial_heuristic = true;
    double sinoatrial_ratio = 1.8;
};

inline constexpr std::string_view kSinoatrialRule = "RR_dropout";
inline constexpr std::string_view kSinoatrialFinding = "Sinoatrial block (heuristic: dropped cardiac cycle)";

struct SignalInfo {
    std::string label;
    std::size_t n_samples = 0;
    double sample_rate_hz = 0.0;
};

}  // namespace qrskit::analysis

namespace qrskit {

struct DiagnosisReport {
    analysis::SignalInfo signal;
    PeakSet peaks;
    analysis::IntervalSet intervals;
    analysis::AmplitudeSet amplitudes;
    std::vector<analysis::Flag> flags;
};

}  // namespace qrskit

namespace qrskit::analysis {

IntervalSet measure_intervals(const PeakSet& peaks);

// Mean per label of signal[index] - median(signal).
AmplitudeSet measure_amplitudes(const Signal& signal, const PeakSet& peaks);

std::vector<Flag> evaluate_rules(const IntervalSet& intervals, const AmplitudeSet& amplitudes,
                                 const RuleTable& rules, const DiagnoseOptions& options = {});

DiagnosisReport diagnose(const IntervalSet& intervals, const AmplitudeSet& amplitudes, const RuleTable& rules,
                         const DiagnoseOptions& options = {});

// detect -> measure -> diagnose.
DiagnosisReport analyze(const Signal& signal, const detector::DetectorConfig& config = {},
                        const RuleTable& rules = builtin_rules(), const DiagnoseOptions& options = {});

}  // namespace qrskit::analysis

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "qrskit/signal.hpp"

namespace qrskit {

struct DiagnosisReport;
struct PeakSet;

namespace wavelet {
struct Decomposition;
}
namespace detector {
struct DetectionTrace;
struct Detection;
}

namespace io {

enum class SignalFormat {
    csv_1col,   // one amplitude per line
    csv_2col,   // time_s,amplitude per line, no header; rate inferred
    raw_f64le,  // packed little-endian IEEE-754 doubles
};

std::optional<SignalFormat> parse_format(std::string_view name);
std::string_view format_name(SignalFormat format);

// sample_rate_hz is required for csv-1col and raw-f64le and ignored for
// csv-2col, whose rate is 1 / median time step.
Signal load_signal(const std::filesystem::path& path, SignalFormat format, double sample_rate_hz);

// Text serialisations use 17 significant digits so a reload is exact.
// csv-2col writes time as index / rate.
std::string format_signal(const Signal& signal, SignalFormat format);
void write_signal(const Signal& signal, const std::filesystem::path& path, SignalFormat format);

// Report JSON with sorted keys; identical reports give identical bytes.
std::string report_json(const DiagnosisReport& report);
void write_report(const DiagnosisReport& report, const std::filesystem::path& path);

// Detection output: {"signal", "peaks", "threshold", "windows"}.
std::string detection_json(const Signal& signal, const detector::Detection& detection);

// Writes through a sibling temp file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

// Debug dumps as csv-1col files: a<k>.csv / d<k>.csv, and one file per
// detector stage.
void dump_decomposition(const wavelet::Decomposition& decomposition, const std::filesystem::path& dir);
void dump_trace(const detector::DetectionTrace& trace, const std::filesystem::path& dir);

}  // namespace io
}  // namespace qrskit

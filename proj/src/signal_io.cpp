#include "qrskit/signal_io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <system_error>
#include <vector>

#include <unistd.h>

#include "qrskit/detector.hpp"
#include "qrskit/errors.hpp"
#include "qrskit/wavelet.hpp"

namespace qrskit::io {
namespace {

namespace fs = std::filesystem;

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::optional<double> parse_number(std::string_view field) {
    field = trim(field);
    if (!field.empty() && field.front() == '+') {
        field.remove_prefix(1);
    }
    if (field.empty()) {
        return std::nullopt;
    }
    double value = 0.0;
    const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || end != field.data() + field.size() || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

// Lines of a text file; a trailing newline does not start another row.
std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            lines.push_back(text.substr(pos));
            break;
        }
        lines.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    return lines;
}

double median_step(std::vector<double> steps) {
    const std::size_t mid = steps.size() / 2;
    std::sort(steps.begin(), steps.end());
    return steps.size() % 2 == 1 ? steps[mid] : 0.5 * (steps[mid - 1] + steps[mid]);
}

std::string format_double(double v) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, end);
}

Signal parse_csv(const std::string& text, bool two_columns, double rate, std::string label) {
    std::vector<double> times;
    std::vector<double> samples;
    const std::vector<std::string_view> lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        const std::string_view line = trim(lines[i]);
        if (line.empty()) {
            throw ParseError("empty row", line_no);
        }
        if (two_columns) {
            const auto comma = line.find(',');
            if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos) {
                throw ParseError("expected two comma-separated columns", line_no);
            }
            const auto t = parse_number(line.substr(0, comma));
            const auto v = parse_number(line.substr(comma + 1));
            if (!t || !v) {
                throw ParseError("non-numeric value", line_no);
            }
            if (!times.empty() && !(*t > times.back())) {
                throw ParseError("time column is not strictly increasing", line_no);
            }
            times.push_back(*t);
            samples.push_back(*v);
        } else {
            const auto v = parse_number(line);
            if (!v) {
                throw ParseError("non-numeric value", line_no);
            }
            samples.push_back(*v);
        }
    }
    if (samples.empty()) {
        throw Error("empty signal file");
    }
    if (two_columns) {
        if (times.size() < 2) {
            throw Error("csv-2col needs at least two rows to infer the sample rate");
        }
        std::vector<double> steps(times.size() - 1);
        for (std::size_t i = 1; i < times.size(); ++i) {
            steps[i - 1] = times[i] - times[i - 1];
        }
        rate = 1.0 / median_step(std::move(steps));
    }
    return make_signal(std::move(samples), rate, std::move(label));
}

Signal parse_raw(const std::string& bytes, double rate, std::string label) {
    if (bytes.empty()) {
        throw Error("empty signal file");
    }
    if (bytes.size() % sizeof(double) != 0) {
        throw Error("raw-f64le file size " + std::to_string(bytes.size()) + " is not a multiple of 8");
    }
    std::vector<double> samples(bytes.size() / sizeof(double));
    for (std::size_t i = 0; i < samples.size(); ++i) {
        std::uint64_t word = 0;
        std::memcpy(&word, bytes.data() + i * sizeof word, sizeof word);
        if constexpr (std::endian::native == std::endian::big) {
            word = __builtin_bswap64(word);
        }
        samples[i] = std::bit_cast<double>(word);
    }
    return make_signal(std::move(samples), rate, std::move(label));
}

}  // namespace

std::optional<SignalFormat> parse_format(std::string_view name) {
    if (name == "csv-1col") return SignalFormat::csv_1col;
    if (name == "csv-2col") return SignalFormat::csv_2col;
    if (name == "raw-f64le") return SignalFormat::raw_f64le;
    return std::nullopt;
}

std::string_view format_name(SignalFormat format) {
    switch (format) {
        case SignalFormat::csv_1col: return "csv-1col";
        case SignalFormat::csv_2col: return "csv-2col";
        case SignalFormat::raw_f64le: return "raw-f64le";
    }
    return "?";
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) {
        throw IoError("error reading " + path.string());
    }
    return buffer.str();
}

Signal load_signal(const fs::path& path, SignalFormat format, double sample_rate_hz) {
    if (format != SignalFormat::csv_2col) {
        require_valid_rate(sample_rate_hz);
    }
    const std::string content = read_file(path);
    std::string label = path.stem().string();
    try {
        if (format == SignalFormat::raw_f64le) {
            return parse_raw(content, sample_rate_hz, std::move(label));
        }
        return parse_csv(content, format == SignalFormat::csv_2col, sample_rate_hz, std::move(label));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.reason(), e.line());
    } catch (const Error& e) {
        throw Error(path.string() + ": " + e.what());
    }
}

std::string format_signal(const Signal& signal, SignalFormat format) {
    std::string out;
    switch (format) {
        case SignalFormat::csv_1col:
            for (double v : signal.samples) {
                out += format_double(v);
                out += '\n';
            }
            break;
        case SignalFormat::csv_2col:
            require_valid_rate(signal.sample_rate_hz);
            for (std::size_t i = 0; i < signal.size(); ++i) {
                out += format_double(static_cast<double>(i) / signal.sample_rate_hz);
                out += ',';
                out += format_double(signal.samples[i]);
                out += '\n';
            }
            break;
        case SignalFormat::raw_f64le:
            out.resize(signal.size() * sizeof(double));
            for (std::size_t i = 0; i < signal.size(); ++i) {
                auto word = std::bit_cast<std::uint64_t>(signal.samples[i]);
                if constexpr (std::endian::native == std::endian::big) {
                    word = __builtin_bswap64(word);
                }
                std::memcpy(out.data() + i * sizeof word, &word, sizeof word);
            }
            break;
    }
    return out;
}

void write_signal(const Signal& signal, const fs::path& path, SignalFormat format) {
    write_file_atomic(path, format_signal(signal, format));
}

void write_report(const DiagnosisReport& report, const fs::path& path) {
    write_file_atomic(path, report_json(report));
}

void write_file_atomic(const fs::path& path, std::string_view content) {
    const fs::path parent = path.has_parent_path() ? path.parent_path() : fs::path(".");
    std::error_code ec;
    if (!fs::is_directory(parent, ec)) {
        throw IoError("cannot write " + path.string() + ": directory " + parent.string() + " does not exist");
    }
    fs::path temp = path;
    temp += ".tmp" + std::to_string(::getpid());
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot write " + path.string());
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            fs::remove(temp, ec);
            throw IoError("error writing " + path.string());
        }
    }
    fs::rename(temp, path, ec);
    if (ec) {
        fs::remove(temp, ec);
        throw IoError("cannot move output into place at " + path.string());
    }
}

void dump_decomposition(const wavelet::Decomposition& decomposition, const fs::path& dir) {
    fs::create_directories(dir);
    for (int level = 1; level <= decomposition.levels(); ++level) {
        const std::string k = std::to_string(level);
        const Signal a{decomposition.approximation(level), decomposition.sample_rate_hz, {}};
        const Signal d{decomposition.detail(level), decomposition.sample_rate_hz, {}};
        write_signal(a, dir / ("a" + k + ".csv"), SignalFormat::csv_1col);
        write_signal(d, dir / ("d" + k + ".csv"), SignalFormat::csv_1col);
    }
}

void dump_trace(const detector::DetectionTrace& trace, const fs::path& dir) {
    fs::create_directories(dir);
    const std::pair<const char*, const Signal*> stages[] = {
        {"d1.csv", &trace.d1},
        {"d2.csv", &trace.d2},
        {"derivative.csv", &trace.derivative},
        {"squared.csv", &trace.squared},
        {"integrated.csv", &trace.integrated},
        {"normalized.csv", &trace.normalized},
    };
    for (const auto& [name, signal] : stages) {
        if (!signal->empty()) {
            write_signal(*signal, dir / name, SignalFormat::csv_1col);
        }
    }
    std::string windows;
    for (const auto& w : trace.windows) {
        windows += std::to_string(w.start) + "," + std::to_string(w.end) + "\n";
    }
    write_file_atomic(dir / "windows.csv", windows);
}

}  // namespace qrskit::io

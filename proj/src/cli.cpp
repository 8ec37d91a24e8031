#include "qrskit/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <future>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "qrskit/analysis.hpp"
#include "qrskit/detector.hpp"
#include "qrskit/errors.hpp"
#include "qrskit/signal_io.hpp"
#include "qrskit/svg_plot.hpp"
#include "qrskit/synth.hpp"

namespace qrskit::cli {
namespace {

namespace fs = std::filesystem;

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InputOptions {
    std::vector<std::string> inputs;
    std::string format = "csv-1col";
    std::optional<double> rate;
};

struct DetectorFlags {
    detector::DetectorConfig config;
    std::string boundary = "periodic";
    std::string source = "d2";
    std::string dump_trace;
};

struct Options {
    InputOptions input;
    DetectorFlags detector;
    std::string output;
    std::string rules;
    bool per_beat = false;

    synth::SynthConfig synth;
    std::string synth_format = "csv-1col";
};

void add_input_flags(CLI::App& sub, InputOptions& in) {
    sub.add_option("inputs", in.inputs, "Signal file(s)")->required();
    sub.add_option("--format", in.format, "csv-1col | csv-2col | raw-f64le")
        ->check(CLI::IsMember({"csv-1col", "csv-2col", "raw-f64le"}));
    sub.add_option("--rate", in.rate, "Sample rate in Hz (ignored for csv-2col)");
}

void add_detector_flags(CLI::App& sub, DetectorFlags& d) {
    sub.add_option("--wavelet-order", d.config.wavelet_order, "Daubechies order, 1..8")->capture_default_str();
    sub.add_option("--levels", d.config.levels, "Decomposition depth")->capture_default_str();
    sub.add_option("--window-ms", d.config.window_ms, "Moving-window width")->capture_default_str();
    sub.add_option("--refractory-ms", d.config.refractory_ms, "Window merge distance")->capture_default_str();
    sub.add_option("--boundary", d.boundary, "periodic | symmetric")
        ->check(CLI::IsMember({"periodic", "symmetric"}));
    sub.add_option("--source", d.source, "Fused trace fed to the derivative: d2 | d1")
        ->check(CLI::IsMember({"d1", "d2"}));
    sub.add_option("--dump-trace", d.dump_trace, "Directory for per-stage CSV traces");
}

io::SignalFormat format_or_throw(const std::string& name) {
    const auto format = io::parse_format(name);
    if (!format) {
        throw UsageError("unknown format '" + name + "'");
    }
    return *format;
}

void finalize_detector(DetectorFlags& d) {
    d.config.boundary_mode =
        d.boundary == "symmetric" ? wavelet::BoundaryMode::symmetric : wavelet::BoundaryMode::periodic;
    d.config.source = d.source == "d1" ? detector::FusedSource::d1 : detector::FusedSource::d2;
    try {
        d.config.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

double validated_rate(const InputOptions& in) {
    if (format_or_throw(in.format) == io::SignalFormat::csv_2col) {
        return in.rate.value_or(1.0);
    }
    if (!in.rate) {
        throw UsageError("--rate is required for " + in.format + " input");
    }
    if (!(*in.rate > 0.0) || !std::isfinite(*in.rate)) {
        throw UsageError("--rate must be positive");
    }
    return *in.rate;
}

void emit(const std::string& content, const std::string& output, std::ostream& out) {
    if (output.empty() || output == "-") {
        out << content;
    } else {
        io::write_file_atomic(output, content);
    }
}

// Output path for one of several inputs: <dir>/<stem>.json.
std::string per_input_output(const std::string& output, const std::string& input, bool many) {
    if (!many) {
        return output;
    }
    return (fs::path(output) / (fs::path(input).stem().string() + ".json")).string();
}

int run_detect(const Options& o, const std::string& input, const std::string& output, std::ostream& out) {
    const Signal signal = io::load_signal(input, format_or_throw(o.input.format), validated_rate(o.input));
    const detector::Detection detection = detector::detect(signal, o.detector.config);
    if (!o.detector.dump_trace.empty()) {
        io::dump_trace(detection.trace, o.detector.dump_trace);
    }
    emit(io::detection_json(signal, detection), output, out);
    return kExitOk;
}

analysis::RuleTable load_rules(const std::string& path) {
    std::string chosen = path;
    if (chosen.empty()) {
        if (const char* env = std::getenv("QRSKIT_RULES"); env != nullptr && *env != '\0') {
            chosen = env;
        }
    }
    if (chosen.empty()) {
        return analysis::builtin_rules();
    }
    try {
        return analysis::rules_from_json(io::read_file(chosen));
    } catch (const std::invalid_argument& e) {
        throw Error(chosen + ": " + e.what());
    }
}

int run_analyze(const Options& o, const analysis::RuleTable& rules, const std::string& input,
                const std::string& output, std::ostream& out) {
    const Signal signal = io::load_signal(input, format_or_throw(o.input.format), validated_rate(o.input));
    analysis::DiagnoseOptions diag;
    diag.per_beat = o.per_beat;
    const DiagnosisReport report = analysis::analyze(signal, o.detector.config, rules, diag);
    if (!o.detector.dump_trace.empty()) {
        io::dump_trace(detector::detect(signal, o.detector.config).trace, o.detector.dump_trace);
    }
    emit(io::report_json(report), output, out);
    return kExitOk;
}

int run_synth(const Options& o, std::ostream& out) {
    const synth::Synthetic result = synth::generate(o.synth);
    const io::SignalFormat format = format_or_throw(o.synth_format);
    io::write_signal(result.signal, o.output, format);
    io::write_file_atomic(o.output + ".truth.json",
                          synth::ground_truth_json(result.truth, result.signal.sample_rate_hz));
    out << "wrote " << result.signal.size() << " samples (" << o.synth.n_beats << " beats) to " << o.output << "\n";
    return kExitOk;
}

int run_plot(const Options& o, std::ostream& out) {
    const std::string& input = o.input.inputs.front();
    const Signal signal = io::load_signal(input, format_or_throw(o.input.format), validated_rate(o.input));
    const detector::Detection detection = detector::detect(signal, o.detector.config);
    const detector::DetectionTrace& t = detection.trace;

    const fs::path dir(o.output);
    fs::create_directories(dir);
    const auto plot_options = [](std::string title) {
        plot::PlotOptions p;
        p.title = std::move(title);
        return p;
    };
    io::write_file_atomic(dir / "signal.svg", plot::trace_svg(signal, plot_options("Original ECG signal")));
    io::write_file_atomic(dir / "peaks.svg",
                          plot::signal_with_peaks_svg(signal, detection.peaks, plot_options("ECG with P-QRS-T peaks")));
    io::write_file_atomic(dir / "d1.svg", plot::trace_svg(t.d1, plot_options("D1 = d3 + d4 + d5")));
    if (!t.d2.empty()) {
        io::write_file_atomic(dir / "d2.svg", plot::trace_svg(t.d2, plot_options("D2 = d4 (d3 + d5) / 2^n")));
    }
    io::write_file_atomic(dir / "derivative.svg", plot::trace_svg(t.derivative, plot_options("Derivative")));
    io::write_file_atomic(dir / "squared.svg", plot::trace_svg(t.squared, plot_options("Squared")));
    io::write_file_atomic(dir / "integrated.svg",
                          plot::trace_svg(t.normalized, plot_options("Moving-window integral (normalised)"),
                                          t.threshold, t.windows));
    io::write_file_atomic(dir / "detection.json", io::detection_json(signal, detection));
    if (!o.detector.dump_trace.empty()) {
        io::dump_trace(t, o.detector.dump_trace);
    }
    out << "wrote plots for " << detection.peaks.with_label(WaveLabel::R).size() << " beats to " << dir.string()
        << "\n";
    return kExitOk;
}

// Runs `body`, mapping library exceptions onto exit codes with a one-line
// diagnostic.
template <typename Body>
int guarded(std::ostream& err, const std::string& context, Body&& body) {
    try {
        return body();
    } catch (const UsageError& e) {
        err << "qrskit: " << e.what() << "\n";
        return kExitUsageError;
    } catch (const std::exception& e) {
        err << "qrskit: " << (context.empty() ? "" : context + ": ") << e.what() << "\n";
        return kExitDomainError;
    }
}

// Processes several inputs concurrently; the worst exit code wins.
template <typename PerInput>
int fan_out(const Options& o, std::ostream& out, std::ostream& err, PerInput per_input) {
    const auto& inputs = o.input.inputs;
    const bool many = inputs.size() > 1;
    if (many) {
        if (o.output.empty()) {
            throw UsageError("-o <directory> is required with several inputs");
        }
        fs::create_directories(o.output);
    }
    std::mutex out_mutex;
    std::vector<std::future<std::pair<int, std::string>>> jobs;
    for (const std::string& input : inputs) {
        jobs.push_back(std::async(many ? std::launch::async : std::launch::deferred, [&, input] {
            std::ostringstream local_out, local_err;
            const int code = guarded(local_err, many ? input : std::string{}, [&] {
                return per_input(input, per_input_output(o.output, input, many), local_out);
            });
            {
                const std::lock_guard lock(out_mutex);
                out << local_out.str();
            }
            return std::pair{code, local_err.str()};
        }));
    }
    int worst = kExitOk;
    for (auto& job : jobs) {
        auto [code, message] = job.get();
        err << message;
        worst = std::max(worst, code);
    }
    return worst;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"ECG P-QRS-T detection, interval analysis and rule-based flags", "qrskit"};
    app.require_subcommand(1, 1);

    Options o;
    CLI::App* detect_cmd = app.add_subcommand("detect", "Detect P-QRS-T peaks and write them as JSON");
    add_input_flags(*detect_cmd, o.input);
    add_detector_flags(*detect_cmd, o.detector);
    detect_cmd->add_option("-o,--output", o.output, "Output JSON file (directory for several inputs)");

    CLI::App* analyze_cmd = app.add_subcommand("analyze", "Detect, measure intervals and flag rule violations");
    add_input_flags(*analyze_cmd, o.input);
    add_detector_flags(*analyze_cmd, o.detector);
    analyze_cmd->add_option("-o,--output", o.output, "Output report file (directory for several inputs)");
    analyze_cmd->add_option("--rules", o.rules, "Rule table JSON (default: $QRSKIT_RULES, then built-in)");
    analyze_cmd->add_flag("--per-beat", o.per_beat, "Evaluate rules per beat instead of the record mean");

    CLI::App* synth_cmd = app.add_subcommand("synth", "Generate a synthetic ECG with a ground-truth sidecar");
    synth_cmd->add_option("-o,--output", o.output, "Signal file; ground truth goes to <output>.truth.json")
        ->required();
    synth_cmd->add_option("--format", o.synth_format, "csv-1col | csv-2col | raw-f64le")
        ->check(CLI::IsMember({"csv-1col", "csv-2col", "raw-f64le"}));
    synth_cmd->add_option("--rate", o.synth.sample_rate_hz, "Sample rate in Hz")->capture_default_str();
    synth_cmd->add_option("--beats", o.synth.n_beats, "Number of beats")->capture_default_str();
    synth_cmd->add_option("--rr-s", o.synth.rr_s, "R-R spacing in seconds")->capture_default_str();
    synth_cmd->add_option("--rr-jitter-s", o.synth.rr_jitter_s, "R-R jitter standard deviation")
        ->capture_default_str();
    synth_cmd->add_option("--noise-std", o.synth.noise_std_mv, "White noise standard deviation in mV")
        ->capture_default_str();
    synth_cmd->add_option("--seed", o.synth.seed, "Random seed")->capture_default_str();

    CLI::App* plot_cmd = app.add_subcommand("plot", "Write SVG plots of the signal, peaks and detector stages");
    add_input_flags(*plot_cmd, o.input);
    add_detector_flags(*plot_cmd, o.detector);
    plot_cmd->add_option("-o,--output", o.output, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsageError;
    }

    // Flag validation happens before anything is written.
    const int usage = guarded(err, {}, [&] {
        if (!synth_cmd->parsed()) {
            finalize_detector(o.detector);
            validated_rate(o.input);
            if (plot_cmd->parsed() && o.input.inputs.size() != 1) {
                throw UsageError("plot takes exactly one input");
            }
        } else {
            format_or_throw(o.synth_format);
            try {
                o.synth.validate();
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
        }
        return kExitOk;
    });
    if (usage != kExitOk) {
        return usage;
    }

    if (detect_cmd->parsed()) {
        return guarded(err, {}, [&] {
            return fan_out(o, out, err, [&](const std::string& in, const std::string& dest, std::ostream& os) {
                return run_detect(o, in, dest, os);
            });
        });
    }
    if (analyze_cmd->parsed()) {
        return guarded(err, {}, [&] {
            const analysis::RuleTable rules = load_rules(o.rules);
            return fan_out(o, out, err, [&](const std::string& in, const std::string& dest, std::ostream& os) {
                return run_analyze(o, rules, in, dest, os);
            });
        });
    }
    if (synth_cmd->parsed()) {
        return guarded(err, {}, [&] { return run_synth(o, out); });
    }
    return guarded(err, {}, [&] { return run_plot(o, out); });
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"qrskit"};
    for (const std::string& a : args) {
        argv.push_back(a.c_str());
    }
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace qrskit::cli

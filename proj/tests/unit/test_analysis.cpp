#include <gtest/gtest.h>

#include <random>
#include <stdexcept>

#include "qrskit/analysis.hpp"
#include "qrskit/errors.hpp"
#include "qrskit/synth.hpp"

namespace an = qrskit::analysis;
using qrskit::Peak;
using qrskit::PeakSet;
using qrskit::WaveLabel;

namespace {

PeakSet peaks_at(double rate, std::vector<Peak> peaks) {
    PeakSet set;
    set.sample_rate_hz = rate;
    set.peaks = std::move(peaks);
    return set;
}

an::IntervalSet rr_only(std::vector<double> rr) {
    an::IntervalSet set;
    set.rr = std::move(rr);
    return set;
}

const an::RuleRow& row(const an::RuleTable& table, const std::string& measure) {
    for (const auto& r : table.rows) {
        if (r.measure == measure) {
            return r;
        }
    }
    throw std::out_of_range(measure);
}

bool has_finding(const std::vector<an::Flag>& flags, const std::string& finding) {
    for (const auto& f : flags) {
        if (f.finding == finding) {
            return true;
        }
    }
    return false;
}

}  // namespace

TEST(Intervals, RrFromTwoPeaks) {
    const auto set = peaks_at(200.0, {{WaveLabel::R, 0, 1.0, 0}, {WaveLabel::R, 129, 1.0, 1}});
    const auto iv = an::measure_intervals(set);
    ASSERT_EQ(iv.rr.size(), 1u);
    EXPECT_DOUBLE_EQ(iv.rr[0], 0.645);
}

TEST(Intervals, SingleBeatHasNoRr) {
    const auto iv = an::measure_intervals(peaks_at(360.0, {{WaveLabel::R, 100, 1.0, 0}}));
    EXPECT_TRUE(iv.rr.empty());
    EXPECT_TRUE(iv.pp.empty());
}

TEST(Intervals, WithinBeatExample) {
    const auto set = peaks_at(1000.0, {{WaveLabel::P, 10, 0.2, 0},
                                       {WaveLabel::Q, 40, -0.1, 0},
                                       {WaveLabel::R, 50, 1.5, 0},
                                       {WaveLabel::S, 60, -0.2, 0},
                                       {WaveLabel::T, 120, 0.3, 0}});
    const auto iv = an::measure_intervals(set);
    EXPECT_EQ(iv.pr, (std::vector<double>{0.040}));
    EXPECT_EQ(iv.qrs, (std::vector<double>{0.020}));
    EXPECT_EQ(iv.qt, (std::vector<double>{0.080}));
    EXPECT_EQ(iv.st, (std::vector<double>{0.060}));
}

TEST(Intervals, CountsFollowBeats) {
    qrskit::synth::SynthConfig cfg;
    cfg.n_beats = 10;
    cfg.rr_s = 0.8;
    const auto syn = qrskit::synth::generate(cfg);
    const auto detection = qrskit::detector::detect(syn.signal);
    const auto iv = an::measure_intervals(detection.peaks);
    const std::size_t beats = detection.peaks.with_label(WaveLabel::R).size();
    EXPECT_EQ(iv.rr.size(), beats - 1);
    EXPECT_LE(iv.pr.size(), beats);
    EXPECT_LE(iv.qt.size(), beats);
    for (double v : iv.rr) {
        EXPECT_NEAR(v, 0.8, 1.5 / 360.0);
    }
}

TEST(Intervals, TranslationInvariant) {
    std::vector<Peak> base{{WaveLabel::P, 30, 0.2, 0}, {WaveLabel::R, 90, 1.0, 0},
                           {WaveLabel::T, 170, 0.3, 0}, {WaveLabel::P, 300, 0.2, 1},
                           {WaveLabel::R, 361, 1.0, 1}, {WaveLabel::T, 445, 0.3, 1}};
    std::vector<Peak> moved = base;
    for (auto& p : moved) {
        p.index += 1234;
    }
    const auto a = an::measure_intervals(peaks_at(360.0, base));
    const auto b = an::measure_intervals(peaks_at(360.0, moved));
    EXPECT_EQ(a.rr, b.rr);
    EXPECT_EQ(a.pp, b.pp);
    EXPECT_EQ(a.pr, b.pr);
}

TEST(Amplitudes, BaselineCorrectedMeans) {
    const qrskit::Signal sig{{1, 1, 1, 3, 1, 1, 0, 1, 2}, 100.0, "a"};
    const auto set = peaks_at(100.0, {{WaveLabel::R, 3, 3, 0}, {WaveLabel::R, 8, 2, 1}, {WaveLabel::S, 6, 0, 0}});
    const auto amps = an::measure_amplitudes(sig, set);
    ASSERT_TRUE(amps[WaveLabel::R]);
    EXPECT_DOUBLE_EQ(*amps[WaveLabel::R], 1.5);
    EXPECT_DOUBLE_EQ(*amps[WaveLabel::S], -1.0);
    EXPECT_FALSE(amps[WaveLabel::P]);
}

TEST(Rules, BuiltinBounds) {
    const auto table = an::builtin_rules();
    EXPECT_NO_THROW(table.validate());
    EXPECT_EQ(table.rows.size(), 10u);
    EXPECT_DOUBLE_EQ(row(table, "PR").low, 0.12);
    EXPECT_DOUBLE_EQ(row(table, "PR").high, 0.20);
    EXPECT_DOUBLE_EQ(row(table, "RR").low, 0.80);
    EXPECT_DOUBLE_EQ(row(table, "RR").high, 0.85);
    EXPECT_DOUBLE_EQ(row(table, "QT").low, 0.35);
    EXPECT_DOUBLE_EQ(row(table, "QT").high, 0.44);
    EXPECT_DOUBLE_EQ(row(table, "T").low, 0.1);
    EXPECT_DOUBLE_EQ(row(table, "T").high, 0.5);
    EXPECT_EQ(row(table, "RR").below_finding, "Tachycardia (Fast heart)");
    EXPECT_EQ(row(table, "RR").above_finding, "Bradycardia (Slow heart)");
    EXPECT_EQ(row(table, "Q").relative_to, "R");
}

TEST(Diagnose, TachycardiaAndBradycardia) {
    const auto rules = an::builtin_rules();
    const auto fast = an::diagnose(rr_only({0.645, 0.645, 0.645}), {}, rules).flags;
    ASSERT_EQ(fast.size(), 1u);
    EXPECT_EQ(fast[0].finding, "Tachycardia (Fast heart)");
    EXPECT_EQ(fast[0].rule, "RR");
    EXPECT_DOUBLE_EQ(fast[0].bound, 0.80);

    const auto slow = an::diagnose(rr_only({0.90, 0.90}), {}, rules).flags;
    ASSERT_EQ(slow.size(), 1u);
    EXPECT_EQ(slow[0].finding, "Bradycardia (Slow heart)");

    EXPECT_TRUE(an::diagnose(rr_only({0.82, 0.83}), {}, rules).flags.empty());
}

TEST(Diagnose, NormalPrNotFlagged) {
    an::IntervalSet iv;
    iv.pr = {0.15, 0.15};
    EXPECT_TRUE(an::evaluate_rules(iv, {}, an::builtin_rules()).empty());
    iv.pr = {0.25};
    const auto flags = an::evaluate_rules(iv, {}, an::builtin_rules());
    ASSERT_EQ(flags.size(), 1u);
    EXPECT_EQ(flags[0].finding, "Blockage of AV node; atherosclerotic disease");
}

TEST(Diagnose, ToleranceBandOnDegenerateRows) {
    an::IntervalSet iv;
    iv.qrs = {0.085};
    EXPECT_TRUE(an::evaluate_rules(iv, {}, an::builtin_rules()).empty());
    iv.qrs = {0.07};
    EXPECT_TRUE(has_finding(an::evaluate_rules(iv, {}, an::builtin_rules()), "Hyperkalemia"));
}

TEST(Diagnose, RelativeQRow) {
    an::RuleTable table;
    table.rows = {{"Q", 0.0, 0.25, {}, "Deep Q", qrskit::analysis::Units::millivolts, 0.0, "R"}};
    an::AmplitudeSet amps;
    amps[WaveLabel::R] = 2.0;
    amps[WaveLabel::Q] = -0.4;
    EXPECT_TRUE(an::evaluate_rules({}, amps, table).empty());
    amps[WaveLabel::Q] = -0.6;
    const auto flags = an::evaluate_rules({}, amps, table);
    ASSERT_EQ(flags.size(), 1u);
    EXPECT_DOUBLE_EQ(flags[0].bound, 0.5);
    amps[WaveLabel::R].reset();
    EXPECT_TRUE(an::evaluate_rules({}, amps, table).empty());
}

TEST(Diagnose, PerBeatFlagsEachViolation) {
    an::DiagnoseOptions opts;
    opts.per_beat = true;
    opts.sinoatrial_heuristic = false;
    const auto flags = an::evaluate_rules(rr_only({0.7, 0.82, 0.9}), {}, an::builtin_rules(), opts);
    ASSERT_EQ(flags.size(), 2u);
    EXPECT_EQ(flags[0].finding, "Tachycardia (Fast heart)");
    EXPECT_EQ(flags[1].finding, "Bradycardia (Slow heart)");
}

// Every flag lies outside its row's band, and every mean outside a band on a
// side with a finding raises exactly that flag.
TEST(Diagnose, SoundAndComplete) {
    const auto rules = an::builtin_rules();
    an::DiagnoseOptions opts;
    opts.sinoatrial_heuristic = false;
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> seconds(0.0, 1.2);
    std::uniform_real_distribution<double> millivolts(-1.0, 2.5);
    for (int trial = 0; trial < 500; ++trial) {
        an::IntervalSet iv;
        iv.pr = {seconds(rng)};
        iv.qrs = {seconds(rng) / 5.0};
        iv.qt = {seconds(rng)};
        iv.st = {seconds(rng) / 3.0};
        iv.pp = {seconds(rng)};
        iv.rr = {seconds(rng)};
        an::AmplitudeSet amps;
        for (auto label : qrskit::kAllLabels) {
            amps[label] = millivolts(rng);
        }
        const auto flags = an::evaluate_rules(iv, amps, rules, opts);

        std::size_t expected = 0;
        for (const auto& r : rules.rows) {
            if (r.relative_to) {
                continue;
            }
            const auto label = qrskit::parse_label(r.measure);
            double v = 0.0;
            if (label) {
                v = *amps[*label];
            } else if (r.measure == "PR") {
                v = iv.pr[0];
            } else if (r.measure == "QRS") {
                v = iv.qrs[0];
            } else if (r.measure == "QT") {
                v = iv.qt[0];
            } else if (r.measure == "ST") {
                v = iv.st[0];
            } else if (r.measure == "PP") {
                v = iv.pp[0];
            } else {
                v = iv.rr[0];
            }
            const double lo = r.low * (1.0 - r.tolerance);
            const double hi = r.high * (1.0 + r.tolerance);
            if ((v < lo && r.below_finding) || (v > hi && r.above_finding)) {
                ++expected;
                EXPECT_TRUE(has_finding(flags, v < lo ? *r.below_finding : *r.above_finding)) << r.measure << "=" << v;
            }
        }
        EXPECT_EQ(flags.size(), expected);
        for (const auto& f : flags) {
            const auto& r = row(rules, f.rule);
            EXPECT_TRUE(f.measured < f.bound ? f.finding == r.below_finding : f.finding == r.above_finding);
        }
    }
}

TEST(Diagnose, SinoatrialHeuristic) {
    const auto rules = an::builtin_rules();
    const auto flags = an::evaluate_rules(rr_only({0.8, 0.8, 1.6, 0.8}), {}, rules);
    EXPECT_TRUE(has_finding(flags, std::string(an::kSinoatrialFinding)));
    EXPECT_FALSE(has_finding(an::evaluate_rules(rr_only({0.8, 0.8, 1.2, 0.8}), {}, rules),
                             std::string(an::kSinoatrialFinding)));
    an::DiagnoseOptions off;
    off.sinoatrial_heuristic = false;
    EXPECT_FALSE(has_finding(an::evaluate_rules(rr_only({0.8, 0.8, 1.6, 0.8}), {}, rules, off),
                             std::string(an::kSinoatrialFinding)));
}

TEST(Rules, JsonRoundTripAndDefaults) {
    const auto table = an::rules_from_json(R"([
        {"measure": "RR", "low": 0.6, "high": 1.0, "below_finding": "fast"},
        {"measure": "R", "low": 1.0, "high": 1.0}
    ])");
    ASSERT_EQ(table.rows.size(), 2u);
    EXPECT_EQ(table.rows[0].units, an::Units::seconds);
    EXPECT_DOUBLE_EQ(table.rows[0].tolerance, 0.0);
    EXPECT_FALSE(table.rows[0].above_finding);
    EXPECT_EQ(table.rows[1].units, an::Units::millivolts);
    EXPECT_DOUBLE_EQ(table.rows[1].tolerance, 0.1);

    const auto builtin = an::builtin_rules();
    const auto again = an::rules_from_json(an::rules_to_json(builtin));
    ASSERT_EQ(again.rows.size(), builtin.rows.size());
    for (std::size_t i = 0; i < builtin.rows.size(); ++i) {
        EXPECT_EQ(again.rows[i].measure, builtin.rows[i].measure);
        EXPECT_EQ(again.rows[i].low, builtin.rows[i].low);
        EXPECT_EQ(again.rows[i].high, builtin.rows[i].high);
        EXPECT_EQ(again.rows[i].below_finding, builtin.rows[i].below_finding);
        EXPECT_EQ(again.rows[i].above_finding, builtin.rows[i].above_finding);
        EXPECT_EQ(again.rows[i].tolerance, builtin.rows[i].tolerance);
        EXPECT_EQ(again.rows[i].relative_to, builtin.rows[i].relative_to);
    }
}

TEST(Rules, JsonErrors) {
    EXPECT_THROW(an::rules_from_json("not json"), std::invalid_argument);
    EXPECT_THROW(an::rules_from_json(R"({"measure": "RR"})"), std::invalid_argument);
    EXPECT_THROW(an::rules_from_json(R"([{"measure": "XY", "low": 0, "high": 1}])"), std::invalid_argument);
    EXPECT_THROW(an::rules_from_json(R"([{"measure": "RR", "low": 2, "high": 1}])"), std::invalid_argument);
    EXPECT_THROW(an::rules_from_json(R"([{"measure": "RR", "high": 1}])"), std::invalid_argument);
    EXPECT_THROW(an::rules_from_json(R"([{"measure": "RR", "low": 0, "high": 1, "units": "ms"}])"),
                 std::invalid_argument);
}

TEST(Analyze, EndToEndTachycardia) {
    qrskit::synth::SynthConfig cfg;
    cfg.n_beats = 20;
    cfg.rr_s = 0.645;
    cfg.seed = 5;
    const auto syn = qrskit::synth::generate(cfg);
    const auto report = an::analyze(syn.signal);
    EXPECT_EQ(report.signal.n_samples, syn.signal.size());
    EXPECT_TRUE(has_finding(report.flags, "Tachycardia (Fast heart)"));
    EXPECT_FALSE(has_finding(report.flags, std::string(an::kSinoatrialFinding)));
}

TEST(Analyze, DefaultSynthIsNormal) {
    const auto report = an::analyze(qrskit::synth::generate({}).signal);
    for (const auto& f : report.flags) {
        ADD_FAILURE() << f.rule << ": " << f.finding << " (" << f.measured << ")";
    }
}

TEST(Analyze, FlatSignalHasNoBeats) {
    EXPECT_THROW(an::analyze(qrskit::Signal{std::vector<double>(4000, 0.0), 360.0, "z"}), qrskit::NoBeatsError);
}

#include <sstream>

#include "catch_amalgamated.hpp"
#include "helpers.hpp"
#include "jawtap/error.hpp"
#include "jawtap/evalkit.hpp"
#include "jawtap/synth.hpp"

using namespace jawtap;

namespace {

EventLogEntry scored(double t, GestureLabel truth, GestureLabel predicted) {
    EventLogEntry e;
    e.t = t;
    e.outcome = Outcome::Scored;
    e.truth = truth;
    e.predicted = predicted;
    e.nn_distance = 1.0;
    return e;
}

EvalReport report_from(std::vector<EventLogEntry> log) {
    EvalReport r;
    r.log = std::move(log);
    return regroup(r, Grouping::None);
}

void check_consistency(const EvalReport& r) {
    std::size_t total = 0, trace = 0;
    for (std::size_t i = 0; i < r.confusion.rows(); ++i)
        for (std::size_t k = 0; k < r.confusion.cols(); ++k) {
            total += r.confusion(i, k);
            if (r.truth_classes[i] == r.predicted_classes[k]) trace += r.confusion(i, k);
        }
    CHECK(total == r.total);
    CHECK(trace == r.correct);
    if (r.total) CHECK(r.accuracy == Catch::Approx(static_cast<double>(r.correct) / static_cast<double>(r.total)));
}

const Recording& train_set() {
    static const Recording rec = synth_dataset(DatasetSpec::per_label(5), 101);
    return rec;
}

const Recording& test_set() {
    static const Recording rec = synth_dataset(DatasetSpec::per_label(5), 202);
    return rec;
}

}  // namespace

TEST_CASE("grouping names parse and print", "[evalkit]") {
    for (Grouping g : {Grouping::None, Grouping::Manner3, Grouping::Place4}) CHECK(parse_grouping(to_string(g)) == g);
    CHECK_THROWS_AS(parse_grouping("manner"), Error);
    CHECK(to_string(Outcome::FalsePositive) == "false_positive");
}

TEST_CASE("label quotient maps", "[evalkit]") {
    const auto lh = parse_label("left_hold"), bh = parse_label("back_hold"), bt = parse_label("back_triple");
    CHECK(*group_truth(lh, Grouping::Manner3, false) == group_prediction(bh, Grouping::Manner3, false));
    CHECK(*group_truth(lh, Grouping::Place4, false) != group_prediction(bh, Grouping::Place4, false));
    CHECK_FALSE(group_truth(bt, Grouping::Manner3, false).has_value());
    CHECK(*group_truth(bt, Grouping::Manner3, true) == "double");
    CHECK(*group_truth(bt, Grouping::Place4, false) == "back");
    CHECK(*group_truth(bt, Grouping::None, false) == "back_triple");

    const EvalReport r = report_from({scored(1.0, lh, bh)});
    CHECK(r.accuracy == 0.0);
    CHECK(regroup(r, Grouping::Manner3).accuracy == 1.0);
    CHECK(regroup(r, Grouping::Place4).accuracy == 0.0);
}

TEST_CASE("all-correct reports stay perfect under every grouping", "[evalkit]") {
    std::vector<EventLogEntry> log;
    double t = 0.0;
    for (const auto& l : all_labels())
        for (int k = 0; k < 3; ++k) log.push_back(scored(t += 1.0, l, l));
    const EvalReport r = report_from(log);
    CHECK(r.accuracy == 1.0);
    for (bool tad : {false, true})
        for (Grouping g : {Grouping::Manner3, Grouping::Place4}) CHECK(regroup(r, g, tad).accuracy == 1.0);
    const EvalReport m = regroup(r, Grouping::Manner3);
    CHECK(m.excluded == 3);
    CHECK(m.total == 36);
    CHECK_FALSE(m.notes.empty());
}

TEST_CASE("coarsening never lowers accuracy on random reports", "[evalkit]") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::size_t> pick(0, kLabelCount - 1), count(1, 80);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<EventLogEntry> log;
        const double p_correct = u(rng);
        const std::size_t n = count(rng);
        for (std::size_t i = 0; i < n; ++i) {
            const GestureLabel truth = all_labels()[pick(rng)];
            const GestureLabel pred = u(rng) < p_correct ? truth : all_labels()[pick(rng)];
            log.push_back(scored(static_cast<double>(i), truth, pred));
        }
        const EvalReport r = report_from(log);
        check_consistency(r);
        // Row sums equal the per-label truth counts.
        for (std::size_t i = 0; i < r.truth_classes.size(); ++i) {
            std::size_t row = 0, want = 0;
            for (std::size_t k = 0; k < r.confusion.cols(); ++k) row += r.confusion(i, k);
            for (const auto& e : log) want += to_string(*e.truth) == r.truth_classes[i];
            CHECK(row == want);
        }
        for (bool tad : {false, true})
            for (Grouping g : {Grouping::Manner3, Grouping::Place4}) {
                const EvalReport q = regroup(r, g, tad);
                check_consistency(q);
                CHECK(q.accuracy >= q.base_accuracy);
                if (g == Grouping::Place4 || tad) {
                    CHECK(q.base_accuracy == r.accuracy);
                    CHECK(q.total == r.total);
                }
            }
    }
}

TEST_CASE("training on the test set scores perfectly", "[evalkit]") {
    const EvalReport r = run_eval(train_set(), train_set());
    CHECK(r.total == 65);
    CHECK(r.accuracy == 1.0);
    CHECK(r.false_positives == 0);
    CHECK(r.missed == 0);
    check_consistency(r);
    for (const auto& e : r.log) {
        if (e.outcome != Outcome::Scored) continue;
        if (e.truth->is_hold()) {
            REQUIRE(e.hold_truth);
            REQUIRE(e.hold_predicted);
            CHECK(std::abs(*e.hold_truth - *e.hold_predicted) <= 0.15);
        }
    }
}

TEST_CASE("disjoint synthetic train and test sets score at least 95%", "[evalkit]") {
    const EvalReport r = run_eval(train_set(), test_set());
    CHECK(r.total >= 64);
    CHECK(r.accuracy >= 0.95);
}

TEST_CASE("a test label absent from training is rejected", "[evalkit]") {
    DatasetSpec spec = DatasetSpec::per_label(2);
    spec.gesture_counts[parse_label("right_double").index()] = 0;
    const Recording train = synth_dataset(spec, 5);
    try {
        run_eval(train, test_set());
        FAIL("no throw");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MissingLabelInTrain);
    }
}

TEST_CASE("a test recording with no detectable events is an error", "[evalkit]") {
    Recording quiet = testutil::quiet_recording(12.0, 4);
    quiet.annotations.push_back({parse_label("left_single"), 5.0, 6.5, std::nullopt});
    try {
        run_eval(train_set(), quiet);
        FAIL("no throw");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoEventsDetected);
    }
}

TEST_CASE("channel ablation: identity mask, polarity and direction", "[evalkit]") {
    const EvalReport base = run_eval(train_set(), test_set());
    const EvalReport both = ablate_channels(train_set(), test_set(), ChannelMask::both());
    CHECK(report_json(both) == report_json(base));

    const EvalReport right = ablate_channels(train_set(), test_set(), ChannelMask::right_only());
    const EvalReport left = ablate_channels(train_set(), test_set(), ChannelMask::left_only());
    CHECK(right.mask == ChannelMask::right_only());
    CHECK(right.accuracy <= both.accuracy);
    CHECK(left.accuracy <= both.accuracy);

    // left_single keeps its negative right-ear peak.
    const auto ls = parse_label("left_single");
    std::size_t n = 0, hit = 0;
    for (const auto& e : right.log)
        if (e.outcome == Outcome::Scored && e.truth == ls) {
            ++n;
            hit += e.predicted == ls;
        }
    CHECK(n == 5);
    CHECK(hit >= 4);
}

TEST_CASE("reports are byte-identical across runs", "[evalkit]") {
    EvalConfig cfg;
    cfg.grouping = Grouping::Place4;
    const std::string a = report_json(run_eval(train_set(), test_set(), cfg));
    const std::string b = report_json(run_eval(train_set(), test_set(), cfg));
    CHECK(a == b);
    const auto j = nlohmann::json::parse(a);
    for (const char* key : {"grouping", "mask", "confusion", "accuracy", "base_accuracy", "events", "truth_classes"})
        CHECK(j.contains(key));
    CHECK(j["grouping"] == "place4");
    CHECK(j["truth_classes"].size() == 4);
}

TEST_CASE("table and CSV renderings", "[evalkit]") {
    const EvalReport r = report_from({scored(1.0, parse_label("left_single"), parse_label("left_single")),
                                      scored(2.5, parse_label("back_hold"), parse_label("front_hold"))});
    const std::string table = confusion_table(r);
    CHECK(table.find("left_single") != std::string::npos);
    CHECK(table.find("accuracy 50.00% (1/2)") != std::string::npos);

    const std::string csv = event_log_csv(r);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,outcome,truth,predicted,nn_distance,hold_truth,hold_predicted");
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        CHECK(std::count(line.begin(), line.end(), ',') == 6);
    }
    CHECK(rows == 2);
    CHECK(csv.find("back_hold,front_hold") != std::string::npos);
}

#include "jawtap/evalkit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "jawtap/error.hpp"

namespace jawtap {

std::string to_string(Grouping g) {
    switch (g) {
        case Grouping::None: return "none";
        case Grouping::Manner3: return "manner3";
        case Grouping::Place4: return "place4";
    }
    return "none";
}

Grouping parse_grouping(std::string_view text) {
    if (text == "none") return Grouping::None;
    if (text == "manner3") return Grouping::Manner3;
    if (text == "place4") return Grouping::Place4;
    throw Error(ErrorCode::InvalidArgument, "unknown grouping '" + std::string(text) + "'");
}

std::string to_string(Outcome o) {
    switch (o) {
        case Outcome::Scored: return "scored";
        case Outcome::FalsePositive: return "false_positive";
        case Outcome::Missed: return "missed";
        case Outcome::Gated: return "gated";
    }
    return "scored";
}

std::optional<std::string> group_truth(GestureLabel label, Grouping g, bool triple_as_double) {
    if (g == Grouping::Manner3 && label.manner() == Manner::Triple && !triple_as_double) return std::nullopt;
    return group_prediction(label, g, triple_as_double);
}

std::string group_prediction(GestureLabel label, Grouping g, bool triple_as_double) {
    switch (g) {
        case Grouping::None: return to_string(label);
        case Grouping::Manner3:
            if (label.manner() == Manner::Triple) return triple_as_double ? "double" : "triple";
            return std::string(to_string(label.manner()));
        case Grouping::Place4: return std::string(to_string(label.place()));
    }
    return to_string(label);
}

namespace {

void class_lists(Grouping g, bool triple_as_double, std::vector<std::string>& truth, std::vector<std::string>& pred) {
    truth.clear();
    switch (g) {
        case Grouping::None:
            for (const auto& l : all_labels()) truth.push_back(to_string(l));
            pred = truth;
            return;
        case Grouping::Manner3:
            truth = {"single", "double", "hold"};
            pred = truth;
            if (!triple_as_double) pred.push_back("triple");
            return;
        case Grouping::Place4:
            truth = {"front", "back", "left", "right"};
            pred = truth;
            return;
    }
}

std::size_t position(const std::vector<std::string>& v, const std::string& x) {
    return static_cast<std::size_t>(std::find(v.begin(), v.end(), x) - v.begin());
}

EvalReport build_report(std::vector<EventLogEntry> log, Grouping g, bool triple_as_double, ChannelMask mask) {
    EvalReport r;
    r.grouping = g;
    r.mask = mask;
    r.triple_as_double = triple_as_double;
    class_lists(g, triple_as_double, r.truth_classes, r.predicted_classes);
    r.confusion = Matrix<std::size_t>(r.truth_classes.size(), r.predicted_classes.size());

    std::size_t base_correct = 0;
    for (const auto& e : log) {
        switch (e.outcome) {
            case Outcome::FalsePositive: ++r.false_positives; continue;
            case Outcome::Missed: ++r.missed; continue;
            case Outcome::Gated: ++r.gated; continue;
            case Outcome::Scored: break;
        }
        const auto t = group_truth(*e.truth, g, triple_as_double);
        if (!t) {
            ++r.excluded;
            continue;
        }
        const std::string p = group_prediction(*e.predicted, g, triple_as_double);
        ++r.confusion(position(r.truth_classes, *t), position(r.predicted_classes, p));
        ++r.total;
        if (*t == p) ++r.correct;
        if (*e.truth == *e.predicted) ++base_correct;
    }
    if (r.total > 0) {
        r.accuracy = static_cast<double>(r.correct) / static_cast<double>(r.total);
        r.base_accuracy = static_cast<double>(base_correct) / static_cast<double>(r.total);
    }
    for (std::size_t i = 0; i < r.truth_classes.size(); ++i) {
        std::size_t row = 0;
        for (std::size_t j = 0; j < r.predicted_classes.size(); ++j) row += r.confusion(i, j);
        const std::size_t hit = i < r.predicted_classes.size() ? r.confusion(i, i) : 0;
        r.per_class_accuracy.push_back(row ? std::optional<double>(static_cast<double>(hit) / static_cast<double>(row))
                                           : std::nullopt);
    }
    if (r.excluded > 0)
        r.notes.push_back(std::to_string(r.excluded) + " back_triple events excluded from manner grouping");
    r.log = std::move(log);
    return r;
}

void check_labels(const std::set<std::size_t>& have, const Recording& test, const char* where) {
    for (const auto& a : test.annotations) {
        if (!std::holds_alternative<GestureLabel>(a.label)) continue;
        const GestureLabel l = std::get<GestureLabel>(a.label);
        if (!have.count(l.index()))
            throw Error(ErrorCode::MissingLabelInTrain, to_string(l) + " has no " + where);
    }
}

EvalReport score(const GestureModel& model, const Recording& test, const RecognizerConfig& rc, const EvalConfig& cfg) {
    std::set<std::size_t> have;
    for (const auto& t : model.knn.templates) have.insert(t.label.index());
    check_labels(have, test, "template in the model");

    const ReplayResult run = replay(model, test, rc);

    std::vector<const Annotation*> gestures;
    for (const auto& a : test.annotations)
        if (std::holds_alternative<GestureLabel>(a.label)) gestures.push_back(&a);

    // Closest pairs first; ties broken by time, then annotation order.
    std::vector<std::tuple<double, double, std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < run.decisions.size(); ++i)
        for (std::size_t j = 0; j < gestures.size(); ++j) {
            const double gap = std::abs(run.decisions[i].t_center - gestures[j]->center());
            if (gap <= cfg.match_window) pairs.emplace_back(gap, run.decisions[i].t_center, i, j);
        }
    std::sort(pairs.begin(), pairs.end());
    std::vector<std::optional<std::size_t>> match_of(run.decisions.size());
    std::vector<bool> taken(gestures.size(), false);
    for (const auto& [gap, t, i, j] : pairs) {
        if (match_of[i] || taken[j]) continue;
        match_of[i] = j;
        taken[j] = true;
    }

    std::map<double, const GestureEvent*> event_at;
    for (const auto& e : run.events) event_at.emplace(e.t_center, &e);

    std::vector<EventLogEntry> log;
    for (std::size_t i = 0; i < run.decisions.size(); ++i) {
        const SegmentDecision& d = run.decisions[i];
        EventLogEntry e;
        e.t = d.t_center;
        if (d.classification) {
            e.predicted = d.classification->label;
            e.nn_distance = d.classification->nn_distance;
            if (auto it = event_at.find(d.t_center); it != event_at.end() && it->second->hold_duration)
                e.hold_predicted = it->second->hold_duration;
        }
        if (match_of[i]) {
            const Annotation& a = *gestures[*match_of[i]];
            e.truth = std::get<GestureLabel>(a.label);
            e.hold_truth = a.hold_duration;
            e.outcome = d.classification ? Outcome::Scored : Outcome::Gated;
        } else if (d.classification) {
            e.outcome = Outcome::FalsePositive;
        } else {
            continue;  // noise correctly rejected
        }
        log.push_back(e);
    }
    for (std::size_t j = 0; j < gestures.size(); ++j) {
        if (taken[j]) continue;
        EventLogEntry e;
        e.t = gestures[j]->center();
        e.outcome = Outcome::Missed;
        e.truth = std::get<GestureLabel>(gestures[j]->label);
        e.hold_truth = gestures[j]->hold_duration;
        log.push_back(e);
    }
    std::stable_sort(log.begin(), log.end(), [](const EventLogEntry& a, const EventLogEntry& b) {
        return std::tie(a.t, a.outcome) < std::tie(b.t, b.outcome);
    });
    if (std::none_of(log.begin(), log.end(), [](const EventLogEntry& e) { return e.outcome == Outcome::Scored; }))
        throw Error(ErrorCode::NoEventsDetected, "no detected gesture matched an annotation");

    EvalReport full = build_report(std::move(log), Grouping::None, cfg.triple_as_double, model.knn.mask);
    return cfg.grouping == Grouping::None ? full : regroup(full, cfg.grouping, cfg.triple_as_double);
}

}  // namespace

EvalReport run_eval(const Recording& train, const Recording& test, const EvalConfig& cfg) {
    std::set<std::size_t> annotated;
    for (const auto& a : train.annotations)
        if (std::holds_alternative<GestureLabel>(a.label)) annotated.insert(std::get<GestureLabel>(a.label).index());
    check_labels(annotated, test, "annotation in the training recording");

    TrainConfig tc = cfg.train;
    tc.mask = cfg.mask;
    const GestureModel model = train_model(train, tc);
    RecognizerConfig rc = cfg.recognizer;
    rc.feature_mask = cfg.mask;
    return score(model, test, rc, cfg);
}

EvalReport evaluate_model(const GestureModel& model, const Recording& test, const EvalConfig& cfg) {
    GestureModel masked = model;
    masked.knn.mask = cfg.mask;
    return score(masked, test, cfg.recognizer, cfg);
}

EvalReport ablate_channels(const Recording& train, const Recording& test, ChannelMask mask, EvalConfig cfg) {
    cfg.mask = mask;
    return run_eval(train, test, cfg);
}

EvalReport regroup(const EvalReport& report, Grouping scheme, bool triple_as_double) {
    EvalReport r = build_report(report.log, scheme, triple_as_double, report.mask);
    return r;
}

nlohmann::json to_json(const EvalReport& r) {
    using nlohmann::json;
    auto opt = [](const auto& v) -> json { return v ? json(*v) : json(nullptr); };
    json j;
    j["grouping"] = to_string(r.grouping);
    j["mask"] = to_string(r.mask);
    j["triple_as_double"] = r.triple_as_double;
    j["truth_classes"] = r.truth_classes;
    j["predicted_classes"] = r.predicted_classes;
    json rows = json::array();
    for (std::size_t i = 0; i < r.confusion.rows(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < r.confusion.cols(); ++k) row.push_back(r.confusion(i, k));
        rows.push_back(row);
    }
    j["confusion"] = rows;
    j["correct"] = r.correct;
    j["total"] = r.total;
    j["accuracy"] = r.accuracy;
    j["base_accuracy"] = r.base_accuracy;
    json per = json::array();
    for (const auto& a : r.per_class_accuracy) per.push_back(opt(a));
    j["per_class_accuracy"] = per;
    j["excluded"] = r.excluded;
    j["false_positives"] = r.false_positives;
    j["missed"] = r.missed;
    j["gated"] = r.gated;
    j["notes"] = r.notes;
    json events = json::array();
    for (const auto& e : r.log) {
        json x;
        x["t"] = e.t;
        x["outcome"] = to_string(e.outcome);
        x["truth"] = e.truth ? json(to_string(*e.truth)) : json(nullptr);
        x["predicted"] = e.predicted ? json(to_string(*e.predicted)) : json(nullptr);
        x["nn_distance"] = opt(e.nn_distance);
        x["hold_truth"] = opt(e.hold_truth);
        x["hold_predicted"] = opt(e.hold_predicted);
        events.push_back(x);
    }
    j["events"] = events;
    return j;
}

std::string report_json(const EvalReport& report) { return to_json(report).dump(2) + "\n"; }

std::string confusion_table(const EvalReport& r) {
    std::ostringstream os;
    std::size_t name_w = 5;
    for (const auto& c : r.truth_classes) name_w = std::max(name_w, c.size());
    char buf[64];
    os << "confusion (rows truth, columns predicted), grouping " << to_string(r.grouping) << ", mask "
       << to_string(r.mask) << "\n";
    os << std::string(name_w + 4, ' ');
    for (std::size_t k = 0; k < r.predicted_classes.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%5zu", k);
        os << buf;
    }
    os << "   acc\n";
    for (std::size_t i = 0; i < r.truth_classes.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%2zu ", i);
        os << buf << r.truth_classes[i] << std::string(name_w + 1 - r.truth_classes[i].size(), ' ');
        for (std::size_t k = 0; k < r.predicted_classes.size(); ++k) {
            std::snprintf(buf, sizeof buf, "%5zu", r.confusion(i, k));
            os << buf;
        }
        if (r.per_class_accuracy[i]) std::snprintf(buf, sizeof buf, "  %5.1f%%", 100.0 * *r.per_class_accuracy[i]);
        else std::snprintf(buf, sizeof buf, "      -");
        os << buf << "\n";
    }
    os << "columns:";
    for (std::size_t k = 0; k < r.predicted_classes.size(); ++k) os << " " << k << "=" << r.predicted_classes[k];
    std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * r.accuracy);
    os << "\naccuracy " << buf << " (" << r.correct << "/" << r.total << ")";
    if (r.grouping != Grouping::None) {
        std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * r.base_accuracy);
        os << ", ungrouped " << buf;
    }
    os << "\nfalse positives " << r.false_positives << ", missed " << r.missed << ", gated " << r.gated << "\n";
    for (const auto& n : r.notes) os << "note: " << n << "\n";
    return os.str();
}

std::string event_log_csv(const EvalReport& r) {
    std::ostringstream os;
    os << "t,outcome,truth,predicted,nn_distance,hold_truth,hold_predicted\n";
    auto num = [](std::optional<double> v) {
        if (!v) return std::string();
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6f", *v);
        return std::string(buf);
    };
    for (const auto& e : r.log) {
        os << num(e.t) << "," << to_string(e.outcome) << "," << (e.truth ? to_string(*e.truth) : "") << ","
           << (e.predicted ? to_string(*e.predicted) : "") << "," << num(e.nn_distance) << "," << num(e.hold_truth)
           << "," << num(e.hold_predicted) << "\n";
    }
    return os.str();
}

}  // namespace jawtap

// evalkit.hpp
// Train/test evaluation: confusion matrices, channel ablation and label
// regrouping (manner or place only), with JSON / ASCII / CSV output.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "jawtap/channels.hpp"
#include "jawtap/gesture.hpp"
#include "jawtap/matrix.hpp"
#include "jawtap/model.hpp"
#include "jawtap/recognizer.hpp"
#include "jawtap/recording.hpp"

namespace jawtap {

enum class Grouping { None, Manner3, Place4 };
std::string to_string(Grouping g);  // "none" | "manner3" | "place4"
Grouping parse_grouping(std::string_view text);

struct EvalConfig {
    TrainConfig train;
    RecognizerConfig recognizer;
    // Applied to the KNN and to the SVM motion features; run_eval retrains with it.
    ChannelMask mask = ChannelMask::both();
    Grouping grouping = Grouping::None;
    // Manner3 normally drops back_triple truths; this scores them as doubles instead.
    bool triple_as_double = false;
    double match_window = 0.25;
};

enum class Outcome { Scored, FalsePositive, Missed, Gated };
std::string to_string(Outcome o);  // "scored" | "false_positive" | "missed" | "gated"

struct EventLogEntry {
    double t = 0.0;  // segment center, or annotation center when missed
    Outcome outcome = Outcome::Scored;
    std::optional<GestureLabel> truth;
    std::optional<GestureLabel> predicted;
    std::optional<double> nn_distance;
    std::optional<double> hold_truth;
    std::optional<double> hold_predicted;
};

struct EvalReport {
    Grouping grouping = Grouping::None;
    ChannelMask mask = ChannelMask::both();
    bool triple_as_double = false;
    std::vector<std::string> truth_classes;      // confusion rows
    std::vector<std::string> predicted_classes;  // confusion columns
    Matrix<std::size_t> confusion;
    std::size_t correct = 0;
    std::size_t total = 0;
    double accuracy = 0.0;
    std::vector<std::optional<double>> per_class_accuracy;  // per row, absent when the row is empty
    // Ungrouped 13-class accuracy over exactly the events scored here.
    double base_accuracy = 0.0;
    std::size_t excluded = 0;  // scored events dropped by the grouping
    std::size_t false_positives = 0;
    std::size_t missed = 0;
    std::size_t gated = 0;  // gesture segments rejected as noise
    std::vector<EventLogEntry> log;  // ungrouped, sorted by t
    std::vector<std::string> notes;
};

// Trains on train, replays test, scores detected segments matched to gesture
// annotations. Throws MissingLabelInTrain, NoEventsDetected.
EvalReport run_eval(const Recording& train, const Recording& test, const EvalConfig& cfg = {});
// Scores an existing model; cfg.mask only replaces the model's KNN mask.
EvalReport evaluate_model(const GestureModel& model, const Recording& test, const EvalConfig& cfg = {});
// run_eval with the given mask.
EvalReport ablate_channels(const Recording& train, const Recording& test, ChannelMask mask, EvalConfig cfg = {});

// Recomputes confusion and accuracy on grouped labels from the event log.
EvalReport regroup(const EvalReport& report, Grouping scheme, bool triple_as_double = false);

// Label quotient maps; nullopt means the truth is excluded from scoring.
std::optional<std::string> group_truth(GestureLabel label, Grouping g, bool triple_as_double);
std::string group_prediction(GestureLabel label, Grouping g, bool triple_as_double);

nlohmann::json to_json(const EvalReport& report);
std::string report_json(const EvalReport& report);  // stable, two-space indented
std::string confusion_table(const EvalReport& report);
std::string event_log_csv(const EvalReport& report);

}  // namespace jawtap

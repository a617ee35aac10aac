#include "jawtap/session.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "jawtap/error.hpp"

namespace jawtap {

std::string to_json_line(const GestureEvent& e) {
    nlohmann::json j = {{"label", to_string(e.label)}, {"t_center", e.t_center}};
    if (e.hold_duration) j["hold_duration"] = *e.hold_duration;
    j["nn_distance"] = e.nn_distance;
    return j.dump();
}

Session::Session(SessionConfig cfg) : cfg_(cfg) {
    if (!(cfg_.hold_timeout > 0.0)) throw Error(ErrorCode::InvalidArgument, "hold_timeout must be positive");
}

std::optional<double> Session::hold_start() const {
    if (!pending_) return std::nullopt;
    return pending_->t_start;
}

bool Session::activation_detect(const ClassifiedSegment& c) const {
    if (!cfg_.activation_threshold) throw Error(ErrorCode::UncalibratedThreshold, "no activation threshold");
    return c.label.place() == Place::Back && c.label.manner() == Manner::Triple &&
           c.nn_distance <= *cfg_.activation_threshold;
}

SessionOutput Session::process(const ClassifiedSegment& c) {
    if (last_t_ && c.t_center < *last_t_)
        throw Error(ErrorCode::OutOfOrderInput, "segment at " + std::to_string(c.t_center) + " after " +
                                                    std::to_string(*last_t_));
    last_t_ = c.t_center;

    SessionOutput out;
    if (cfg_.mode == SessionMode::ActivationOnly) {
        if (activation_detect(c)) out.events.push_back({c.label, c.t_center, std::nullopt, c.nn_distance});
        return out;
    }

    out = advance(c.t_center);
    if (pending_) {
        // A new gesture before any release: the pending hold failed.
        out.diagnostics.push_back({DiagnosticKind::HoldTimeout, c.t_center,
                                   to_string(pending_->label) + " superseded before release"});
        pending_.reset();
    }
    if (c.label.is_hold()) {
        pending_ = PendingHold{c.label, c.t_center, c.nn_distance, c.t_center + cfg_.hold_timeout};
    } else {
        out.events.push_back({c.label, c.t_center, std::nullopt, c.nn_distance});
    }
    return out;
}

SessionOutput Session::release(double t_release) {
    SessionOutput out;
    if (!pending_ || !(t_release > pending_->t_start)) return out;
    out.events.push_back({pending_->label, pending_->t_start, t_release - pending_->t_start, pending_->nn_distance});
    pending_.reset();
    return out;
}

void Session::expect_hold_end(double t) {
    if (pending_) pending_->deadline = t + cfg_.hold_timeout;
}

SessionOutput Session::advance(double t_now) {
    SessionOutput out;
    if (pending_ && t_now >= pending_->deadline) {
        out.diagnostics.push_back({DiagnosticKind::HoldTimeout, t_now,
                                   to_string(pending_->label) + " started at " + std::to_string(pending_->t_start) +
                                       " without release"});
        pending_.reset();
    }
    return out;
}

void ReleaseDetector::arm(double t_onset) {
    onset_ = t_onset;
    in_peak_ = false;
    peak_value_ = 0.0;
}

void ReleaseDetector::disarm() {
    onset_.reset();
    in_peak_ = false;
}

std::optional<double> ReleaseDetector::feed(const ImuFrame& f) {
    if (!onset_ || f.t < *onset_ + cfg_.lockout) return std::nullopt;
    const double v = std::max(std::abs(f.gyro_left[1]), std::abs(f.gyro_right[1]));
    if (!in_peak_) {
        if (v > cfg_.threshold) {
            in_peak_ = true;
            peak_value_ = v;
            peak_t_ = f.t;
        }
        return std::nullopt;
    }
    if (v >= peak_value_) {
        peak_value_ = v;
        peak_t_ = f.t;
        return std::nullopt;
    }
    disarm();
    return peak_t_;
}

std::optional<double> detect_release(std::span<const ImuFrame> frames, double t_onset, const ReleaseConfig& cfg) {
    ReleaseDetector det(cfg);
    det.arm(t_onset);
    for (const auto& f : frames)
        if (auto t = det.feed(f)) return t;
    return std::nullopt;
}

double calibrate_activation_threshold(const KnnModel& model, double factor) {
    const auto triple = *GestureLabel::make(Place::Back, Manner::Triple);
    std::vector<const Template*> bank;
    for (const auto& t : model.templates)
        if (t.label == triple) bank.push_back(&t);
    if (bank.size() < 2)
        throw Error(ErrorCode::UncalibratedThreshold, "need at least two back_triple templates");

    const auto cols = model.mask.columns();
    double worst = 0.0;
    for (std::size_t i = 0; i < bank.size(); ++i) {
        double nearest = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < bank.size(); ++j)
            if (i != j) nearest = std::min(nearest, dtw_distance(bank[i]->matrix, bank[j]->matrix, cols, model.band));
        worst = std::max(worst, nearest);
    }
    return factor * worst;
}

}  // namespace jawtap

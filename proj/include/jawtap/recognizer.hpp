// recognizer.hpp
// The streaming chain: ingest -> energy gates -> SVM noise gate -> DTW 1-NN ->
// session, plus training of a GestureModel from an annotated recording.

#pragma once

#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "jawtap/channels.hpp"
#include "jawtap/diagnostics.hpp"
#include "jawtap/dtw_knn.hpp"
#include "jawtap/features.hpp"
#include "jawtap/ingest.hpp"
#include "jawtap/model.hpp"
#include "jawtap/noisegate.hpp"
#include "jawtap/recording.hpp"
#include "jawtap/segment.hpp"
#include "jawtap/session.hpp"

namespace jawtap {

struct RecognizerConfig {
    IngestConfig ingest;
    GateConfig gate;
    SessionMode mode = SessionMode::FullVocabulary;
    // Release threshold as a fraction of the gyro gate threshold.
    double release_factor = 0.6;
    double release_lockout = 0.3;
    // Segments centered this close to a detected release belong to the hold.
    double release_guard = 0.25;
    double hold_timeout = 5.0;
    // Gyro columns fed to the SVM features; the KNN mask lives in the model.
    ChannelMask feature_mask = ChannelMask::both();
};

// What happened to one extracted segment.
struct SegmentDecision {
    double t_center = 0.0;
    GateResult gate;
    std::optional<Classification> classification;  // absent when gated as noise
};

class Recognizer {
public:
    Recognizer(const GestureModel& model, RecognizerConfig cfg = {});

    void push_imu(const ImuFrame& frame);
    void push_audio(double t_first, std::span<const std::int16_t> left, std::span<const std::int16_t> right);
    void push_audio(const AudioFrame& frame);
    // Flushes a trailing event.
    void finish();

    std::vector<GestureEvent> take_events();
    std::vector<Diagnostic> take_diagnostics();
    std::vector<SegmentDecision> take_decisions();

    const Session& session() const { return session_; }

private:
    void drain_windows();
    void handle_segment(const EventSegment& seg);
    void absorb(SessionOutput out);
    void on_frame_for_release(const ImuFrame& f);

    const GestureModel& model_;
    RecognizerConfig cfg_;
    StreamBuffer buffer_;
    EventDetector detector_;
    Session session_;
    ReleaseDetector release_;
    std::deque<ImuFrame> history_;
    std::optional<double> last_release_;

    std::vector<GestureEvent> events_;
    std::vector<Diagnostic> diagnostics_;
    std::vector<SegmentDecision> decisions_;
};

struct ReplayResult {
    std::vector<GestureEvent> events;
    std::vector<Diagnostic> diagnostics;
    std::vector<SegmentDecision> decisions;
};

// Feeds a recording through a Recognizer as fast as possible, interleaving
// audio and gyro in time order. With realtime set, sleeps to match timestamps.
ReplayResult replay(const GestureModel& model, const Recording& rec, const RecognizerConfig& cfg = {},
                    bool realtime = false);

// Runs ingest + detection over a recording and returns every segment.
std::vector<EventSegment> extract_segments(const Recording& rec, const GateConfig& gate = {},
                                           const IngestConfig& ingest = {});

// 1.5 s region centered at t, cut straight from the recording by nominal index.
// Returns nullopt when the region runs past either end.
std::optional<EventSegment> crop_recording(const Recording& rec, double t_center);

struct TrainConfig {
    FeatureMode mode = FeatureMode::Full;
    SvmTrainConfig svm;
    Band band;
    ChannelMask mask = ChannelMask::both();
    GateConfig gate;
    IngestConfig ingest;
    double match_window = 0.25;
    double noise_crop_stride = 0.5;
    // Unannotated stretches also give noise samples, so gesture-only recordings
    // can still train the gate. Crops stay this far from gesture regions.
    double background_crop_stride = 1.0;
    double background_margin = 0.25;
    double activation_factor = 1.2;
};

struct TrainingData {
    std::vector<Template> templates;
    std::vector<FeatureVector> features;
    std::vector<GateClass> classes;
};

// Segments found by the detector and matched to gesture annotations become
// templates and positive SVM samples; unmatched segments, crops along noise
// annotations and crops of unannotated background become negative samples.
TrainingData collect_training_data(const Recording& rec, const TrainConfig& cfg = {});
GestureModel train_model(const Recording& rec, const TrainConfig& cfg = {});

}  // namespace jawtap

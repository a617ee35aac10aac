#include "catch_amalgamated.hpp"
#include "helpers.hpp"
#include "jawtap/error.hpp"
#include "jawtap/features.hpp"
#include "jawtap/recognizer.hpp"
#include "jawtap/segment.hpp"
#include "jawtap/session.hpp"
#include "jawtap/synth.hpp"

using namespace jawtap;

namespace {

// Peaks of a lightly smoothed |y| envelope, both ears.
std::size_t pulse_count(const GyroMatrix& imu) {
    return find_peaks(smoothed_envelope(imu, 3)).size();
}

std::size_t expected_taps(Manner m) {
    switch (m) {
        case Manner::Double: return 2;
        case Manner::Triple: return 3;
        default: return 1;
    }
}

// Windows of a bare clip, as the streaming path would see them.
std::vector<Window> clip_windows(const SynthClip& clip) {
    Recording rec;
    for (std::size_t r = 0; r < clip.imu.rows(); ++r) {
        ImuFrame f;
        f.t = static_cast<double>(r) / 120.0;
        for (int i = 0; i < 3; ++i) f.gyro_left[i] = clip.imu(r, i), f.gyro_right[i] = clip.imu(r, 3 + i);
        rec.imu.push_back(f);
    }
    rec.audio_left = clip.audio.column(0);
    rec.audio_right = clip.audio.column(1);
    return windows_of(rec);
}

}  // namespace

TEST_CASE("left and right taps have opposite y polarity on the two ears", "[synth]") {
    const GestureTemplateParams params;
    for (const auto& l : all_labels()) {
        if (l.place() != Place::Left && l.place() != Place::Right) continue;
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            const SynthClip clip = synth_gesture(l, params, seed);
            // Sign of the largest-|y| sample on each ear.
            double left = 0.0, right = 0.0;
            for (std::size_t r = 0; r < clip.imu.rows(); ++r) {
                if (std::abs(clip.imu(r, kLeftY)) > std::abs(left)) left = clip.imu(r, kLeftY);
                if (std::abs(clip.imu(r, kRightY)) > std::abs(right)) right = clip.imu(r, kRightY);
            }
            INFO(to_string(l) << " seed " << seed);
            if (l.place() == Place::Left) {
                CHECK(left > 0.0);
                CHECK(right < 0.0);
            } else {
                CHECK(left < 0.0);
                CHECK(right > 0.0);
            }
        }
    }
}

TEST_CASE("pulse counts follow the manner", "[synth]") {
    const GestureTemplateParams params;
    for (const auto& l : all_labels())
        for (std::uint64_t seed = 1; seed <= 8; ++seed) {
            const SynthClip clip = synth_gesture(l, params, seed);
            INFO(to_string(l) << " seed " << seed);
            CHECK(clip.tap_times.size() == expected_taps(l.manner()));
            const EventSegment seg = testutil::segment_of(clip);
            if (l.is_hold()) {
                // The release, if any, lies outside the 1.5 s region.
                CHECK(pulse_count(seg.imu) == 1);
                REQUIRE(clip.release_time);
                REQUIRE(clip.hold_duration);
                CHECK(*clip.hold_duration >= 2.0);
                CHECK(*clip.hold_duration <= 4.0);
                CHECK(pulse_count(clip.imu) == 2);
            } else {
                CHECK(pulse_count(seg.imu) == expected_taps(l.manner()) + 1);
                CHECK_FALSE(clip.hold_duration);
            }
        }
}

TEST_CASE("back_hold with a suppressed release has no release pulse at all", "[synth]") {
    SynthOptions opt;
    opt.suppress_release = true;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const SynthClip clip = synth_gesture(parse_label("back_hold"), {}, seed, opt);
        CHECK_FALSE(clip.release_time);
        CHECK_FALSE(clip.hold_duration);
        CHECK(pulse_count(clip.imu) == 1);
    }
    opt = {};
    opt.hold_duration = 3.3;
    const SynthClip forced = synth_gesture(parse_label("back_hold"), {}, 1, opt);
    CHECK(*forced.hold_duration == Catch::Approx(3.3));
    CHECK(*forced.release_time - forced.tap_times[0] == Catch::Approx(3.3));
}

TEST_CASE("triple shows four envelope peaks", "[synth]") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed)
        CHECK(pulse_count(synth_gesture(parse_label("back_triple"), {}, seed).imu) == 4);
}

TEST_CASE("generation is deterministic under a fixed seed", "[synth]") {
    for (const auto& l : all_labels()) {
        const SynthClip a = synth_gesture(l, {}, 77), b = synth_gesture(l, {}, 77);
        CHECK(a.imu == b.imu);
        CHECK(a.audio == b.audio);
        CHECK(a.true_center == b.true_center);
        CHECK_FALSE(synth_gesture(l, {}, 78).imu == a.imu);
    }
    for (NoiseKind k : kNoiseKinds) {
        CHECK(synth_noise(k, 3.0, 5).audio == synth_noise(k, 3.0, 5).audio);
        CHECK(synth_noise(k, 3.0, 5).imu == synth_noise(k, 3.0, 5).imu);
    }
    DatasetSpec spec = DatasetSpec::per_label(2);
    spec.noise_counts = {1, 1, 1, 1};
    CHECK(synth_dataset(spec, 3) == synth_dataset(spec, 3));
}

TEST_CASE("static noise stays under the audio gate", "[synth]") {
    const SynthClip clip = synth_noise(NoiseKind::Static, 10.0, 4);
    EventDetector det;
    std::size_t checked = 0;
    for (const auto& w : clip_windows(clip)) {
        CHECK_FALSE(det.push(w));
        if (det.thresholds()) {
            CHECK(audio_energy(w) < det.thresholds()->audio_energy);
            ++checked;
        }
    }
    CHECK(checked > 100);
}

TEST_CASE("talking may open the audio gate but never the gyro gate", "[synth]") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const SynthClip clip = synth_noise(NoiseKind::Talking, 10.0, seed);
        for (const auto& w : clip_windows(clip)) CHECK(gyro_peak(w) < GateConfig{}.gyro_min_threshold);
        const auto bins = fft_bins(clip.audio.slice_rows(8000, 12000));
        // Speech band carries the energy.
        double low = 0.0;
        for (std::size_t k = 0; k < 30; ++k) low += bins[k];
        CHECK(low > 0.0);
    }
}

TEST_CASE("walking never resembles a gesture closely enough to activate", "[synth]") {
    const GestureModel model = train_model(synth_dataset(DatasetSpec::per_label(5), 41));
    REQUIRE(model.activation_threshold);
    const double threshold = *model.activation_threshold;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const SynthClip clip = synth_noise(NoiseKind::Walking, 10.0, seed);
        CHECK(gyro_peak(clip.imu) > GateConfig{}.gyro_min_threshold);  // bumps are present
        for (std::size_t c = 90; c + 90 <= clip.imu.rows(); c += 15) {
            const auto cls = classify(model.knn, testutil::segment_of(clip, c).imu);
            for (const auto& d : cls.per_label_min) CHECK(*d > threshold);
        }
    }
}

TEST_CASE("13 labels x 5 gives 65 detectable annotations", "[synth]") {
    const Recording rec = synth_dataset(DatasetSpec::per_label(5), 6);
    REQUIRE(rec.annotations.size() == 65);
    validate(rec);
    std::array<int, kLabelCount> per{};
    for (const auto& a : rec.annotations) ++per[std::get<GestureLabel>(a.label).index()];
    for (int n : per) CHECK(n == 5);
    for (std::size_t i = 1; i < rec.annotations.size(); ++i)
        CHECK(rec.annotations[i].t_start >= rec.annotations[i - 1].t_end);

    const auto segs = extract_segments(rec);
    std::size_t found = 0;
    for (const auto& a : rec.annotations)
        for (const auto& s : segs)
            if (std::abs(s.t_center - a.center()) <= 0.05) {
                ++found;
                break;
            }
    CHECK(found >= 64);  // >= 99% detectable
}

TEST_CASE("balanced 650/650 spec gives 1300 annotations", "[synth]") {
    DatasetSpec spec = DatasetSpec::per_label(50);
    spec.noise_counts = {163, 163, 162, 162};
    spec.noise_clip_seconds = 1.5;
    REQUIRE(spec.total_gestures() == 650);
    REQUIRE(spec.total_noise() == 650);
    const Recording rec = synth_dataset(spec, 7);
    CHECK(rec.annotations.size() == 1300);
    std::size_t noise = 0;
    for (const auto& a : rec.annotations) noise += std::holds_alternative<NoiseKind>(a.label);
    CHECK(noise == 650);
}

TEST_CASE("dataset specs round-trip through JSON and are validated", "[synth]") {
    DatasetSpec spec = DatasetSpec::per_label(3);
    spec.noise_counts = {2, 0, 1, 4};
    spec.spacing = 2.5;
    spec.gesture.tap_amplitude = 70.0;
    spec.noise.step_rate = 1.7;
    const DatasetSpec back = dataset_spec_from_json(to_json(spec));
    CHECK(to_json(back) == to_json(spec));
    CHECK(back.gesture_counts == spec.gesture_counts);
    CHECK(back.noise_counts == spec.noise_counts);

    const auto j = nlohmann::json::parse(R"({"gestures": {"left_single": 2}, "noise": {"noise_eating": 1}})");
    const DatasetSpec small = dataset_spec_from_json(j);
    CHECK(small.total_gestures() == 2);
    CHECK(small.noise_counts[2] == 1);

    spec.spacing = 1.0;
    CHECK_THROWS_AS(spec.validate(), Error);
    CHECK_THROWS_AS(dataset_spec_from_json(nlohmann::json::parse(R"({"gestures": {"front_triple": 1}})")), Error);
}

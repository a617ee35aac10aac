#include <fstream>
#include <set>

#include "catch_amalgamated.hpp"
#include "helpers.hpp"
#include "jawtap/error.hpp"
#include "jawtap/gesture.hpp"
#include "jawtap/recording.hpp"
#include "jawtap/synth.hpp"

using namespace jawtap;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("label space has exactly 13 members", "[core]") {
    std::set<std::string> names;
    std::size_t constructible = 0;
    for (Place p : {Place::Front, Place::Back, Place::Left, Place::Right})
        for (Manner m : {Manner::Single, Manner::Double, Manner::Hold, Manner::Triple})
            if (auto l = GestureLabel::make(p, m)) {
                ++constructible;
                names.insert(to_string(*l));
            }
    CHECK(constructible == 13);
    CHECK(names.size() == 13);
    CHECK(all_labels().size() == 13);
    for (std::size_t i = 0; i < all_labels().size(); ++i) CHECK(all_labels()[i].index() == i);
}

TEST_CASE("label codec is a bijection", "[core]") {
    for (const auto& l : all_labels()) CHECK(parse_label(to_string(l)) == l);
    CHECK(to_string(*GestureLabel::make(Place::Back, Manner::Triple)) == "back_triple");
    const auto lh = parse_label("left_hold");
    CHECK(lh.place() == Place::Left);
    CHECK(lh.manner() == Manner::Hold);
    CHECK(code_of([] { parse_label("front_triple"); }) == ErrorCode::UnknownLabel);
    CHECK(code_of([] { parse_label("left"); }) == ErrorCode::UnknownLabel);
    CHECK_FALSE(GestureLabel::make(Place::Front, Manner::Triple).has_value());
    for (NoiseKind k : kNoiseKinds) CHECK(parse_noise_kind(to_string(k)) == k);
    CHECK(std::holds_alternative<NoiseKind>(parse_annotation_label("noise_eating")));
}

TEST_CASE("two seconds of data load as a two second recording", "[core]") {
    Recording rec = testutil::quiet_recording(2.0);
    REQUIRE(rec.imu.size() == 240);
    REQUIRE(rec.audio_size() == 16000);
    const auto dir = testutil::temp_dir("two_seconds");
    save_recording(rec, dir);
    const Recording back = load_recording(dir);
    CHECK(back.duration() == Catch::Approx(2.0));
    CHECK(back.audio_duration() == Catch::Approx(2.0));
}

TEST_CASE("60 rows over one second at a declared 120 Hz is a rate mismatch", "[core]") {
    const auto dir = testutil::temp_dir("rate_mismatch");
    Recording rec = testutil::quiet_recording(1.0);
    save_recording(rec, dir);
    std::ofstream imu(dir / "imu.csv");
    imu << "t,gx_l,gy_l,gz_l,gx_r,gy_r,gz_r\n";
    for (int k = 0; k < 60; ++k) imu << k / 60.0 << ",0,0,0,0,0,0\n";
    imu.close();
    CHECK(code_of([&] { load_recording(dir); }) == ErrorCode::RateMismatch);
}

TEST_CASE("loader rejects malformed recordings", "[core]") {
    const auto dir = testutil::temp_dir("malformed");
    CHECK(code_of([&] { load_recording(dir / "nope"); }) == ErrorCode::MissingFile);

    save_recording(testutil::quiet_recording(1.0), dir);
    std::ofstream imu(dir / "imu.csv");
    imu << "t,gx_l,gy_l,gz_l,gx_r,gy_r,gz_r\n";
    for (int k = 0; k < 120; ++k) imu << (k == 50 ? 49 : k) / 120.0 << ",0,0,0,0,0,0\n";
    imu.close();
    CHECK(code_of([&] { load_recording(dir); }) == ErrorCode::NonMonotonicTimestamps);

    std::filesystem::remove(dir / "audio_r.pcm");
    CHECK(code_of([&] { load_recording(dir); }) == ErrorCode::MissingFile);
}

TEST_CASE("saver refuses invalid recordings", "[core]") {
    const auto dir = testutil::temp_dir("refuse");
    Recording rec = testutil::quiet_recording(1.0);
    rec.imu[10].t = rec.imu[9].t;
    CHECK(code_of([&] { save_recording(rec, dir); }) == ErrorCode::InvariantViolation);

    rec = testutil::quiet_recording(3.0);
    rec.annotations.push_back({parse_label("left_single"), 0.5, 1.5, std::nullopt});
    rec.annotations.push_back({parse_label("left_single"), 1.0, 2.0, std::nullopt});
    CHECK(code_of([&] { save_recording(rec, dir); }) == ErrorCode::InvariantViolation);

    rec.annotations = {{parse_label("left_single"), 1.0, 1.0, std::nullopt}};
    CHECK(code_of([&] { save_recording(rec, dir); }) == ErrorCode::InvariantViolation);

    rec = testutil::quiet_recording(3.0);
    rec.audio_left.resize(rec.audio_left.size() - 8000);
    rec.audio_right.resize(rec.audio_left.size());
    CHECK(code_of([&] { save_recording(rec, dir); }) == ErrorCode::InvariantViolation);
}

TEST_CASE("empty annotation track is written as an empty list", "[core]") {
    const auto dir = testutil::temp_dir("empty_annotations");
    save_recording(testutil::quiet_recording(1.0), dir);
    REQUIRE(std::filesystem::exists(dir / "annotations.jsonl"));
    CHECK(std::filesystem::file_size(dir / "annotations.jsonl") == 0);
    CHECK(load_recording(dir).annotations.empty());
}

TEST_CASE("save then load is lossless for randomized recordings", "[core]") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 12; ++trial) {
        Recording rec = testutil::quiet_recording(2.0 + trial * 0.5, 100 + trial);
        std::uniform_real_distribution<double> u(-500.0, 500.0);
        std::uniform_int_distribution<int> s(-32768, 32767);
        for (auto& f : rec.imu) {
            f.t += std::uniform_real_distribution<double>(-1e-3, 1e-3)(rng);
            for (int i = 0; i < 3; ++i) f.gyro_left[i] = u(rng), f.gyro_right[i] = u(rng) * 1e-7;
        }
        for (auto& v : rec.audio_left) v = static_cast<std::int16_t>(s(rng));
        rec.meta.subject = "s" + std::to_string(trial);
        rec.meta.session = "session " + std::to_string(trial * 7);
        double t = 0.1;
        for (const auto& l : all_labels()) {
            if (t + 0.2 > rec.duration()) break;
            std::optional<double> hold;
            if (l.is_hold()) hold = u(rng) + 600.0;
            rec.annotations.push_back({l, t, t + 0.1 + 1e-9 * trial, hold});
            t += 0.15;
        }
        rec.annotations.push_back({NoiseKind::Walking, t, t + 0.05, std::nullopt});

        const auto dir = testutil::temp_dir("roundtrip");
        save_recording(rec, dir);
        const Recording back = load_recording(dir);
        CHECK(back.meta == rec.meta);
        CHECK(back.imu == rec.imu);
        CHECK(back.audio_left == rec.audio_left);
        CHECK(back.audio_right == rec.audio_right);
        CHECK(back.annotations == rec.annotations);
        CHECK(back == rec);
    }
}

TEST_CASE("synthetic 13-gesture recording reloads with identical annotations", "[core]") {
    const Recording rec = synth_dataset(DatasetSpec::per_label(1), 9);
    REQUIRE(rec.annotations.size() == 13);
    const auto dir = testutil::temp_dir("synth_roundtrip");
    save_recording(rec, dir);
    const Recording back = load_recording(dir);
    CHECK(back.annotations == rec.annotations);
    CHECK(back == rec);
}

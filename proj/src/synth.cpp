#include "jawtap/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "jawtap/error.hpp"

namespace jawtap {

namespace {

constexpr double kImuRate = 120.0;
constexpr double kAudioRate = 8000.0;
constexpr double kAudioLimit = 2047.0;  // 12-bit converter
constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Clips are placed on multiples of 3 gyro rows so 200 audio samples line up exactly.
constexpr std::size_t kPlacementRows = 3;
constexpr std::size_t kPlacementSamples = 200;

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// std distributions are implementation-defined; these transforms are not.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(splitmix(seed)) {}
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    double jitter(double frac) { return 1.0 + uniform(-frac, frac); }
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n; }
    double normal() {
        if (spare_) {
            double v = *spare_;
            spare_.reset();
            return v;
        }
        double u1 = 0.0;
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(kTwoPi * u2);
        return r * std::cos(kTwoPi * u2);
    }

private:
    std::mt19937_64 eng_;
    std::optional<double> spare_;
};

std::size_t imu_rows_for(double seconds) {
    auto rows = static_cast<std::size_t>(std::ceil(seconds * kImuRate - 1e-9));
    return (rows + kPlacementRows - 1) / kPlacementRows * kPlacementRows;
}

// Signal accumulator for one clip, in physical units before quantization.
struct Canvas {
    explicit Canvas(double seconds)
        : gyro(imu_rows_for(seconds)),
          left(gyro.size() / kPlacementRows * kPlacementSamples),
          right(left.size()) {}

    std::vector<std::array<double, 6>> gyro;
    std::vector<double> left;
    std::vector<double> right;

    // Gaussian lobe plus a delayed opposite rebound lobe.
    void add_pulse(double t0, double sigma, const AxisProfile& gains, double amp, double rebound, double delay) {
        add_lobe(t0, sigma, gains, amp);
        if (rebound > 0.0) add_lobe(t0 + delay, sigma, gains, -amp * rebound);
    }

    void add_lobe(double t0, double sigma, const AxisProfile& gains, double amp) {
        const double reach = 5.0 * sigma;
        const auto [lo, hi] = imu_span(t0 - reach, t0 + reach);
        for (std::size_t k = lo; k < hi; ++k) {
            const double u = (static_cast<double>(k) / kImuRate - t0) / sigma;
            const double v = amp * std::exp(-0.5 * u * u);
            for (std::size_t a = 0; a < 6; ++a) gyro[k][a] += gains[a] * v;
        }
    }

    void add_tone(double t0, double freq, double decay, double amp_l, double amp_r) {
        const auto [lo, hi] = audio_span(t0, t0 + 6.0 * decay);
        for (std::size_t k = lo; k < hi; ++k) {
            const double dt = static_cast<double>(k) / kAudioRate - t0;
            const double v = std::exp(-dt / decay) * std::sin(kTwoPi * freq * dt);
            left[k] += amp_l * v;
            right[k] += amp_r * v;
        }
    }

    // Short broadband contact click.
    void add_click(double t0, double amp_l, double amp_r, Rng& rng) {
        constexpr double decay = 0.002;
        const auto [lo, hi] = audio_span(t0, t0 + 5.0 * decay);
        for (std::size_t k = lo; k < hi; ++k) {
            const double dt = static_cast<double>(k) / kAudioRate - t0;
            const double v = std::exp(-dt / decay) * rng.normal();
            left[k] += amp_l * v;
            right[k] += amp_r * v;
        }
    }

    std::pair<std::size_t, std::size_t> imu_span(double t0, double t1) const {
        return clamp_span(t0 * kImuRate, t1 * kImuRate, gyro.size());
    }
    std::pair<std::size_t, std::size_t> audio_span(double t0, double t1) const {
        return clamp_span(t0 * kAudioRate, t1 * kAudioRate, left.size());
    }
    static std::pair<std::size_t, std::size_t> clamp_span(double a, double b, std::size_t n) {
        const double lo = std::clamp(std::ceil(a), 0.0, static_cast<double>(n));
        const double hi = std::clamp(std::floor(b) + 1.0, lo, static_cast<double>(n));
        return {static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)};
    }
    double seconds() const { return static_cast<double>(gyro.size()) / kImuRate; }
};

// Paul Kellet's economy pink filter, scaled to unit rms.
class PinkNoise {
public:
    double next(Rng& rng) {
        const double w = rng.normal();
        b0_ = 0.99765 * b0_ + w * 0.0990460;
        b1_ = 0.96300 * b1_ + w * 0.2965164;
        b2_ = 0.57000 * b2_ + w * 1.0526913;
        return (b0_ + b1_ + b2_ + w * 0.1848) / unit_rms();
    }

private:
    static double unit_rms() {
        static const double rms = [] {
            // Stationary variance of the filter for unit white input.
            const double a[3] = {0.99765, 0.96300, 0.57000};
            const double g[4] = {0.0990460, 0.2965164, 1.0526913, 0.1848};
            double var = g[3] * g[3];
            for (int i = 0; i < 3; ++i) {
                var += 2.0 * g[i] * g[3];  // b_i contains the current w with weight g_i
                for (int j = 0; j < 3; ++j) var += g[i] * g[j] / (1.0 - a[i] * a[j]);
            }
            return std::sqrt(var);
        }();
        return rms;
    }
    double b0_ = 0.0, b1_ = 0.0, b2_ = 0.0;
};

// Sensor floor plus quantization; keeps filter state across consecutive chunks.
class Floor {
public:
    Floor(double gyro_sigma, double audio_rms, Rng& rng) : gyro_sigma_(gyro_sigma), audio_rms_(audio_rms), rng_(rng) {}

    void finish(const Canvas& c, std::vector<ImuFrame>& imu, std::vector<std::int16_t>& left,
                std::vector<std::int16_t>& right) {
        for (const auto& row : c.gyro) {
            ImuFrame f;
            f.t = static_cast<double>(imu.size()) / kImuRate;
            for (std::size_t a = 0; a < 3; ++a) {
                f.gyro_left[a] = row[a] + gyro_sigma_ * rng_.normal();
                f.gyro_right[a] = row[a + 3] + gyro_sigma_ * rng_.normal();
            }
            imu.push_back(f);
        }
        for (std::size_t k = 0; k < c.left.size(); ++k) {
            left.push_back(quantize(c.left[k] + audio_rms_ * pink_l_.next(rng_)));
            right.push_back(quantize(c.right[k] + audio_rms_ * pink_r_.next(rng_)));
        }
    }

private:
    static std::int16_t quantize(double v) {
        return static_cast<std::int16_t>(std::clamp(std::round(v), -kAudioLimit - 1.0, kAudioLimit));
    }

    double gyro_sigma_;
    double audio_rms_;
    Rng& rng_;
    PinkNoise pink_l_, pink_r_;
};

std::size_t tap_count(Manner m) {
    switch (m) {
        case Manner::Double: return 2;
        case Manner::Triple: return 3;
        default: return 1;
    }
}

std::size_t place_index(Place p) { return static_cast<std::size_t>(p); }

constexpr double kGestureLead = 1.0;  // clip start to nominal center
constexpr double kGestureTrail = 1.0;
constexpr double kReleaseTrail = 0.5;

struct GesturePlan {
    std::vector<double> taps;
    std::vector<double> tap_amps;
    std::optional<double> release;
    double release_amp = 0.0;
    std::optional<double> hold_duration;
    double length = 0.0;
};

GesturePlan plan_gesture(GestureLabel label, const GestureTemplateParams& p, Rng& rng, const SynthOptions& opt) {
    GesturePlan plan;
    const std::size_t n = tap_count(label.manner());
    const double amp = p.tap_amplitude * rng.jitter(p.amplitude_jitter);
    double t = kGestureLead - 0.5 * static_cast<double>(n - 1) * p.inter_tap_gap;
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) t += p.inter_tap_gap * rng.jitter(p.timing_jitter);
        plan.taps.push_back(t);
        plan.tap_amps.push_back(amp * rng.jitter(p.tap_jitter));
    }
    plan.release_amp = amp * p.release_amplitude_ratio * rng.jitter(p.tap_jitter);
    double center = 0.0;
    for (double x : plan.taps) center += x;
    center /= static_cast<double>(n);
    plan.length = center + kGestureTrail;

    if (label.is_hold()) {
        const double d = opt.hold_duration ? *opt.hold_duration
                                           : rng.uniform(p.hold_duration_range[0], p.hold_duration_range[1]);
        if (!opt.suppress_release) {
            plan.release = plan.taps.back() + d;
            plan.hold_duration = d;
        }
        plan.length = std::max(plan.length, plan.taps.back() + d + kReleaseTrail);
    } else {
        plan.release = plan.taps.back() + p.release_delay * rng.jitter(p.timing_jitter);
        plan.length = std::max(plan.length, *plan.release + kReleaseTrail);
    }
    return plan;
}

void render_gesture(Canvas& c, GestureLabel label, const GestureTemplateParams& p, const GesturePlan& plan, Rng& rng) {
    const AxisProfile& profile = p.place_profiles[place_index(label.place())];
    double side_l = p.audio_center_side, side_r = p.audio_center_side;
    if (label.place() == Place::Left) side_l = 1.0, side_r = p.audio_far_side;
    if (label.place() == Place::Right) side_l = p.audio_far_side, side_r = 1.0;

    const double sigma = p.tap_width / 4.0;
    auto sound = [&](double t, double level) {
        const double a = p.audio_amplitude * level * rng.jitter(p.tap_jitter);
        const double f = p.audio_frequency * rng.jitter(0.1);
        const double tau = p.audio_decay * rng.jitter(0.2);
        c.add_tone(t, f, tau, a * side_l, a * side_r);
        c.add_click(t, 0.3 * a * side_l, 0.3 * a * side_r, rng);
    };
    for (std::size_t i = 0; i < plan.taps.size(); ++i) {
        c.add_pulse(plan.taps[i], sigma, profile, plan.tap_amps[i], p.rebound_ratio, p.rebound_delay);
        sound(plan.taps[i], 1.0);
    }
    if (plan.release) {
        c.add_pulse(*plan.release, sigma, profile, plan.release_amp, p.rebound_ratio, p.rebound_delay);
        sound(*plan.release, p.release_audio_ratio);
    }
}

double gaussian(double t, double t0, double sigma) {
    const double u = (t - t0) / sigma;
    return std::exp(-0.5 * u * u);
}

void render_talking(Canvas& c, const NoiseParams& p, Rng& rng) {
    const double f_mid = 0.5 * (p.pitch_range[0] + p.pitch_range[1]);
    const double f_half = 0.5 * (p.pitch_range[1] - p.pitch_range[0]);
    const double drift_phase = rng.uniform(0.0, kTwoPi);
    const double syl_phase = rng.uniform(0.0, kTwoPi);
    const double f1 = rng.uniform(300.0, 700.0);
    const double f2 = rng.uniform(750.0, 1000.0);

    // Syllable envelope with per-syllable loudness.
    std::vector<double> syl_gain(static_cast<std::size_t>(c.seconds() * p.syllable_rate) + 2);
    for (auto& g : syl_gain) g = rng.uniform(0.4, 1.0);
    auto envelope = [&](double t) {
        const double x = p.syllable_rate * t + syl_phase / kTwoPi;
        const double s = std::sin(kTwoPi * x);
        const auto idx = std::min(syl_gain.size() - 1, static_cast<std::size_t>(std::max(0.0, x)));
        return s > 0.0 ? s * syl_gain[idx] : 0.0;
    };

    std::vector<double> voice(c.left.size());
    double phase = 0.0, sum_sq = 0.0;
    for (std::size_t k = 0; k < voice.size(); ++k) {
        const double t = static_cast<double>(k) / kAudioRate;
        const double f0 = f_mid + f_half * std::sin(kTwoPi * 0.3 * t + drift_phase);
        phase += kTwoPi * f0 / kAudioRate;
        double v = 0.0;
        for (int h = 1; h * f0 <= 1000.0; ++h) {
            const double fh = h * f0;
            const double w = gaussian(fh, f1, 150.0) + 0.6 * gaussian(fh, f2, 200.0) + 0.05;
            v += w * std::sin(h * phase);
        }
        voice[k] = v * envelope(t);
        sum_sq += voice[k] * voice[k];
    }
    const double rms = std::sqrt(sum_sq / static_cast<double>(std::max<std::size_t>(voice.size(), 1)));
    const double scale = rms > 0.0 ? p.speech_level / rms : 0.0;
    for (std::size_t k = 0; k < voice.size(); ++k) {
        c.left[k] += scale * voice[k];
        c.right[k] += 0.9 * scale * voice[k];
    }
    for (std::size_t k = 0; k < c.gyro.size(); ++k) {
        const double e = envelope(static_cast<double>(k) / kImuRate);
        const AxisProfile jaw{0.3, 1.0, 2.0, 0.3, 1.0, 2.0};
        for (std::size_t a = 0; a < 6; ++a) c.gyro[k][a] += p.talk_gyro * jaw[a] * e;
    }
}

void render_walking(Canvas& c, const NoiseParams& p, Rng& rng) {
    const double period = 1.0 / p.step_rate;
    double t = rng.uniform(0.1, period);
    int foot = rng.uniform() < 0.5 ? 1 : -1;
    while (t < c.seconds()) {
        const double a = p.step_gyro * rng.uniform(0.85, 1.15);
        const AxisProfile gains{1.0 * foot, 0.6, 0.8, 1.0 * foot, 0.6 * rng.jitter(0.1), 0.8};
        c.add_lobe(t, p.step_width, gains, a);
        const double thud = p.thud_amplitude * rng.jitter(0.2);
        c.add_tone(t, 60.0 * rng.jitter(0.1), 0.04, thud, thud * rng.jitter(0.1));
        foot = -foot;
        t += period * rng.jitter(0.05);
    }
}

void render_eating(Canvas& c, const NoiseParams& p, Rng& rng) {
    double t = rng.uniform(0.05, p.chew_interval[0]);
    while (t < c.seconds()) {
        const double a = p.chew_gyro * rng.uniform(0.8, 1.2);
        const AxisProfile jaw{0.2, 0.35, 1.0, 0.2, 0.35 * rng.jitter(0.2), 1.0};
        c.add_lobe(t, p.chew_width, jaw, a);
        if (rng.uniform() < 0.7) {
            const double len = rng.uniform(0.04, 0.08);
            const double amp = p.crunch_amplitude * rng.jitter(0.2);
            const auto [lo, hi] = c.audio_span(t, t + len);
            double prev = 0.0;
            for (std::size_t k = lo; k < hi; ++k) {
                const double u = (static_cast<double>(k) / kAudioRate - t) / len;
                const double w = rng.normal();
                const double hp = (w - prev) / std::numbers::sqrt2;
                prev = w;
                const double v = amp * hp * std::sin(std::numbers::pi * u);
                c.left[k] += v;
                c.right[k] += 0.8 * v;
            }
        }
        t += rng.uniform(p.chew_interval[0], p.chew_interval[1]);
    }
}

void render_noise(Canvas& c, NoiseKind kind, const NoiseParams& p, Rng& rng) {
    switch (kind) {
        case NoiseKind::Talking: render_talking(c, p, rng); break;
        case NoiseKind::Walking: render_walking(c, p, rng); break;
        case NoiseKind::Eating: render_eating(c, p, rng); break;
        case NoiseKind::Static: break;
    }
}

SynthClip to_clip(const Canvas& c, double gyro_noise, double audio_floor, Rng& rng) {
    std::vector<ImuFrame> imu;
    std::vector<std::int16_t> l, r;
    Floor floor(gyro_noise, audio_floor, rng);
    floor.finish(c, imu, l, r);
    SynthClip clip;
    clip.imu = GyroMatrix(imu.size(), kGyroColumns);
    for (std::size_t k = 0; k < imu.size(); ++k)
        for (std::size_t a = 0; a < 3; ++a) {
            clip.imu(k, a) = imu[k].gyro_left[a];
            clip.imu(k, a + 3) = imu[k].gyro_right[a];
        }
    clip.audio = PcmMatrix(l.size(), 2);
    for (std::size_t k = 0; k < l.size(); ++k) {
        clip.audio(k, 0) = l[k];
        clip.audio(k, 1) = r[k];
    }
    return clip;
}

void require(bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::InvalidArgument, what);
}

}  // namespace

void GestureTemplateParams::validate() const {
    require(tap_amplitude > 0.0 && tap_width > 0.0 && inter_tap_gap > 0.0, "tap amplitude, width and gap must be positive");
    require(release_amplitude_ratio > 0.0 && release_amplitude_ratio < 1.0, "release ratio must lie in (0, 1)");
    require(release_delay > 0.0, "release delay must be positive");
    require(rebound_ratio >= 0.0 && rebound_ratio < 1.0 && rebound_delay > 0.0, "rebound must be smaller than the lobe");
    require(hold_duration_range[0] > 0.0 && hold_duration_range[0] <= hold_duration_range[1], "bad hold duration range");
    require(amplitude_jitter >= 0.0 && amplitude_jitter < 1.0 && tap_jitter >= 0.0 && tap_jitter < 1.0 &&
                timing_jitter >= 0.0 && timing_jitter < 1.0,
            "jitter fractions must lie in [0, 1)");
    require(audio_amplitude > 0.0 && audio_frequency > 0.0 && audio_decay > 0.0, "audio burst must be positive");
    require(gyro_noise >= 0.0 && audio_noise_floor >= 0.0, "noise levels must be non-negative");
}

void NoiseParams::validate() const {
    require(pitch_range[0] > 0.0 && pitch_range[0] <= pitch_range[1], "bad pitch range");
    require(chew_interval[0] > 0.0 && chew_interval[0] <= chew_interval[1], "bad chew interval");
    require(speech_level >= 0.0 && syllable_rate > 0.0 && step_rate > 0.0 && step_width > 0.0 && chew_width > 0.0,
            "noise parameters must be positive");
    require(gyro_noise >= 0.0 && audio_noise_floor >= 0.0, "noise levels must be non-negative");
}

SynthClip synth_gesture(GestureLabel label, const GestureTemplateParams& params, std::uint64_t seed,
                        const SynthOptions& options) {
    params.validate();
    Rng rng(seed);
    const GesturePlan plan = plan_gesture(label, params, rng, options);
    Canvas canvas(plan.length);
    render_gesture(canvas, label, params, plan, rng);
    SynthClip clip = to_clip(canvas, params.gyro_noise, params.audio_noise_floor, rng);
    clip.tap_times = plan.taps;
    double sum = 0.0;
    for (double t : plan.taps) sum += t;
    clip.true_center = sum / static_cast<double>(plan.taps.size());
    clip.release_time = plan.release;
    clip.hold_duration = plan.hold_duration;
    return clip;
}

SynthClip synth_noise(NoiseKind kind, double duration, std::uint64_t seed, const NoiseParams& params) {
    require(duration > 0.0, "noise duration must be positive");
    params.validate();
    Rng rng(seed);
    Canvas canvas(duration);
    render_noise(canvas, kind, params, rng);
    SynthClip clip = to_clip(canvas, params.gyro_noise, params.audio_noise_floor, rng);
    clip.true_center = 0.5 * canvas.seconds();
    return clip;
}

DatasetSpec DatasetSpec::per_label(std::size_t count) {
    DatasetSpec spec;
    spec.gesture_counts.fill(count);
    return spec;
}

std::size_t DatasetSpec::total_gestures() const {
    std::size_t n = 0;
    for (auto c : gesture_counts) n += c;
    return n;
}

std::size_t DatasetSpec::total_noise() const {
    std::size_t n = 0;
    for (auto c : noise_counts) n += c;
    return n;
}

void DatasetSpec::validate() const {
    require(total_gestures() + total_noise() > 0, "dataset spec is empty");
    // Region edges of neighbouring gestures must stay at least this far apart.
    require(spacing >= 1.5, "clip spacing must be at least 1.5 s");
    require(lead_in >= 3.0, "lead-in must cover the 3 s calibration span");
    require(noise_clip_seconds > 0.0 && tail >= 0.0, "bad noise clip length or tail");
    gesture.validate();
    noise.validate();
}

namespace {

template <typename T>
void read_if(const nlohmann::json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

void read_params(const nlohmann::json& j, GestureTemplateParams& p) {
    read_if(j, "tap_amplitude", p.tap_amplitude);
    read_if(j, "tap_width", p.tap_width);
    read_if(j, "inter_tap_gap", p.inter_tap_gap);
    read_if(j, "release_amplitude_ratio", p.release_amplitude_ratio);
    read_if(j, "release_delay", p.release_delay);
    read_if(j, "rebound_ratio", p.rebound_ratio);
    read_if(j, "rebound_delay", p.rebound_delay);
    read_if(j, "hold_duration_range", p.hold_duration_range);
    read_if(j, "amplitude_jitter", p.amplitude_jitter);
    read_if(j, "tap_jitter", p.tap_jitter);
    read_if(j, "timing_jitter", p.timing_jitter);
    if (j.contains("place_profiles")) {
        const auto& pp = j.at("place_profiles");
        for (Place pl : {Place::Front, Place::Back, Place::Left, Place::Right})
            read_if(pp, std::string(to_string(pl)).c_str(), p.place_profiles[place_index(pl)]);
    }
    read_if(j, "audio_amplitude", p.audio_amplitude);
    read_if(j, "audio_frequency", p.audio_frequency);
    read_if(j, "audio_decay", p.audio_decay);
    read_if(j, "audio_far_side", p.audio_far_side);
    read_if(j, "audio_center_side", p.audio_center_side);
    read_if(j, "release_audio_ratio", p.release_audio_ratio);
    read_if(j, "gyro_noise", p.gyro_noise);
    read_if(j, "audio_noise_floor", p.audio_noise_floor);
}

void read_params(const nlohmann::json& j, NoiseParams& p) {
    read_if(j, "pitch_range", p.pitch_range);
    read_if(j, "speech_level", p.speech_level);
    read_if(j, "syllable_rate", p.syllable_rate);
    read_if(j, "talk_gyro", p.talk_gyro);
    read_if(j, "step_rate", p.step_rate);
    read_if(j, "step_gyro", p.step_gyro);
    read_if(j, "step_width", p.step_width);
    read_if(j, "thud_amplitude", p.thud_amplitude);
    read_if(j, "chew_interval", p.chew_interval);
    read_if(j, "chew_gyro", p.chew_gyro);
    read_if(j, "chew_width", p.chew_width);
    read_if(j, "crunch_amplitude", p.crunch_amplitude);
    read_if(j, "gyro_noise", p.gyro_noise);
    read_if(j, "audio_noise_floor", p.audio_noise_floor);
}

}  // namespace

DatasetSpec dataset_spec_from_json(const nlohmann::json& j) {
    try {
        DatasetSpec spec;
        if (j.contains("per_label")) spec.gesture_counts.fill(j.at("per_label").get<std::size_t>());
        if (j.contains("gestures"))
            for (const auto& [name, n] : j.at("gestures").items())
                spec.gesture_counts[parse_label(name).index()] = n.get<std::size_t>();
        if (j.contains("noise"))
            for (const auto& [name, n] : j.at("noise").items()) {
                const NoiseKind k = parse_noise_kind(name);
                spec.noise_counts[static_cast<std::size_t>(k)] = n.get<std::size_t>();
            }
        read_if(j, "noise_clip_seconds", spec.noise_clip_seconds);
        read_if(j, "lead_in", spec.lead_in);
        read_if(j, "spacing", spec.spacing);
        read_if(j, "tail", spec.tail);
        read_if(j, "shuffle", spec.shuffle);
        read_if(j, "suppress_hold_release", spec.suppress_hold_release);
        if (j.contains("gesture_params")) read_params(j.at("gesture_params"), spec.gesture);
        if (j.contains("noise_params")) read_params(j.at("noise_params"), spec.noise);
        spec.validate();
        return spec;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("dataset spec: ") + e.what());
    }
}

nlohmann::json to_json(const DatasetSpec& spec) {
    nlohmann::json j;
    nlohmann::json g = nlohmann::json::object(), n = nlohmann::json::object();
    for (const auto& label : all_labels())
        if (spec.gesture_counts[label.index()] > 0) g[to_string(label)] = spec.gesture_counts[label.index()];
    for (NoiseKind k : kNoiseKinds)
        if (spec.noise_counts[static_cast<std::size_t>(k)] > 0) n[to_string(k)] = spec.noise_counts[static_cast<std::size_t>(k)];
    j["gestures"] = g;
    j["noise"] = n;
    j["noise_clip_seconds"] = spec.noise_clip_seconds;
    j["lead_in"] = spec.lead_in;
    j["spacing"] = spec.spacing;
    j["tail"] = spec.tail;
    j["shuffle"] = spec.shuffle;
    j["suppress_hold_release"] = spec.suppress_hold_release;
    return j;
}

Recording synth_dataset(const DatasetSpec& spec, std::uint64_t seed) {
    spec.validate();

    struct Item {
        std::optional<GestureLabel> gesture;
        NoiseKind noise = NoiseKind::Static;
    };
    std::vector<Item> items;
    for (const auto& label : all_labels())
        for (std::size_t i = 0; i < spec.gesture_counts[label.index()]; ++i) items.push_back({label, {}});
    for (NoiseKind k : kNoiseKinds)
        for (std::size_t i = 0; i < spec.noise_counts[static_cast<std::size_t>(k)]; ++i) items.push_back({std::nullopt, k});

    Rng order(seed);
    if (spec.shuffle)
        for (std::size_t i = items.size(); i > 1; --i) std::swap(items[i - 1], items[order.index(i)]);

    Recording rec;
    Rng floor_rng(splitmix(seed ^ 0x5eedf100full));
    Floor floor(spec.gesture.gyro_noise, spec.gesture.audio_noise_floor, floor_rng);
    auto append = [&](const Canvas& c) { floor.finish(c, rec.imu, rec.audio_left, rec.audio_right); };
    auto now = [&] { return static_cast<double>(rec.imu.size()) / kImuRate; };

    append(Canvas(spec.lead_in));
    for (std::size_t i = 0; i < items.size(); ++i) {
        Rng rng(splitmix(seed) ^ splitmix(i + 1));
        const double t0 = now();
        if (items[i].gesture) {
            const GestureLabel label = *items[i].gesture;
            SynthOptions opt;
            opt.suppress_release = spec.suppress_hold_release;
            const GesturePlan plan = plan_gesture(label, spec.gesture, rng, opt);
            Canvas c(plan.length);
            render_gesture(c, label, spec.gesture, plan, rng);
            append(c);
            double center = 0.0;
            for (double t : plan.taps) center += t;
            center = t0 + center / static_cast<double>(plan.taps.size());
            rec.annotations.push_back({label, center - 0.75, center + 0.75, plan.hold_duration});
        } else {
            Canvas c(spec.noise_clip_seconds);
            render_noise(c, items[i].noise, spec.noise, rng);
            append(c);
            rec.annotations.push_back({items[i].noise, t0, now(), std::nullopt});
        }
        append(Canvas(i + 1 == items.size() ? spec.tail : spec.spacing));
    }
    validate(rec);
    return rec;
}

}  // namespace jawtap

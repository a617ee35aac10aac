#include "jawtap/features.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "jawtap/error.hpp"
#include "jawtap/spectral.hpp"

namespace jawtap {

namespace {

constexpr std::array<const char*, 7> kStatNames = {"peak_count", "peak_value", "rms", "zcr", "std", "min", "max"};
constexpr std::array<const char*, 6> kAxisNames = {"left_x", "left_y", "left_z", "right_x", "right_y", "right_z"};
constexpr std::size_t kFullImuLength = 7 * 6 + 9;
constexpr std::size_t kCompactImuLength = 7 + 1;
constexpr std::size_t kMelFilters = 26;
constexpr double kAudioRate = 8000.0;
constexpr double kPreEmphasis = 0.97;

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::array<double, 7> as_array(const AxisStats& s) {
    return {s.peak_count, s.peak_value, s.rms, s.zcr, s.std, s.min, s.max};
}

}  // namespace

std::size_t feature_length(FeatureMode mode) {
    return (mode == FeatureMode::Full ? kFullImuLength : kCompactImuLength) + kFftBins + kMfccCoefficients;
}

std::string to_string(FeatureMode mode) { return mode == FeatureMode::Full ? "full" : "paper64"; }

FeatureMode parse_feature_mode(std::string_view text) {
    if (text == "full") return FeatureMode::Full;
    if (text == "paper64") return FeatureMode::Paper64;
    throw Error(ErrorCode::InvalidArgument, "unknown feature mode '" + std::string(text) + "'");
}

std::vector<std::string> feature_names(FeatureMode mode) {
    std::vector<std::string> names;
    if (mode == FeatureMode::Full) {
        for (const char* stat : kStatNames)
            for (const char* axis : kAxisNames) names.push_back(std::string("gyro.") + stat + "." + axis);
        for (std::size_t l = 0; l < 3; ++l)
            for (std::size_t r = 3; r < 6; ++r)
                names.push_back(std::string("gyro.corr.") + kAxisNames[l] + "." + kAxisNames[r]);
    } else {
        for (const char* stat : kStatNames) names.push_back(std::string("gyro.") + stat + ".all");
        names.push_back("gyro.corr.mean");
    }
    for (std::size_t k = 1; k <= kFftBins; ++k) names.push_back("audio.fft.bin" + std::to_string(k));
    for (std::size_t k = 0; k < kMfccCoefficients; ++k) names.push_back("audio.mfcc.c" + std::to_string(k));
    return names;
}

std::vector<std::size_t> find_peaks(std::span<const double> x) {
    const std::size_t n = x.size();
    std::vector<double> mag(n);
    for (std::size_t i = 0; i < n; ++i) mag[i] = std::abs(x[i]);
    const double threshold = kPeakMedianFactor * median_of(mag);

    std::vector<std::size_t> candidates;
    for (std::size_t i = 1; i + 1 < n; ++i)
        if (mag[i] > threshold && mag[i] > mag[i - 1] && mag[i] >= mag[i + 1]) candidates.push_back(i);
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](std::size_t a, std::size_t b) { return mag[a] > mag[b]; });

    std::vector<std::size_t> kept;
    for (std::size_t c : candidates) {
        bool clear = std::all_of(kept.begin(), kept.end(), [&](std::size_t k) {
            return (c > k ? c - k : k - c) >= kPeakMinDistance;
        });
        if (clear) kept.push_back(c);
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

AxisStats axis_stats(std::span<const double> x) {
    AxisStats s;
    if (x.empty()) return s;
    const double n = static_cast<double>(x.size());

    const auto peaks = find_peaks(x);
    s.peak_count = static_cast<double>(peaks.size());
    if (!peaks.empty()) {
        double sum = 0.0;
        for (std::size_t p : peaks) sum += std::abs(x[p]);
        s.peak_value = sum / static_cast<double>(peaks.size());
    }

    double sq = 0.0, sum = 0.0;
    for (double v : x) sq += v * v, sum += v;
    s.rms = std::sqrt(sq / n);
    const double mean = sum / n;
    double var = 0.0;
    for (double v : x) var += (v - mean) * (v - mean);
    s.std = std::sqrt(var / n);

    if (x.size() > 1) {
        std::size_t crossings = 0;
        for (std::size_t i = 1; i < x.size(); ++i)
            if ((x[i - 1] >= 0.0) != (x[i] >= 0.0)) ++crossings;
        s.zcr = static_cast<double>(crossings) / (n - 1.0);
    }
    auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    s.min = *lo;
    s.max = *hi;
    return s;
}

double pearson(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.empty()) throw Error(ErrorCode::ShapeMismatch, "pearson length mismatch");
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma, db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa <= 0.0 || sbb <= 0.0) return 0.0;
    return sab / std::sqrt(saa * sbb);
}

std::vector<double> imu_stats(const GyroMatrix& imu, FeatureMode mode, ChannelMask mask) {
    if (imu.cols() != kGyroColumns) throw Error(ErrorCode::ShapeMismatch, "gyro block must have 6 columns");
    std::array<std::vector<double>, 6> axes;
    for (std::size_t c = 0; c < 6; ++c) {
        axes[c] = imu.column(c);
        if ((c < 3 && !mask.left) || (c >= 3 && !mask.right)) std::fill(axes[c].begin(), axes[c].end(), 0.0);
    }
    std::array<std::array<double, 7>, 6> stats{};
    for (std::size_t c = 0; c < 6; ++c) stats[c] = as_array(axis_stats(axes[c]));
    std::array<double, 9> corr{};
    for (std::size_t l = 0; l < 3; ++l)
        for (std::size_t r = 0; r < 3; ++r) corr[l * 3 + r] = pearson(axes[l], axes[3 + r]);

    std::vector<double> out;
    if (mode == FeatureMode::Full) {
        out.reserve(kFullImuLength);
        for (std::size_t s = 0; s < 7; ++s)
            for (std::size_t c = 0; c < 6; ++c) out.push_back(stats[c][s]);
        out.insert(out.end(), corr.begin(), corr.end());
        return out;
    }

    auto column = [&](std::size_t s) {
        std::array<double, 6> v{};
        for (std::size_t c = 0; c < 6; ++c) v[c] = stats[c][s];
        return v;
    };
    auto sum = [](const std::array<double, 6>& v) { return std::accumulate(v.begin(), v.end(), 0.0); };
    auto mean = [&](const std::array<double, 6>& v) { return sum(v) / 6.0; };
    auto max = [](const std::array<double, 6>& v) { return *std::max_element(v.begin(), v.end()); };
    auto min = [](const std::array<double, 6>& v) { return *std::min_element(v.begin(), v.end()); };

    auto rms = column(2);
    double mean_square = 0.0;
    for (double r : rms) mean_square += r * r;

    out = {sum(column(0)), max(column(1)), std::sqrt(mean_square / 6.0), mean(column(3)),
           mean(column(4)), min(column(5)), max(column(6)),
           std::accumulate(corr.begin(), corr.end(), 0.0) / 9.0};
    return out;
}

std::vector<double> mixdown(const PcmMatrix& audio) {
    std::vector<double> mono(audio.rows());
    for (std::size_t r = 0; r < audio.rows(); ++r) {
        double acc = 0.0;
        for (std::size_t c = 0; c < audio.cols(); ++c) acc += audio(r, c);
        mono[r] = acc / static_cast<double>(audio.cols()) / 32768.0;
    }
    return mono;
}

std::vector<double> fft_bins(const PcmMatrix& audio) {
    const std::vector<double> mono = mixdown(audio);
    const auto offsets = spectral::frame_offsets(mono.size());
    std::vector<double> avg(kFftBins, 0.0);
    if (offsets.empty()) return avg;
    for (std::size_t off : offsets) {
        auto mag = spectral::magnitude_spectrum(std::span<const double>(mono).subspan(off, spectral::kFrameSize));
        for (std::size_t k = 0; k < kFftBins; ++k) avg[k] += mag[k + 1];
    }
    for (double& v : avg) v /= static_cast<double>(offsets.size());
    return avg;
}

std::vector<double> mfcc(const PcmMatrix& audio) {
    const std::vector<double> mono = mixdown(audio);
    std::vector<double> emph(mono.size());
    for (std::size_t i = 0; i < mono.size(); ++i) emph[i] = mono[i] - (i ? kPreEmphasis * mono[i - 1] : 0.0);

    static const Matrix<double> fb =
        spectral::mel_filterbank(kMelFilters, spectral::kFrameSize, kAudioRate, 0.0, kAudioRate / 2.0);
    static const std::vector<double> window = spectral::hann(spectral::kFrameSize);

    const auto offsets = spectral::frame_offsets(emph.size());
    std::vector<double> avg(kMfccCoefficients, 0.0);
    if (offsets.empty()) return avg;
    std::vector<std::complex<double>> buf(spectral::kFrameSize);
    std::vector<double> log_energy(kMelFilters);
    for (std::size_t off : offsets) {
        for (std::size_t i = 0; i < spectral::kFrameSize; ++i) buf[i] = emph[off + i] * window[i];
        spectral::fft(buf);
        for (std::size_t m = 0; m < kMelFilters; ++m) {
            double e = 0.0;
            for (std::size_t k = 0; k < fb.cols(); ++k) e += fb(m, k) * std::norm(buf[k]);
            log_energy[m] = std::log(std::max(e, kLogFloor));
        }
        auto c = spectral::dct2(log_energy);
        for (std::size_t k = 0; k < kMfccCoefficients; ++k) avg[k] += c[k];
    }
    for (double& v : avg) v /= static_cast<double>(offsets.size());
    return avg;
}

FeatureVector feature_vector(const GyroMatrix& imu, const PcmMatrix& audio, FeatureMode mode, ChannelMask mask) {
    FeatureVector fv{mode, imu_stats(imu, mode, mask)};
    auto bins = fft_bins(audio);
    auto cep = mfcc(audio);
    fv.values.insert(fv.values.end(), bins.begin(), bins.end());
    fv.values.insert(fv.values.end(), cep.begin(), cep.end());
    for (double& v : fv.values)
        if (!std::isfinite(v)) v = 0.0;
    return fv;
}

FeatureVector feature_vector(const EventSegment& seg, FeatureMode mode, ChannelMask mask) {
    return feature_vector(seg.imu, seg.audio, mode, mask);
}

}  // namespace jawtap

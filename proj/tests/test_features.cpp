#include <cmath>
#include <set>

#include "catch_amalgamated.hpp"
#include "helpers.hpp"
#include "jawtap/features.hpp"
#include "jawtap/spectral.hpp"
#include "oracles.hpp"

using namespace jawtap;

namespace {

std::vector<std::int16_t> channel(const PcmMatrix& m, std::size_t c) {
    std::vector<std::int16_t> v(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) v[r] = m(r, c);
    return v;
}

PcmMatrix tone(double hz, double amplitude, std::size_t rows = 12000) {
    PcmMatrix m(rows, 2);
    for (std::size_t k = 0; k < rows; ++k) {
        const auto s = static_cast<std::int16_t>(std::lround(amplitude * std::sin(2.0 * M_PI * hz * k / 8000.0)));
        m(k, 0) = s;
        m(k, 1) = s;
    }
    return m;
}

// Gyro segment with a few tap-like bumps on top of noise, so peaks get counted.
GyroMatrix bumpy_gyro(std::mt19937_64& rng) {
    GyroMatrix m = testutil::random_gyro(180, rng, 2.0);
    std::uniform_real_distribution<double> pos(5.0, 175.0), amp(-80.0, 80.0);
    for (int b = 0; b < 4; ++b) {
        const double p = pos(rng);
        for (std::size_t c = 0; c < 6; ++c) {
            const double a = amp(rng);
            for (std::size_t r = 0; r < 180; ++r) {
                const double d = (static_cast<double>(r) - p) / 3.0;
                m(r, c) += a * std::exp(-0.5 * d * d);
            }
        }
    }
    return m;
}

void check_stats(const AxisStats& got, const oracle::AxisStats& want) {
    CHECK(got.peak_count == want.peak_count);
    CHECK(testutil::close_rel(got.peak_value, want.peak_value, 1e-9));
    CHECK(testutil::close_rel(got.rms, want.rms, 1e-9));
    CHECK(testutil::close_rel(got.zcr, want.zcr, 1e-9));
    CHECK(testutil::close_rel(got.std, want.std, 1e-9));
    CHECK(got.min == want.min);
    CHECK(got.max == want.max);
}

}  // namespace

TEST_CASE("axis statistics match the direct-definition oracle", "[features]") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        const GyroMatrix m = bumpy_gyro(rng);
        for (std::size_t c = 0; c < 6; ++c) {
            const auto col = m.column(c);
            check_stats(axis_stats(col), oracle::axis_stats(col));
        }
        for (std::size_t l = 0; l < 3; ++l)
            for (std::size_t r = 3; r < 6; ++r)
                CHECK(testutil::close_rel(pearson(m.column(l), m.column(r)),
                                          oracle::pearson(m.column(l), m.column(r)), 1e-9));
    }
}

TEST_CASE("imu stats follow the declared layout in both modes", "[features]") {
    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 10; ++trial) {
        const GyroMatrix m = bumpy_gyro(rng);
        std::vector<oracle::AxisStats> s;
        for (std::size_t c = 0; c < 6; ++c) s.push_back(oracle::axis_stats(m.column(c)));
        std::vector<double> corr;
        for (std::size_t l = 0; l < 3; ++l)
            for (std::size_t r = 3; r < 6; ++r) corr.push_back(oracle::pearson(m.column(l), m.column(r)));

        const auto full = imu_stats(m, FeatureMode::Full);
        REQUIRE(full.size() == 51);
        for (std::size_t c = 0; c < 6; ++c) {
            CHECK(full[0 * 6 + c] == s[c].peak_count);
            CHECK(testutil::close_rel(full[1 * 6 + c], s[c].peak_value, 1e-9));
            CHECK(testutil::close_rel(full[2 * 6 + c], s[c].rms, 1e-9));
            CHECK(testutil::close_rel(full[3 * 6 + c], s[c].zcr, 1e-9));
            CHECK(testutil::close_rel(full[4 * 6 + c], s[c].std, 1e-9));
            CHECK(full[5 * 6 + c] == s[c].min);
            CHECK(full[6 * 6 + c] == s[c].max);
        }
        for (std::size_t k = 0; k < 9; ++k) CHECK(testutil::close_rel(full[42 + k], corr[k], 1e-9));

        const auto p64 = imu_stats(m, FeatureMode::Paper64);
        REQUIRE(p64.size() == 8);
        double count = 0, pv = 0, ms = 0, zcr = 0, sd = 0, mn = 1e300, mx = -1e300, cm = 0;
        for (const auto& a : s) {
            count += a.peak_count;
            pv = std::max(pv, a.peak_value);
            ms += a.rms * a.rms / 6.0;
            zcr += a.zcr / 6.0;
            sd += a.std / 6.0;
            mn = std::min(mn, a.min);
            mx = std::max(mx, a.max);
        }
        for (double c : corr) cm += c / 9.0;
        CHECK(p64[0] == count);
        CHECK(testutil::close_rel(p64[1], pv, 1e-9));
        CHECK(testutil::close_rel(p64[2], std::sqrt(ms), 1e-9));
        CHECK(testutil::close_rel(p64[3], zcr, 1e-9));
        CHECK(testutil::close_rel(p64[4], sd, 1e-9));
        CHECK(p64[5] == mn);
        CHECK(p64[6] == mx);
        CHECK(testutil::close_rel(p64[7], cm, 1e-9));
    }
}

TEST_CASE("zero segment gives zero motion stats and silent acoustics", "[features]") {
    const GyroMatrix imu(180, 6);
    const PcmMatrix audio(12000, 2);
    for (FeatureMode mode : {FeatureMode::Full, FeatureMode::Paper64}) {
        const FeatureVector fv = feature_vector(imu, audio, mode);
        REQUIRE(fv.values.size() == feature_length(mode));
        const std::size_t motion = mode == FeatureMode::Full ? 51 : 8;
        for (std::size_t k = 0; k < motion + kFftBins; ++k) CHECK(fv.values[k] == 0.0);
        const std::size_t c0 = motion + kFftBins;
        CHECK(fv.values[c0] == Catch::Approx(26.0 * std::log(kLogFloor) * std::sqrt(1.0 / 26.0)).epsilon(1e-12));
        for (std::size_t k = c0 + 1; k < fv.values.size(); ++k) CHECK(std::abs(fv.values[k]) < 1e-9);
    }
}

TEST_CASE("identical left and right signals correlate to one", "[features]") {
    std::mt19937_64 rng(5);
    GyroMatrix m = testutil::random_gyro(180, rng);
    for (std::size_t r = 0; r < 180; ++r)
        for (std::size_t a = 0; a < 3; ++a) m(r, 3 + a) = m(r, a);
    const auto full = imu_stats(m, FeatureMode::Full);
    for (std::size_t a = 0; a < 3; ++a) CHECK(full[42 + a * 3 + a] == Catch::Approx(1.0).epsilon(1e-12));
    // A constant axis has no defined correlation; it contributes 0.
    for (std::size_t r = 0; r < 180; ++r) m(r, 3) = 7.0;
    CHECK(imu_stats(m, FeatureMode::Full)[42] == 0.0);
}

TEST_CASE("magnitude spectrum matches a direct DFT", "[features]") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g(0.0, 0.3);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> frame(512);
        for (double& v : frame) v = g(rng);
        const auto got = spectral::magnitude_spectrum(frame);
        const auto want = oracle::dft_magnitude(frame);
        REQUIRE(got.size() == want.size());
        for (std::size_t k = 0; k < want.size(); ++k) CHECK(testutil::close_rel(got[k], want[k], 1e-6, 1e-12));
    }
}

TEST_CASE("fft bins match the naive DFT oracle on white noise", "[features]") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 3; ++trial) {
        const PcmMatrix audio = testutil::random_pcm(12000, rng, 3000);
        const auto got = fft_bins(audio);
        const auto want = oracle::fft_bins(channel(audio, 0), channel(audio, 1));
        REQUIRE(got.size() == 30);
        for (std::size_t k = 0; k < 30; ++k) CHECK(testutil::close_rel(got[k], want[k], 1e-6));
    }
    for (double v : fft_bins(PcmMatrix(12000, 2))) CHECK(v == 0.0);
}

TEST_CASE("a tone at the bin-8 center frequency dominates bin 8", "[features]") {
    const auto bins = fft_bins(tone(125.0, 8000.0));
    const double b8 = bins[7];
    for (std::size_t k = 1; k <= 30; ++k) {
        if (k == 8) continue;
        INFO("bin " << k);
        CHECK(b8 > bins[k - 1]);
        // Hann leaks half the peak magnitude into each neighbour.
        if (k == 7 || k == 9) CHECK(bins[k - 1] / b8 == Catch::Approx(0.5).margin(0.01));
        else CHECK(b8 > 10.0 * bins[k - 1]);
    }
}

TEST_CASE("mfcc matches the from-definition reference", "[features]") {
    std::mt19937_64 rng(10);
    std::vector<PcmMatrix> inputs{tone(440.0, 5000.0), testutil::random_pcm(12000, rng, 2000),
                                  testutil::random_pcm(12000, rng, 20)};
    // A decaying tap-like burst over a weak floor.
    PcmMatrix burst = testutil::random_pcm(12000, rng, 10);
    for (std::size_t k = 4000; k < 6000; ++k)
        burst(k, 0) = static_cast<std::int16_t>(burst(k, 0) + 1800.0 * std::exp(-(k - 4000.0) / 120.0) *
                                                                  std::sin(2.0 * M_PI * 250.0 * k / 8000.0));
    inputs.push_back(burst);
    for (const auto& audio : inputs) {
        const auto got = mfcc(audio);
        const auto want = oracle::mfcc(channel(audio, 0), channel(audio, 1));
        REQUIRE(got.size() == 26);
        for (std::size_t c = 0; c < 26; ++c) CHECK(std::abs(got[c] - want[c]) <= 1e-6);
    }
}

TEST_CASE("mel filterbank rows are positive triangles", "[features]") {
    const auto fb = spectral::mel_filterbank(26, 512, 8000.0, 0.0, 4000.0);
    REQUIRE(fb.rows() == 26);
    REQUIRE(fb.cols() == 257);
    for (std::size_t m = 0; m < 26; ++m) {
        double sum = 0.0;
        std::size_t first = 257, last = 0, apex = 0;
        for (std::size_t k = 0; k < 257; ++k) {
            const double v = fb(m, k);
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
            CHECK(v == Catch::Approx(oracle::mel_triangle(m, k * 8000.0 / 512.0)).margin(1e-12));
            sum += v;
            if (v > 0.0) {
                first = std::min(first, k);
                last = k;
                if (v > fb(m, apex)) apex = k;
            }
        }
        CHECK(sum > 0.0);
        // Contiguous support, rising to the apex and falling after it.
        for (std::size_t k = first; k <= last; ++k) {
            CHECK(fb(m, k) > 0.0);
            if (k > first && k <= apex) CHECK(fb(m, k) >= fb(m, k - 1));
            if (k > apex) CHECK(fb(m, k) <= fb(m, k - 1));
        }
    }
}

TEST_CASE("feature vectors have the declared lengths and a total layout", "[features]") {
    std::mt19937_64 rng(11);
    const GyroMatrix imu = bumpy_gyro(rng);
    const PcmMatrix audio = testutil::random_pcm(12000, rng, 500);
    CHECK(feature_vector(imu, audio, FeatureMode::Paper64).values.size() == 64);
    CHECK(feature_vector(imu, audio, FeatureMode::Full).values.size() == 107);
    for (FeatureMode mode : {FeatureMode::Full, FeatureMode::Paper64}) {
        const auto names = feature_names(mode);
        CHECK(names.size() == feature_length(mode));
        CHECK(std::set<std::string>(names.begin(), names.end()).size() == names.size());
        CHECK(parse_feature_mode(to_string(mode)) == mode);
    }
    CHECK(feature_names(FeatureMode::Full)[51] == "audio.fft.bin1");
    CHECK(feature_names(FeatureMode::Paper64)[38] == "audio.mfcc.c0");
}

TEST_CASE("features are deterministic and finite for extreme inputs", "[features]") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        GyroMatrix imu = testutil::random_gyro(180, rng, trial % 2 ? 1e6 : 1e-9);
        if (trial % 3 == 0)
            for (std::size_t r = 0; r < 180; ++r) imu(r, trial % 6) = 2000.0;
        PcmMatrix audio = trial % 4 == 0 ? PcmMatrix(12000, 2) : testutil::random_pcm(12000, rng, 32767);
        const auto a = feature_vector(imu, audio, FeatureMode::Full);
        const auto b = feature_vector(imu, audio, FeatureMode::Full);
        CHECK(a.values == b.values);
        for (double v : a.values) CHECK(std::isfinite(v));
        for (double v : feature_vector(imu, audio, FeatureMode::Paper64).values) CHECK(std::isfinite(v));
    }
}

TEST_CASE("motion statistics scale with gain where definitional", "[features]") {
    std::mt19937_64 rng(13);
    for (double gain : {0.25, 3.0, 17.0}) {
        const GyroMatrix m = bumpy_gyro(rng);
        GyroMatrix scaled = m;
        for (double& v : scaled.data()) v *= gain;
        const auto a = imu_stats(m, FeatureMode::Full);
        const auto b = imu_stats(scaled, FeatureMode::Full);
        for (std::size_t c = 0; c < 6; ++c) {
            CHECK(b[c] == a[c]);                                           // peak count
            CHECK(testutil::close_rel(b[6 + c], gain * a[6 + c], 1e-9));   // peak value
            CHECK(testutil::close_rel(b[12 + c], gain * a[12 + c], 1e-9)); // rms
            CHECK(b[18 + c] == a[18 + c]);                                 // zcr
            CHECK(testutil::close_rel(b[24 + c], gain * a[24 + c], 1e-9)); // std
            CHECK(testutil::close_rel(b[30 + c], gain * a[30 + c], 1e-9)); // min
            CHECK(testutil::close_rel(b[36 + c], gain * a[36 + c], 1e-9)); // max
        }
        for (std::size_t k = 42; k < 51; ++k) CHECK(testutil::close_rel(b[k], a[k], 1e-9));
    }
}

TEST_CASE("masked gyro columns read as silence", "[features]") {
    std::mt19937_64 rng(14);
    const GyroMatrix m = bumpy_gyro(rng);
    GyroMatrix zeroed = m;
    for (std::size_t r = 0; r < 180; ++r)
        for (std::size_t c = 3; c < 6; ++c) zeroed(r, c) = 0.0;
    CHECK(imu_stats(m, FeatureMode::Full, ChannelMask::left_only()) == imu_stats(zeroed, FeatureMode::Full));
}

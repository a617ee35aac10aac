// features.hpp
// Fused motion + acoustic feature vector for the gesture/noise SVM.
//
// Layout (Full, 107 values):
//   [0, 42)    7 statistics x 6 gyro axes, statistic-major
//              (peak_count, peak_value, rms, zcr, std, min, max)
//   [42, 51)   Pearson correlation of each left axis with each right axis
//   [51, 81)   FFT magnitude bins 1..30 of the mixed-down audio
//   [81, 107)  26 MFCCs
// Paper64 (64 values) reduces each statistic across the six axes and averages
// the nine correlations, giving 8 motion values ahead of the same 56 acoustic ones.

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "jawtap/channels.hpp"
#include "jawtap/matrix.hpp"
#include "jawtap/segment.hpp"

namespace jawtap {

enum class FeatureMode { Paper64, Full };

inline constexpr std::size_t kFftBins = 30;
inline constexpr std::size_t kMfccCoefficients = 26;
inline constexpr double kLogFloor = 1e-10;

std::size_t feature_length(FeatureMode mode);
std::string to_string(FeatureMode mode);       // "paper64" | "full"
FeatureMode parse_feature_mode(std::string_view text);

// Index -> feature name, total over the layout.
std::vector<std::string> feature_names(FeatureMode mode);

struct FeatureVector {
    FeatureMode mode = FeatureMode::Full;
    std::vector<double> values;
};

struct AxisStats {
    double peak_count = 0.0;
    double peak_value = 0.0;  // mean |x| over detected peaks, 0 when none
    double rms = 0.0;
    double zcr = 0.0;         // sign changes per adjacent pair, zero counted as positive
    double std = 0.0;         // population
    double min = 0.0;
    double max = 0.0;
};

inline constexpr double kPeakMedianFactor = 3.0;
inline constexpr std::size_t kPeakMinDistance = 12;

// Local maxima of |x| above 3x the median |x|, at least 12 samples apart,
// kept greedily from the tallest. Returned in index order.
std::vector<std::size_t> find_peaks(std::span<const double> x);
AxisStats axis_stats(std::span<const double> x);
// Pearson correlation; 0 when either side is constant.
double pearson(std::span<const double> a, std::span<const double> b);

// Masked-out gyro columns are treated as all-zero signals.
std::vector<double> imu_stats(const GyroMatrix& imu, FeatureMode mode, ChannelMask mask = ChannelMask::both());

// Mean of the two channels scaled to [-1, 1].
std::vector<double> mixdown(const PcmMatrix& audio);
std::vector<double> fft_bins(const PcmMatrix& audio);
std::vector<double> mfcc(const PcmMatrix& audio);

FeatureVector feature_vector(const GyroMatrix& imu, const PcmMatrix& audio, FeatureMode mode,
                             ChannelMask mask = ChannelMask::both());
FeatureVector feature_vector(const EventSegment& seg, FeatureMode mode, ChannelMask mask = ChannelMask::both());

}  // namespace jawtap

// dtw_knn.hpp
// 1-nearest-neighbour gesture classification with dependent multi-dimensional
// DTW: all columns share one warping path, local cost is the squared Euclidean
// distance between rows.

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "jawtap/channels.hpp"
#include "jawtap/gesture.hpp"
#include "jawtap/matrix.hpp"

namespace jawtap {

// Sakoe-Chiba half-width in samples; nullopt means unconstrained.
using Band = std::optional<double>;

// Cell (i, j) is admissible when |i * S / T - j| <= band, for a of length T and b of length S.
// Throws ShapeMismatch when column counts differ, Unreachable when the band admits no path.
double dtw_distance(const Matrix<double>& a, const Matrix<double>& b, Band band = std::nullopt);
double dtw_distance(const Matrix<double>& a, const Matrix<double>& b, std::span<const std::size_t> columns,
                    Band band = std::nullopt);

struct Template {
    GestureLabel label;
    GyroMatrix matrix;  // 180 x 6
};

struct KnnModel {
    std::vector<Template> templates;
    Band band;
    ChannelMask mask;
};

struct Classification {
    GestureLabel label;
    double nn_distance = 0.0;
    std::size_t nn_index = 0;
    // Smallest distance per label; nullopt for labels without templates.
    std::array<std::optional<double>, kLabelCount> per_label_min{};
};

// Throws EmptyTemplates, ShapeMismatch (templates must share one shape with 6 columns).
KnnModel fit(std::vector<Template> templates, Band band = std::nullopt, ChannelMask mask = ChannelMask::both());

// Ties go to the earliest template.
Classification classify(const KnnModel& model, const GyroMatrix& segment);

}  // namespace jawtap

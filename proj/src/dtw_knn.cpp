#include "jawtap/dtw_knn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "jawtap/error.hpp"

namespace jawtap {

double dtw_distance(const Matrix<double>& a, const Matrix<double>& b, std::span<const std::size_t> columns,
                    Band band) {
    if (a.cols() != b.cols()) throw Error(ErrorCode::ShapeMismatch, "DTW inputs differ in dimension");
    if (a.rows() == 0 || b.rows() == 0 || columns.empty())
        throw Error(ErrorCode::ShapeMismatch, "DTW inputs must be non-empty");
    for (std::size_t c : columns)
        if (c >= a.cols()) throw Error(ErrorCode::ShapeMismatch, "column index out of range");
    if (band && !(*band >= 0.0)) throw Error(ErrorCode::InvalidArgument, "band must be non-negative");

    constexpr double kInf = std::numeric_limits<double>::infinity();
    const std::size_t t_len = a.rows(), s_len = b.rows();
    const double scale = static_cast<double>(s_len) / static_cast<double>(t_len);

    std::vector<double> prev(s_len, kInf), cur(s_len, kInf);
    for (std::size_t i = 0; i < t_len; ++i) {
        std::size_t j_lo = 0, j_hi = s_len - 1;
        if (band) {
            // Small slack absorbs rounding in i * S / T.
            const double centre = static_cast<double>(i) * scale;
            const double lo = std::ceil(centre - *band - 1e-9);
            const double hi = std::floor(centre + *band + 1e-9);
            if (hi < 0.0 || lo > static_cast<double>(s_len - 1)) {
                j_lo = 1;
                j_hi = 0;
            } else {
                j_lo = static_cast<std::size_t>(std::max(lo, 0.0));
                j_hi = static_cast<std::size_t>(std::min(hi, static_cast<double>(s_len - 1)));
            }
        }
        std::fill(cur.begin(), cur.end(), kInf);
        auto ra = a.row(i);
        for (std::size_t j = j_lo; j <= j_hi && j < s_len; ++j) {
            auto rb = b.row(j);
            double cost = 0.0;
            for (std::size_t c : columns) {
                const double d = ra[c] - rb[c];
                cost += d * d;
            }
            double best;
            if (i == 0 && j == 0) best = 0.0;
            else {
                best = kInf;
                if (i > 0) best = std::min(best, prev[j]);
                if (j > 0) best = std::min(best, cur[j - 1]);
                if (i > 0 && j > 0) best = std::min(best, prev[j - 1]);
            }
            cur[j] = best + cost;
        }
        std::swap(prev, cur);
    }
    const double result = prev[s_len - 1];
    if (!std::isfinite(result)) throw Error(ErrorCode::Unreachable, "band admits no warping path");
    return result;
}

double dtw_distance(const Matrix<double>& a, const Matrix<double>& b, Band band) {
    std::vector<std::size_t> cols(a.cols());
    std::iota(cols.begin(), cols.end(), std::size_t{0});
    return dtw_distance(a, b, cols, band);
}

KnnModel fit(std::vector<Template> templates, Band band, ChannelMask mask) {
    if (templates.empty()) throw Error(ErrorCode::EmptyTemplates, "no templates");
    if (!mask.any()) throw Error(ErrorCode::InvalidArgument, "channel mask selects no columns");
    const std::size_t rows = templates.front().matrix.rows();
    for (const auto& t : templates) {
        if (t.matrix.rows() != rows || t.matrix.cols() != kGyroColumns || rows == 0)
            throw Error(ErrorCode::ShapeMismatch, "templates must share one N x 6 shape");
        for (double v : t.matrix.data())
            if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "non-finite template value");
    }
    return KnnModel{std::move(templates), band, mask};
}

Classification classify(const KnnModel& model, const GyroMatrix& segment) {
    if (model.templates.empty()) throw Error(ErrorCode::EmptyTemplates, "no templates");
    if (segment.cols() != kGyroColumns) throw Error(ErrorCode::ShapeMismatch, "query must have 6 columns");
    const auto cols = model.mask.columns();

    Classification out{model.templates.front().label};
    out.nn_distance = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < model.templates.size(); ++k) {
        const auto& t = model.templates[k];
        const double d = dtw_distance(segment, t.matrix, cols, model.band);
        auto& slot = out.per_label_min[t.label.index()];
        if (!slot || d < *slot) slot = d;
        if (d < out.nn_distance) {
            out.nn_distance = d;
            out.nn_index = k;
            out.label = t.label;
        }
    }
    return out;
}

}  // namespace jawtap

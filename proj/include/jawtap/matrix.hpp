// matrix.hpp
// Dense row-major matrix used for gyro blocks, PCM blocks and templates.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace jawtap {

template <typename T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    std::vector<T> column(std::size_t c) const {
        std::vector<T> out(rows_);
        for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
        return out;
    }

    // Copy of rows [first, first + count).
    Matrix slice_rows(std::size_t first, std::size_t count) const {
        Matrix out(count, cols_);
        for (std::size_t r = 0; r < count; ++r)
            for (std::size_t c = 0; c < cols_; ++c) out(r, c) = (*this)(first + r, c);
        return out;
    }

    std::span<T> data() noexcept { return data_; }
    std::span<const T> data() const noexcept { return data_; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using GyroMatrix = Matrix<double>;   // columns: gx_l, gy_l, gz_l, gx_r, gy_r, gz_r
using PcmMatrix = Matrix<std::int16_t>;    // columns: left, right

inline constexpr std::size_t kGyroColumns = 6;
inline constexpr std::size_t kLeftY = 1;
inline constexpr std::size_t kRightY = 4;

}  // namespace jawtap

#include "jawtap/spectral.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "jawtap/error.hpp"

namespace jawtap::spectral {

void fft(std::vector<std::complex<double>>& x) {
    const std::size_t n = x.size();
    if (n == 0 || (n & (n - 1)) != 0) throw Error(ErrorCode::InvalidArgument, "fft size must be a power of two");

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double angle = -2.0 * std::numbers::pi / static_cast<double>(len);
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                // Twiddles computed directly rather than by recurrence to keep error at ulp level.
                const std::complex<double> w = std::polar(1.0, angle * static_cast<double>(k));
                const std::complex<double> u = x[i + k];
                const std::complex<double> v = x[i + k + len / 2] * w;
                x[i + k] = u + v;
                x[i + k + len / 2] = u - v;
            }
        }
    }
}

std::vector<double> hann(std::size_t n) {
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i)
        w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
    return w;
}

std::vector<double> magnitude_spectrum(std::span<const double> frame) {
    const std::vector<double> w = hann(frame.size());
    std::vector<std::complex<double>> x(frame.size());
    for (std::size_t i = 0; i < frame.size(); ++i) x[i] = frame[i] * w[i];
    fft(x);
    std::vector<double> mag(frame.size() / 2 + 1);
    for (std::size_t k = 0; k < mag.size(); ++k) mag[k] = std::abs(x[k]);
    return mag;
}

std::vector<std::size_t> frame_offsets(std::size_t signal_length) {
    std::vector<std::size_t> out;
    for (std::size_t off = 0; off + kFrameSize <= signal_length; off += kFrameHop) out.push_back(off);
    return out;
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

Matrix<double> mel_filterbank(std::size_t n_filters, std::size_t n_fft, double sample_rate, double lo_hz,
                              double hi_hz) {
    const std::size_t bins = n_fft / 2 + 1;
    const double mel_lo = hz_to_mel(lo_hz);
    const double mel_hi = hz_to_mel(hi_hz);
    std::vector<double> edges(n_filters + 2);
    for (std::size_t i = 0; i < edges.size(); ++i)
        edges[i] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) / static_cast<double>(n_filters + 1));

    Matrix<double> fb(n_filters, bins, 0.0);
    for (std::size_t m = 0; m < n_filters; ++m) {
        const double lo = edges[m], mid = edges[m + 1], hi = edges[m + 2];
        for (std::size_t k = 0; k < bins; ++k) {
            const double f = static_cast<double>(k) * sample_rate / static_cast<double>(n_fft);
            if (f > lo && f < mid) fb(m, k) = (f - lo) / (mid - lo);
            else if (f >= mid && f < hi) fb(m, k) = (hi - f) / (hi - mid);
        }
    }
    return fb;
}

std::vector<double> dct2(std::span<const double> x) {
    const std::size_t n = x.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            acc += x[i] * std::cos(std::numbers::pi * static_cast<double>(k) * (2.0 * static_cast<double>(i) + 1.0) /
                                   (2.0 * static_cast<double>(n)));
        out[k] = acc * std::sqrt((k == 0 ? 1.0 : 2.0) / static_cast<double>(n));
    }
    return out;
}

}  // namespace jawtap::spectral

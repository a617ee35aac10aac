// spectral.hpp
// Radix-2 FFT, windowing, mel filterbank and DCT used by the acoustic features.

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "jawtap/matrix.hpp"

namespace jawtap::spectral {

inline constexpr std::size_t kFrameSize = 512;
inline constexpr std::size_t kFrameHop = 256;

// In-place iterative radix-2 transform; size must be a power of two.
void fft(std::vector<std::complex<double>>& x);

// Periodic Hann window, w[n] = 0.5 - 0.5 cos(2 pi n / N).
std::vector<double> hann(std::size_t n);

// |X[k]| for k = 0..n/2 of the Hann-windowed frame.
std::vector<double> magnitude_spectrum(std::span<const double> frame);

// Start offsets of full frames of kFrameSize, hop kFrameHop.
std::vector<std::size_t> frame_offsets(std::size_t signal_length);

// Triangular filters evenly spaced on the mel scale between lo_hz and hi_hz,
// evaluated at FFT bin frequencies. Rows: filters, columns: n_fft / 2 + 1 bins.
Matrix<double> mel_filterbank(std::size_t n_filters, std::size_t n_fft, double sample_rate, double lo_hz,
                              double hi_hz);

double hz_to_mel(double hz);
double mel_to_hz(double mel);

// Orthonormal DCT-II.
std::vector<double> dct2(std::span<const double> x);

}  // namespace jawtap::spectral

// oracles.hpp
// Slow, from-the-definition reference implementations used only by tests.
// None of them call into the library's numeric code.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace oracle {

using Seq = std::vector<std::vector<double>>;  // rows x dims

// Minimum squared-Euclidean path cost over every monotone warping path, found by
// explicit depth-first enumeration. With a band, every visited cell must satisfy
// |i * S / T - j| <= band. nullopt when no path exists.
std::optional<double> dtw_enumerate(const Seq& a, const Seq& b, std::optional<double> band = std::nullopt);
// Same minimum found as a shortest path over the cell graph (Dijkstra, node
// weights = cell costs). Usable where enumeration is too slow.
double dtw_dijkstra(const Seq& a, const Seq& b);
std::size_t path_count(std::size_t t, std::size_t s);  // Delannoy number, for sanity checks

// |DFT| of a Hann-windowed frame, bins 0..n/2, by direct summation.
std::vector<double> dft_magnitude(const std::vector<double>& frame);

// Mean over 512/256 frames of the mixed-down signal, bins 1..30.
std::vector<double> fft_bins(const std::vector<std::int16_t>& left, const std::vector<std::int16_t>& right);

// Pre-emphasis, Hann frames, power spectrum by direct DFT, 26 mel triangles
// over 0-4000 Hz, log floor, orthonormal DCT-II, mean over frames.
std::vector<double> mfcc(const std::vector<std::int16_t>& left, const std::vector<std::int16_t>& right);

// Triangular mel filter m (0-based) evaluated at frequency f.
double mel_triangle(std::size_t m, double f);

struct AxisStats {
    double peak_count, peak_value, rms, zcr, std, min, max;
};
AxisStats axis_stats(const std::vector<double>& x);
double pearson(const std::vector<double>& a, const std::vector<double>& b);

// Soft-margin linear SVM solved in the primal by averaged subgradient descent on
// z-scored inputs. Returns weights on the z-scored features plus bias.
struct PrimalSvm {
    std::vector<double> mean, scale, w;
    double b = 0.0;
    double decision(const std::vector<double>& x) const;
};
PrimalSvm primal_svm(const std::vector<std::vector<double>>& x, const std::vector<int>& y, double c,
                     std::size_t iterations);

}  // namespace oracle

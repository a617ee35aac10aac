// noisegate.hpp
// Gesture-vs-noise gate: soft-margin linear SVM on z-scored feature vectors,
// trained with an SMO solver using second-order working-set selection.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "jawtap/features.hpp"
#include "jawtap/matrix.hpp"

namespace jawtap {

enum class GateClass { Noise, Gesture };

struct SvmTrainConfig {
    double C = 1.0;
    double tolerance = 1e-3;
    // Iteration budget is max_passes * number of samples.
    std::size_t max_passes = 100;
};

// Per-feature z-score; constant features get std = 1.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> std;

    static Standardizer fit(const Matrix<double>& x);
    std::vector<double> apply(std::span<const double> x) const;
};

// Decision value = weights . standardize(x) + bias, positive side = Gesture.
struct LinearSvm {
    std::vector<double> weights;
    double bias = 0.0;
    Standardizer norm;
    bool converged = true;
    std::size_t iterations = 0;

    double decision(std::span<const double> x) const;
};

// Lower-level trainer on raw rows; labels +1 (Gesture) / -1 (Noise).
// Throws SingleClass, ShapeMismatch.
LinearSvm train_linear_svm(const Matrix<double>& x, std::span<const int> labels, const SvmTrainConfig& cfg = {});

struct SvmModel {
    FeatureMode mode = FeatureMode::Full;
    LinearSvm svm;
};

struct GateResult {
    GateClass cls = GateClass::Gesture;
    double margin = 0.0;
};

// Throws SingleClass, ModeMismatch. A non-converged solve returns the last
// iterate with svm.converged = false.
SvmModel train_svm(std::span<const FeatureVector> x, std::span<const GateClass> y, const SvmTrainConfig& cfg = {});

// Ties (margin exactly 0) go to Gesture. Throws ModeMismatch.
GateResult gate(const SvmModel& model, const FeatureVector& fv);

}  // namespace jawtap

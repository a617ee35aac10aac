#include "jawtap/noisegate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "jawtap/error.hpp"

namespace jawtap {

namespace {

constexpr double kTau = 1e-12;
constexpr std::size_t kGramCacheLimit = 4096;

// Kernel rows of the standardized training set, cached in full for small sets.
class LinearKernel {
public:
    explicit LinearKernel(const Matrix<double>& z) : z_(z), n_(z.rows()) {
        diag_.resize(n_);
        for (std::size_t i = 0; i < n_; ++i) diag_[i] = dot(i, i);
        if (n_ <= kGramCacheLimit) {
            gram_ = Matrix<double>(n_, n_);
            for (std::size_t i = 0; i < n_; ++i)
                for (std::size_t j = i; j < n_; ++j) gram_(i, j) = gram_(j, i) = dot(i, j);
        }
    }

    double diag(std::size_t i) const { return diag_[i]; }

    std::span<const double> row(std::size_t i) {
        if (!gram_.empty()) return gram_.row(i);
        scratch_.resize(n_);
        for (std::size_t j = 0; j < n_; ++j) scratch_[j] = dot(i, j);
        return scratch_;
    }

private:
    double dot(std::size_t i, std::size_t j) const {
        double acc = 0.0;
        auto a = z_.row(i), b = z_.row(j);
        for (std::size_t k = 0; k < a.size(); ++k) acc += a[k] * b[k];
        return acc;
    }

    const Matrix<double>& z_;
    std::size_t n_;
    std::vector<double> diag_;
    Matrix<double> gram_;
    std::vector<double> scratch_;
};

}  // namespace

Standardizer Standardizer::fit(const Matrix<double>& x) {
    Standardizer s;
    const std::size_t n = x.rows(), d = x.cols();
    s.mean.assign(d, 0.0);
    s.std.assign(d, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < d; ++k) s.mean[k] += x(i, k);
    for (double& m : s.mean) m /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < d; ++k) s.std[k] += (x(i, k) - s.mean[k]) * (x(i, k) - s.mean[k]);
    for (double& v : s.std) {
        v = std::sqrt(v / static_cast<double>(n));
        if (!(v > 1e-12)) v = 1.0;
    }
    return s;
}

std::vector<double> Standardizer::apply(std::span<const double> x) const {
    std::vector<double> z(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) z[k] = (x[k] - mean[k]) / std[k];
    return z;
}

double LinearSvm::decision(std::span<const double> x) const {
    if (x.size() != weights.size()) throw Error(ErrorCode::ShapeMismatch, "feature length differs from model");
    double acc = bias;
    for (std::size_t k = 0; k < x.size(); ++k) acc += weights[k] * (x[k] - norm.mean[k]) / norm.std[k];
    return acc;
}

LinearSvm train_linear_svm(const Matrix<double>& x, std::span<const int> labels, const SvmTrainConfig& cfg) {
    const std::size_t n = x.rows(), d = x.cols();
    if (labels.size() != n || n < 2) throw Error(ErrorCode::ShapeMismatch, "need at least two labeled rows");
    if (!(cfg.C > 0.0) || !(cfg.tolerance > 0.0) || cfg.max_passes == 0)
        throw Error(ErrorCode::InvalidArgument, "SVM hyperparameters must be positive");
    const bool has_pos = std::any_of(labels.begin(), labels.end(), [](int v) { return v > 0; });
    const bool has_neg = std::any_of(labels.begin(), labels.end(), [](int v) { return v <= 0; });
    if (!has_pos || !has_neg) throw Error(ErrorCode::SingleClass, "training set has a single class");

    LinearSvm model;
    model.norm = Standardizer::fit(x);
    Matrix<double> z(n, d);
    for (std::size_t i = 0; i < n; ++i) {
        auto zi = model.norm.apply(x.row(i));
        std::copy(zi.begin(), zi.end(), z.row(i).begin());
    }
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = labels[i] > 0 ? 1.0 : -1.0;

    LinearKernel kernel(z);
    const double C = cfg.C;
    std::vector<double> alpha(n, 0.0);
    std::vector<double> grad(n, -1.0);  // gradient of 0.5 a'Qa - e'a
    const std::size_t max_iter = cfg.max_passes * n;
    std::vector<double> ki(n);

    model.converged = false;
    std::size_t iter = 0;
    for (; iter < max_iter; ++iter) {
        // First index: maximal violation among the "up" set.
        double gmax = -std::numeric_limits<double>::infinity();
        std::ptrdiff_t i = -1;
        for (std::size_t t = 0; t < n; ++t) {
            if (y[t] > 0 ? alpha[t] < C : alpha[t] > 0) {
                double v = -y[t] * grad[t];
                if (v >= gmax) gmax = v, i = static_cast<std::ptrdiff_t>(t);
            }
        }
        if (i < 0) {
            model.converged = true;
            break;
        }
        const auto ui = static_cast<std::size_t>(i);
        auto row_i = kernel.row(ui);
        std::copy(row_i.begin(), row_i.end(), ki.begin());

        // Second index: largest objective decrease among the "low" set.
        double gmax2 = -std::numeric_limits<double>::infinity();
        double obj_min = std::numeric_limits<double>::infinity();
        std::ptrdiff_t j = -1;
        for (std::size_t t = 0; t < n; ++t) {
            if (!(y[t] > 0 ? alpha[t] > 0 : alpha[t] < C)) continue;
            const double v = -y[t] * grad[t];
            gmax2 = std::max(gmax2, -v);
            const double grad_diff = gmax - v;
            if (grad_diff > 0) {
                double quad = kernel.diag(ui) + kernel.diag(t) - 2.0 * ki[t];
                if (quad <= 0) quad = kTau;
                const double obj = -grad_diff * grad_diff / quad;
                if (obj <= obj_min) obj_min = obj, j = static_cast<std::ptrdiff_t>(t);
            }
        }
        if (gmax + gmax2 < cfg.tolerance || j < 0) {
            model.converged = true;
            break;
        }
        const auto uj = static_cast<std::size_t>(j);
        auto row_j = kernel.row(uj);
        std::vector<double> kj(row_j.begin(), row_j.end());

        const double old_ai = alpha[ui], old_aj = alpha[uj];
        const double kij = ki[uj];
        if (y[ui] != y[uj]) {
            double quad = kernel.diag(ui) + kernel.diag(uj) + 2.0 * (y[ui] * y[uj] * kij);
            if (quad <= 0) quad = kTau;
            const double delta = (-grad[ui] - grad[uj]) / quad;
            const double diff = alpha[ui] - alpha[uj];
            alpha[ui] += delta;
            alpha[uj] += delta;
            if (diff > 0) {
                if (alpha[uj] < 0) alpha[uj] = 0, alpha[ui] = diff;
            } else {
                if (alpha[ui] < 0) alpha[ui] = 0, alpha[uj] = -diff;
            }
            if (diff > 0) {
                if (alpha[ui] > C) alpha[ui] = C, alpha[uj] = C - diff;
            } else {
                if (alpha[uj] > C) alpha[uj] = C, alpha[ui] = C + diff;
            }
        } else {
            double quad = kernel.diag(ui) + kernel.diag(uj) - 2.0 * kij;
            if (quad <= 0) quad = kTau;
            const double delta = (grad[ui] - grad[uj]) / quad;
            const double sum = alpha[ui] + alpha[uj];
            alpha[ui] -= delta;
            alpha[uj] += delta;
            if (sum > C) {
                if (alpha[ui] > C) alpha[ui] = C, alpha[uj] = sum - C;
            } else {
                if (alpha[uj] < 0) alpha[uj] = 0, alpha[ui] = sum;
            }
            if (sum > C) {
                if (alpha[uj] > C) alpha[uj] = C, alpha[ui] = sum - C;
            } else {
                if (alpha[ui] < 0) alpha[ui] = 0, alpha[uj] = sum;
            }
        }

        const double dai = alpha[ui] - old_ai, daj = alpha[uj] - old_aj;
        for (std::size_t t = 0; t < n; ++t)
            grad[t] += y[t] * (y[ui] * ki[t] * dai + y[uj] * kj[t] * daj);
    }
    model.iterations = iter;

    // Bias from free support vectors, else the midpoint of the feasible interval.
    double ub = std::numeric_limits<double>::infinity(), lb = -ub, sum_free = 0.0;
    std::size_t n_free = 0;
    for (std::size_t t = 0; t < n; ++t) {
        const double yg = y[t] * grad[t];
        if (alpha[t] >= C) {
            if (y[t] < 0) ub = std::min(ub, yg);
            else lb = std::max(lb, yg);
        } else if (alpha[t] <= 0) {
            if (y[t] > 0) ub = std::min(ub, yg);
            else lb = std::max(lb, yg);
        } else {
            ++n_free;
            sum_free += yg;
        }
    }
    const double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : 0.5 * (ub + lb);
    model.bias = -rho;

    model.weights.assign(d, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
        if (alpha[t] == 0.0) continue;
        auto zt = z.row(t);
        for (std::size_t k = 0; k < d; ++k) model.weights[k] += alpha[t] * y[t] * zt[k];
    }
    return model;
}

SvmModel train_svm(std::span<const FeatureVector> x, std::span<const GateClass> y, const SvmTrainConfig& cfg) {
    if (x.size() != y.size() || x.empty()) throw Error(ErrorCode::ShapeMismatch, "features and labels differ in count");
    const FeatureMode mode = x.front().mode;
    const std::size_t d = x.front().values.size();
    for (const auto& fv : x)
        if (fv.mode != mode || fv.values.size() != d)
            throw Error(ErrorCode::ModeMismatch, "training vectors mix feature modes");

    Matrix<double> m(x.size(), d);
    std::vector<int> labels(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::copy(x[i].values.begin(), x[i].values.end(), m.row(i).begin());
        labels[i] = y[i] == GateClass::Gesture ? 1 : -1;
    }
    return SvmModel{mode, train_linear_svm(m, labels, cfg)};
}

GateResult gate(const SvmModel& model, const FeatureVector& fv) {
    if (fv.mode != model.mode || fv.values.size() != model.svm.weights.size())
        throw Error(ErrorCode::ModeMismatch, "feature mode " + to_string(fv.mode) + " vs model " + to_string(model.mode));
    const double margin = model.svm.decision(fv.values);
    return {margin >= 0.0 ? GateClass::Gesture : GateClass::Noise, margin};
}

}  // namespace jawtap

#include "trimap/targets.hpp"

#include <cmath>
#include <stdexcept>

#include "trimap/errors.hpp"

namespace trimap {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

/// In-place lower Cholesky of a row-major SPD matrix.
std::vector<double> lower_cholesky_factor(std::vector<double> a, int n) {
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = a[i * n + j];
            for (int k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
            if (i == j) {
                if (!(s > 0.0))
                    throw std::invalid_argument("covariance matrix is not positive definite");
                a[i * n + j] = std::sqrt(s);
            } else {
                a[i * n + j] = s / a[j * n + j];
            }
        }
        for (int j = i + 1; j < n; ++j) a[i * n + j] = 0.0;
    }
    return a;
}

}  // namespace

void TargetDensity::log_density_gradient(std::span<const double>, std::span<double>) const {
    throw std::logic_error("target density: gradient not available");
}

double checked_log_density(const TargetDensity& target, std::span<const double> y) {
    double v;
    try {
        v = target.log_density(y);
    } catch (const CallbackError&) {
        throw;
    } catch (const std::exception& e) {
        throw CallbackError(std::string("target callback failed: ") + e.what());
    }
    if (std::isnan(v)) throw CallbackError("target callback returned NaN");
    return v;
}

GaussianTarget::GaussianTarget(std::vector<double> mean, std::vector<double> covariance_row_major,
                               double log_shift, bool include_normalization)
    : mean_(std::move(mean)), log_shift_(log_shift) {
    const int n = static_cast<int>(mean_.size());
    if (covariance_row_major.size() != static_cast<std::size_t>(n) * n)
        throw std::invalid_argument("gaussian target: covariance size mismatch");
    chol_ = lower_cholesky_factor(std::move(covariance_row_major), n);
    if (include_normalization) {
        double log_det = 0.0;
        for (int i = 0; i < n; ++i) log_det += std::log(chol_[i * n + i]);
        log_norm_ = -0.5 * n * kLog2Pi - log_det;
    }
}

GaussianTarget GaussianTarget::standard(int dim) {
    std::vector<double> cov(static_cast<std::size_t>(dim) * dim, 0.0);
    for (int i = 0; i < dim; ++i) cov[i * dim + i] = 1.0;
    return GaussianTarget(std::vector<double>(dim, 0.0), std::move(cov));
}

double GaussianTarget::log_density(std::span<const double> y) const {
    const int n = dim();
    // Solve L u = y - mean by forward substitution; quad form = |u|^2.
    double quad = 0.0;
    std::vector<double> u(n);
    for (int i = 0; i < n; ++i) {
        double s = y[i] - mean_[i];
        for (int j = 0; j < i; ++j) s -= chol_[i * n + j] * u[j];
        u[i] = s / chol_[i * n + i];
        quad += u[i] * u[i];
    }
    return -0.5 * quad + log_norm_ + log_shift_;
}

void GaussianTarget::log_density_gradient(std::span<const double> y, std::span<double> grad) const {
    const int n = dim();
    std::vector<double> u(n);
    for (int i = 0; i < n; ++i) {
        double s = y[i] - mean_[i];
        for (int j = 0; j < i; ++j) s -= chol_[i * n + j] * u[j];
        u[i] = s / chol_[i * n + i];
    }
    // grad = -Sigma^{-1}(y - mean) = -L^{-T} u by back substitution.
    std::vector<double> t(n);
    for (int i = n - 1; i >= 0; --i) {
        double s = u[i];
        for (int j = i + 1; j < n; ++j) s -= chol_[j * n + i] * t[j];
        t[i] = s / chol_[i * n + i];
    }
    for (int i = 0; i < n; ++i) grad[i] = -t[i];
}

double BananaTarget::log_density(std::span<const double> y) const {
    const double r = y[1] - curvature_ * (y[0] * y[0] - sigma1_ * sigma1_);
    return -0.5 * y[0] * y[0] / (sigma1_ * sigma1_) - 0.5 * r * r;
}

void BananaTarget::log_density_gradient(std::span<const double> y, std::span<double> grad) const {
    const double r = y[1] - curvature_ * (y[0] * y[0] - sigma1_ * sigma1_);
    grad[0] = -y[0] / (sigma1_ * sigma1_) + r * 2.0 * curvature_ * y[0];
    grad[1] = -r;
}

}  // namespace trimap

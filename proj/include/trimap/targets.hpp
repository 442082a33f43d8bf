#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

namespace trimap {

/// Unnormalized target log-density. Implementations return -infinity for
/// out-of-support points and must never return NaN (checked_log_density
/// converts NaN into a CallbackError). Implementations must be safe to call
/// concurrently; serialize internally if necessary.
class TargetDensity {
public:
    virtual ~TargetDensity() = default;
    virtual int dim() const = 0;
    virtual double log_density(std::span<const double> y) const = 0;
    virtual bool has_gradient() const { return false; }
    virtual void log_density_gradient(std::span<const double> y, std::span<double> grad) const;
};

double checked_log_density(const TargetDensity& target, std::span<const double> y);

/// Gaussian with arbitrary mean and SPD covariance; log-density carries an
/// optional additive shift so tests can plant a known normalizing constant.
class GaussianTarget : public TargetDensity {
public:
    GaussianTarget(std::vector<double> mean, std::vector<double> covariance_row_major,
                   double log_shift = 0.0, bool include_normalization = true);
    static GaussianTarget standard(int dim);

    int dim() const override { return static_cast<int>(mean_.size()); }
    double log_density(std::span<const double> y) const override;
    bool has_gradient() const override { return true; }
    void log_density_gradient(std::span<const double> y, std::span<double> grad) const override;

    /// Lower Cholesky factor of the covariance (the exact KR map from the
    /// standard reference is y = mean + L x).
    const std::vector<double>& cholesky_lower() const { return chol_; }

private:
    std::vector<double> mean_;
    std::vector<double> chol_;  // n x n lower, row-major
    double log_shift_ = 0.0;
    double log_norm_ = 0.0;
};

/// 2D banana: y_1 ~ N(0, sigma1^2) and y_2 | y_1 ~ N(curv (y_1^2 - sigma1^2), 1).
class BananaTarget : public TargetDensity {
public:
    explicit BananaTarget(double curvature = 1.0, double sigma1 = 1.0)
        : curvature_(curvature), sigma1_(sigma1) {}
    int dim() const override { return 2; }
    double log_density(std::span<const double> y) const override;
    bool has_gradient() const override { return true; }
    void log_density_gradient(std::span<const double> y, std::span<double> grad) const override;

private:
    double curvature_, sigma1_;
};

/// Adapter for ad-hoc targets in tests and tooling.
class FunctionTarget : public TargetDensity {
public:
    using LogDensityFn = std::function<double(std::span<const double>)>;
    using GradientFn = std::function<void(std::span<const double>, std::span<double>)>;

    FunctionTarget(int dim, LogDensityFn fn, GradientFn grad = nullptr)
        : dim_(dim), fn_(std::move(fn)), grad_(std::move(grad)) {}

    int dim() const override { return dim_; }
    double log_density(std::span<const double> y) const override { return fn_(y); }
    bool has_gradient() const override { return static_cast<bool>(grad_); }
    void log_density_gradient(std::span<const double> y, std::span<double> grad) const override {
        grad_(y, grad);
    }

private:
    int dim_;
    LogDensityFn fn_;
    GradientFn grad_;
};

/// Log-density served by a child process over a pipe: for each evaluation the
/// parent writes the point as one line of space-separated decimals on the
/// child's stdin and reads one line with the log-density from its stdout
/// (`-inf` or any non-finite value marks out-of-support). Evaluations are
/// serialized internally.
class PipeTarget : public TargetDensity {
public:
    PipeTarget(std::string command, int dim);
    ~PipeTarget() override;

    int dim() const override { return dim_; }
    double log_density(std::span<const double> y) const override;

private:
    struct Process;
    int dim_;
    std::string command_;
    mutable std::mutex mutex_;
    std::unique_ptr<Process> process_;
};

}  // namespace trimap

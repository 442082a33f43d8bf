#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "trimap/conditioning.hpp"
#include "trimap/inverse_builder.hpp"
#include "trimap/report.hpp"
#include "trimap/sample_set.hpp"
#include "trimap/stats.hpp"
#include "trimap/targets.hpp"

namespace trimap::bod {

/// Biochemical oxygen demand model: observations of A (1 - exp(-B t))
/// plus Gaussian noise at t = 1..5; A and B are uniform on boxes and
/// reparameterized through the standard normal CDF so the inferred
/// parameters theta have unbounded support and standard normal priors.
inline constexpr double kNoiseVariance = 1e-3;
inline constexpr std::array<double, 5> kTimes{1.0, 2.0, 3.0, 4.0, 5.0};
inline constexpr std::array<double, 5> kDataStar{0.18, 0.32, 0.42, 0.49, 0.54};
inline constexpr int kDataDim = 5;
inline constexpr int kParamDim = 2;
inline constexpr int kJointDim = kDataDim + kParamDim;

/// theta -> (A, B) with A in (0.4, 1.2) and B in (0.01, 0.31).
std::pair<double, double> prior_transform(double theta1, double theta2);
/// Derivatives dA/dtheta1 and dB/dtheta2.
std::pair<double, double> prior_transform_derivative(double theta1, double theta2);

/// Noise-free observation A (1 - exp(-B t)).
double forward_mean(double a, double b, double t);

/// Joint draws on R^7 ordered (d_1..d_5, theta_1, theta_2): theta from the
/// standard normal prior, then data from the forward model plus noise. The
/// data block comes first so the joint map can be conditioned on d*.
SampleSet joint_sample(std::size_t count, std::uint64_t seed, Exec mode = default_exec());

/// Unnormalized posterior over theta for fixed data (analytic gradient).
class Posterior : public TargetDensity {
public:
    explicit Posterior(std::array<double, 5> data = kDataStar) : data_(data) {}
    int dim() const override { return kParamDim; }
    double log_density(std::span<const double> theta) const override;
    bool has_gradient() const override { return true; }
    void log_density_gradient(std::span<const double> theta,
                              std::span<double> grad) const override;

private:
    std::array<double, 5> data_;
};

/// Normalized joint density of (data, theta); used for inverse-map KL
/// diagnostics on the joint sample set.
class Joint : public TargetDensity {
public:
    int dim() const override { return kJointDim; }
    double log_density(std::span<const double> point) const override;
};

struct InverseExperimentConfig {
    std::size_t training_samples = 50000;
    int degree = 3;
    std::size_t conditional_draws = 30000;
    std::uint64_t seed = 1;
    LbfgsOptions optimizer;
    Exec exec = default_exec();
};

struct InverseExperimentResult {
    TriangularMap inverse_map;
    TriangularMap direct_map;
    OptimizationReport inverse_report;
    MomentSummary theta1;
    MomentSummary theta2;
    SampleSet conditional_samples;
};

/// Offline: inverse map from joint samples, direct map by regression.
/// Online: condition the direct map at d* and draw conditional samples;
/// reports the first four conditional moments per theta coordinate.
InverseExperimentResult run_inverse_experiment(const InverseExperimentConfig& config);

struct DirectExperimentConfig {
    std::vector<int> degrees{1, 3, 5};
    int quadrature_order = 10;
    LbfgsOptions optimizer;
    Exec exec = default_exec();
};

struct DirectExperimentResult {
    std::vector<int> degrees;
    std::vector<TriangularMap> maps;
    std::vector<OptimizationReport> reports;
};

/// Direct maps to the BOD posterior at d* over total-degree Hermite spaces,
/// tensorized Gauss-Hermite integration, pointwise constraints at the nodes.
DirectExperimentResult run_direct_experiment(const DirectExperimentConfig& config);

}  // namespace trimap::bod

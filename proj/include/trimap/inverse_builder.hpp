#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "trimap/map_template.hpp"
#include "trimap/optimizer.hpp"
#include "trimap/report.hpp"
#include "trimap/sample_set.hpp"
#include "trimap/triangular_map.hpp"

namespace trimap {

struct InverseBuildConfig {
    MapTemplate map;
    LbfgsOptions optimizer;
    double constraint_epsilon = 1e-6;
    /// Standardize the samples per coordinate and absorb the affine piece
    /// into the stored pre-map (conditions the fit at high degree).
    bool standardize = true;
    std::uint64_t center_seed = 0;  // RBF center selection
    Exec exec = default_exec();
};

struct InverseBuildResult {
    TriangularMap map;
    OptimizationReport report;
    std::vector<OptimizationReport> component_reports;
};

/// Per-component SAA objective (standard Gaussian reference)
///   (1/M) sum_i [ 1/2 S^k(y_i)^2 - log d_k S^k(y_i) ]
/// evaluated in the component's own input space; independent of every other
/// component. Throws NonMonotoneError when d_k S^k <= 0 at a sample.
double inverse_component_objective(const MapComponent& component, const SampleSet& points,
                                   std::span<double> gradient, Exec exec = default_exec());

/// Solves the n independent convex problems; components are deterministic
/// given the samples and independent of build order.
InverseBuildResult build_inverse(const SampleSet& samples, const InverseBuildConfig& config);

/// Builds only component k (same standardization as the full build); used to
/// check separability.
InverseBuildResult build_inverse_single(const SampleSet& samples, const InverseBuildConfig& config,
                                        int k);

struct RegressionConfig {
    LbfgsOptions optimizer;
    double constraint_epsilon = 1e-6;
    /// Ridge factor applied as lambda = factor * trace(PhiT Phi) / dof on
    /// near-singular normal equations.
    double ridge_factor = 1e-10;
    Exec exec = default_exec();
};

/// Mean-squared residual (1/M) sum_i (T^k(x_i) - y_i)^2 and its coefficient
/// gradient for one component.
double regression_objective(const MapComponent& component, const SampleSet& x_points,
                            std::span<const double> y_column, std::span<double> gradient,
                            Exec exec = default_exec());

struct DirectRegressionResult {
    TriangularMap map;
    /// Mean-squared residual per component.
    std::vector<double> residuals;
    std::vector<std::string> warnings;
};

/// Per-component least squares fit of a direct map to (x_i, y_i) pairs;
/// polynomial/RBF components solve (possibly ridge-regularized) normal
/// equations and fall back to constrained refitting when the linear solution
/// is non-monotone at the training points.
DirectRegressionResult regress_direct_from_pairs(const SampleSet& x_points,
                                                 const SampleSet& y_points,
                                                 const MapTemplate& templ,
                                                 const RegressionConfig& config);

struct GaussianityCoordinate {
    double mean = 0.0, variance = 0.0, skewness = 0.0, excess_kurtosis = 0.0;
    double z_mean = 0.0, z_variance = 0.0, z_skewness = 0.0, z_kurtosis = 0.0;
    double ks_statistic = 0.0, ks_scaled = 0.0;
};

struct GaussianityCorrelation {
    int i = 0, j = 0;
    double correlation = 0.0;
    double z = 0.0;  // Fisher transform
};

struct GaussianityReport {
    std::size_t sample_count = 0;
    double z_threshold = 4.0;
    double ks_threshold = 0.0;
    std::vector<GaussianityCoordinate> coordinates;
    std::vector<GaussianityCorrelation> correlations;
    bool pass = false;
};

/// Moment, correlation and empirical-CDF checks of joint standard normality.
GaussianityReport gaussianity_check(const SampleSet& samples, double z_threshold = 4.0);

}  // namespace trimap

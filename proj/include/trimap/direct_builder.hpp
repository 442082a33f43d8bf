#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "trimap/map_template.hpp"
#include "trimap/optimizer.hpp"
#include "trimap/quadrature.hpp"
#include "trimap/report.hpp"
#include "trimap/targets.hpp"
#include "trimap/triangular_map.hpp"

namespace trimap {

/// How the d_k T^k > 0 constraint is handled. Monotone parameterizations
/// make the problem unconstrained; polynomial/RBF templates get the
/// constraint discretized at the integration nodes (d_k T^k > epsilon),
/// enforced by infinite-objective rejection in the line search on top of
/// the -log d_k T^k barrier already present.
enum class ConstraintMode { MonotoneParam, PointwiseAtNodes };

struct IntegrationSpec {
    enum class Kind { Quadrature, MonteCarlo };
    Kind kind = Kind::Quadrature;
    int order = 10;               // per-dimension Gauss-Hermite order
    std::size_t count = 10000;    // Monte Carlo size
    std::uint64_t seed = 0;
};

QuadratureRule make_integration_rule(const IntegrationSpec& spec, int dim);

struct DirectBuildConfig {
    MapTemplate map;
    IntegrationSpec integration;
    std::optional<ConstraintMode> constraint;  // default: deduced from the template
    double constraint_epsilon = 1e-6;
    LbfgsOptions optimizer;
    std::optional<std::vector<double>> initial_coefficients;  // default: identity map
    Exec exec = default_exec();
};

struct DirectBuildResult {
    TriangularMap map;
    OptimizationReport report;
};

/// SAA objective sum_i w_i [ -log pibar(T(x_i)) - sum_k log d_k T^k(x_i) ]
/// and its coefficient gradient (chain rule through the target gradient, or
/// one-sided finite differences on log pibar when no gradient is supplied).
/// Returns +infinity when a node is infeasible in PointwiseAtNodes mode or
/// lands outside the target support; throws NonMonotoneError on infeasible
/// nodes in MonotoneParam mode.
double direct_objective(const TriangularMap& map, const TargetDensity& target,
                        const QuadratureRule& rule, std::span<double> gradient,
                        ConstraintMode mode = ConstraintMode::MonotoneParam,
                        double epsilon = 1e-6, Exec exec = default_exec());

/// Joint quasi-Newton solve of all n components from the identity map.
DirectBuildResult build_direct(const TargetDensity& target, const DirectBuildConfig& config);

/// log beta = sum_i w_i [ log pibar(T(x_i)) + log det dT(x_i) - log eta(x_i) ];
/// exp of it estimates the normalizing constant of the unnormalized target.
double estimate_log_normalizing_constant(const TriangularMap& map, const TargetDensity& target,
                                         const QuadratureRule& rule, Exec exec = default_exec());

/// Standard normal reference log-density.
double reference_log_density(std::span<const double> x);

}  // namespace trimap

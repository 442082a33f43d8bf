#pragma once

#include <optional>
#include <string>
#include <vector>

namespace trimap {

/// Outcome of a map build: converged coefficients live in the returned map,
/// everything else lands here.
struct OptimizationReport {
    double final_objective = 0.0;
    double gradient_norm = 0.0;
    int iterations = 0;
    bool converged = false;
    /// Half the variance of the log-density mismatch; second-order KL estimate.
    std::optional<double> kl_variance;
    /// Direct builds only: log of the target's normalizing constant.
    std::optional<double> log_normalizing_constant;
    /// Count of check points where the diagonal Jacobian was not positive;
    /// always 0 for monotone (integrated-exponential) parameterizations.
    int monotonicity_violations = 0;
    /// Nodes/samples used by the SAA objective (diagnostics inherit its error).
    std::size_t integration_points = 0;
    std::vector<std::string> warnings;
};

}  // namespace trimap

#pragma once

#include <functional>
#include <span>

#include "trimap/quadrature.hpp"
#include "trimap/sample_set.hpp"
#include "trimap/targets.hpp"
#include "trimap/triangular_map.hpp"

namespace trimap {

/// Second-order KL estimate for a direct map: half the weighted variance of
/// log eta(x) - log pibar(T(x)) - log det dT(x) over the reference nodes.
/// Invariant to rescaling the unnormalized target by any positive constant.
double kl_variance_direct(const TriangularMap& map, const TargetDensity& target,
                          const QuadratureRule& rule, Exec exec = default_exec());

/// Second-order KL estimate for an inverse map: half the sample variance of
/// log pibar(y) - log eta(S(y)) - log det dS(y) over the target samples.
double kl_variance_inverse(const TriangularMap& map, const SampleSet& target_samples,
                           const TargetDensity& target, Exec exec = default_exec());

/// Pullback log-density log pibar(T(x)) + log det dT(x) (unnormalized).
double pullback_log_density(const TriangularMap& map, const TargetDensity& target,
                            std::span<const double> x);

struct BiasBoundResult {
    double bound = 0.0;
    double kl_estimate = 0.0;
    /// True when E_pi[|g|^2] was unavailable and the pushforward estimate
    /// stood in for it.
    bool surrogate_constant = false;
};

/// Bound |E_pi[g] - E_pushforward[g]| <= C sqrt(KL) with
/// C = sqrt(2) (E_pi[|g|^2] + E_pushforward[|g|^2])^(1/2). Supply
/// target_g_second_moment when target moments are known; otherwise the
/// pushforward estimate is substituted and flagged.
BiasBoundResult bias_bound(const TriangularMap& map, const TargetDensity& target,
                           const std::function<double(std::span<const double>)>& g,
                           const QuadratureRule& rule,
                           std::optional<double> target_g_second_moment = std::nullopt,
                           Exec exec = default_exec());

}  // namespace trimap

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "trimap/sample_set.hpp"
#include "trimap/targets.hpp"
#include "trimap/triangular_map.hpp"

namespace trimap {

struct McmcConfig {
    std::size_t steps = 100000;
    std::size_t burn_in = 10000;
    std::uint64_t seed = 0;
    /// Haario-style adaptation: proposal covariance (2.38^2/n) (Sigma + eps I)
    /// rebuilt from the chain history every adapt_interval steps.
    bool adapt = true;
    std::size_t adapt_interval = 100;
    double adapt_epsilon = 1e-8;
    /// Stop adapting after this many steps (0 = keep adapting).
    std::size_t adapt_freeze = 0;
    /// When set, a global step-size factor is tuned (Robbins-Monro on the
    /// windowed acceptance) toward this rate on top of the covariance
    /// adaptation; the Gaussian-optimal 2.38^2/n scaling over-disperses on
    /// heavy-tailed targets.
    std::optional<double> target_acceptance;
    /// Initial (or fixed, when adapt = false) per-coordinate proposal sd;
    /// defaults to 2.38/sqrt(n).
    std::optional<std::vector<double>> proposal_sd;
    std::vector<double> x0;  // defaults to the origin
};

struct McmcResult {
    SampleSet chain;  // post burn-in states
    double acceptance_rate = 0.0;
    std::vector<double> ess;  // per coordinate
    bool stuck_warning = false;
};

/// Gaussian random-walk Metropolis with covariance adapted from the chain
/// history. The chain itself is inherently sequential; draws come from the
/// counter generator keyed by step, so runs are reproducible.
McmcResult adaptive_metropolis(const TargetDensity& target, const McmcConfig& config);

/// Runs the sampler on the pullback density pibar(T(x)) |det dT(x)| and
/// pushes the chain through the map: the pushed states are samples from the
/// exact target. Non-monotone excursions are rejected via -inf log density.
McmcResult preconditioned_sample(const TriangularMap& map, const TargetDensity& target,
                                 const McmcConfig& config, Exec exec = default_exec());

}  // namespace trimap

#include "trimap/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

#include "trimap/direct_builder.hpp"
#include "trimap/stats.hpp"

namespace trimap {

double kl_variance_direct(const TriangularMap& map, const TargetDensity& target,
                          const QuadratureRule& rule, Exec exec) {
    if (map.dim() != target.dim() || map.dim() != rule.dim)
        throw std::invalid_argument("kl_variance_direct: dimension mismatch");
    std::vector<double> mismatch(rule.count);
    for_each_index(
        rule.count,
        [&](std::size_t i) {
            const auto node = rule.node(i);
            const auto y = map.evaluate(node);
            mismatch[i] = reference_log_density(node) - checked_log_density(target, y) -
                          map.log_det_jacobian(node);
        },
        exec);
    return 0.5 * weighted_variance(mismatch, rule.weights);
}

double kl_variance_inverse(const TriangularMap& map, const SampleSet& target_samples,
                           const TargetDensity& target, Exec exec) {
    if (map.dim() != target.dim() || map.dim() != target_samples.dim)
        throw std::invalid_argument("kl_variance_inverse: dimension mismatch");
    const std::size_t m = target_samples.count;
    std::vector<double> mismatch(m);
    for_each_index(
        m,
        [&](std::size_t i) {
            const auto y = target_samples.row(i);
            const auto s = map.evaluate(y);
            mismatch[i] = checked_log_density(target, y) - reference_log_density(s) -
                          map.log_det_jacobian(y);
        },
        exec);
    const std::vector<double> weights(m, 1.0 / static_cast<double>(m));
    return 0.5 * weighted_variance(mismatch, weights);
}

double pullback_log_density(const TriangularMap& map, const TargetDensity& target,
                            std::span<const double> x) {
    const auto y = map.evaluate(x);
    return checked_log_density(target, y) + map.log_det_jacobian(x);
}

BiasBoundResult bias_bound(const TriangularMap& map, const TargetDensity& target,
                           const std::function<double(std::span<const double>)>& g,
                           const QuadratureRule& rule,
                           std::optional<double> target_g_second_moment, Exec exec) {
    BiasBoundResult result;
    result.kl_estimate = kl_variance_direct(map, target, rule, exec);

    // E_pushforward[|g|^2] over the same nodes.
    std::vector<double> g2(rule.count);
    for_each_index(
        rule.count,
        [&](std::size_t i) {
            const auto y = map.evaluate(rule.node(i));
            const double v = g(y);
            g2[i] = v * v;
        },
        exec);
    const double push_m2 = weighted_mean(g2, rule.weights);

    double target_m2;
    if (target_g_second_moment) {
        target_m2 = *target_g_second_moment;
    } else {
        target_m2 = push_m2;
        result.surrogate_constant = true;
    }
    const double constant = std::sqrt(2.0) * std::sqrt(target_m2 + push_m2);
    result.bound = constant * std::sqrt(std::max(result.kl_estimate, 0.0));
    return result;
}

}  // namespace trimap

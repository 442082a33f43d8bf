#include "trimap/direct_builder.hpp"

#include <atomic>
#include <cmath>
#include <limits>

#include "trimap/diagnostics.hpp"
#include "trimap/errors.hpp"

namespace trimap {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;
constexpr double kInf = std::numeric_limits<double>::infinity();

/// Per-node contribution of the SAA objective and its coefficient gradient.
/// terms = [w(-logpi - logdet), w * dobjective/dcoeff ...]; false marks an
/// infeasible node (non-monotone past the floor, or out of target support).
class NodeEvaluator {
public:
    NodeEvaluator(const TriangularMap& map, const TargetDensity& target,
                  const QuadratureRule& rule, double diag_floor, bool want_gradient)
        : map_(map),
          target_(target),
          rule_(rule),
          diag_floor_(diag_floor),
          want_gradient_(want_gradient),
          ncoeff_(map.coefficient_count()) {
        if (map_.premap())
            for (double s : map_.premap()->scale) premap_logdet_ -= std::log(s);
    }

    bool operator()(std::size_t i, std::span<double> terms) const {
        const int n = map_.dim();
        const auto node = rule_.node(i);
        const double w = rule_.weights[i];

        std::vector<double> z(n), y(n), logdiag(n);
        std::vector<double> vgrad, ldgrad;
        if (want_gradient_) {
            vgrad.resize(ncoeff_);
            ldgrad.resize(ncoeff_);
        }
        map_.premapped(node, z);

        double logdet = premap_logdet_;
        std::size_t off = 0;
        for (int k = 1; k <= n; ++k) {
            const MapComponent& comp = map_.component(k);
            const std::size_t m = comp.coefficient_count();
            double value, ld;
            const auto vg = want_gradient_ ? std::span<double>(vgrad).subspan(off, m)
                                           : std::span<double>{};
            const auto lg = want_gradient_ ? std::span<double>(ldgrad).subspan(off, m)
                                           : std::span<double>{};
            if (!comp.eval_full(z, diag_floor_, value, ld, vg, lg)) return false;
            y[k - 1] = value;
            logdiag[k - 1] = ld;
            logdet += ld;
            off += m;
        }

        const double lp = checked_log_density(target_, y);
        if (lp == -kInf) return false;

        terms[0] = w * (-lp - logdet);
        if (!want_gradient_) return true;

        std::vector<double> tgrad(n);
        if (target_.has_gradient()) {
            target_.log_density_gradient(y, tgrad);
        } else {
            // One-sided differences on log pibar; step scales with |y|.
            std::vector<double> yp(y);
            for (int j = 0; j < n; ++j) {
                const double h = 1e-5 * (1.0 + std::abs(y[j]));
                yp[j] = y[j] + h;
                tgrad[j] = (checked_log_density(target_, yp) - lp) / h;
                yp[j] = y[j];
            }
        }

        off = 0;
        for (int k = 1; k <= n; ++k) {
            const std::size_t m = map_.component(k).coefficient_count();
            for (std::size_t j = 0; j < m; ++j)
                terms[1 + off + j] = w * (-tgrad[k - 1] * vgrad[off + j] - ldgrad[off + j]);
            off += m;
        }
        return true;
    }

private:
    const TriangularMap& map_;
    const TargetDensity& target_;
    const QuadratureRule& rule_;
    double diag_floor_;
    bool want_gradient_;
    std::size_t ncoeff_;
    double premap_logdet_ = 0.0;
};

}  // namespace

double reference_log_density(std::span<const double> x) {
    double q = 0.0;
    for (double v : x) q += v * v;
    return -0.5 * q - 0.5 * static_cast<double>(x.size()) * kLog2Pi;
}

QuadratureRule make_integration_rule(const IntegrationSpec& spec, int dim) {
    if (spec.kind == IntegrationSpec::Kind::Quadrature)
        return tensorize(gauss_hermite_1d(spec.order), dim);
    return rule_from_samples(sample_reference(spec.count, dim, spec.seed));
}

double direct_objective(const TriangularMap& map, const TargetDensity& target,
                        const QuadratureRule& rule, std::span<double> gradient,
                        ConstraintMode mode, double epsilon, Exec exec) {
    if (map.dim() != target.dim() || map.dim() != rule.dim)
        throw std::invalid_argument("direct_objective: dimension mismatch");
    const bool want_gradient = !gradient.empty();
    const std::size_t width = 1 + (want_gradient ? map.coefficient_count() : 0);
    const double floor = mode == ConstraintMode::PointwiseAtNodes ? epsilon : 0.0;

    NodeEvaluator eval(map, target, rule, floor, want_gradient);
    std::vector<double> sums(width);
    if (!blocked_accumulate(rule.count, width, sums, eval, exec)) {
        if (mode == ConstraintMode::MonotoneParam) {
            // Locate the offending node for the error payload.
            for (std::size_t i = 0; i < rule.count; ++i) {
                std::vector<double> probe(width);
                if (!eval(i, probe)) {
                    const auto node = rule.node(i);
                    std::vector<double> z(map.dim());
                    map.premapped(node, z);
                    for (int k = 1; k <= map.dim(); ++k) {
                        double ld;
                        if (!map.component(k).log_diag(z, 0.0, ld))
                            throw NonMonotoneError(k,
                                                   std::vector<double>(node.begin(), node.end()));
                    }
                    break;  // infeasible through the target support, not monotonicity
                }
            }
        }
        return kInf;
    }
    if (want_gradient)
        for (std::size_t j = 0; j < gradient.size(); ++j) gradient[j] = sums[1 + j];
    return sums[0];
}

double estimate_log_normalizing_constant(const TriangularMap& map, const TargetDensity& target,
                                         const QuadratureRule& rule, Exec exec) {
    std::vector<double> terms(rule.count);
    for_each_index(
        rule.count,
        [&](std::size_t i) {
            const auto node = rule.node(i);
            const auto y = map.evaluate(node);
            const double lp = checked_log_density(target, y);
            terms[i] = lp + map.log_det_jacobian(node) - reference_log_density(node);
        },
        exec);
    return pairwise_dot(terms, rule.weights);
}

DirectBuildResult build_direct(const TargetDensity& target, const DirectBuildConfig& config) {
    if (config.map.dim != target.dim())
        throw std::invalid_argument("build_direct: template dimension must match the target");
    const QuadratureRule rule = make_integration_rule(config.integration, config.map.dim);

    TriangularMap map =
        instantiate_identity(config.map, Direction::Direct, &rule, config.integration.seed);
    if (config.initial_coefficients) map.set_packed_coefficients(*config.initial_coefficients);

    const ConstraintMode mode =
        config.constraint.value_or(config.map.any_needs_constraints()
                                       ? ConstraintMode::PointwiseAtNodes
                                       : ConstraintMode::MonotoneParam);

    OptimizationReport report;
    report.integration_points = rule.count;
    if (!target.has_gradient())
        report.warnings.push_back(
            "target gradient unavailable; using one-sided finite differences on log density");

    TriangularMap working = map;
    const Objective objective = [&](std::span<const double> c, std::span<double> grad) {
        working.set_packed_coefficients(c);
        return direct_objective(working, target, rule, grad, mode, config.constraint_epsilon,
                                config.exec);
    };

    const std::vector<double> x0 = map.packed_coefficients();
    const LbfgsResult solved = lbfgs_minimize(objective, x0, config.optimizer);
    map.set_packed_coefficients(solved.x);

    report.final_objective = solved.value;
    report.gradient_norm = solved.gradient_norm;
    report.iterations = solved.iterations;
    report.converged = solved.converged;
    if (!solved.converged)
        report.warnings.push_back("optimizer stopped before reaching the gradient tolerance");

    report.kl_variance = kl_variance_direct(map, target, rule, config.exec);
    report.log_normalizing_constant =
        estimate_log_normalizing_constant(map, target, rule, config.exec);

    // Monotonicity audit at the integration nodes.
    std::atomic<int> violations{0};
    for_each_index(
        rule.count,
        [&](std::size_t i) {
            std::vector<double> z(map.dim());
            map.premapped(rule.node(i), z);
            for (int k = 1; k <= map.dim(); ++k) {
                double ld;
                if (!map.component(k).log_diag(z, 0.0, ld)) violations.fetch_add(1);
            }
        },
        config.exec);
    report.monotonicity_violations = violations.load();

    return {std::move(map), std::move(report)};
}

}  // namespace trimap

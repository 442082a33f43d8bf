#include "trimap/inverse_builder.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "trimap/errors.hpp"
#include "trimap/stats.hpp"

namespace trimap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Objective core: returns +inf when d_k S^k <= floor at some sample.
double component_objective_impl(const MapComponent& comp, const SampleSet& pts,
                                std::span<double> gradient, double floor, Exec exec) {
    const std::size_t m = comp.coefficient_count();
    const bool want_gradient = !gradient.empty();
    const std::size_t width = 1 + (want_gradient ? m : 0);
    const double inv_m = 1.0 / static_cast<double>(pts.count);

    std::vector<double> sums(width);
    const bool feasible = blocked_accumulate(
        pts.count, width,
        sums,
        [&](std::size_t i, std::span<double> terms) {
            const auto y = pts.row(i);
            double value, logdiag;
            std::vector<double> vgrad, ldgrad;
            std::span<double> vg, lg;
            if (want_gradient) {
                vgrad.resize(m);
                ldgrad.resize(m);
                vg = vgrad;
                lg = ldgrad;
            }
            if (!comp.eval_full(y, floor, value, logdiag, vg, lg)) return false;
            terms[0] = inv_m * (0.5 * value * value - logdiag);
            if (want_gradient)
                for (std::size_t j = 0; j < m; ++j)
                    terms[1 + j] = inv_m * (value * vgrad[j] - ldgrad[j]);
            return true;
        },
        exec);
    if (!feasible) return kInf;
    if (want_gradient)
        for (std::size_t j = 0; j < m; ++j) gradient[j] = sums[1 + j];
    return sums[0];
}

std::size_t find_infeasible_point(const MapComponent& comp, const SampleSet& pts, double floor) {
    for (std::size_t i = 0; i < pts.count; ++i) {
        double ld;
        if (!comp.log_diag(pts.row(i), floor, ld)) return i;
    }
    return pts.count;
}

AffinePremap standardizing_premap(const SampleSet& samples) {
    AffinePremap pre;
    const int n = samples.dim;
    pre.shift.resize(n);
    pre.scale.resize(n);
    for (int j = 0; j < n; ++j) {
        const auto col = samples.column(j);
        pre.shift[j] = sample_mean(col);
        const double sd = std::sqrt(sample_variance(col));
        pre.scale[j] = sd > 0.0 ? sd : 1.0;
    }
    return pre;
}

SampleSet apply_premap(const SampleSet& samples, const AffinePremap& pre) {
    SampleSet z(samples.count, samples.dim, samples.provenance, samples.seed);
    for (std::size_t i = 0; i < samples.count; ++i)
        for (int j = 0; j < samples.dim; ++j)
            z.at(i, j) = (samples.at(i, j) - pre.shift[j]) / pre.scale[j];
    return z;
}

OptimizationReport solve_component(MapComponent& comp, const SampleSet& z_samples,
                                   const InverseBuildConfig& config) {
    OptimizationReport report;
    report.integration_points = z_samples.count;
    if (z_samples.count < comp.coefficient_count())
        report.warnings.push_back("component " + std::to_string(comp.output_index()) +
                                  ": fewer samples than coefficients (rank-deficient fit)");

    const double floor = comp.always_monotone() ? 0.0 : config.constraint_epsilon;
    MapComponent working = comp;
    const Objective objective = [&](std::span<const double> c, std::span<double> grad) {
        working.set_coefficients(c);
        return component_objective_impl(working, z_samples, grad, floor, config.exec);
    };
    const LbfgsResult solved =
        lbfgs_minimize(objective, identity_coefficients(comp), config.optimizer);
    comp.set_coefficients(solved.x);

    report.final_objective = solved.value;
    report.gradient_norm = solved.gradient_norm;
    report.iterations = solved.iterations;
    report.converged = solved.converged;
    if (!solved.converged)
        report.warnings.push_back("component " + std::to_string(comp.output_index()) +
                                  " stopped before the gradient tolerance");
    return report;
}

InverseBuildResult build_components(const SampleSet& samples, const InverseBuildConfig& config,
                                    int only_component) {
    const int n = samples.dim;
    if (config.map.dim != n)
        throw std::invalid_argument("build_inverse: template dimension must match the samples");

    std::optional<AffinePremap> premap;
    SampleSet z = samples;
    if (config.standardize) {
        premap = standardizing_premap(samples);
        z = apply_premap(samples, *premap);
    }
    const QuadratureRule training = rule_from_samples(z);

    std::vector<MapComponent> comps;
    std::vector<OptimizationReport> reports;
    comps.reserve(n);
    for (int k = 1; k <= n; ++k) {
        MapComponent comp = make_component_from_spec(config.map.components[k - 1], k, n, &training,
                                                     config.center_seed);
        comp.set_coefficients(identity_coefficients(comp));
        if (only_component == 0 || only_component == k)
            reports.push_back(solve_component(comp, z, config));
        comps.push_back(std::move(comp));
    }

    InverseBuildResult result{TriangularMap(Direction::Inverse, std::move(comps), premap),
                              OptimizationReport{}, std::move(reports)};

    OptimizationReport& total = result.report;
    total.integration_points = samples.count;
    total.converged = true;
    for (const auto& r : result.component_reports) {
        total.final_objective += r.final_objective;
        total.gradient_norm = std::max(total.gradient_norm, r.gradient_norm);
        total.iterations = std::max(total.iterations, r.iterations);
        total.converged = total.converged && r.converged;
        total.warnings.insert(total.warnings.end(), r.warnings.begin(), r.warnings.end());
    }

    // Monotonicity audit at the training samples.
    int violations = 0;
    for (std::size_t i = 0; i < z.count; ++i) {
        for (int k = 1; k <= n; ++k) {
            double ld;
            if (only_component == 0 || only_component == k)
                if (!result.map.component(k).log_diag(z.row(i), 0.0, ld)) ++violations;
        }
    }
    total.monotonicity_violations = violations;
    return result;
}

}  // namespace

double inverse_component_objective(const MapComponent& component, const SampleSet& points,
                                   std::span<double> gradient, Exec exec) {
    if (component.dim() != points.dim)
        throw std::invalid_argument("inverse_component_objective: dimension mismatch");
    const double value = component_objective_impl(component, points, gradient, 0.0, exec);
    if (value == kInf) {
        const std::size_t bad = find_infeasible_point(component, points, 0.0);
        const auto row = points.row(bad < points.count ? bad : 0);
        throw NonMonotoneError(component.output_index(),
                               std::vector<double>(row.begin(), row.end()));
    }
    return value;
}

InverseBuildResult build_inverse(const SampleSet& samples, const InverseBuildConfig& config) {
    return build_components(samples, config, 0);
}

InverseBuildResult build_inverse_single(const SampleSet& samples, const InverseBuildConfig& config,
                                        int k) {
    if (k < 1 || k > samples.dim)
        throw std::invalid_argument("build_inverse_single: component out of range");
    return build_components(samples, config, k);
}

double regression_objective(const MapComponent& component, const SampleSet& x_points,
                            std::span<const double> y_column, std::span<double> gradient,
                            Exec exec) {
    const std::size_t m = component.coefficient_count();
    const bool want_gradient = !gradient.empty();
    const std::size_t width = 1 + (want_gradient ? m : 0);
    const double inv_m = 1.0 / static_cast<double>(x_points.count);

    std::vector<double> sums(width);
    blocked_accumulate(
        x_points.count, width, sums,
        [&](std::size_t i, std::span<double> terms) {
            double value, logdiag;
            std::vector<double> vgrad;
            std::span<double> vg;
            if (want_gradient) {
                vgrad.resize(m);
                vg = vgrad;
            }
            component.eval_full(x_points.row(i), -kInf, value, logdiag, vg, {});
            const double r = value - y_column[i];
            terms[0] = inv_m * r * r;
            if (want_gradient)
                for (std::size_t j = 0; j < m; ++j) terms[1 + j] = inv_m * 2.0 * r * vgrad[j];
            return true;
        },
        exec);
    if (want_gradient)
        for (std::size_t j = 0; j < m; ++j) gradient[j] = sums[1 + j];
    return sums[0];
}

namespace {

bool monotone_at_points(const MapComponent& comp, const SampleSet& pts, double eps) {
    return find_infeasible_point(comp, pts, eps) == pts.count;
}

/// Linear least squares through the deterministic blocked accumulation of
/// the normal equations; adds ridge regularization when the plain system is
/// numerically singular.
bool linear_least_squares(MapComponent& comp, const SampleSet& x_points,
                          std::span<const double> y_column, const RegressionConfig& config,
                          std::vector<std::string>& warnings) {
    const std::size_t m = comp.coefficient_count();
    const std::size_t tri = m * (m + 1) / 2;
    std::vector<double> sums(tri + m);
    blocked_accumulate(
        x_points.count, tri + m, sums,
        [&](std::size_t i, std::span<double> terms) {
            double value, logdiag;
            std::vector<double> phi(m);
            comp.eval_full(x_points.row(i), -kInf, value, logdiag, phi, {});
            std::size_t t = 0;
            for (std::size_t a = 0; a < m; ++a)
                for (std::size_t b = 0; b <= a; ++b) terms[t++] = phi[a] * phi[b];
            for (std::size_t a = 0; a < m; ++a) terms[tri + a] = phi[a] * y_column[i];
            return true;
        },
        config.exec);

    Eigen::MatrixXd normal(m, m);
    Eigen::VectorXd rhs(m);
    std::size_t t = 0;
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b <= a; ++b) {
            normal(a, b) = sums[t];
            normal(b, a) = sums[t];
            ++t;
        }
    for (std::size_t a = 0; a < m; ++a) rhs(a) = sums[tri + a];

    Eigen::LLT<Eigen::MatrixXd> llt(normal);
    auto near_singular = [&]() {
        if (llt.info() != Eigen::Success) return true;
        const Eigen::VectorXd d = llt.matrixLLT().diagonal();
        const double dmin = d.minCoeff(), dmax = d.maxCoeff();
        return !(dmin > 0.0) || dmin * dmin <= 1e-13 * dmax * dmax;
    };
    if (near_singular()) {
        const double lambda = config.ridge_factor * normal.trace() / static_cast<double>(m);
        warnings.push_back("component " + std::to_string(comp.output_index()) +
                           ": near-singular design; ridge " + std::to_string(lambda) + " added");
        normal.diagonal().array() += lambda;
        llt.compute(normal);
        if (llt.info() != Eigen::Success) return false;
    }
    const Eigen::VectorXd c = llt.solve(rhs);
    comp.set_coefficients(std::vector<double>(c.data(), c.data() + m));
    return true;
}

}  // namespace

DirectRegressionResult regress_direct_from_pairs(const SampleSet& x_points,
                                                 const SampleSet& y_points,
                                                 const MapTemplate& templ,
                                                 const RegressionConfig& config) {
    if (x_points.count != y_points.count || x_points.dim != y_points.dim)
        throw std::invalid_argument("regress_direct_from_pairs: pair shapes disagree");
    const int n = x_points.dim;
    if (templ.dim != n)
        throw std::invalid_argument("regress_direct_from_pairs: template dimension mismatch");

    const QuadratureRule training = rule_from_samples(x_points);
    DirectRegressionResult result{TriangularMap(Direction::Direct,
                                                {MapComponent::polynomial(build_multi_index_set(
                                                    IndexSetKind::Diagonal, 1, 1, 1))}),
                                  {}, {}};

    std::vector<MapComponent> comps;
    comps.reserve(n);
    for (int k = 1; k <= n; ++k) {
        MapComponent comp = make_component_from_spec(templ.components[k - 1], k, n, &training, 0);
        comp.set_coefficients(identity_coefficients(comp));
        const std::vector<double> ycol = y_points.column(k - 1);

        bool solved_linear = false;
        if (comp.kind() != ComponentKind::IntegratedExponential) {
            solved_linear = linear_least_squares(comp, x_points, ycol, config, result.warnings);
            if (solved_linear && !monotone_at_points(comp, x_points, config.constraint_epsilon)) {
                result.warnings.push_back("component " + std::to_string(k) +
                                          ": unconstrained fit non-monotone at training points; "
                                          "refitting with rejection");
                solved_linear = false;
            }
        }
        if (!solved_linear) {
            // Feasible-start quasi-Newton with infinite-objective rejection.
            MapComponent working = comp;
            const double eps =
                comp.always_monotone() ? -kInf : config.constraint_epsilon;
            const Objective objective = [&](std::span<const double> c, std::span<double> grad) {
                working.set_coefficients(c);
                if (!comp.always_monotone() &&
                    !monotone_at_points(working, x_points, eps))
                    return kInf;
                return regression_objective(working, x_points, ycol, grad, config.exec);
            };
            const LbfgsResult fit =
                lbfgs_minimize(objective, identity_coefficients(comp), config.optimizer);
            comp.set_coefficients(fit.x);
        }
        result.residuals.push_back(regression_objective(comp, x_points, ycol, {}, config.exec));
        comps.push_back(std::move(comp));
    }
    result.map = TriangularMap(Direction::Direct, std::move(comps));
    return result;
}

GaussianityReport gaussianity_check(const SampleSet& samples, double z_threshold) {
    if (samples.count < 100)
        throw std::invalid_argument("gaussianity_check: needs at least 100 samples");
    GaussianityReport report;
    report.sample_count = samples.count;
    report.z_threshold = z_threshold;
    const double m = static_cast<double>(samples.count);

    // KS threshold matched to the two-sided tail probability of the z
    // threshold via the one-term Kolmogorov tail 2 exp(-2 x^2).
    const double tail = std::erfc(z_threshold / std::sqrt(2.0));
    report.ks_threshold = std::sqrt(-0.5 * std::log(std::max(tail, 1e-300) / 2.0));

    bool pass = true;
    std::vector<std::vector<double>> cols(samples.dim);
    for (int j = 0; j < samples.dim; ++j) {
        cols[j] = samples.column(j);
        const MomentSummary mom = sample_moments(cols[j]);
        GaussianityCoordinate c;
        c.mean = mom.mean;
        c.variance = mom.variance;
        c.skewness = mom.skewness;
        c.excess_kurtosis = mom.kurtosis - 3.0;
        c.z_mean = mom.mean / std::sqrt(1.0 / m);
        c.z_variance = (mom.variance - 1.0) / std::sqrt(2.0 / m);
        c.z_skewness = mom.skewness / std::sqrt(6.0 / m);
        c.z_kurtosis = c.excess_kurtosis / std::sqrt(24.0 / m);
        c.ks_statistic = ks_statistic_vs_normal(cols[j]);
        c.ks_scaled = std::sqrt(m) * c.ks_statistic;
        pass = pass && std::abs(c.z_mean) < z_threshold && std::abs(c.z_variance) < z_threshold &&
               std::abs(c.z_skewness) < z_threshold && std::abs(c.z_kurtosis) < z_threshold &&
               c.ks_scaled < report.ks_threshold;
        report.coordinates.push_back(c);
    }
    for (int i = 0; i < samples.dim; ++i)
        for (int j = i + 1; j < samples.dim; ++j) {
            GaussianityCorrelation corr;
            corr.i = i + 1;
            corr.j = j + 1;
            corr.correlation = sample_correlation(cols[i], cols[j]);
            corr.z = std::atanh(std::clamp(corr.correlation, -0.999999999, 0.999999999)) *
                     std::sqrt(m - 3.0);
            pass = pass && std::abs(corr.z) < z_threshold;
            report.correlations.push_back(corr);
        }
    report.pass = pass;
    return report;
}

}  // namespace trimap

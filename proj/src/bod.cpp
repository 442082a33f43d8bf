#include "trimap/bod.hpp"

#include <cmath>

#include "trimap/direct_builder.hpp"
#include "trimap/rng.hpp"

namespace trimap::bod {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;
}

std::pair<double, double> prior_transform(double theta1, double theta2) {
    const double a = 0.4 + 0.4 * (1.0 + std::erf(theta1 / std::sqrt(2.0)));
    const double b = 0.01 + 0.15 * (1.0 + std::erf(theta2 / std::sqrt(2.0)));
    return {a, b};
}

std::pair<double, double> prior_transform_derivative(double theta1, double theta2) {
    const double c = std::sqrt(2.0 / M_PI);
    return {0.4 * c * std::exp(-0.5 * theta1 * theta1),
            0.15 * c * std::exp(-0.5 * theta2 * theta2)};
}

double forward_mean(double a, double b, double t) { return a * (1.0 - std::exp(-b * t)); }

SampleSet joint_sample(std::size_t count, std::uint64_t seed, Exec mode) {
    SampleSet set(count, kJointDim, Provenance::Target, seed);
    for_each_index(
        count,
        [&](std::size_t i) {
            auto row = set.row(i);
            const double t1 = gaussian_at(seed, i, 0);
            const double t2 = gaussian_at(seed, i, 1);
            const auto [a, b] = prior_transform(t1, t2);
            for (int j = 0; j < kDataDim; ++j) {
                const double noise =
                    gaussian_at(seed, i, 2 + static_cast<std::uint64_t>(j));
                row[j] = forward_mean(a, b, kTimes[j]) + std::sqrt(kNoiseVariance) * noise;
            }
            row[kDataDim] = t1;
            row[kDataDim + 1] = t2;
        },
        mode);
    return set;
}

double Posterior::log_density(std::span<const double> theta) const {
    const auto [a, b] = prior_transform(theta[0], theta[1]);
    double misfit = 0.0;
    for (int j = 0; j < kDataDim; ++j) {
        const double r = data_[j] - forward_mean(a, b, kTimes[j]);
        misfit += r * r;
    }
    return -0.5 * misfit / kNoiseVariance - 0.5 * (theta[0] * theta[0] + theta[1] * theta[1]);
}

void Posterior::log_density_gradient(std::span<const double> theta,
                                     std::span<double> grad) const {
    const auto [a, b] = prior_transform(theta[0], theta[1]);
    const auto [da, db] = prior_transform_derivative(theta[0], theta[1]);
    double ga = 0.0, gb = 0.0;
    for (int j = 0; j < kDataDim; ++j) {
        const double t = kTimes[j];
        const double r = data_[j] - forward_mean(a, b, t);
        // d misfit/dA and d misfit/dB
        ga += -2.0 * r * (1.0 - std::exp(-b * t));
        gb += -2.0 * r * a * t * std::exp(-b * t);
    }
    grad[0] = -0.5 * ga * da / kNoiseVariance - theta[0];
    grad[1] = -0.5 * gb * db / kNoiseVariance - theta[1];
}

double Joint::log_density(std::span<const double> point) const {
    const double t1 = point[kDataDim];
    const double t2 = point[kDataDim + 1];
    const auto [a, b] = prior_transform(t1, t2);
    double misfit = 0.0;
    for (int j = 0; j < kDataDim; ++j) {
        const double r = point[j] - forward_mean(a, b, kTimes[j]);
        misfit += r * r;
    }
    const double log_likelihood =
        -0.5 * misfit / kNoiseVariance - 0.5 * kDataDim * (kLog2Pi + std::log(kNoiseVariance));
    const double log_prior = -0.5 * (t1 * t1 + t2 * t2) - kLog2Pi;
    return log_likelihood + log_prior;
}

InverseExperimentResult run_inverse_experiment(const InverseExperimentConfig& config) {
    const SampleSet joint = joint_sample(config.training_samples, config.seed, config.exec);

    InverseBuildConfig inverse_config;
    inverse_config.map = MapTemplate::uniform(
        kJointDim, ComponentSpec{ComponentKind::Polynomial, IndexSetKind::TotalOrder,
                                 config.degree});
    inverse_config.optimizer = config.optimizer;
    inverse_config.exec = config.exec;
    InverseBuildResult inverse = build_inverse(joint, inverse_config);

    // Induced pairs x_i = S(y_i) are reference draws matched one-to-one with
    // the target draws; regress the direct map on them.
    SampleSet pushed(joint.count, kJointDim, Provenance::Pushforward, config.seed);
    for_each_index(
        joint.count,
        [&](std::size_t i) { inverse.map.evaluate(joint.row(i), pushed.row(i)); }, config.exec);

    RegressionConfig regression_config;
    regression_config.optimizer = config.optimizer;
    regression_config.exec = config.exec;
    MapTemplate direct_template = inverse_config.map;
    DirectRegressionResult regression =
        regress_direct_from_pairs(pushed, joint, direct_template, regression_config);

    const ConditionalMap conditional = ConditionalMap::condition(
        regression.map, kDataDim, std::span<const double>(kDataStar.data(), kDataDim));
    SampleSet draws =
        conditional.sample(config.conditional_draws, config.seed + 1, config.exec);

    InverseExperimentResult result{std::move(inverse.map),
                                   std::move(regression.map),
                                   std::move(inverse.report),
                                   sample_moments(draws.column(0)),
                                   sample_moments(draws.column(1)),
                                   std::move(draws)};
    return result;
}

DirectExperimentResult run_direct_experiment(const DirectExperimentConfig& config) {
    const Posterior posterior;
    DirectExperimentResult result;
    for (int degree : config.degrees) {
        DirectBuildConfig build;
        build.map = MapTemplate::uniform(
            kParamDim,
            ComponentSpec{ComponentKind::Polynomial, IndexSetKind::TotalOrder, degree});
        build.integration.kind = IntegrationSpec::Kind::Quadrature;
        build.integration.order = config.quadrature_order;
        build.optimizer = config.optimizer;
        build.exec = config.exec;
        DirectBuildResult built = build_direct(posterior, build);
        result.degrees.push_back(degree);
        result.maps.push_back(std::move(built.map));
        result.reports.push_back(std::move(built.report));
    }
    return result;
}

}  // namespace trimap::bod

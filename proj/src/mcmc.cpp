#include "trimap/mcmc.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "trimap/diagnostics.hpp"
#include "trimap/errors.hpp"
#include "trimap/rng.hpp"
#include "trimap/stats.hpp"

namespace trimap {

namespace {

/// Lower Cholesky with a fallback diagonal jitter; the adapted covariance is
/// already epsilon-regularized, so failures are rare.
bool cholesky_in_place(std::vector<double>& a, int n) {
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = a[i * n + j];
            for (int k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
            if (i == j) {
                if (!(s > 0.0)) return false;
                a[i * n + j] = std::sqrt(s);
            } else {
                a[i * n + j] = s / a[j * n + j];
            }
        }
        for (int j = i + 1; j < n; ++j) a[i * n + j] = 0.0;
    }
    return true;
}

}  // namespace

McmcResult adaptive_metropolis(const TargetDensity& target, const McmcConfig& config) {
    const int n = target.dim();
    if (config.burn_in >= config.steps)
        throw std::invalid_argument("adaptive_metropolis: burn-in must be below the step count");

    std::vector<double> x = config.x0.empty() ? std::vector<double>(n, 0.0) : config.x0;
    if (static_cast<int>(x.size()) != n)
        throw std::invalid_argument("adaptive_metropolis: x0 dimension mismatch");
    double log_p = checked_log_density(target, x);
    if (!std::isfinite(log_p))
        throw std::invalid_argument("adaptive_metropolis: log-density not finite at x0");

    const double scale = 2.38 * 2.38 / static_cast<double>(n);
    std::vector<double> proposal_chol(static_cast<std::size_t>(n) * n, 0.0);
    {
        std::vector<double> sd =
            config.proposal_sd.value_or(std::vector<double>(n, 2.38 / std::sqrt(double(n))));
        if (static_cast<int>(sd.size()) != n)
            throw std::invalid_argument("adaptive_metropolis: proposal sd dimension mismatch");
        for (int i = 0; i < n; ++i) proposal_chol[i * n + i] = sd[i];
    }

    // Running first/second moment accumulators for the adaptation.
    std::vector<double> sum(n, 0.0), cross(static_cast<std::size_t>(n) * n, 0.0);
    std::size_t history = 0;

    McmcResult result;
    result.chain = SampleSet(config.steps - config.burn_in, n, Provenance::Target, config.seed);

    std::vector<double> proposal(n), z(n);
    std::size_t accepted = 0, accepted_post_burn = 0;
    double log_step_scale = 0.0;
    std::size_t window_accepted = 0, window_index = 0;

    for (std::size_t step = 0; step < config.steps; ++step) {
        const double step_scale = std::exp(log_step_scale);
        for (int j = 0; j < n; ++j)
            z[j] = gaussian_at(config.seed, step, static_cast<std::uint64_t>(j));
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = 0; j <= i; ++j) s += proposal_chol[i * n + j] * z[j];
            proposal[i] = x[i] + step_scale * s;
        }
        const double log_q = checked_log_density(target, proposal);
        const double u = uniform_at(config.seed, step, 1u << 20);
        if (std::log(u) < log_q - log_p) {
            x = proposal;
            log_p = log_q;
            ++accepted;
            ++window_accepted;
            if (step >= config.burn_in) ++accepted_post_burn;
        }

        if (step >= config.burn_in) {
            auto row = result.chain.row(step - config.burn_in);
            for (int j = 0; j < n; ++j) row[j] = x[j];
        }

        ++history;
        for (int i = 0; i < n; ++i) {
            sum[i] += x[i];
            for (int j = 0; j <= i; ++j) cross[i * n + j] += x[i] * x[j];
        }

        const bool window_done = (step + 1) % config.adapt_interval == 0;
        const bool may_adapt = config.adapt &&
                               (config.adapt_freeze == 0 || step + 1 <= config.adapt_freeze);
        if (window_done && may_adapt && config.target_acceptance) {
            ++window_index;
            const double rate = static_cast<double>(window_accepted) /
                                static_cast<double>(config.adapt_interval);
            log_step_scale += (rate - *config.target_acceptance) /
                              std::sqrt(static_cast<double>(window_index));
        }
        if (window_done) window_accepted = 0;

        const bool adapt_now = window_done && may_adapt && history >= 10;
        if (adapt_now) {
            std::vector<double> cov(static_cast<std::size_t>(n) * n, 0.0);
            const double inv = 1.0 / static_cast<double>(history);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j <= i; ++j) {
                    const double c = cross[i * n + j] * inv - sum[i] * inv * sum[j] * inv;
                    cov[i * n + j] = scale * c;
                    cov[j * n + i] = cov[i * n + j];
                }
            for (int i = 0; i < n; ++i) cov[i * n + i] += scale * config.adapt_epsilon;
            std::vector<double> chol = cov;
            if (cholesky_in_place(chol, n)) proposal_chol = std::move(chol);
        }
    }

    const std::size_t post = config.steps - config.burn_in;
    result.acceptance_rate = static_cast<double>(accepted_post_burn) / static_cast<double>(post);
    result.stuck_warning = result.acceptance_rate < 0.01;
    result.ess.resize(n);
    for (int j = 0; j < n; ++j) {
        const auto col = result.chain.column(j);
        result.ess[j] = effective_sample_size(col);
    }
    return result;
}

McmcResult preconditioned_sample(const TriangularMap& map, const TargetDensity& target,
                                 const McmcConfig& config, Exec exec) {
    const int n = map.dim();
    if (n != target.dim())
        throw std::invalid_argument("preconditioned_sample: dimension mismatch");

    const FunctionTarget pullback(n, [&](std::span<const double> x) {
        for (double v : x)
            if (!std::isfinite(v)) return -std::numeric_limits<double>::infinity();
        try {
            return pullback_log_density(map, target, x);
        } catch (const NonMonotoneError&) {
            return -std::numeric_limits<double>::infinity();
        }
    });

    McmcResult chain_result = adaptive_metropolis(pullback, config);

    // Push the chain through the map; these are exact target samples.
    SampleSet pushed(chain_result.chain.count, n, Provenance::Pushforward, config.seed);
    for_each_index(
        chain_result.chain.count,
        [&](std::size_t i) { map.evaluate(chain_result.chain.row(i), pushed.row(i)); }, exec);

    McmcResult result;
    result.chain = std::move(pushed);
    result.acceptance_rate = chain_result.acceptance_rate;
    result.stuck_warning = chain_result.stuck_warning;
    result.ess.resize(n);
    for (int j = 0; j < n; ++j) result.ess[j] = effective_sample_size(result.chain.column(j));
    return result;
}

}  // namespace trimap

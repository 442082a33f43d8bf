#include "trimap/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "trimap/exec.hpp"

namespace trimap {

double sample_mean(std::span<const double> series) {
    return pairwise_sum(series) / static_cast<double>(series.size());
}

double sample_variance(std::span<const double> series) {
    const double mu = sample_mean(series);
    std::vector<double> sq(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double d = series[i] - mu;
        sq[i] = d * d;
    }
    return pairwise_sum(sq) / static_cast<double>(series.size());
}

MomentSummary sample_moments(std::span<const double> series) {
    const std::size_t m = series.size();
    const double mu = sample_mean(series);
    std::vector<double> p2(m), p3(m), p4(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double d = series[i] - mu;
        p2[i] = d * d;
        p3[i] = p2[i] * d;
        p4[i] = p2[i] * p2[i];
    }
    const double m2 = pairwise_sum(p2) / m;
    const double m3 = pairwise_sum(p3) / m;
    const double m4 = pairwise_sum(p4) / m;
    MomentSummary s;
    s.mean = mu;
    s.variance = m2;
    s.skewness = m3 / std::pow(m2, 1.5);
    s.kurtosis = m4 / (m2 * m2);
    return s;
}

double sample_correlation(std::span<const double> a, std::span<const double> b) {
    const std::size_t m = a.size();
    const double ma = sample_mean(a), mb = sample_mean(b);
    std::vector<double> cross(m), va(m), vb(m);
    for (std::size_t i = 0; i < m; ++i) {
        cross[i] = (a[i] - ma) * (b[i] - mb);
        va[i] = (a[i] - ma) * (a[i] - ma);
        vb[i] = (b[i] - mb) * (b[i] - mb);
    }
    return pairwise_sum(cross) / std::sqrt(pairwise_sum(va) * pairwise_sum(vb));
}

double weighted_mean(std::span<const double> values, std::span<const double> weights) {
    return pairwise_dot(values, weights);
}

double weighted_variance(std::span<const double> values, std::span<const double> weights) {
    const double mu = weighted_mean(values, weights);
    std::vector<double> sq(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double d = values[i] - mu;
        sq[i] = d * d;
    }
    return pairwise_dot(sq, weights);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ks_statistic_vs_normal(std::span<const double> series) {
    std::vector<double> sorted(series.begin(), series.end());
    std::sort(sorted.begin(), sorted.end());
    const double m = static_cast<double>(sorted.size());
    double sup = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double cdf = normal_cdf(sorted[i]);
        sup = std::max(sup, std::abs((i + 1) / m - cdf));
        sup = std::max(sup, std::abs(cdf - i / m));
    }
    return sup;
}

double effective_sample_size(std::span<const double> series) {
    const std::size_t m = series.size();
    if (m < 4) return static_cast<double>(m);
    const double mu = sample_mean(series);
    std::vector<double> centered(m);
    for (std::size_t i = 0; i < m; ++i) centered[i] = series[i] - mu;

    auto gamma = [&](std::size_t lag) {
        double s = 0.0;
        for (std::size_t i = 0; i + lag < m; ++i) s += centered[i] * centered[i + lag];
        return s / static_cast<double>(m);
    };

    const double g0 = gamma(0);
    if (!(g0 > 0.0)) return static_cast<double>(m);

    // Sum of adjacent autocovariance pairs, kept positive and monotone
    // non-increasing (initial monotone sequence).
    double tau = -g0;
    double prev_pair = 2.0 * g0;  // upper bound for the first pair cap
    for (std::size_t lag = 0; lag + 1 < m; lag += 2) {
        double pair = gamma(lag) + gamma(lag + 1);
        if (pair <= 0.0) break;
        pair = std::min(pair, prev_pair);
        tau += 2.0 * pair;
        prev_pair = pair;
        if (lag > m / 2) break;
    }
    const double ess = static_cast<double>(m) * g0 / std::max(tau, g0);
    return std::min(ess, static_cast<double>(m));
}

double batch_means_se(std::span<const double> series, std::size_t batches,
                      const std::function<double(std::span<const double>)>& statistic) {
    if (batches < 2 || series.size() < 2 * batches)
        throw std::invalid_argument("batch_means_se: too few points for the batch count");
    const std::size_t width = series.size() / batches;
    std::vector<double> values(batches);
    for (std::size_t b = 0; b < batches; ++b)
        values[b] = statistic(series.subspan(b * width, width));
    const double mu = sample_mean(values);
    double sq = 0.0;
    for (double v : values) sq += (v - mu) * (v - mu);
    const double var = sq / static_cast<double>(batches - 1);
    return std::sqrt(var / static_cast<double>(batches));
}

}  // namespace trimap

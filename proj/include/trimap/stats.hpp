#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace trimap {

/// Central sample moments with 1/M normalization; kurtosis is raw
/// (Gaussian -> 3), matching the benchmark moment tables.
struct MomentSummary {
    double mean = 0.0;
    double variance = 0.0;
    double skewness = 0.0;
    double kurtosis = 0.0;
};

MomentSummary sample_moments(std::span<const double> series);

double sample_mean(std::span<const double> series);
double sample_variance(std::span<const double> series);  // 1/M central moment
double sample_correlation(std::span<const double> a, std::span<const double> b);

/// Weighted mean / variance with probability weights (sum to 1); fixed
/// pairwise reduction order.
double weighted_mean(std::span<const double> values, std::span<const double> weights);
double weighted_variance(std::span<const double> values, std::span<const double> weights);

/// Standard normal CDF.
double normal_cdf(double x);

/// Kolmogorov-Smirnov sup-distance of a series against the standard normal.
double ks_statistic_vs_normal(std::span<const double> series);

/// Effective sample size via Geyer's initial monotone sequence estimator.
double effective_sample_size(std::span<const double> series);

/// Standard error of an arbitrary chain statistic by non-overlapping batch
/// means: the statistic is computed per batch and the spread of the batch
/// values gives se = sd(batches)/sqrt(B).
double batch_means_se(std::span<const double> series, std::size_t batches,
                      const std::function<double(std::span<const double>)>& statistic);

}  // namespace trimap

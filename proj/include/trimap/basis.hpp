#pragma once

#include <span>

namespace trimap {

/// Probabilists' Hermite polynomial He_m(x), three-term recurrence
/// He_{m+1}(x) = x He_m(x) - m He_{m-1}(x). Coefficients throughout the
/// library are stored against this unnormalized family; the norm constant
/// ||He_m||^2 = m! under the standard Gaussian is exposed separately.
double hermite_value(int degree, double x);

/// He'_m(x) = m He_{m-1}(x).
double hermite_derivative(int degree, double x);

/// Fills values[0..max_degree] with He_0(x)..He_{max_degree}(x).
void hermite_table(int max_degree, double x, std::span<double> values);

/// Value and derivative tables in one sweep.
void hermite_table_with_derivatives(int max_degree, double x, std::span<double> values,
                                    std::span<double> derivatives);

/// E[He_m(X)^2] = m! for X ~ N(0,1).
double hermite_norm_squared(int degree);

double monomial_value(int degree, double x);
double monomial_derivative(int degree, double x);

/// Isotropic Gaussian kernel exp(-||x - center||^2 / (2 scale^2)).
double gaussian_rbf(std::span<const double> x, std::span<const double> center, double scale);

/// d/dx_coord of gaussian_rbf (coord is a 0-based position in x).
double gaussian_rbf_partial(std::span<const double> x, std::span<const double> center,
                            double scale, int coord);

}  // namespace trimap

#include "trimap/basis.hpp"

#include <cassert>
#include <cmath>

namespace trimap {

double hermite_value(int degree, double x) {
    assert(degree >= 0);
    if (degree == 0) return 1.0;
    double prev = 1.0;   // He_0
    double cur = x;      // He_1
    for (int m = 1; m < degree; ++m) {
        const double next = x * cur - m * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

double hermite_derivative(int degree, double x) {
    assert(degree >= 0);
    if (degree == 0) return 0.0;
    return degree * hermite_value(degree - 1, x);
}

void hermite_table(int max_degree, double x, std::span<double> values) {
    assert(static_cast<int>(values.size()) >= max_degree + 1);
    values[0] = 1.0;
    if (max_degree == 0) return;
    values[1] = x;
    for (int m = 1; m < max_degree; ++m) values[m + 1] = x * values[m] - m * values[m - 1];
}

void hermite_table_with_derivatives(int max_degree, double x, std::span<double> values,
                                    std::span<double> derivatives) {
    hermite_table(max_degree, x, values);
    derivatives[0] = 0.0;
    for (int m = 1; m <= max_degree; ++m) derivatives[m] = m * values[m - 1];
}

double hermite_norm_squared(int degree) {
    double f = 1.0;
    for (int m = 2; m <= degree; ++m) f *= m;
    return f;
}

double monomial_value(int degree, double x) {
    double v = 1.0;
    for (int m = 0; m < degree; ++m) v *= x;
    return v;
}

double monomial_derivative(int degree, double x) {
    if (degree == 0) return 0.0;
    return degree * monomial_value(degree - 1, x);
}

double gaussian_rbf(std::span<const double> x, std::span<const double> center, double scale) {
    assert(x.size() >= center.size());
    double q = 0.0;
    for (std::size_t i = 0; i < center.size(); ++i) {
        const double d = x[i] - center[i];
        q += d * d;
    }
    return std::exp(-0.5 * q / (scale * scale));
}

double gaussian_rbf_partial(std::span<const double> x, std::span<const double> center,
                            double scale, int coord) {
    const double phi = gaussian_rbf(x, center, scale);
    return -phi * (x[coord] - center[coord]) / (scale * scale);
}

}  // namespace trimap

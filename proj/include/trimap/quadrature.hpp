#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "trimap/sample_set.hpp"

namespace trimap {

struct QuadratureRule1D {
    std::vector<double> nodes;
    std::vector<double> weights;
    int order() const { return static_cast<int>(nodes.size()); }
};

/// Nodes (count x dim, row-major) and probability-normalized weights for
/// integration against the standard Gaussian reference.
struct QuadratureRule {
    std::size_t count = 0;
    int dim = 0;
    std::vector<double> nodes;
    std::vector<double> weights;

    std::span<const double> node(std::size_t i) const {
        return {nodes.data() + i * dim, static_cast<std::size_t>(dim)};
    }
};

/// Gauss-Hermite rule against the standard normal density, exact for
/// polynomials up to degree 2*order - 1. Golub-Welsch on the Jacobi matrix
/// of the probabilists' Hermite recurrence. Requires 1 <= order <= 64.
QuadratureRule1D gauss_hermite_1d(int order);

/// Gauss-Legendre on [-1, 1], weights summing to 2.
QuadratureRule1D gauss_legendre_1d(int order);

/// Full tensor grid with product weights; guards order^dim <= 1e7.
QuadratureRule tensorize(const QuadratureRule1D& rule, int dim);

/// Monte Carlo nodes with uniform weights 1/M (SAA integration).
QuadratureRule rule_from_samples(const SampleSet& samples);

}  // namespace trimap

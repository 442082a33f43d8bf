#include "trimap/quadrature.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace trimap {

namespace {

/// Golub-Welsch: nodes are eigenvalues of the symmetric tridiagonal Jacobi
/// matrix (zero diagonal here, both families are symmetric); weights are
/// mass * (first eigenvector component)^2.
QuadratureRule1D golub_welsch(const std::vector<double>& offdiag, double mass) {
    const int n = static_cast<int>(offdiag.size()) + 1;
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i) {
        jacobi(i, i + 1) = offdiag[i];
        jacobi(i + 1, i) = offdiag[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("golub_welsch: eigensolve failed");

    QuadratureRule1D rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = solver.eigenvalues()(i);
        const double v0 = solver.eigenvectors()(0, i);
        rule.weights[i] = mass * v0 * v0;
    }
    // Eigenvalues come back sorted; symmetrize nodes and weights exactly so
    // odd moments vanish to the last bit.
    for (int i = 0, j = n - 1; i < j; ++i, --j) {
        const double node = 0.5 * (rule.nodes[j] - rule.nodes[i]);
        rule.nodes[i] = -node;
        rule.nodes[j] = node;
        const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
        rule.weights[i] = w;
        rule.weights[j] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

}  // namespace

namespace {

/// Orthonormal probabilists' Hermite h_0..h_n at x.
void normalized_hermite_table(int n, double x, std::vector<double>& h) {
    h.resize(n + 1);
    h[0] = 1.0;
    if (n == 0) return;
    h[1] = x;
    for (int m = 1; m < n; ++m)
        h[m + 1] = (x * h[m] - std::sqrt(static_cast<double>(m)) * h[m - 1]) /
                   std::sqrt(static_cast<double>(m + 1));
}

}  // namespace

QuadratureRule1D gauss_hermite_1d(int order) {
    if (order < 1 || order > 64)
        throw std::invalid_argument("gauss_hermite_1d: order must be in [1, 64]");
    if (order == 1) return {{0.0}, {1.0}};
    std::vector<double> offdiag(order - 1);
    for (int m = 1; m < order; ++m) offdiag[m - 1] = std::sqrt(static_cast<double>(m));
    QuadratureRule1D rule = golub_welsch(offdiag, 1.0);

    // Eigenvalue nodes are ~1e-15 accurate; two Newton polish steps on
    // He_order push them to the correctly rounded roots, and the Christoffel
    // identity w = 1 / sum_m h_m(x)^2 then gives near-machine-relative
    // weights even in the tails (the eigenvector route loses ~1e-10 there).
    std::vector<double> h;
    for (int i = 0; i < order; ++i) {
        double x = rule.nodes[i];
        for (int newton = 0; newton < 2; ++newton) {
            normalized_hermite_table(order, x, h);
            x -= h[order] / (std::sqrt(static_cast<double>(order)) * h[order - 1]);
        }
        rule.nodes[i] = x;
        normalized_hermite_table(order - 1, x, h);
        double christoffel = 0.0;
        for (int m = 0; m < order; ++m) christoffel += h[m] * h[m];
        rule.weights[i] = 1.0 / christoffel;
    }
    for (int i = 0, j = order - 1; i < j; ++i, --j) {
        const double node = 0.5 * (rule.nodes[j] - rule.nodes[i]);
        rule.nodes[i] = -node;
        rule.nodes[j] = node;
        const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
        rule.weights[i] = w;
        rule.weights[j] = w;
    }
    if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
    return rule;
}

QuadratureRule1D gauss_legendre_1d(int order) {
    if (order < 1 || order > 256)
        throw std::invalid_argument("gauss_legendre_1d: order must be in [1, 256]");
    if (order == 1) return {{0.0}, {2.0}};
    std::vector<double> offdiag(order - 1);
    for (int m = 1; m < order; ++m)
        offdiag[m - 1] = m / std::sqrt(4.0 * m * m - 1.0);
    return golub_welsch(offdiag, 2.0);
}

QuadratureRule tensorize(const QuadratureRule1D& rule, int dim) {
    if (dim < 1) throw std::invalid_argument("tensorize: dimension must be >= 1");
    const double total = std::pow(static_cast<double>(rule.order()), dim);
    if (total > 1e7) throw std::invalid_argument("tensorize: grid size guard exceeded (1e7)");

    const std::size_t count = static_cast<std::size_t>(total + 0.5);
    QuadratureRule grid;
    grid.count = count;
    grid.dim = dim;
    grid.nodes.resize(count * dim);
    grid.weights.resize(count);
    const int order = rule.order();
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t rest = i;
        double w = 1.0;
        // Last coordinate varies fastest.
        for (int j = dim - 1; j >= 0; --j) {
            const int idx = static_cast<int>(rest % order);
            rest /= order;
            grid.nodes[i * dim + j] = rule.nodes[idx];
            w *= rule.weights[idx];
        }
        grid.weights[i] = w;
    }
    return grid;
}

QuadratureRule rule_from_samples(const SampleSet& samples) {
    QuadratureRule rule;
    rule.count = samples.count;
    rule.dim = samples.dim;
    rule.nodes = samples.data;
    rule.weights.assign(samples.count, 1.0 / static_cast<double>(samples.count));
    return rule;
}

}  // namespace trimap

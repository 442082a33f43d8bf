#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "trimap/sample_set.hpp"
#include "trimap/tri_solver.hpp"
#include "trimap/triangular_map.hpp"

namespace trimap {

/// Conditional sampler from a joint triangular map whose FIRST n_y
/// coordinates are the conditioning variables (data-first convention).
///
/// For a direct parent T the head block is solved once for x* with
/// T^Y(x*) = y*, and draws are w -> T^Theta(x*, w). For an inverse parent S
/// the anchor is y* itself and each draw solves the tail components of S
/// pointwise (documented limitation: no closed-form conditional from S).
class ConditionalMap {
public:
    static ConditionalMap condition(const TriangularMap& joint, int n_y,
                                    std::span<const double> y_star,
                                    const InvertOptions& options = {});

    int parameter_dim() const { return parent_.dim() - n_y_; }
    int conditioning_dim() const { return n_y_; }
    const TriangularMap& parent() const { return parent_; }
    /// Solution of T^Y(x*) = y* (direct parents only).
    const std::vector<double>& anchor() const { return anchor_; }

    /// theta = conditional map applied to w in R^(n - n_y).
    void evaluate(std::span<const double> w, std::span<double> theta) const;

    /// Pushes M standard normal draws through the conditional map.
    SampleSet sample(std::size_t count, std::uint64_t seed, Exec exec = default_exec()) const;

private:
    ConditionalMap(TriangularMap parent, int n_y, std::vector<double> anchor,
                   InvertOptions options)
        : parent_(std::move(parent)), n_y_(n_y), anchor_(std::move(anchor)), options_(options) {}

    TriangularMap parent_;
    int n_y_;
    std::vector<double> anchor_;  // x* for direct parents, y* for inverse parents
    InvertOptions options_;
};

}  // namespace trimap

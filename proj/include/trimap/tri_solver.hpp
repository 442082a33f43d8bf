#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "trimap/sample_set.hpp"
#include "trimap/triangular_map.hpp"

namespace trimap {

struct InvertOptions {
    /// Residual target: the returned y satisfies ||map(y) - r||_inf <= tol.
    double tol = 1e-10;
    int max_root_iterations = 200;
    /// Full-dimensional Newton polish steps after the coordinate recursion.
    int newton_cleanup = 5;
    /// Bracket half-width start; doubled up to 2^40 before BracketFailureError.
    double initial_bracket = 1.0;
};

/// Solves map(y) = r coordinate by coordinate: bracketing (geometric
/// expansion) plus a safeguarded Newton/bisection hybrid on
/// w -> T^k(y_1..y_{k-1}, w), then at most newton_cleanup full Newton steps
/// using forward substitution on the triangular Jacobian. The cleanup never
/// increases the residual (the better iterate is kept).
/// `hint` optionally seeds the per-coordinate brackets with a nearby solution.
std::vector<double> invert_at(const TriangularMap& map, std::span<const double> r,
                              const InvertOptions& options = {},
                              std::span<const double> hint = {});

struct PushInverseResult {
    SampleSet points;
    /// Rows that failed to invert (left NaN); failures are collected, not fatal.
    std::vector<std::size_t> failed;
};

/// Vectorized invert_at; points are independent, so rows are solved in
/// parallel with per-point deterministic seeding (results do not depend on
/// the thread count or iteration order).
PushInverseResult push_inverse(const TriangularMap& map, const SampleSet& refs,
                               const InvertOptions& options = {}, Exec exec = default_exec());

}  // namespace trimap

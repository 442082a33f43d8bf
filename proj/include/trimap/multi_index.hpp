#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace trimap {

/// Degrees (j_1, ..., j_n); entries for coordinates past a component's
/// output index are zero (lower-triangular constraint).
using MultiIndex = std::vector<int>;

enum class IndexSetKind { TotalOrder, NoMixed, Diagonal };

/// Ordered multi-index set for map component k (1-based). The ordering is
/// graded lexicographic (total degree, then entry-wise lexicographic), so
/// coefficient vectors serialize reproducibly.
struct MultiIndexSet {
    IndexSetKind kind = IndexSetKind::TotalOrder;
    int component = 1;
    int max_degree = 0;
    int dim = 0;
    std::vector<MultiIndex> indices;

    std::size_t size() const { return indices.size(); }
    /// Position of an index in the ordered list, or -1.
    std::ptrdiff_t find(const MultiIndex& index) const;
};

/// Builds the set {j : ||j||_1 <= p, j_i = 0 for i > k} filtered by kind:
/// TotalOrder keeps everything, NoMixed drops indices with two active
/// coordinates, Diagonal keeps only coordinate k active.
/// Requires 1 <= k <= n and p >= 1. The internal variant below also accepts
/// k = 0 (constant-only set), used for the a-part of the first monotone
/// component.
MultiIndexSet build_multi_index_set(IndexSetKind kind, int k, int p, int n);
MultiIndexSet build_multi_index_set_allow_empty(IndexSetKind kind, int k, int p, int n);

/// Tensorized Hermite basis function psi_j(x) = prod_i He_{j_i}(x_i).
double multivariate_value(const MultiIndex& index, std::span<const double> x);

/// d/dx_coord psi_j(x); coord is a 0-based position.
double multivariate_partial(const MultiIndex& index, std::span<const double> x, int coord);

}  // namespace trimap

#include "trimap/multi_index.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "trimap/basis.hpp"

namespace trimap {

namespace {

int total_degree(const MultiIndex& j) { return std::accumulate(j.begin(), j.end(), 0); }

bool graded_lex_less(const MultiIndex& a, const MultiIndex& b) {
    const int da = total_degree(a), db = total_degree(b);
    if (da != db) return da < db;
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

int active_count(const MultiIndex& j) {
    int c = 0;
    for (int v : j) c += (v > 0);
    return c;
}

/// Enumerates all indices with ||j||_1 <= p supported on the first k slots.
void enumerate(int k, int p, int n, MultiIndex& buf, int slot, int remaining,
               std::vector<MultiIndex>& out) {
    if (slot == k) {
        out.push_back(buf);
        return;
    }
    for (int d = 0; d <= remaining; ++d) {
        buf[slot] = d;
        enumerate(k, p, n, buf, slot + 1, remaining - d, out);
    }
    buf[slot] = 0;
}

}  // namespace

std::ptrdiff_t MultiIndexSet::find(const MultiIndex& index) const {
    for (std::size_t i = 0; i < indices.size(); ++i)
        if (indices[i] == index) return static_cast<std::ptrdiff_t>(i);
    return -1;
}

MultiIndexSet build_multi_index_set_allow_empty(IndexSetKind kind, int k, int p, int n) {
    if (k > n) throw std::invalid_argument("multi-index set: component index exceeds dimension");
    if (k < 0 || n < 1) throw std::invalid_argument("multi-index set: bad dimensions");
    if (p < 1) throw std::invalid_argument("multi-index set: max degree must be >= 1");

    MultiIndexSet set;
    set.kind = kind;
    set.component = k;
    set.max_degree = p;
    set.dim = n;

    MultiIndex buf(n, 0);
    std::vector<MultiIndex> all;
    enumerate(k, p, n, buf, 0, p, all);

    for (auto& j : all) {
        switch (kind) {
            case IndexSetKind::TotalOrder:
                set.indices.push_back(std::move(j));
                break;
            case IndexSetKind::NoMixed:
                if (active_count(j) <= 1) set.indices.push_back(std::move(j));
                break;
            case IndexSetKind::Diagonal: {
                bool ok = true;
                for (int i = 0; i < n; ++i)
                    if (i != k - 1 && j[i] != 0) ok = false;
                if (ok) set.indices.push_back(std::move(j));
                break;
            }
        }
    }
    std::sort(set.indices.begin(), set.indices.end(), graded_lex_less);
    return set;
}

MultiIndexSet build_multi_index_set(IndexSetKind kind, int k, int p, int n) {
    if (k < 1) throw std::invalid_argument("multi-index set: component index must be >= 1");
    return build_multi_index_set_allow_empty(kind, k, p, n);
}

double multivariate_value(const MultiIndex& index, std::span<const double> x) {
    if (index.size() > x.size())
        throw std::invalid_argument("multivariate_value: dimension mismatch");
    double v = 1.0;
    for (std::size_t i = 0; i < index.size(); ++i)
        if (index[i] > 0) v *= hermite_value(index[i], x[i]);
    return v;
}

double multivariate_partial(const MultiIndex& index, std::span<const double> x, int coord) {
    if (index.size() > x.size() || coord < 0 || coord >= static_cast<int>(index.size()))
        throw std::invalid_argument("multivariate_partial: dimension mismatch");
    double v = hermite_derivative(index[coord], x[coord]);
    if (v == 0.0) return 0.0;
    for (std::size_t i = 0; i < index.size(); ++i) {
        if (static_cast<int>(i) == coord || index[i] == 0) continue;
        v *= hermite_value(index[i], x[i]);
    }
    return v;
}

}  // namespace trimap

#include "trimap/map_template.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "trimap/rng.hpp"

namespace trimap {

bool MapTemplate::any_needs_constraints() const {
    for (const auto& spec : components)
        if (spec.kind != ComponentKind::IntegratedExponential) return true;
    return false;
}

std::vector<double> kmeans_centers(const std::vector<double>& points, std::size_t count, int dim,
                                   int k, std::uint64_t seed) {
    if (k < 1 || count == 0) return {};
    const std::size_t kk = std::min<std::size_t>(k, count);

    auto dist2 = [&](const double* a, const double* b) {
        double s = 0.0;
        for (int j = 0; j < dim; ++j) {
            const double d = a[j] - b[j];
            s += d * d;
        }
        return s;
    };

    // Greedy farthest-point seeding from a seeded random start point.
    std::vector<double> centers(kk * dim);
    const std::size_t first = counter_mix(seed, 0x6b6d65616e73ULL, 0) % count;
    std::copy_n(points.data() + first * dim, dim, centers.data());
    std::vector<double> best(count, std::numeric_limits<double>::infinity());
    for (std::size_t c = 1; c < kk; ++c) {
        std::size_t far = 0;
        double far_d = -1.0;
        for (std::size_t i = 0; i < count; ++i) {
            best[i] = std::min(best[i], dist2(points.data() + i * dim,
                                              centers.data() + (c - 1) * dim));
            if (best[i] > far_d) {
                far_d = best[i];
                far = i;
            }
        }
        std::copy_n(points.data() + far * dim, dim, centers.data() + c * dim);
    }

    std::vector<int> assign(count, 0);
    std::vector<double> sums(kk * dim);
    std::vector<std::size_t> sizes(kk);
    for (int iter = 0; iter < 50; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < count; ++i) {
            int arg = 0;
            double bd = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < kk; ++c) {
                const double d = dist2(points.data() + i * dim, centers.data() + c * dim);
                if (d < bd) {
                    bd = d;
                    arg = static_cast<int>(c);
                }
            }
            if (assign[i] != arg) {
                assign[i] = arg;
                changed = true;
            }
        }
        if (!changed && iter > 0) break;
        std::fill(sums.begin(), sums.end(), 0.0);
        std::fill(sizes.begin(), sizes.end(), 0);
        for (std::size_t i = 0; i < count; ++i) {
            sizes[assign[i]]++;
            for (int j = 0; j < dim; ++j) sums[assign[i] * dim + j] += points[i * dim + j];
        }
        for (std::size_t c = 0; c < kk; ++c)
            if (sizes[c] > 0)
                for (int j = 0; j < dim; ++j) centers[c * dim + j] = sums[c * dim + j] / sizes[c];
    }
    return centers;
}

MapComponent make_component_from_spec(const ComponentSpec& spec, int k, int n,
                                      const QuadratureRule* training, std::uint64_t center_seed) {
    switch (spec.kind) {
        case ComponentKind::Polynomial:
            return MapComponent::polynomial(
                build_multi_index_set(spec.index_kind, k, spec.degree, n));
        case ComponentKind::IntegratedExponential: {
            const int pa = spec.a_degree > 0 ? spec.a_degree : spec.degree;
            const int pb = spec.b_degree > 0 ? spec.b_degree : spec.degree;
            auto a_set = build_multi_index_set_allow_empty(spec.index_kind, k - 1, pa, n);
            auto b_set = build_multi_index_set(spec.index_kind, k, pb, n);
            return MapComponent::integrated_exponential(std::move(a_set), std::move(b_set),
                                                        spec.quad_order);
        }
        case ComponentKind::LinearRbf: {
            std::vector<double> centers, scales;
            if (spec.rbf_count > 0) {
                if (!training)
                    throw std::invalid_argument(
                        "map template: RBF components need training points for center selection");
                // Project training points onto the first k coordinates.
                std::vector<double> proj(training->count * k);
                for (std::size_t i = 0; i < training->count; ++i)
                    for (int j = 0; j < k; ++j) proj[i * k + j] = training->node(i)[j];
                centers = kmeans_centers(proj, training->count, k, spec.rbf_count,
                                         center_seed + static_cast<std::uint64_t>(k));
                const int got = static_cast<int>(centers.size()) / k;
                // Median pairwise center distance; falls back to the point
                // spread when a single center is requested.
                std::vector<double> dists;
                for (int a = 0; a < got; ++a)
                    for (int b = a + 1; b < got; ++b) {
                        double s = 0.0;
                        for (int j = 0; j < k; ++j) {
                            const double d = centers[a * k + j] - centers[b * k + j];
                            s += d * d;
                        }
                        dists.push_back(std::sqrt(s));
                    }
                double scale = 1.0;
                if (!dists.empty()) {
                    std::nth_element(dists.begin(), dists.begin() + dists.size() / 2, dists.end());
                    scale = dists[dists.size() / 2];
                } else {
                    double mean = 0.0, sq = 0.0;
                    for (std::size_t i = 0; i < training->count; ++i) mean += proj[i * k + (k - 1)];
                    mean /= static_cast<double>(training->count);
                    for (std::size_t i = 0; i < training->count; ++i) {
                        const double d = proj[i * k + (k - 1)] - mean;
                        sq += d * d;
                    }
                    scale = std::sqrt(sq / static_cast<double>(training->count));
                }
                if (!(scale > 0.0)) scale = 1.0;
                scales.assign(got, scale);
            }
            return MapComponent::linear_rbf(k, n, std::move(centers), std::move(scales));
        }
    }
    throw std::logic_error("map template: unreachable");
}

std::vector<double> identity_coefficients(const MapComponent& component) {
    const int k = component.output_index();
    std::vector<double> coeffs(component.coefficient_count(), 0.0);
    switch (component.kind()) {
        case ComponentKind::Polynomial: {
            MultiIndex ek(component.dim(), 0);
            ek[k - 1] = 1;
            const auto pos = component.poly_set().find(ek);
            if (pos < 0) throw std::invalid_argument("map template: index set lacks the e_k term");
            coeffs[pos] = 1.0;
            break;
        }
        case ComponentKind::LinearRbf:
            coeffs[k] = 1.0;  // [const, x_1..x_k, bumps...]
            break;
        case ComponentKind::IntegratedExponential:
            break;  // a = 0, b = 0 integrates to x_k
    }
    return coeffs;
}

TriangularMap instantiate_identity(const MapTemplate& templ, Direction direction,
                                   const QuadratureRule* training, std::uint64_t center_seed) {
    const int n = templ.dim;
    if (n < 1 || static_cast<int>(templ.components.size()) != n)
        throw std::invalid_argument("map template: component specs must cover 1..n");
    std::vector<MapComponent> comps;
    comps.reserve(n);
    for (int k = 1; k <= n; ++k) {
        MapComponent comp =
            make_component_from_spec(templ.components[k - 1], k, n, training, center_seed);
        comp.set_coefficients(identity_coefficients(comp));
        comps.push_back(std::move(comp));
    }
    return TriangularMap(direction, std::move(comps));
}

}  // namespace trimap

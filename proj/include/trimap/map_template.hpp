#pragma once

#include <cstdint>
#include <vector>

#include "trimap/quadrature.hpp"
#include "trimap/triangular_map.hpp"

namespace trimap {

/// Per-component parameterization request.
struct ComponentSpec {
    ComponentKind kind = ComponentKind::Polynomial;
    IndexSetKind index_kind = IndexSetKind::TotalOrder;
    int degree = 3;
    int a_degree = -1;   // IntegratedExponential a-part; -1 means `degree`
    int b_degree = -1;   // IntegratedExponential b-part; -1 means `degree`
    int rbf_count = 0;   // LinearRbf bump count
    int quad_order = 32;
};

struct MapTemplate {
    int dim = 0;
    std::vector<ComponentSpec> components;

    static MapTemplate uniform(int dim, const ComponentSpec& spec) {
        MapTemplate t;
        t.dim = dim;
        t.components.assign(dim, spec);
        return t;
    }
    bool any_needs_constraints() const;
};

/// Instantiates the template with identity-map coefficients. RBF components
/// pick centers by k-means on the training points projected to their first k
/// coordinates (scale = median pairwise center distance), so templates with
/// rbf_count > 0 require training points.
TriangularMap instantiate_identity(const MapTemplate& templ, Direction direction,
                                   const QuadratureRule* training = nullptr,
                                   std::uint64_t center_seed = 0);

/// Lloyd k-means with greedy farthest-point seeding; deterministic.
/// points is count x dim row-major; returns k x dim centers.
std::vector<double> kmeans_centers(const std::vector<double>& points, std::size_t count, int dim,
                                   int k, std::uint64_t seed);

/// Single component from a spec (coefficients zeroed).
MapComponent make_component_from_spec(const ComponentSpec& spec, int k, int n,
                                      const QuadratureRule* training = nullptr,
                                      std::uint64_t center_seed = 0);

/// Coefficient vector that makes the component the identity x -> x_k.
std::vector<double> identity_coefficients(const MapComponent& component);

}  // namespace trimap

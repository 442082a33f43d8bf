#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trimap/map_component.hpp"

namespace trimap {

enum class Direction { Direct, Inverse };

std::string direction_name(Direction d);
Direction direction_from_name(const std::string& name);

/// Input standardization z_i = (x_i - shift_i) / scale_i applied before
/// component evaluation; stored with the map so saved maps are self-contained.
struct AffinePremap {
    std::vector<double> shift;
    std::vector<double> scale;
};

/// Monotone lower-triangular map: component k reads only inputs 1..k.
/// Immutable after construction except for coefficient updates, so
/// evaluation and differentiation are safe from any number of threads.
class TriangularMap {
public:
    TriangularMap(Direction direction, std::vector<MapComponent> components,
                  std::optional<AffinePremap> premap = std::nullopt);

    int dim() const { return dim_; }
    Direction direction() const { return direction_; }
    void set_direction(Direction d) { direction_ = d; }
    const std::optional<AffinePremap>& premap() const { return premap_; }
    void set_premap(std::optional<AffinePremap> premap);

    const MapComponent& component(int k) const { return components_[k - 1]; }
    MapComponent& component(int k) { return components_[k - 1]; }

    std::size_t coefficient_count() const;
    std::vector<double> packed_coefficients() const;
    void set_packed_coefficients(std::span<const double> c);
    /// Offset of component k's coefficients inside the packed vector.
    std::size_t coefficient_offset(int k) const;

    void evaluate(std::span<const double> x, std::span<double> y) const;
    std::vector<double> evaluate(std::span<const double> x) const;
    /// Single output T^k(x).
    double evaluate_component(int k, std::span<const double> x) const;

    /// d_k T^k(x) for every k, chain rule through the premap included.
    void diag_jacobian(std::span<const double> x, std::span<double> out) const;
    /// sum_k log d_k T^k(x); throws NonMonotoneError if any partial <= 0.
    double log_det_jacobian(std::span<const double> x) const;
    /// Dense lower-triangular Jacobian, row-major n x n (upper part zeroed).
    void jacobian_lower(std::span<const double> x, std::span<double> out) const;

    /// dT^k/dcoeff and dlog d_k T^k/dcoeff for all coefficients, packed like
    /// packed_coefficients(). Throws NonMonotoneError for the log variant
    /// when a diagonal partial is non-positive.
    void coefficient_gradients(std::span<const double> x, std::span<double> value_grads,
                               std::span<double> logdiag_grads) const;

    /// First ny components as a self-contained triangular map on R^ny.
    TriangularMap head(int ny) const;

    /// Maps x into the component input space (premap applied, or copy).
    void premapped(std::span<const double> x, std::span<double> z) const;

private:
    void check_point(std::span<const double> x) const;

    int dim_ = 0;
    Direction direction_ = Direction::Direct;
    std::optional<AffinePremap> premap_;
    std::vector<MapComponent> components_;
};

}  // namespace trimap

#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "trimap/multi_index.hpp"
#include "trimap/quadrature.hpp"

namespace trimap {

enum class ComponentKind { Polynomial, LinearRbf, IntegratedExponential };

std::string component_kind_name(ComponentKind kind);
ComponentKind component_kind_from_name(const std::string& name);

/// One output dimension of a triangular map: a parameterized scalar function
/// of the first k inputs together with its coefficient vector.
///
/// Parameterizations:
///  - Polynomial: T^k(x) = sum_j c_j psi_j(x) over a Hermite multi-index set.
///  - LinearRbf:  constant + linear part + isotropic Gaussian bumps.
///  - IntegratedExponential:
///        T^k(x) = a(x_{1:k-1}) + int_0^{x_k} exp(b(x_{1:k-1}, w)) dw,
///    monotone increasing in x_k for every coefficient vector; the inner
///    integral uses fixed-order Gauss-Legendre rescaled (sign-aware) to
///    [0, x_k]. Coefficients are packed [a-part, b-part].
class MapComponent {
public:
    static MapComponent polynomial(MultiIndexSet set);
    static MapComponent linear_rbf(int k, int dim, std::vector<double> centers,
                                   std::vector<double> scales);
    static MapComponent integrated_exponential(MultiIndexSet a_set, MultiIndexSet b_set,
                                               int quad_order);

    ComponentKind kind() const;
    /// Output index k, 1-based; the component reads x[0..k).
    int output_index() const { return output_index_; }
    int dim() const { return dim_; }
    bool always_monotone() const { return kind() == ComponentKind::IntegratedExponential; }

    std::size_t coefficient_count() const { return coefficients_.size(); }
    std::span<const double> coefficients() const { return coefficients_; }
    void set_coefficients(std::span<const double> c);

    double value(std::span<const double> x) const;
    /// d T^k / d x_k (exact, analytic).
    double diag_partial(std::span<const double> x) const;
    /// log of diag_partial; false when the partial is <= floor (never happens
    /// for IntegratedExponential, whose log partial is the b-expansion itself).
    bool log_diag(std::span<const double> x, double floor, double& out) const;
    /// d T^k / d x_coord for a 0-based coord < k.
    double partial(std::span<const double> x, int coord) const;

    /// Bundled evaluation for builders: value, log diag partial, and the
    /// per-coefficient gradients of both (spans may be empty to skip).
    /// Returns false when the diagonal partial is <= diag_floor.
    bool eval_full(std::span<const double> x, double diag_floor, double& value, double& log_diag,
                   std::span<double> value_grad, std::span<double> logdiag_grad) const;

    /// Copy with index rows truncated to new_dim entries (all dropped entries
    /// are structurally zero); used to slice head maps for conditioning.
    MapComponent truncated(int new_dim) const;

    // Introspection for serialization.
    const MultiIndexSet& poly_set() const;
    const MultiIndexSet& intexp_a_set() const;
    const MultiIndexSet& intexp_b_set() const;
    int intexp_quad_order() const;
    int rbf_count() const;
    std::span<const double> rbf_centers() const;
    std::span<const double> rbf_scales() const;

private:
    struct PolyPart {
        MultiIndexSet set;
    };
    struct RbfPart {
        int count = 0;
        std::vector<double> centers;  // count x k, row-major
        std::vector<double> scales;   // count
    };
    struct IntExpPart {
        MultiIndexSet a_set;
        MultiIndexSet b_set;
        int quad_order = 32;
        QuadratureRule1D rule;
    };

    MapComponent(int k, int dim, std::variant<PolyPart, RbfPart, IntExpPart> part);

    int output_index_ = 1;
    int dim_ = 1;
    std::variant<PolyPart, RbfPart, IntExpPart> part_;
    std::vector<double> coefficients_;
};

}  // namespace trimap

#include "trimap/triangular_map.hpp"

#include <cmath>
#include <stdexcept>

#include "trimap/errors.hpp"

namespace trimap {

std::string direction_name(Direction d) {
    return d == Direction::Direct ? "direct" : "inverse";
}

Direction direction_from_name(const std::string& name) {
    if (name == "direct") return Direction::Direct;
    if (name == "inverse") return Direction::Inverse;
    throw std::invalid_argument("unknown map direction: " + name);
}

TriangularMap::TriangularMap(Direction direction, std::vector<MapComponent> components,
                             std::optional<AffinePremap> premap)
    : dim_(static_cast<int>(components.size())),
      direction_(direction),
      premap_(std::move(premap)),
      components_(std::move(components)) {
    if (dim_ < 1) throw std::invalid_argument("triangular map: needs at least one component");
    for (int k = 1; k <= dim_; ++k) {
        if (components_[k - 1].output_index() != k)
            throw std::invalid_argument("triangular map: component output indices must be 1..n");
        if (components_[k - 1].dim() != dim_)
            throw std::invalid_argument("triangular map: component dimension mismatch");
    }
    if (premap_) set_premap(std::move(premap_));
}

void TriangularMap::set_premap(std::optional<AffinePremap> premap) {
    if (premap) {
        if (static_cast<int>(premap->shift.size()) != dim_ ||
            static_cast<int>(premap->scale.size()) != dim_)
            throw std::invalid_argument("triangular map: premap size mismatch");
        for (double s : premap->scale)
            if (!(s > 0.0)) throw std::invalid_argument("triangular map: premap scales must be > 0");
    }
    premap_ = std::move(premap);
}

std::size_t TriangularMap::coefficient_count() const {
    std::size_t n = 0;
    for (const auto& c : components_) n += c.coefficient_count();
    return n;
}

std::size_t TriangularMap::coefficient_offset(int k) const {
    std::size_t off = 0;
    for (int i = 1; i < k; ++i) off += components_[i - 1].coefficient_count();
    return off;
}

std::vector<double> TriangularMap::packed_coefficients() const {
    std::vector<double> out;
    out.reserve(coefficient_count());
    for (const auto& c : components_)
        out.insert(out.end(), c.coefficients().begin(), c.coefficients().end());
    return out;
}

void TriangularMap::set_packed_coefficients(std::span<const double> c) {
    if (c.size() != coefficient_count())
        throw std::invalid_argument("triangular map: packed coefficient size mismatch");
    std::size_t off = 0;
    for (auto& comp : components_) {
        comp.set_coefficients(c.subspan(off, comp.coefficient_count()));
        off += comp.coefficient_count();
    }
}

void TriangularMap::check_point(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim_)
        throw std::invalid_argument("triangular map: point dimension mismatch");
    for (double v : x)
        if (!std::isfinite(v)) throw std::invalid_argument("triangular map: non-finite input");
}

void TriangularMap::premapped(std::span<const double> x, std::span<double> z) const {
    if (premap_) {
        for (int i = 0; i < dim_; ++i) z[i] = (x[i] - premap_->shift[i]) / premap_->scale[i];
    } else {
        for (int i = 0; i < dim_; ++i) z[i] = x[i];
    }
}

void TriangularMap::evaluate(std::span<const double> x, std::span<double> y) const {
    check_point(x);
    std::vector<double> z(dim_);
    premapped(x, z);
    for (int k = 1; k <= dim_; ++k) y[k - 1] = components_[k - 1].value(z);
}

std::vector<double> TriangularMap::evaluate(std::span<const double> x) const {
    std::vector<double> y(dim_);
    evaluate(x, y);
    return y;
}

double TriangularMap::evaluate_component(int k, std::span<const double> x) const {
    check_point(x);
    std::vector<double> z(dim_);
    premapped(x, z);
    return components_[k - 1].value(z);
}

void TriangularMap::diag_jacobian(std::span<const double> x, std::span<double> out) const {
    check_point(x);
    std::vector<double> z(dim_);
    premapped(x, z);
    for (int k = 1; k <= dim_; ++k) {
        double d = components_[k - 1].diag_partial(z);
        if (premap_) d /= premap_->scale[k - 1];
        out[k - 1] = d;
    }
}

double TriangularMap::log_det_jacobian(std::span<const double> x) const {
    check_point(x);
    std::vector<double> z(dim_);
    premapped(x, z);
    double sum = 0.0;
    for (int k = 1; k <= dim_; ++k) {
        double ld;
        if (!components_[k - 1].log_diag(z, 0.0, ld))
            throw NonMonotoneError(k, std::vector<double>(x.begin(), x.end()));
        sum += ld;
        if (premap_) sum -= std::log(premap_->scale[k - 1]);
    }
    return sum;
}

void TriangularMap::jacobian_lower(std::span<const double> x, std::span<double> out) const {
    check_point(x);
    std::vector<double> z(dim_);
    premapped(x, z);
    for (int k = 0; k < dim_ * dim_; ++k) out[k] = 0.0;
    for (int k = 1; k <= dim_; ++k) {
        for (int j = 0; j < k; ++j) {
            double d = components_[k - 1].partial(z, j);
            if (premap_) d /= premap_->scale[j];
            out[(k - 1) * dim_ + j] = d;
        }
    }
}

void TriangularMap::coefficient_gradients(std::span<const double> x, std::span<double> value_grads,
                                          std::span<double> logdiag_grads) const {
    check_point(x);
    std::vector<double> z(dim_);
    premapped(x, z);
    std::size_t off = 0;
    for (int k = 1; k <= dim_; ++k) {
        const auto& comp = components_[k - 1];
        const std::size_t m = comp.coefficient_count();
        double value, logdiag;
        const auto vg = value_grads.empty() ? std::span<double>{} : value_grads.subspan(off, m);
        const auto lg = logdiag_grads.empty() ? std::span<double>{} : logdiag_grads.subspan(off, m);
        if (!comp.eval_full(z, logdiag_grads.empty() ? -1e300 : 0.0, value, logdiag, vg, lg))
            throw NonMonotoneError(k, std::vector<double>(x.begin(), x.end()));
        off += m;
    }
}

TriangularMap TriangularMap::head(int ny) const {
    if (ny < 1 || ny > dim_) throw std::invalid_argument("triangular map: bad head size");
    std::vector<MapComponent> comps;
    comps.reserve(ny);
    for (int k = 1; k <= ny; ++k) comps.push_back(components_[k - 1].truncated(ny));
    std::optional<AffinePremap> pre;
    if (premap_) {
        pre = AffinePremap{{premap_->shift.begin(), premap_->shift.begin() + ny},
                           {premap_->scale.begin(), premap_->scale.begin() + ny}};
    }
    return TriangularMap(direction_, std::move(comps), std::move(pre));
}

}  // namespace trimap

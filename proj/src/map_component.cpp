#include "trimap/map_component.hpp"

#include <cmath>
#include <stdexcept>

#include "trimap/basis.hpp"

namespace trimap {

namespace {

/// Per-thread evaluation scratch; components are immutable so concurrent
/// evaluation only needs thread-local workspace.
struct Scratch {
    std::vector<double> values;   // (k) x (p+1) univariate value tables
    std::vector<double> derivs;   // derivative table for one coordinate
    std::vector<double> prefix;   // per-index partial products
    std::vector<double> wtab;     // per-node tables for the integration variable
};

thread_local Scratch tls;

/// Value tables He_0..He_p for coordinates [0, k) of x.
void fill_tables(int k, int p, std::span<const double> x, std::vector<double>& out) {
    out.resize(static_cast<std::size_t>(k) * (p + 1));
    for (int i = 0; i < k; ++i)
        hermite_table(p, x[i], std::span<double>(out.data() + i * (p + 1), p + 1));
}

/// The b-expansion's dependence on the integration variable is frozen past
/// |w| = kTailClamp, so exp(b) is constant there and the component grows
/// linearly in the tails. This bounds b below on every slice, making each
/// component surjective onto R (root bracketing then always succeeds);
/// behavior for |x_k| <= kTailClamp is untouched.
constexpr double kTailClamp = 8.0;

inline double clamp_tail(double w) {
    return w > kTailClamp ? kTailClamp : (w < -kTailClamp ? -kTailClamp : w);
}

/// The inner integral int_0^x exp(b) dw runs the fixed-order rule on
/// composite panels no wider than 4: a single interval loses monotone
/// accuracy once |x| grows past ~8 (all nodes land where exp(b) is
/// negligible), which breaks root bracketing. For |x| <= 4 this is exactly
/// the plain rule. The panel count is capped so tail probes stay cheap;
/// panels just widen past the cap, where the integrand has long saturated.
struct PanelScheme {
    int count;
    explicit PanelScheme(double x) {
        const double needed = std::ceil(std::abs(x) / 4.0);
        count = needed < 1.0 ? 1 : (needed > 4096.0 ? 4096 : static_cast<int>(needed));
    }
    // Signed half-length and center of panel p for integrating over [0, x].
    double half(double x) const { return 0.5 * x / count; }
    double center(double x, int p) const { return x * (2 * p + 1) / (2.0 * count); }
};

}  // namespace

std::string component_kind_name(ComponentKind kind) {
    switch (kind) {
        case ComponentKind::Polynomial: return "polynomial";
        case ComponentKind::LinearRbf: return "linear-rbf";
        case ComponentKind::IntegratedExponential: return "integrated-exponential";
    }
    return "polynomial";
}

ComponentKind component_kind_from_name(const std::string& name) {
    if (name == "polynomial") return ComponentKind::Polynomial;
    if (name == "linear-rbf") return ComponentKind::LinearRbf;
    if (name == "integrated-exponential") return ComponentKind::IntegratedExponential;
    throw std::invalid_argument("unknown component kind: " + name);
}

MapComponent::MapComponent(int k, int dim, std::variant<PolyPart, RbfPart, IntExpPart> part)
    : output_index_(k), dim_(dim), part_(std::move(part)) {
    if (k < 1 || k > dim) throw std::invalid_argument("map component: output index out of range");
    std::size_t count = 0;
    if (const auto* poly = std::get_if<PolyPart>(&part_)) {
        count = poly->set.size();
    } else if (const auto* rbf = std::get_if<RbfPart>(&part_)) {
        count = 1 + static_cast<std::size_t>(k) + rbf->count;
    } else {
        const auto& ie = std::get<IntExpPart>(part_);
        count = ie.a_set.size() + ie.b_set.size();
    }
    coefficients_.assign(count, 0.0);
}

MapComponent MapComponent::polynomial(MultiIndexSet set) {
    const int k = set.component;
    const int dim = set.dim;
    if (set.indices.empty()) throw std::invalid_argument("polynomial component: empty index set");
    return MapComponent(k, dim, PolyPart{std::move(set)});
}

MapComponent MapComponent::linear_rbf(int k, int dim, std::vector<double> centers,
                                      std::vector<double> scales) {
    if (!scales.empty() && centers.size() != scales.size() * static_cast<std::size_t>(k))
        throw std::invalid_argument("linear_rbf component: centers must be P x k");
    for (double s : scales)
        if (!(s > 0.0)) throw std::invalid_argument("linear_rbf component: scales must be > 0");
    RbfPart part;
    part.count = static_cast<int>(scales.size());
    part.centers = std::move(centers);
    part.scales = std::move(scales);
    return MapComponent(k, dim, std::move(part));
}

MapComponent MapComponent::integrated_exponential(MultiIndexSet a_set, MultiIndexSet b_set,
                                                  int quad_order) {
    if (quad_order < 1)
        throw std::invalid_argument("integrated_exponential component: quad order must be >= 1");
    const int k = b_set.component;
    const int dim = b_set.dim;
    if (a_set.component != k - 1 || a_set.dim != dim)
        throw std::invalid_argument(
            "integrated_exponential component: a-part must cover the first k-1 inputs");
    IntExpPart part;
    part.a_set = std::move(a_set);
    part.b_set = std::move(b_set);
    part.quad_order = quad_order;
    part.rule = gauss_legendre_1d(quad_order);
    return MapComponent(k, dim, std::move(part));
}

ComponentKind MapComponent::kind() const {
    if (std::holds_alternative<PolyPart>(part_)) return ComponentKind::Polynomial;
    if (std::holds_alternative<RbfPart>(part_)) return ComponentKind::LinearRbf;
    return ComponentKind::IntegratedExponential;
}

void MapComponent::set_coefficients(std::span<const double> c) {
    if (c.size() != coefficients_.size())
        throw std::invalid_argument("map component: coefficient count mismatch");
    coefficients_.assign(c.begin(), c.end());
}

// ---------------------------------------------------------------------------
// Polynomial

double MapComponent::value(std::span<const double> x) const {
    double v, ld;
    // Fast paths per kind below avoid computing what is not needed.
    if (const auto* poly = std::get_if<PolyPart>(&part_)) {
        const int k = output_index_, p = poly->set.max_degree;
        fill_tables(k, p, x, tls.values);
        const int stride = p + 1;
        double sum = 0.0;
        for (std::size_t j = 0; j < poly->set.size(); ++j) {
            const MultiIndex& mi = poly->set.indices[j];
            double prod = 1.0;
            for (int i = 0; i < k; ++i)
                if (mi[i] > 0) prod *= tls.values[i * stride + mi[i]];
            sum += coefficients_[j] * prod;
        }
        return sum;
    }
    if (const auto* rbf = std::get_if<RbfPart>(&part_)) {
        const int k = output_index_;
        double sum = coefficients_[0];
        for (int i = 0; i < k; ++i) sum += coefficients_[1 + i] * x[i];
        for (int j = 0; j < rbf->count; ++j) {
            const std::span<const double> c(rbf->centers.data() + j * k,
                                            static_cast<std::size_t>(k));
            sum += coefficients_[1 + k + j] * gaussian_rbf(x.first(k), c, rbf->scales[j]);
        }
        return sum;
    }
    eval_full(x, -1.0, v, ld, {}, {});
    return v;
}

bool MapComponent::log_diag(std::span<const double> x, double floor, double& out) const {
    if (const auto* ie = std::get_if<IntExpPart>(&part_)) {
        // log d_k T^k = b(x', clamp(x_k)) exactly; no exponentiation.
        const int k = output_index_, pb = ie->b_set.max_degree;
        fill_tables(k - 1, pb, x, tls.values);
        const int stride = pb + 1;
        tls.wtab.resize(pb + 1);
        hermite_table(pb, clamp_tail(x[k - 1]), tls.wtab);
        const std::size_t na = ie->a_set.size();
        double b = 0.0;
        for (std::size_t j = 0; j < ie->b_set.size(); ++j) {
            const MultiIndex& mi = ie->b_set.indices[j];
            double prod = mi[k - 1] > 0 ? tls.wtab[mi[k - 1]] : 1.0;
            for (int i = 0; i + 1 < k; ++i)
                if (mi[i] > 0) prod *= tls.values[i * stride + mi[i]];
            b += coefficients_[na + j] * prod;
        }
        out = b;
        return true;
    }
    const double d = diag_partial(x);
    if (!(d > floor)) return false;
    out = std::log(d);
    return true;
}

double MapComponent::diag_partial(std::span<const double> x) const {
    const int k = output_index_;
    if (const auto* poly = std::get_if<PolyPart>(&part_)) {
        const int p = poly->set.max_degree;
        fill_tables(k, p, x, tls.values);
        tls.derivs.resize(p + 1);
        tls.derivs[0] = 0.0;
        const int stride = p + 1;
        const double* ktab = tls.values.data() + (k - 1) * stride;
        for (int m = 1; m <= p; ++m) tls.derivs[m] = m * ktab[m - 1];
        double sum = 0.0;
        for (std::size_t j = 0; j < poly->set.size(); ++j) {
            const MultiIndex& mi = poly->set.indices[j];
            if (mi[k - 1] == 0) continue;
            double prod = tls.derivs[mi[k - 1]];
            for (int i = 0; i + 1 < k; ++i)
                if (mi[i] > 0) prod *= tls.values[i * stride + mi[i]];
            sum += coefficients_[j] * prod;
        }
        return sum;
    }
    if (const auto* rbf = std::get_if<RbfPart>(&part_)) {
        double sum = coefficients_[k];  // linear term in x_k
        for (int j = 0; j < rbf->count; ++j) {
            const std::span<const double> c(rbf->centers.data() + j * k,
                                            static_cast<std::size_t>(k));
            sum += coefficients_[1 + k + j] *
                   gaussian_rbf_partial(x.first(k), c, rbf->scales[j], k - 1);
        }
        return sum;
    }
    double b;
    log_diag(x, 0.0, b);
    return std::exp(b);
}

double MapComponent::partial(std::span<const double> x, int coord) const {
    const int k = output_index_;
    if (coord < 0 || coord >= k)
        throw std::invalid_argument("map component: partial coordinate out of range");
    if (coord == k - 1) return diag_partial(x);

    if (const auto* poly = std::get_if<PolyPart>(&part_)) {
        const int p = poly->set.max_degree;
        fill_tables(k, p, x, tls.values);
        tls.derivs.resize(p + 1);
        tls.derivs[0] = 0.0;
        const int stride = p + 1;
        const double* ctab = tls.values.data() + coord * stride;
        for (int m = 1; m <= p; ++m) tls.derivs[m] = m * ctab[m - 1];
        double sum = 0.0;
        for (std::size_t j = 0; j < poly->set.size(); ++j) {
            const MultiIndex& mi = poly->set.indices[j];
            if (mi[coord] == 0) continue;
            double prod = tls.derivs[mi[coord]];
            for (int i = 0; i < k; ++i)
                if (i != coord && mi[i] > 0) prod *= tls.values[i * stride + mi[i]];
            sum += coefficients_[j] * prod;
        }
        return sum;
    }
    if (const auto* rbf = std::get_if<RbfPart>(&part_)) {
        double sum = coefficients_[1 + coord];
        for (int j = 0; j < rbf->count; ++j) {
            const std::span<const double> c(rbf->centers.data() + j * k,
                                            static_cast<std::size_t>(k));
            sum += coefficients_[1 + k + j] *
                   gaussian_rbf_partial(x.first(k), c, rbf->scales[j], coord);
        }
        return sum;
    }

    // IntegratedExponential, coord < k-1:
    //   d_j T^k = d_j a(x') + int_0^{x_k} d_j b(x', w) exp(b(x', w)) dw.
    const auto& ie = std::get<IntExpPart>(part_);
    const int p = std::max(ie.a_set.max_degree, ie.b_set.max_degree);
    fill_tables(k - 1, p, x, tls.values);
    tls.derivs.resize(p + 1);
    tls.derivs[0] = 0.0;
    const int stride = p + 1;
    const double* ctab = tls.values.data() + coord * stride;
    for (int m = 1; m <= p; ++m) tls.derivs[m] = m * ctab[m - 1];

    auto set_partial = [&](const MultiIndexSet& set, const double* coeff,
                           std::span<const double> wtab) {
        double sum = 0.0;
        for (std::size_t j = 0; j < set.size(); ++j) {
            const MultiIndex& mi = set.indices[j];
            if (mi[coord] == 0) continue;
            double prod = tls.derivs[mi[coord]];
            for (int i = 0; i + 1 < k; ++i)
                if (i != coord && mi[i] > 0) prod *= tls.values[i * stride + mi[i]];
            if (mi[k - 1] > 0) prod *= wtab[mi[k - 1]];
            sum += coeff[j] * prod;
        }
        return sum;
    };

    double result = set_partial(ie.a_set, coefficients_.data(), {});

    const double xk = x[k - 1];
    const PanelScheme panels(xk);
    const double half = panels.half(xk);
    const int pb = ie.b_set.max_degree;
    tls.wtab.resize(pb + 1);
    std::vector<double>& wtab = tls.wtab;
    const std::size_t na = ie.a_set.size();
    for (int p = 0; p < panels.count; ++p) {
        const double center = panels.center(xk, p);
        for (int t = 0; t < ie.rule.order(); ++t) {
            const double w = center + half * ie.rule.nodes[t];
            hermite_table(pb, clamp_tail(w), wtab);
            // b and d_j b at (x', w)
            double b = 0.0, db = 0.0;
            for (std::size_t j = 0; j < ie.b_set.size(); ++j) {
                const MultiIndex& mi = ie.b_set.indices[j];
                double head = 1.0;
                for (int i = 0; i + 1 < k; ++i)
                    if (i != coord && mi[i] > 0) head *= tls.values[i * stride + mi[i]];
                const double tail = mi[k - 1] > 0 ? wtab[mi[k - 1]] : 1.0;
                const double cb = coefficients_[na + j];
                b += cb * head * tail *
                     (mi[coord] > 0 ? tls.values[coord * stride + mi[coord]] : 1.0);
                if (mi[coord] > 0) db += cb * head * tail * tls.derivs[mi[coord]];
            }
            result += half * ie.rule.weights[t] * db * std::exp(b);
        }
    }
    return result;
}

bool MapComponent::eval_full(std::span<const double> x, double diag_floor, double& value,
                             double& log_diag_out, std::span<double> value_grad,
                             std::span<double> logdiag_grad) const {
    const int k = output_index_;

    if (const auto* poly = std::get_if<PolyPart>(&part_)) {
        const int p = poly->set.max_degree;
        fill_tables(k, p, x, tls.values);
        tls.derivs.resize(p + 1);
        tls.derivs[0] = 0.0;
        const int stride = p + 1;
        const double* ktab = tls.values.data() + (k - 1) * stride;
        for (int m = 1; m <= p; ++m) tls.derivs[m] = m * ktab[m - 1];

        const std::size_t m = poly->set.size();
        tls.prefix.resize(2 * m);
        double val = 0.0, diag = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const MultiIndex& mi = poly->set.indices[j];
            double head = 1.0;
            for (int i = 0; i + 1 < k; ++i)
                if (mi[i] > 0) head *= tls.values[i * stride + mi[i]];
            const int dk = mi[k - 1];
            const double psi = head * (dk > 0 ? ktab[dk] : 1.0);
            const double dpsi = dk > 0 ? head * tls.derivs[dk] : 0.0;
            tls.prefix[2 * j] = psi;
            tls.prefix[2 * j + 1] = dpsi;
            val += coefficients_[j] * psi;
            diag += coefficients_[j] * dpsi;
        }
        if (!(diag > diag_floor)) return false;
        value = val;
        log_diag_out = std::log(diag);
        if (!value_grad.empty())
            for (std::size_t j = 0; j < m; ++j) value_grad[j] = tls.prefix[2 * j];
        if (!logdiag_grad.empty())
            for (std::size_t j = 0; j < m; ++j) logdiag_grad[j] = tls.prefix[2 * j + 1] / diag;
        return true;
    }

    if (const auto* rbf = std::get_if<RbfPart>(&part_)) {
        const std::size_t m = coefficients_.size();
        tls.prefix.resize(2 * m);
        tls.prefix[0] = 1.0;
        tls.prefix[1] = 0.0;
        for (int i = 0; i < k; ++i) {
            tls.prefix[2 * (1 + i)] = x[i];
            tls.prefix[2 * (1 + i) + 1] = (i == k - 1) ? 1.0 : 0.0;
        }
        for (int j = 0; j < rbf->count; ++j) {
            const std::span<const double> c(rbf->centers.data() + j * k,
                                            static_cast<std::size_t>(k));
            const double phi = gaussian_rbf(x.first(k), c, rbf->scales[j]);
            tls.prefix[2 * (1 + k + j)] = phi;
            tls.prefix[2 * (1 + k + j) + 1] =
                -phi * (x[k - 1] - c[k - 1]) / (rbf->scales[j] * rbf->scales[j]);
        }
        double val = 0.0, diag = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            val += coefficients_[j] * tls.prefix[2 * j];
            diag += coefficients_[j] * tls.prefix[2 * j + 1];
        }
        if (!(diag > diag_floor)) return false;
        value = val;
        log_diag_out = std::log(diag);
        if (!value_grad.empty())
            for (std::size_t j = 0; j < m; ++j) value_grad[j] = tls.prefix[2 * j];
        if (!logdiag_grad.empty())
            for (std::size_t j = 0; j < m; ++j) logdiag_grad[j] = tls.prefix[2 * j + 1] / diag;
        return true;
    }

    // IntegratedExponential. Head products over x_{1:k-1} are shared across
    // quadrature nodes; only the integration-variable table varies.
    const auto& ie = std::get<IntExpPart>(part_);
    const int p = std::max(ie.a_set.max_degree, ie.b_set.max_degree);
    fill_tables(k - 1, p, x, tls.values);
    const int stride = p + 1;
    const std::size_t na = ie.a_set.size(), nb = ie.b_set.size();

    double a_val = 0.0;
    for (std::size_t j = 0; j < na; ++j) {
        const MultiIndex& mi = ie.a_set.indices[j];
        double prod = 1.0;
        for (int i = 0; i + 1 < k; ++i)
            if (mi[i] > 0) prod *= tls.values[i * stride + mi[i]];
        if (!value_grad.empty()) value_grad[j] = prod;
        if (!logdiag_grad.empty()) logdiag_grad[j] = 0.0;
        a_val += coefficients_[j] * prod;
    }

    tls.prefix.resize(nb);
    for (std::size_t j = 0; j < nb; ++j) {
        const MultiIndex& mi = ie.b_set.indices[j];
        double prod = 1.0;
        for (int i = 0; i + 1 < k; ++i)
            if (mi[i] > 0) prod *= tls.values[i * stride + mi[i]];
        tls.prefix[j] = prod;
    }

    const double xk = x[k - 1];
    const PanelScheme panels(xk);
    const double half = panels.half(xk);
    const int pb = ie.b_set.max_degree;
    tls.wtab.resize(pb + 1);
    std::vector<double>& wtab = tls.wtab;

    if (!value_grad.empty())
        for (std::size_t j = 0; j < nb; ++j) value_grad[na + j] = 0.0;

    double integral = 0.0;
    for (int p = 0; p < panels.count; ++p) {
        const double center = panels.center(xk, p);
        for (int t = 0; t < ie.rule.order(); ++t) {
            const double w = center + half * ie.rule.nodes[t];
            hermite_table(pb, clamp_tail(w), wtab);
            double b = 0.0;
            for (std::size_t j = 0; j < nb; ++j) {
                const MultiIndex& mi = ie.b_set.indices[j];
                const double psi = tls.prefix[j] * (mi[k - 1] > 0 ? wtab[mi[k - 1]] : 1.0);
                b += coefficients_[na + j] * psi;
            }
            const double weight = half * ie.rule.weights[t];
            const double e = std::exp(b);
            integral += weight * e;
            if (!value_grad.empty()) {
                for (std::size_t j = 0; j < nb; ++j) {
                    const MultiIndex& mi = ie.b_set.indices[j];
                    const double psi = tls.prefix[j] * (mi[k - 1] > 0 ? wtab[mi[k - 1]] : 1.0);
                    value_grad[na + j] += weight * psi * e;
                }
            }
        }
    }

    // b at x itself gives the exact log diagonal partial and its gradient.
    hermite_table(pb, clamp_tail(xk), wtab);
    double b_at_x = 0.0;
    for (std::size_t j = 0; j < nb; ++j) {
        const MultiIndex& mi = ie.b_set.indices[j];
        const double psi = tls.prefix[j] * (mi[k - 1] > 0 ? wtab[mi[k - 1]] : 1.0);
        b_at_x += coefficients_[na + j] * psi;
        if (!logdiag_grad.empty()) logdiag_grad[na + j] = psi;
    }

    value = a_val + integral;
    log_diag_out = b_at_x;
    return true;
}

MapComponent MapComponent::truncated(int new_dim) const {
    if (new_dim < output_index_ || new_dim > dim_)
        throw std::invalid_argument("map component: bad truncation dimension");
    auto shrink = [&](MultiIndexSet set) {
        for (auto& mi : set.indices) mi.resize(new_dim);
        set.dim = new_dim;
        return set;
    };
    MapComponent copy = *this;
    copy.dim_ = new_dim;
    if (auto* poly = std::get_if<PolyPart>(&copy.part_)) {
        poly->set = shrink(std::move(poly->set));
    } else if (auto* ie = std::get_if<IntExpPart>(&copy.part_)) {
        ie->a_set = shrink(std::move(ie->a_set));
        ie->b_set = shrink(std::move(ie->b_set));
    }
    return copy;
}

const MultiIndexSet& MapComponent::poly_set() const { return std::get<PolyPart>(part_).set; }
const MultiIndexSet& MapComponent::intexp_a_set() const {
    return std::get<IntExpPart>(part_).a_set;
}
const MultiIndexSet& MapComponent::intexp_b_set() const {
    return std::get<IntExpPart>(part_).b_set;
}
int MapComponent::intexp_quad_order() const { return std::get<IntExpPart>(part_).quad_order; }
int MapComponent::rbf_count() const { return std::get<RbfPart>(part_).count; }
std::span<const double> MapComponent::rbf_centers() const {
    return std::get<RbfPart>(part_).centers;
}
std::span<const double> MapComponent::rbf_scales() const { return std::get<RbfPart>(part_).scales; }

}  // namespace trimap

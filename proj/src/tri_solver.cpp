#include "trimap/tri_solver.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "trimap/errors.hpp"

namespace trimap {

namespace {

constexpr double kMaxBracket = 1099511627776.0;  // 2^40

/// Residual of the k-th component with the leading coordinates frozen.
struct ComponentSlice {
    const TriangularMap& map;
    int k;                       // 1-based
    std::vector<double>& point;  // work point in original coordinates
    double target;

    double operator()(double w) const {
        point[k - 1] = w;
        return map.evaluate_component(k, point) - target;
    }
    double derivative(double w) const {
        point[k - 1] = w;
        std::vector<double> z(map.dim());
        map.premapped(point, z);
        double d = map.component(k).diag_partial(z);
        if (map.premap()) d /= map.premap()->scale[k - 1];
        return d;
    }
};

/// Monotone-increasing scalar solve: expand a bracket around the seed, then
/// Newton guarded by bisection. Converges on |f(w)| <= tol.
double solve_monotone(const ComponentSlice& f, double seed, double tol, int max_iterations,
                      double initial_bracket, int component) {
    double lo = seed, hi = seed;
    double flo = f(lo), fhi = flo;
    double step = initial_bracket;
    while (flo > 0.0) {
        if (step > kMaxBracket) throw BracketFailureError(component, std::abs(flo));
        lo -= step;
        step *= 2.0;
        flo = f(lo);
        if (std::isnan(flo)) throw BracketFailureError(component, std::abs(fhi));
    }
    step = initial_bracket;
    while (fhi < 0.0) {
        if (step > kMaxBracket) throw BracketFailureError(component, std::abs(fhi));
        hi += step;
        step *= 2.0;
        fhi = f(hi);
        if (std::isnan(fhi)) throw BracketFailureError(component, std::abs(flo));
    }
    if (std::abs(flo) <= tol) return lo;
    if (std::abs(fhi) <= tol) return hi;

    double w = 0.5 * (lo + hi);
    for (int iter = 0; iter < max_iterations; ++iter) {
        const double fw = f(w);
        if (std::abs(fw) <= tol) return w;
        if (fw < 0.0)
            lo = w;
        else
            hi = w;
        const double d = f.derivative(w);
        double next = w - fw / d;
        if (!std::isfinite(next) || next <= lo || next >= hi) next = 0.5 * (lo + hi);
        w = next;
    }
    return w;  // residual polished further by the Newton cleanup
}

double residual_inf_norm(const TriangularMap& map, std::span<const double> y,
                         std::span<const double> r, std::vector<double>& scratch) {
    map.evaluate(y, scratch);
    double norm = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i)
        norm = std::max(norm, std::abs(scratch[i] - r[i]));
    return norm;
}

}  // namespace

std::vector<double> invert_at(const TriangularMap& map, std::span<const double> r,
                              const InvertOptions& options, std::span<const double> hint) {
    const int n = map.dim();
    if (static_cast<int>(r.size()) != n)
        throw std::invalid_argument("invert_at: dimension mismatch");
    for (double v : r)
        if (!std::isfinite(v)) throw std::invalid_argument("invert_at: non-finite input");

    std::vector<double> y(n, 0.0);
    for (int k = 1; k <= n; ++k) {
        const double seed = hint.empty() ? 0.0 : hint[k - 1];
        ComponentSlice slice{map, k, y, r[k - 1]};
        y[k - 1] = solve_monotone(slice, seed, options.tol, options.max_root_iterations,
                                  options.initial_bracket, k);
    }

    // Full-dimensional Newton polish; keep whichever iterate has the smaller
    // residual so the cleanup can only improve on the recursion.
    std::vector<double> fy(n), jac(static_cast<std::size_t>(n) * n), best(y), step(n);
    double best_norm = residual_inf_norm(map, y, r, fy);
    for (int iter = 0; iter < options.newton_cleanup && best_norm > options.tol; ++iter) {
        map.evaluate(y, fy);
        for (int i = 0; i < n; ++i) fy[i] -= r[i];
        map.jacobian_lower(y, jac);
        bool singular = false;
        for (int i = 0; i < n && !singular; ++i) {
            double s = fy[i];
            for (int j = 0; j < i; ++j) s -= jac[i * n + j] * step[j];
            const double d = jac[i * n + i];
            if (d == 0.0 || !std::isfinite(d)) {
                singular = true;
                break;
            }
            step[i] = s / d;
        }
        if (singular) break;
        bool finite = true;
        for (int i = 0; i < n; ++i) {
            y[i] -= step[i];
            if (!std::isfinite(y[i])) finite = false;
        }
        if (!finite) {
            y = best;
            break;
        }
        const double norm = residual_inf_norm(map, y, r, fy);
        if (norm < best_norm) {
            best_norm = norm;
            best = y;
        } else {
            y = best;
            break;
        }
    }
    return best;
}

PushInverseResult push_inverse(const TriangularMap& map, const SampleSet& refs,
                               const InvertOptions& options, Exec exec) {
    PushInverseResult result;
    result.points = SampleSet(refs.count, refs.dim, Provenance::Pushforward, refs.seed);
    std::vector<char> ok(refs.count, 1);
    for_each_index(
        refs.count,
        [&](std::size_t i) {
            try {
                const auto y = invert_at(map, refs.row(i), options);
                auto row = result.points.row(i);
                for (int j = 0; j < refs.dim; ++j) row[j] = y[j];
            } catch (const BracketFailureError&) {
                ok[i] = 0;
            } catch (const NonMonotoneError&) {
                ok[i] = 0;
            }
        },
        exec);
    for (std::size_t i = 0; i < refs.count; ++i) {
        if (!ok[i]) {
            auto row = result.points.row(i);
            for (int j = 0; j < refs.dim; ++j) row[j] = std::numeric_limits<double>::quiet_NaN();
            result.failed.push_back(i);
        }
    }
    return result;
}

}  // namespace trimap

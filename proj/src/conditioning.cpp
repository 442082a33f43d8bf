#include "trimap/conditioning.hpp"

#include <cmath>
#include <stdexcept>

#include "trimap/errors.hpp"
#include "trimap/rng.hpp"

namespace trimap {

ConditionalMap ConditionalMap::condition(const TriangularMap& joint, int n_y,
                                         std::span<const double> y_star,
                                         const InvertOptions& options) {
    if (n_y < 1 || n_y >= joint.dim())
        throw std::invalid_argument("condition: split index must satisfy 1 <= n_y < n");
    if (static_cast<int>(y_star.size()) != n_y)
        throw std::invalid_argument("condition: y* dimension mismatch");

    if (joint.direction() == Direction::Direct) {
        // The head block is a self-contained triangular map by triangularity.
        const TriangularMap head = joint.head(n_y);
        std::vector<double> x_star = invert_at(head, y_star, options);
        return ConditionalMap(joint, n_y, std::move(x_star), options);
    }
    // Inverse parent: anchor at y* and solve tail components per draw.
    return ConditionalMap(joint, n_y, std::vector<double>(y_star.begin(), y_star.end()), options);
}

void ConditionalMap::evaluate(std::span<const double> w, std::span<double> theta) const {
    const int n = parent_.dim();
    const int n_theta = parameter_dim();
    if (static_cast<int>(w.size()) != n_theta)
        throw std::invalid_argument("conditional map: draw dimension mismatch");

    std::vector<double> point(n);
    for (int i = 0; i < n_y_; ++i) point[i] = anchor_[i];

    if (parent_.direction() == Direction::Direct) {
        for (int i = 0; i < n_theta; ++i) point[n_y_ + i] = w[i];
        for (int k = n_y_ + 1; k <= n; ++k)
            theta[k - n_y_ - 1] = parent_.evaluate_component(k, point);
        return;
    }

    // Inverse parent S: solve S^k(y*, theta_1..theta_j) = w_j sequentially.
    for (int j = 1; j <= n_theta; ++j) {
        const int k = n_y_ + j;
        const TriangularMap& map = parent_;
        double lo = 0.0, hi = 0.0, step = options_.initial_bracket;
        auto f = [&](double v) {
            point[k - 1] = v;
            return map.evaluate_component(k, point) - w[j - 1];
        };
        double flo = f(lo), fhi = flo;
        while (flo > 0.0) {
            lo -= step;
            step *= 2.0;
            flo = f(lo);
            if (step > 1099511627776.0) throw BracketFailureError(k, std::abs(flo));
        }
        step = options_.initial_bracket;
        while (fhi < 0.0) {
            hi += step;
            step *= 2.0;
            fhi = f(hi);
            if (step > 1099511627776.0) throw BracketFailureError(k, std::abs(fhi));
        }
        double mid = 0.5 * (lo + hi);
        for (int iter = 0; iter < options_.max_root_iterations; ++iter) {
            const double fm = f(mid);
            if (std::abs(fm) <= options_.tol) break;
            if (fm < 0.0)
                lo = mid;
            else
                hi = mid;
            mid = 0.5 * (lo + hi);
        }
        point[k - 1] = mid;
        theta[j - 1] = mid;
    }
}

SampleSet ConditionalMap::sample(std::size_t count, std::uint64_t seed, Exec exec) const {
    const int n_theta = parameter_dim();
    SampleSet out(count, n_theta, Provenance::Pushforward, seed);
    for_each_index(
        count,
        [&](std::size_t i) {
            std::vector<double> w(n_theta);
            for (int j = 0; j < n_theta; ++j)
                w[j] = gaussian_at(seed, i, static_cast<std::uint64_t>(j));
            evaluate(w, out.row(i));
        },
        exec);
    return out;
}

}  // namespace trimap

#include "trimap/optimizer.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace trimap {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

struct Pair {
    std::vector<double> s, y;
    double rho;
};

}  // namespace

LbfgsResult lbfgs_minimize(const Objective& fn, std::span<const double> x0,
                           const LbfgsOptions& options) {
    const std::size_t n = x0.size();
    LbfgsResult result;
    result.x.assign(x0.begin(), x0.end());

    std::vector<double> grad(n), new_x(n), new_grad(n), direction(n);
    double value = fn(result.x, grad);
    if (!std::isfinite(value))
        throw std::invalid_argument("lbfgs: objective infeasible at the starting point");

    std::deque<Pair> history;
    std::vector<double> q(n), alpha;

    for (int iter = 0; iter < options.max_iterations; ++iter) {
        result.gradient_norm = norm(grad);
        result.iterations = iter;
        if (result.gradient_norm < options.gradient_tolerance) {
            result.converged = true;
            break;
        }

        // Two-loop recursion for d = -H g.
        q.assign(grad.begin(), grad.end());
        alpha.assign(history.size(), 0.0);
        for (std::size_t h = history.size(); h-- > 0;) {
            const Pair& p = history[h];
            alpha[h] = p.rho * dot(p.s, q);
            for (std::size_t i = 0; i < n; ++i) q[i] -= alpha[h] * p.y[i];
        }
        if (!history.empty()) {
            const Pair& last = history.back();
            const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
            for (double& v : q) v *= gamma;
        }
        for (std::size_t h = 0; h < history.size(); ++h) {
            const Pair& p = history[h];
            const double beta = p.rho * dot(p.y, q);
            for (std::size_t i = 0; i < n; ++i) q[i] += p.s[i] * (alpha[h] - beta);
        }
        for (std::size_t i = 0; i < n; ++i) direction[i] = -q[i];

        double slope = dot(grad, direction);
        if (!(slope < 0.0)) {
            for (std::size_t i = 0; i < n; ++i) direction[i] = -grad[i];
            slope = -dot(grad, grad);
            history.clear();
        }

        // Armijo backtracking; +inf trial values just shrink the step.
        auto backtrack = [&](double slope_in) {
            double step = 1.0;
            for (int bt = 0; bt < options.max_backtracks; ++bt) {
                for (std::size_t i = 0; i < n; ++i)
                    new_x[i] = result.x[i] + step * direction[i];
                const double trial = fn(new_x, new_grad);
                if (std::isfinite(trial) &&
                    trial <= value + options.armijo_c1 * step * slope_in)
                    return trial;
                step *= options.step_shrink;
            }
            return std::numeric_limits<double>::infinity();
        };
        double new_value = backtrack(slope);
        if (!std::isfinite(new_value) && !history.empty()) {
            // Quasi-Newton direction unusable (stale curvature or an active
            // pointwise constraint); retry once from steepest descent.
            history.clear();
            for (std::size_t i = 0; i < n; ++i) direction[i] = -grad[i];
            slope = -dot(grad, grad);
            new_value = backtrack(slope);
        }
        if (!std::isfinite(new_value)) break;  // stalled; return best iterate

        Pair pair;
        pair.s.resize(n);
        pair.y.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            pair.s[i] = new_x[i] - result.x[i];
            pair.y[i] = new_grad[i] - grad[i];
        }
        const double sy = dot(pair.s, pair.y);
        if (sy > 1e-12 * norm(pair.s) * norm(pair.y)) {
            pair.rho = 1.0 / sy;
            history.push_back(std::move(pair));
            if (static_cast<int>(history.size()) > options.memory) history.pop_front();
        }

        result.x = new_x;
        grad = new_grad;
        value = new_value;
        result.iterations = iter + 1;
    }

    result.value = value;
    result.gradient_norm = norm(grad);
    if (result.gradient_norm < options.gradient_tolerance) result.converged = true;
    return result;
}

}  // namespace trimap

#pragma once

#include <functional>
#include <span>
#include <vector>

namespace trimap {

/// Limited-memory quasi-Newton with Armijo backtracking. Objectives may
/// return +infinity to mark an infeasible trial point; the line search then
/// keeps shrinking (restoring step), which doubles as the pointwise
/// monotonicity constraint mechanism.
struct LbfgsOptions {
    int memory = 10;
    double gradient_tolerance = 1e-8;
    int max_iterations = 500;
    double armijo_c1 = 1e-4;
    double step_shrink = 0.5;
    int max_backtracks = 60;
};

struct LbfgsResult {
    std::vector<double> x;
    double value = 0.0;
    double gradient_norm = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// fn(x, grad) returns the objective value and fills grad (same size as x);
/// when the returned value is +infinity the gradient is ignored.
using Objective = std::function<double(std::span<const double>, std::span<double>)>;

LbfgsResult lbfgs_minimize(const Objective& fn, std::span<const double> x0,
                           const LbfgsOptions& options = {});

}  // namespace trimap

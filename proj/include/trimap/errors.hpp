#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace trimap {

/// Diagonal Jacobian entry was non-positive at a point where strict
/// monotonicity is required. Carries the offending component (1-based)
/// and the evaluation point.
class NonMonotoneError : public std::runtime_error {
public:
    NonMonotoneError(int component, std::vector<double> point);

    int component() const { return component_; }
    const std::vector<double>& point() const { return point_; }

private:
    int component_;
    std::vector<double> point_;
};

/// Root bracketing exhausted its expansion budget while inverting a map
/// component; usually signals tail extrapolation problems.
class BracketFailureError : public std::runtime_error {
public:
    BracketFailureError(int component, double residual);

    int component() const { return component_; }
    double residual() const { return residual_; }

private:
    int component_;
    double residual_;
};

/// A user-supplied log-density callback returned NaN or failed outright.
class CallbackError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace trimap

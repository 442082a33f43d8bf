#include "trimap/errors.hpp"

#include <sstream>

namespace trimap {

namespace {

std::string describe_non_monotone(int component, const std::vector<double>& point) {
    std::ostringstream os;
    os << "non-monotone map component " << component << " at point (";
    for (std::size_t i = 0; i < point.size(); ++i) {
        if (i) os << ", ";
        os << point[i];
    }
    os << ")";
    return os.str();
}

std::string describe_bracket(int component, double residual) {
    std::ostringstream os;
    os << "bracket expansion budget exhausted inverting component " << component
       << " (best residual " << residual << ")";
    return os.str();
}

}  // namespace

NonMonotoneError::NonMonotoneError(int component, std::vector<double> point)
    : std::runtime_error(describe_non_monotone(component, point)),
      component_(component),
      point_(std::move(point)) {}

BracketFailureError::BracketFailureError(int component, double residual)
    : std::runtime_error(describe_bracket(component, residual)),
      component_(component),
      residual_(residual) {}

}  // namespace trimap

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "trimap/triangular_map.hpp"

namespace trimap {

/// Versioned line-oriented map format. First line is `TRIMAP 1`; any line
/// starting with `#` is a comment. Then `dim n`, `direction direct|inverse`,
/// `hermite probabilists-unnormalized`, an optional `premap` line with 2n
/// reals (shifts then scales), and per component:
///   component <k> <kind>
///   parameter lines (multi-index rows; RBF centers/scales)
///   coeffs
///   one coefficient per line, 17 significant digits
void save_map(const TriangularMap& map, const std::string& path,
              const std::vector<std::string>& header_comments = {});
void write_map(std::ostream& os, const TriangularMap& map,
               const std::vector<std::string>& header_comments = {});

TriangularMap load_map(const std::string& path);
TriangularMap read_map(std::istream& is);

/// 17-significant-digit decimal form that round-trips doubles exactly.
std::string format_double(double v);

}  // namespace trimap

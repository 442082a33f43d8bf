#pragma once

#include <cstdint>

namespace trimap {

/// Counter-based generator: every output is a pure function of
/// (seed, stream, counter), so draws can be produced in any order and from
/// any number of threads without changing the result.
std::uint64_t counter_mix(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

/// Uniform draw in (0, 1].
double uniform_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

/// Standard normal draw (Box-Muller on two counter lanes).
double gaussian_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter);

}  // namespace trimap

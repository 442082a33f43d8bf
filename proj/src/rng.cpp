#include "trimap/rng.hpp"

#include <cmath>

namespace trimap {

namespace {

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t counter_mix(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    std::uint64_t z = splitmix64(seed ^ 0xD1B54A32D192ED03ULL);
    z = splitmix64(z ^ stream);
    z = splitmix64(z ^ counter);
    return z;
}

double uniform_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    const std::uint64_t z = counter_mix(seed, stream, counter);
    return ((z >> 11) + 1) * 0x1.0p-53;  // (0, 1]
}

double gaussian_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    const double u1 = uniform_at(seed, stream, 2 * counter);
    const double u2 = uniform_at(seed, stream, 2 * counter + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace trimap

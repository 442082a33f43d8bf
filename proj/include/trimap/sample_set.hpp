#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "trimap/exec.hpp"

namespace trimap {

enum class Provenance { Reference, Target, Pushforward, Pullback };

std::string provenance_name(Provenance p);
Provenance provenance_from_name(const std::string& name);

/// Row-major M x n point matrix with provenance metadata.
struct SampleSet {
    std::size_t count = 0;
    int dim = 0;
    std::vector<double> data;
    Provenance provenance = Provenance::Reference;
    std::uint64_t seed = 0;

    SampleSet() = default;
    SampleSet(std::size_t count_, int dim_, Provenance prov = Provenance::Reference,
              std::uint64_t seed_ = 0)
        : count(count_), dim(dim_), data(count_ * dim_, 0.0), provenance(prov), seed(seed_) {}

    std::span<const double> row(std::size_t i) const {
        return {data.data() + i * dim, static_cast<std::size_t>(dim)};
    }
    std::span<double> row(std::size_t i) {
        return {data.data() + i * dim, static_cast<std::size_t>(dim)};
    }
    double at(std::size_t i, int j) const { return data[i * dim + j]; }
    double& at(std::size_t i, int j) { return data[i * dim + j]; }

    /// Column j copied out (moment and diagnostics helpers work on series).
    std::vector<double> column(int j) const;
};

/// i.i.d. standard normal draws; point i, coordinate j is a pure function of
/// (seed, i, j), so the set is bit-identical for any thread count.
SampleSet sample_reference(std::size_t count, int dim, std::uint64_t seed,
                           Exec mode = default_exec());

}  // namespace trimap

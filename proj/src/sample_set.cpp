#include "trimap/sample_set.hpp"

#include <stdexcept>

#include "trimap/rng.hpp"

namespace trimap {

std::string provenance_name(Provenance p) {
    switch (p) {
        case Provenance::Reference: return "reference";
        case Provenance::Target: return "target";
        case Provenance::Pushforward: return "pushforward";
        case Provenance::Pullback: return "pullback";
    }
    return "reference";
}

Provenance provenance_from_name(const std::string& name) {
    if (name == "reference") return Provenance::Reference;
    if (name == "target") return Provenance::Target;
    if (name == "pushforward") return Provenance::Pushforward;
    if (name == "pullback") return Provenance::Pullback;
    throw std::invalid_argument("unknown provenance: " + name);
}

std::vector<double> SampleSet::column(int j) const {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = at(i, j);
    return out;
}

SampleSet sample_reference(std::size_t count, int dim, std::uint64_t seed, Exec mode) {
    if (count < 1 || dim < 1) throw std::invalid_argument("sample_reference: empty request");
    SampleSet set(count, dim, Provenance::Reference, seed);
    for_each_index(
        count,
        [&](std::size_t i) {
            double* row = set.data.data() + i * dim;
            for (int j = 0; j < dim; ++j)
                row[j] = gaussian_at(seed, i, static_cast<std::uint64_t>(j));
        },
        mode);
    return set;
}

}  // namespace trimap

#include "trimap/sample_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "trimap/map_io.hpp"
#include "trimap/version.hpp"

namespace trimap {

void write_samples(std::ostream& os, const SampleSet& samples,
                   const std::vector<std::string>& header_comments) {
    os << "# trimap " << kVersion << '\n';
    for (const auto& c : header_comments) os << "# " << c << '\n';
    os << "# dim " << samples.dim << '\n';
    os << "# provenance " << provenance_name(samples.provenance) << '\n';
    os << "# seed " << samples.seed << '\n';
    for (std::size_t i = 0; i < samples.count; ++i) {
        for (int j = 0; j < samples.dim; ++j) {
            if (j) os << ' ';
            os << format_double(samples.at(i, j));
        }
        os << '\n';
    }
}

void write_samples(const std::string& path, const SampleSet& samples,
                   const std::vector<std::string>& header_comments) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open sample file for writing: " + path);
    write_samples(os, samples, header_comments);
    if (!os) throw std::runtime_error("failed writing sample file: " + path);
}

SampleSet read_samples(std::istream& is) {
    SampleSet set;
    int dim = -1;
    std::string line;
    while (std::getline(is, line)) {
        const std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos) continue;
        if (line[start] == '#') {
            std::istringstream ss(line.substr(start + 1));
            std::string key;
            ss >> key;
            if (key == "dim") ss >> dim;
            if (key == "provenance") {
                std::string name;
                ss >> name;
                set.provenance = provenance_from_name(name);
            }
            if (key == "seed") ss >> set.seed;
            continue;
        }
        std::istringstream ss(line);
        std::vector<double> row;
        double v;
        while (ss >> v) row.push_back(v);
        if (row.empty()) continue;
        if (set.dim == 0) set.dim = static_cast<int>(row.size());
        if (static_cast<int>(row.size()) != set.dim)
            throw std::runtime_error("sample file: ragged row");
        set.data.insert(set.data.end(), row.begin(), row.end());
        ++set.count;
    }
    if (dim >= 0 && dim != set.dim)
        throw std::runtime_error("sample file: header dimension disagrees with rows");
    if (set.count == 0) throw std::runtime_error("sample file: no points");
    return set;
}

SampleSet read_samples(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open sample file: " + path);
    return read_samples(is);
}

}  // namespace trimap

#include "trimap/map_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "trimap/version.hpp"

namespace trimap {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

void write_index_rows(std::ostream& os, const MultiIndexSet& set) {
    for (const auto& mi : set.indices) {
        for (std::size_t i = 0; i < mi.size(); ++i) {
            if (i) os << ' ';
            os << mi[i];
        }
        os << '\n';
    }
}

/// Line reader that skips comments and blank lines.
class LineStream {
public:
    explicit LineStream(std::istream& is) : is_(is) {}

    bool next(std::string& out) {
        std::string line;
        while (std::getline(is_, line)) {
            std::size_t start = line.find_first_not_of(" \t\r");
            if (start == std::string::npos) continue;
            if (line[start] == '#') continue;
            out = line.substr(start);
            return true;
        }
        return false;
    }

    std::string require(const char* what) {
        std::string line;
        if (!next(line)) throw std::runtime_error(std::string("map file: missing ") + what);
        return line;
    }

private:
    std::istream& is_;
};

std::vector<double> parse_reals(const std::string& line, const char* what, int expect = -1) {
    std::istringstream ss(line);
    std::vector<double> out;
    double v;
    while (ss >> v) out.push_back(v);
    if (expect >= 0 && static_cast<int>(out.size()) != expect)
        throw std::runtime_error(std::string("map file: bad real count in ") + what);
    return out;
}

MultiIndexSet read_index_set(LineStream& ls, int count, int k, int n, const char* what) {
    MultiIndexSet set;
    set.component = k;
    set.dim = n;
    set.max_degree = 1;
    for (int r = 0; r < count; ++r) {
        std::istringstream ss(ls.require(what));
        MultiIndex mi(n, 0);
        int total = 0;
        for (int i = 0; i < n; ++i) {
            if (!(ss >> mi[i]))
                throw std::runtime_error(std::string("map file: short multi-index row in ") + what);
            if (mi[i] < 0) throw std::runtime_error("map file: negative multi-index entry");
            if (i >= k && mi[i] != 0)
                throw std::runtime_error("map file: multi-index breaks the triangular constraint");
            total += mi[i];
        }
        set.max_degree = std::max(set.max_degree, total);
        set.indices.push_back(std::move(mi));
    }
    return set;
}

std::vector<double> read_coeffs(LineStream& ls, std::size_t count) {
    const std::string head = ls.require("coeffs");
    if (head != "coeffs") throw std::runtime_error("map file: expected `coeffs`");
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = parse_reals(ls.require("coefficient"), "coefficient", 1)[0];
    return out;
}

}  // namespace

void write_map(std::ostream& os, const TriangularMap& map,
               const std::vector<std::string>& header_comments) {
    os << "TRIMAP " << kMapFormatVersion << '\n';
    for (const auto& c : header_comments) os << "# " << c << '\n';
    os << "dim " << map.dim() << '\n';
    os << "direction " << direction_name(map.direction()) << '\n';
    os << "hermite probabilists-unnormalized\n";
    if (map.premap()) {
        os << "premap";
        for (double v : map.premap()->shift) os << ' ' << format_double(v);
        for (double v : map.premap()->scale) os << ' ' << format_double(v);
        os << '\n';
    }
    for (int k = 1; k <= map.dim(); ++k) {
        const MapComponent& comp = map.component(k);
        os << "component " << k << ' ' << component_kind_name(comp.kind()) << '\n';
        switch (comp.kind()) {
            case ComponentKind::Polynomial:
                os << "indices " << comp.poly_set().size() << '\n';
                write_index_rows(os, comp.poly_set());
                break;
            case ComponentKind::IntegratedExponential:
                os << "quadorder " << comp.intexp_quad_order() << '\n';
                os << "aindices " << comp.intexp_a_set().size() << '\n';
                write_index_rows(os, comp.intexp_a_set());
                os << "bindices " << comp.intexp_b_set().size() << '\n';
                write_index_rows(os, comp.intexp_b_set());
                break;
            case ComponentKind::LinearRbf: {
                const int cnt = comp.rbf_count();
                os << "centers " << cnt << '\n';
                const auto centers = comp.rbf_centers();
                for (int j = 0; j < cnt; ++j) {
                    for (int i = 0; i < k; ++i) {
                        if (i) os << ' ';
                        os << format_double(centers[j * k + i]);
                    }
                    os << '\n';
                }
                os << "scales";
                for (double s : comp.rbf_scales()) os << ' ' << format_double(s);
                os << '\n';
                break;
            }
        }
        os << "coeffs\n";
        for (double c : comp.coefficients()) os << format_double(c) << '\n';
    }
}

void save_map(const TriangularMap& map, const std::string& path,
              const std::vector<std::string>& header_comments) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open map file for writing: " + path);
    write_map(os, map, header_comments);
    if (!os) throw std::runtime_error("failed writing map file: " + path);
}

TriangularMap read_map(std::istream& is) {
    LineStream ls(is);
    {
        std::istringstream ss(ls.require("TRIMAP header"));
        std::string tag;
        int version = -1;
        ss >> tag >> version;
        if (tag != "TRIMAP") throw std::runtime_error("map file: not a TRIMAP file");
        if (version != kMapFormatVersion)
            throw std::runtime_error("map file: unsupported format version " +
                                     std::to_string(version));
    }

    int n = 0;
    Direction direction = Direction::Direct;
    std::optional<AffinePremap> premap;

    std::string line = ls.require("dim");
    {
        std::istringstream ss(line);
        std::string tag;
        ss >> tag >> n;
        if (tag != "dim" || n < 1) throw std::runtime_error("map file: bad dim line");
    }
    {
        std::istringstream ss(ls.require("direction"));
        std::string tag, value;
        ss >> tag >> value;
        if (tag != "direction") throw std::runtime_error("map file: bad direction line");
        direction = direction_from_name(value);
    }
    {
        std::istringstream ss(ls.require("hermite convention"));
        std::string tag, value;
        ss >> tag >> value;
        if (tag != "hermite" || value != "probabilists-unnormalized")
            throw std::runtime_error("map file: unsupported basis convention");
    }

    line = ls.require("component or premap");
    if (line.rfind("premap", 0) == 0) {
        const auto vals = parse_reals(line.substr(6), "premap", 2 * n);
        AffinePremap pre;
        pre.shift.assign(vals.begin(), vals.begin() + n);
        pre.scale.assign(vals.begin() + n, vals.end());
        premap = std::move(pre);
        line = ls.require("component");
    }

    std::vector<MapComponent> comps;
    for (int k = 1; k <= n; ++k) {
        std::istringstream ss(line);
        std::string tag, kind_name;
        int kk = 0;
        ss >> tag >> kk >> kind_name;
        if (tag != "component" || kk != k)
            throw std::runtime_error("map file: expected component " + std::to_string(k));
        const ComponentKind kind = component_kind_from_name(kind_name);

        if (kind == ComponentKind::Polynomial) {
            std::istringstream hs(ls.require("indices"));
            std::string itag;
            int count = 0;
            hs >> itag >> count;
            if (itag != "indices" || count < 1)
                throw std::runtime_error("map file: bad indices line");
            MultiIndexSet set = read_index_set(ls, count, k, n, "indices");
            MapComponent comp = MapComponent::polynomial(std::move(set));
            comp.set_coefficients(read_coeffs(ls, comp.coefficient_count()));
            comps.push_back(std::move(comp));
        } else if (kind == ComponentKind::IntegratedExponential) {
            std::istringstream qs(ls.require("quadorder"));
            std::string qtag;
            int order = 0;
            qs >> qtag >> order;
            if (qtag != "quadorder") throw std::runtime_error("map file: bad quadorder line");
            std::istringstream as(ls.require("aindices"));
            std::string atag;
            int acount = 0;
            as >> atag >> acount;
            if (atag != "aindices") throw std::runtime_error("map file: bad aindices line");
            MultiIndexSet a_set = read_index_set(ls, acount, k - 1, n, "aindices");
            std::istringstream bs(ls.require("bindices"));
            std::string btag;
            int bcount = 0;
            bs >> btag >> bcount;
            if (btag != "bindices") throw std::runtime_error("map file: bad bindices line");
            MultiIndexSet b_set = read_index_set(ls, bcount, k, n, "bindices");
            MapComponent comp = MapComponent::integrated_exponential(std::move(a_set),
                                                                     std::move(b_set), order);
            comp.set_coefficients(read_coeffs(ls, comp.coefficient_count()));
            comps.push_back(std::move(comp));
        } else {
            std::istringstream cs(ls.require("centers"));
            std::string ctag;
            int count = 0;
            cs >> ctag >> count;
            if (ctag != "centers" || count < 0)
                throw std::runtime_error("map file: bad centers line");
            std::vector<double> centers;
            centers.reserve(static_cast<std::size_t>(count) * k);
            for (int j = 0; j < count; ++j) {
                const auto row = parse_reals(ls.require("center row"), "center row", k);
                centers.insert(centers.end(), row.begin(), row.end());
            }
            const std::string sline = ls.require("scales");
            if (sline.rfind("scales", 0) != 0)
                throw std::runtime_error("map file: expected `scales`");
            const auto scales = parse_reals(sline.substr(6), "scales", count);
            MapComponent comp = MapComponent::linear_rbf(k, n, std::move(centers), scales);
            comp.set_coefficients(read_coeffs(ls, comp.coefficient_count()));
            comps.push_back(std::move(comp));
        }

        if (k < n) line = ls.require("component");
    }
    return TriangularMap(direction, std::move(comps), std::move(premap));
}

TriangularMap load_map(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open map file: " + path);
    return read_map(is);
}

}  // namespace trimap

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "trimap/errors.hpp"
#include "trimap/map_io.hpp"
#include "trimap/map_template.hpp"
#include "trimap/rng.hpp"
#include "trimap/triangular_map.hpp"

using namespace trimap;

namespace {

TriangularMap linear_2d_map() {
    // T(x) = (2 x1, x1 + 3 x2)
    auto t = MapTemplate::uniform(2, ComponentSpec{ComponentKind::Polynomial,
                                                   IndexSetKind::TotalOrder, 1});
    TriangularMap map = instantiate_identity(t, Direction::Direct);
    const auto& s1 = map.component(1).poly_set();
    std::vector<double> c1(s1.size(), 0.0);
    c1[s1.find({1, 0})] = 2.0;
    map.component(1).set_coefficients(c1);
    const auto& s2 = map.component(2).poly_set();
    std::vector<double> c2(s2.size(), 0.0);
    c2[s2.find({1, 0})] = 1.0;
    c2[s2.find({0, 1})] = 3.0;
    map.component(2).set_coefficients(c2);
    return map;
}

TriangularMap random_intexp_map(int n, int degree, std::uint64_t seed, double a_mag = 1.0,
                                double b_mag = 0.3) {
    auto t = MapTemplate::uniform(
        n, ComponentSpec{ComponentKind::IntegratedExponential, IndexSetKind::TotalOrder, degree});
    TriangularMap map = instantiate_identity(t, Direction::Direct);
    std::uint64_t ctr = 0;
    for (int k = 1; k <= n; ++k) {
        auto& comp = map.component(k);
        const std::size_t na = comp.intexp_a_set().size();
        std::vector<double> c(comp.coefficient_count());
        for (std::size_t j = 0; j < c.size(); ++j) {
            const double mag = j < na ? a_mag : b_mag;
            c[j] = mag * (2.0 * uniform_at(seed, 17, ctr++) - 1.0);
        }
        comp.set_coefficients(c);
    }
    return map;
}

std::vector<double> random_point(int n, std::uint64_t seed, std::uint64_t stream) {
    std::vector<double> x(n);
    for (int j = 0; j < n; ++j) x[j] = 2.0 * gaussian_at(seed, stream, j);
    return x;
}

}  // namespace

TEST_CASE("identity map is the identity") {
    for (auto kind : {ComponentKind::Polynomial, ComponentKind::IntegratedExponential,
                      ComponentKind::LinearRbf}) {
        auto t = MapTemplate::uniform(2, ComponentSpec{kind, IndexSetKind::TotalOrder, 1});
        const TriangularMap map = instantiate_identity(t, Direction::Direct);
        const double x[2] = {0.3, -1.2};
        const auto y = map.evaluate(x);
        CHECK(y[0] == doctest::Approx(0.3).epsilon(1e-13));
        CHECK(y[1] == doctest::Approx(-1.2).epsilon(1e-13));
        CHECK(map.log_det_jacobian(x) == doctest::Approx(0.0).epsilon(1e-13));
    }
}

TEST_CASE("hand-evaluated linear map and its jacobian") {
    const TriangularMap map = linear_2d_map();
    const double x[2] = {2.0, 5.0 / 3.0};
    const auto y = map.evaluate(x);
    CHECK(y[0] == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(y[1] == doctest::Approx(7.0).epsilon(1e-14));
    CHECK(map.log_det_jacobian(x) ==
          doctest::Approx(std::log(2.0) + std::log(3.0)).epsilon(1e-14));  // 1.791759
    std::vector<double> jac(4);
    map.jacobian_lower(x, jac);
    CHECK(jac[0] == doctest::Approx(2.0));
    CHECK(jac[1] == 0.0);
    CHECK(jac[2] == doctest::Approx(1.0));
    CHECK(jac[3] == doctest::Approx(3.0));
}

TEST_CASE("integrated-exponential special cases") {
    auto t = MapTemplate::uniform(
        1, ComponentSpec{ComponentKind::IntegratedExponential, IndexSetKind::TotalOrder, 2});
    const TriangularMap map = instantiate_identity(t, Direction::Direct);
    const double x[1] = {1.5};
    CHECK(map.evaluate(x)[0] == doctest::Approx(1.5).epsilon(1e-14));  // int_0^1.5 e^0 dw
    CHECK(map.log_det_jacobian(x) == 0.0);
    const double xneg[1] = {-2.25};
    CHECK(map.evaluate(xneg)[0] == doctest::Approx(-2.25).epsilon(1e-14));  // signed rescaling
}

TEST_CASE("coefficient gradients: closed forms") {
    // k=1 polynomial, p=2: dT/d(c0,c1,c2) at x=2 is (He0,He1,He2)(2) = (1,2,3).
    auto t = MapTemplate::uniform(1, ComponentSpec{ComponentKind::Polynomial,
                                                   IndexSetKind::TotalOrder, 2});
    const TriangularMap map = instantiate_identity(t, Direction::Direct);
    const double x[1] = {2.0};
    std::vector<double> vg(3), lg(3);
    map.coefficient_gradients(x, vg, lg);
    // Graded-lex order: (0), (1), (2).
    CHECK(vg[0] == doctest::Approx(1.0));
    CHECK(vg[1] == doctest::Approx(2.0));
    CHECK(vg[2] == doctest::Approx(3.0));
    // log diag partial gradient = dpsi/dx / dT/dx with dT/dx = 1 at identity.
    CHECK(lg[0] == doctest::Approx(0.0));
    CHECK(lg[1] == doctest::Approx(1.0));
    CHECK(lg[2] == doctest::Approx(2.0 * 2.0));  // He2' = 2 He1
}

TEST_CASE("coefficient gradients match central differences across kinds") {
    const double h = 1e-6;
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 1 + trial % 3;
        ComponentSpec spec;
        switch (trial % 3) {
            case 0: spec = {ComponentKind::Polynomial, IndexSetKind::TotalOrder, 3}; break;
            case 1:
                spec = {ComponentKind::IntegratedExponential, IndexSetKind::TotalOrder, 2};
                break;
            default: spec = {ComponentKind::LinearRbf, IndexSetKind::TotalOrder, 1, -1, -1, 3};
        }
        QuadratureRule training = rule_from_samples(sample_reference(64, n, 5 + trial));
        auto t = MapTemplate::uniform(n, spec);
        TriangularMap map = instantiate_identity(t, Direction::Direct, &training, trial);
        // Perturb coefficients away from the identity, keeping poly/rbf monotone.
        auto coeffs = map.packed_coefficients();
        for (std::size_t j = 0; j < coeffs.size(); ++j)
            coeffs[j] += 0.1 * (2.0 * uniform_at(31, trial, j) - 1.0);
        map.set_packed_coefficients(coeffs);

        const auto x = random_point(n, 77, trial);
        std::vector<double> diag(n);
        map.diag_jacobian(x, diag);
        bool monotone = true;
        for (double d : diag) monotone = monotone && d > 1e-3;
        if (!monotone) continue;

        std::vector<double> vg(coeffs.size()), lg(coeffs.size());
        map.coefficient_gradients(x, vg, lg);

        TriangularMap probe = map;
        std::size_t off = 0;
        for (int k = 1; k <= n; ++k) {
            const std::size_t m = probe.component(k).coefficient_count();
            for (std::size_t j = 0; j < m; ++j) {
                auto cp = coeffs;
                cp[off + j] += h;
                probe.set_packed_coefficients(cp);
                const double vp = probe.evaluate(x)[k - 1];
                std::vector<double> dp(n);
                probe.diag_jacobian(x, dp);
                const double lp = std::log(dp[k - 1]);
                cp[off + j] -= 2 * h;
                probe.set_packed_coefficients(cp);
                const double vm = probe.evaluate(x)[k - 1];
                probe.diag_jacobian(x, dp);
                const double lm = std::log(dp[k - 1]);
                const double fd_v = (vp - vm) / (2 * h);
                const double fd_l = (lp - lm) / (2 * h);
                CHECK(std::abs(vg[off + j] - fd_v) <=
                      1e-6 * std::max({1.0, std::abs(fd_v), std::abs(vg[off + j])}));
                CHECK(std::abs(lg[off + j] - fd_l) <=
                      1e-6 * std::max({1.0, std::abs(fd_l), std::abs(lg[off + j])}));
            }
            off += m;
        }
    }
}

TEST_CASE("input partials match central differences") {
    const TriangularMap map = random_intexp_map(4, 2, 3);
    const double h = 1e-6;
    for (int trial = 0; trial < 10; ++trial) {
        auto x = random_point(4, 11, trial);
        std::vector<double> jac(16);
        map.jacobian_lower(x, jac);
        for (int k = 1; k <= 4; ++k) {
            for (int j = 0; j < k; ++j) {
                auto xp = x;
                xp[j] += h;
                const double vp = map.evaluate(xp)[k - 1];
                xp[j] -= 2 * h;
                const double vm = map.evaluate(xp)[k - 1];
                const double fd = (vp - vm) / (2 * h);
                CHECK(std::abs(jac[(k - 1) * 4 + j] - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
            }
        }
    }
}

TEST_CASE("triangularity: outputs ignore later inputs") {
    const TriangularMap map = random_intexp_map(5, 3, 21);
    for (int trial = 0; trial < 20; ++trial) {
        auto x = random_point(5, 13, trial);
        const auto y = map.evaluate(x);
        for (int k = 1; k <= 5; ++k) {
            auto xp = x;
            for (int j = k; j < 5; ++j)
                xp[j] += 10.0 * (uniform_at(14, trial, j) - 0.5);
            const auto yp = map.evaluate(xp);
            for (int i = 0; i < k; ++i) CHECK(yp[i] == y[i]);
        }
    }
}

TEST_CASE("integrated-exponential stays monotone for arbitrary coefficients") {
    for (int trial = 0; trial < 20; ++trial) {
        const TriangularMap map = random_intexp_map(3, 3, 100 + trial, 3.0, 3.0);
        const auto x = random_point(3, 15, trial);
        std::vector<double> diag(3);
        map.diag_jacobian(x, diag);
        for (double d : diag) CHECK(d > 0.0);
        CHECK(std::isfinite(map.log_det_jacobian(x)));  // = b, never log(0)
    }
}

TEST_CASE("doubling the quadrature order leaves values unchanged") {
    for (int trial = 0; trial < 10; ++trial) {
        auto spec = ComponentSpec{ComponentKind::IntegratedExponential, IndexSetKind::TotalOrder,
                                  3};
        spec.quad_order = 32;
        auto t = MapTemplate::uniform(2, spec);
        TriangularMap map32 = instantiate_identity(t, Direction::Direct);
        std::vector<double> coeffs = map32.packed_coefficients();
        for (std::size_t j = 0; j < coeffs.size(); ++j)
            coeffs[j] = 0.5 * (2.0 * uniform_at(800 + trial, 0, j) - 1.0);
        map32.set_packed_coefficients(coeffs);

        spec.quad_order = 64;
        auto t64 = MapTemplate::uniform(2, spec);
        TriangularMap map64 = instantiate_identity(t64, Direction::Direct);
        map64.set_packed_coefficients(coeffs);

        for (double xk : {-4.0, -1.0, 0.5, 4.0}) {
            const double x[2] = {1.1, xk};
            const double v32 = map32.evaluate(x)[1];
            const double v64 = map64.evaluate(x)[1];
            CHECK(std::abs(v32 - v64) <= 1e-10 * std::max(1.0, std::abs(v32)));
        }
    }
}

TEST_CASE("non-monotone polynomial component reports the offending point") {
    auto t = MapTemplate::uniform(1, ComponentSpec{ComponentKind::Polynomial,
                                                   IndexSetKind::TotalOrder, 2});
    TriangularMap map = instantiate_identity(t, Direction::Direct);
    const auto& set = map.component(1).poly_set();
    std::vector<double> c(set.size(), 0.0);
    c[set.find({2})] = 1.0;  // T(x) = x^2 - 1, decreasing for x < 0
    map.component(1).set_coefficients(c);
    const double x[1] = {-1.0};
    CHECK_THROWS_AS((void)map.log_det_jacobian(x), NonMonotoneError);
    try {
        (void)map.log_det_jacobian(x);
    } catch (const NonMonotoneError& e) {
        CHECK(e.component() == 1);
        CHECK(e.point()[0] == -1.0);
    }
}

TEST_CASE("premap standardization composes correctly") {
    auto t = MapTemplate::uniform(1, ComponentSpec{ComponentKind::Polynomial,
                                                   IndexSetKind::TotalOrder, 1});
    TriangularMap map = instantiate_identity(t, Direction::Inverse);
    map.set_premap(AffinePremap{{1.0}, {2.0}});  // S(y) = (y - 1)/2
    const double y[1] = {5.0};
    CHECK(map.evaluate(y)[0] == doctest::Approx(2.0));
    CHECK(map.log_det_jacobian(y) == doctest::Approx(-std::log(2.0)));
    std::vector<double> diag(1);
    map.diag_jacobian(y, diag);
    CHECK(diag[0] == doctest::Approx(0.5));
}

TEST_CASE("head map slices components and premap") {
    TriangularMap map = random_intexp_map(4, 2, 33);
    map.set_premap(AffinePremap{{0.1, 0.2, 0.3, 0.4}, {1.0, 2.0, 3.0, 4.0}});
    const TriangularMap head = map.head(2);
    CHECK(head.dim() == 2);
    const auto x = random_point(4, 55, 0);
    const auto y_full = map.evaluate(x);
    const auto y_head = head.evaluate(std::span<const double>(x).first(2));
    CHECK(y_head[0] == y_full[0]);
    CHECK(y_head[1] == y_full[1]);
}

TEST_CASE("map files round-trip bit-identically") {
    for (int variant = 0; variant < 3; ++variant) {
        TriangularMap map = [&] {
            if (variant == 0) return linear_2d_map();
            if (variant == 1) return random_intexp_map(3, 2, 1234);
            QuadratureRule training = rule_from_samples(sample_reference(50, 2, 9));
            auto t = MapTemplate::uniform(
                2, ComponentSpec{ComponentKind::LinearRbf, IndexSetKind::TotalOrder, 1, -1, -1, 4});
            TriangularMap m = instantiate_identity(t, Direction::Direct, &training, 7);
            auto c = m.packed_coefficients();
            for (std::size_t j = 0; j < c.size(); ++j) c[j] += 0.01 * j;
            m.set_packed_coefficients(c);
            return m;
        }();
        if (variant == 1)
            map.set_premap(AffinePremap{{0.5, -0.25, 1.0 / 3.0}, {2.0, 0.7, 1.1}});

        std::ostringstream os;
        write_map(os, map, {"round trip test"});
        std::istringstream is(os.str());
        const TriangularMap loaded = read_map(is);

        CHECK(loaded.dim() == map.dim());
        CHECK(loaded.packed_coefficients() == map.packed_coefficients());
        for (int trial = 0; trial < 10; ++trial) {
            const auto x = random_point(map.dim(), 66, trial);
            const auto a = map.evaluate(x);
            const auto b = loaded.evaluate(x);
            for (int i = 0; i < map.dim(); ++i) CHECK(a[i] == b[i]);
        }
    }
}

TEST_CASE("map file errors") {
    std::istringstream bad_version("TRIMAP 9\ndim 1\n");
    CHECK_THROWS_WITH_AS(read_map(bad_version), "map file: unsupported format version 9",
                         std::runtime_error);
    std::istringstream not_trimap("SOMETHING 1\n");
    CHECK_THROWS_AS(read_map(not_trimap), std::runtime_error);
}

TEST_CASE("evaluate validates its input") {
    const TriangularMap map = linear_2d_map();
    const double bad[2] = {1.0, std::nan("")};
    CHECK_THROWS_AS(map.evaluate(bad), std::invalid_argument);
    const double short_point[1] = {1.0};
    CHECK_THROWS_AS(map.evaluate(std::span<const double>(short_point, 1)),
                    std::invalid_argument);
}

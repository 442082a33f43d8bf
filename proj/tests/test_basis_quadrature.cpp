#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "trimap/basis.hpp"
#include "trimap/multi_index.hpp"
#include "trimap/quadrature.hpp"
#include "trimap/rng.hpp"
#include "trimap/sample_set.hpp"

using namespace trimap;

namespace {

// Independent central-difference oracle.
double central_diff(double (*f)(int, double), int degree, double x, double h = 1e-6) {
    return (f(degree, x + h) - f(degree, x - h)) / (2.0 * h);
}

}  // namespace

TEST_CASE("hermite values match the recurrence by hand") {
    CHECK(hermite_value(0, 3.7) == 1.0);
    CHECK(hermite_value(1, 2.5) == 2.5);
    CHECK(hermite_value(2, 2.0) == doctest::Approx(3.0).epsilon(1e-14));   // x^2 - 1
    CHECK(hermite_value(3, 1.0) == doctest::Approx(-2.0).epsilon(1e-14));  // x^3 - 3x
    CHECK(hermite_value(4, 0.0) == doctest::Approx(3.0).epsilon(1e-14));   // x^4 - 6x^2 + 3
}

TEST_CASE("hermite derivative matches central differences") {
    for (int trial = 0; trial < 100; ++trial) {
        const double x = -3.0 + 6.0 * uniform_at(7, 0, trial);
        const int degree = 1 + static_cast<int>(uniform_at(7, 1, trial) * 8.0);
        const double analytic = hermite_derivative(degree, x);
        const double fd = central_diff(&hermite_value, degree, x);
        CHECK(std::abs(analytic - fd) <= 1e-6 * std::max({1.0, std::abs(analytic), std::abs(fd)}));
    }
}

TEST_CASE("hermite tables agree with pointwise evaluation") {
    double v[9], d[9];
    hermite_table_with_derivatives(8, 1.3, v, d);
    for (int m = 0; m <= 8; ++m) {
        CHECK(v[m] == doctest::Approx(hermite_value(m, 1.3)).epsilon(1e-14));
        CHECK(d[m] == doctest::Approx(hermite_derivative(m, 1.3)).epsilon(1e-14));
    }
}

TEST_CASE("monomial basis") {
    CHECK(monomial_value(3, 2.0) == 8.0);
    CHECK(monomial_derivative(3, 2.0) == 12.0);
    CHECK(monomial_value(0, 5.0) == 1.0);
    CHECK(monomial_derivative(0, 5.0) == 0.0);
}

TEST_CASE("orthonormality under the standard Gaussian (Monte Carlo, 3 SE)") {
    // E[He_i He_j] = delta_ij i! for the unnormalized probabilists' family.
    const std::size_t draws = 1000000;
    const SampleSet x = sample_reference(draws, 1, 99);
    for (int i = 0; i <= 5; ++i) {
        for (int j = i; j <= 5; ++j) {
            double sum = 0.0, sumsq = 0.0;
            for (std::size_t s = 0; s < draws; ++s) {
                const double v = hermite_value(i, x.at(s, 0)) * hermite_value(j, x.at(s, 0));
                sum += v;
                sumsq += v * v;
            }
            const double mean = sum / draws;
            const double var = sumsq / draws - mean * mean;
            const double se = std::sqrt(var / draws);
            const double expected = (i == j) ? hermite_norm_squared(i) : 0.0;
            CHECK(std::abs(mean - expected) <= 3.0 * se + 1e-12);
        }
    }
}

TEST_CASE("multi-index set cardinalities match the three families") {
    const auto total = build_multi_index_set(IndexSetKind::TotalOrder, 2, 3, 2);
    CHECK(total.size() == 10);  // binom(2+3, 3)
    const auto diag = build_multi_index_set(IndexSetKind::Diagonal, 2, 3, 2);
    CHECK(diag.size() == 4);
    std::set<MultiIndex> diag_expected{{0, 0}, {0, 1}, {0, 2}, {0, 3}};
    std::set<MultiIndex> diag_got(diag.indices.begin(), diag.indices.end());
    CHECK(diag_got == diag_expected);
    const auto nomixed = build_multi_index_set(IndexSetKind::NoMixed, 2, 3, 2);
    CHECK(nomixed.size() == 7);

    // TotalOrder cardinality binom(k+p, p) across a few (k, p).
    auto binom = [](int a, int b) {
        double v = 1.0;
        for (int i = 1; i <= b; ++i) v = v * (a - b + i) / i;
        return static_cast<std::size_t>(v + 0.5);
    };
    for (int k = 1; k <= 4; ++k)
        for (int p = 1; p <= 4; ++p)
            CHECK(build_multi_index_set(IndexSetKind::TotalOrder, k, p, 5).size() ==
                  binom(k + p, p));
}

TEST_CASE("multi-index set inclusions and mandatory members") {
    for (int k = 1; k <= 3; ++k) {
        const int n = 3, p = 4;
        const auto total = build_multi_index_set(IndexSetKind::TotalOrder, k, p, n);
        const auto nomixed = build_multi_index_set(IndexSetKind::NoMixed, k, p, n);
        const auto diag = build_multi_index_set(IndexSetKind::Diagonal, k, p, n);
        std::set<MultiIndex> in_total(total.indices.begin(), total.indices.end());
        std::set<MultiIndex> in_nomixed(nomixed.indices.begin(), nomixed.indices.end());
        for (const auto& mi : diag.indices) CHECK(in_nomixed.count(mi) == 1);
        for (const auto& mi : nomixed.indices) CHECK(in_total.count(mi) == 1);

        MultiIndex zero(n, 0), ek(n, 0);
        ek[k - 1] = 1;
        for (const auto* set : {&total, &nomixed, &diag}) {
            CHECK(set->find(zero) >= 0);
            CHECK(set->find(ek) >= 0);
            // Triangular constraint.
            for (const auto& mi : set->indices)
                for (int i = k; i < n; ++i) CHECK(mi[i] == 0);
        }
    }
}

TEST_CASE("multi-index set argument validation") {
    CHECK_THROWS_AS(build_multi_index_set(IndexSetKind::TotalOrder, 3, 2, 2),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_multi_index_set(IndexSetKind::TotalOrder, 1, 0, 2),
                    std::invalid_argument);
}

TEST_CASE("multivariate tensor evaluation") {
    const double x[2] = {2.0, 3.0};
    CHECK(multivariate_value({0, 0}, x) == 1.0);
    CHECK(multivariate_value({1, 1}, x) == doctest::Approx(6.0));       // He1(2) He1(3)
    CHECK(multivariate_value({2, 0}, x) == doctest::Approx(3.0));       // He2(2)
    CHECK(multivariate_partial({2, 1}, x, 0) == doctest::Approx(12.0)); // 2 He1(2) He1(3)
    CHECK_THROWS_AS(multivariate_value({1, 1, 1}, x), std::invalid_argument);
}

TEST_CASE("gauss-hermite rules: exact low orders") {
    const auto r1 = gauss_hermite_1d(1);
    CHECK(r1.nodes[0] == 0.0);
    CHECK(r1.weights[0] == doctest::Approx(1.0).epsilon(1e-14));

    const auto r2 = gauss_hermite_1d(2);
    CHECK(r2.nodes[0] == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(r2.nodes[1] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(r2.weights[0] == doctest::Approx(0.5).epsilon(1e-13));

    const auto r3 = gauss_hermite_1d(3);
    CHECK(r3.nodes[0] == doctest::Approx(-std::sqrt(3.0)).epsilon(1e-13));
    CHECK(r3.nodes[1] == 0.0);
    CHECK(r3.nodes[2] == doctest::Approx(std::sqrt(3.0)).epsilon(1e-13));
    CHECK(r3.weights[0] == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
    CHECK(r3.weights[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-13));

    CHECK_THROWS_AS(gauss_hermite_1d(0), std::invalid_argument);
    CHECK_THROWS_AS(gauss_hermite_1d(65), std::invalid_argument);
}

TEST_CASE("quadrature integrates He_i He_j exactly up to degree 2 order - 1") {
    for (int order : {4, 10, 16}) {
        const auto rule = gauss_hermite_1d(order);
        for (int i = 0; i <= order; ++i) {
            for (int j = 0; j <= order; ++j) {
                if (i + j > 2 * order - 1) continue;
                double q = 0.0;
                for (int t = 0; t < order; ++t)
                    q += rule.weights[t] * hermite_value(i, rule.nodes[t]) *
                         hermite_value(j, rule.nodes[t]);
                const double expected = (i == j) ? hermite_norm_squared(i) : 0.0;
                // 1e-12 in units of ||He_i|| ||He_j||, i.e. exactness of the
                // normalized products.
                const double scale =
                    std::sqrt(hermite_norm_squared(i) * hermite_norm_squared(j));
                CHECK(std::abs(q - expected) <= 1e-12 * std::max(1.0, scale));
            }
        }
    }
}

TEST_CASE("gauss-legendre sanity") {
    const auto rule = gauss_legendre_1d(8);
    double mass = 0.0, second = 0.0;
    for (int t = 0; t < 8; ++t) {
        mass += rule.weights[t];
        second += rule.weights[t] * rule.nodes[t] * rule.nodes[t];
    }
    CHECK(mass == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(second == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("tensor grids") {
    const auto grid = tensorize(gauss_hermite_1d(10), 2);
    CHECK(grid.count == 100);
    double mass = 0.0;
    for (double w : grid.weights) mass += w;
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-13));

    const auto point = tensorize(gauss_hermite_1d(1), 5);
    CHECK(point.count == 1);
    CHECK(point.weights[0] == doctest::Approx(1.0));
    for (int j = 0; j < 5; ++j) CHECK(point.node(0)[j] == 0.0);

    CHECK_THROWS_AS(tensorize(gauss_hermite_1d(40), 8), std::invalid_argument);
}

TEST_CASE("reference sampling: CLT bound and counter determinism") {
    const std::size_t m = 1000000;
    const SampleSet s = sample_reference(m, 1, 123);
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) sum += s.at(i, 0);
    CHECK(std::abs(sum / m) <= 4.0 / std::sqrt(static_cast<double>(m)));

    const SampleSet serial = sample_reference(5000, 3, 42, Exec::Serial);
    const SampleSet parallel = sample_reference(5000, 3, 42, Exec::Parallel);
    CHECK(serial.data == parallel.data);
}

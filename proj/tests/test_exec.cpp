#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "trimap/direct_builder.hpp"
#include "trimap/exec.hpp"
#include "trimap/map_template.hpp"
#include "trimap/rng.hpp"
#include "trimap/tri_solver.hpp"

using namespace trimap;

TEST_CASE("pairwise sum matches a long-double reference") {
    std::vector<double> v(10001);
    long double exact = 0.0L;
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = std::sin(0.1 * i) * 1e3 / (i + 1.0);
        exact += v[i];
    }
    CHECK(std::abs(pairwise_sum(v) - static_cast<double>(exact)) <
          1e-12 * std::abs(static_cast<double>(exact)) + 1e-12);
}

TEST_CASE("blocked accumulation is bit-identical across execution modes") {
    const std::size_t count = 12345;
    const std::size_t width = 7;
    auto fill = [&](std::size_t i, std::span<double> terms) {
        for (std::size_t j = 0; j < width; ++j)
            terms[j] = std::cos(0.01 * i + j) / (1.0 + 0.5 * j + i * 1e-4);
        return true;
    };
    std::vector<double> serial(width), parallel(width);
    CHECK(blocked_accumulate(count, width, serial, fill, Exec::Serial));
    CHECK(blocked_accumulate(count, width, parallel, fill, Exec::Parallel));
    CHECK(serial == parallel);
}

TEST_CASE("exceptions from parallel loops propagate") {
    CHECK_THROWS_AS(for_each_index(
                        1000,
                        [](std::size_t i) {
                            if (i == 577) throw std::runtime_error("boom");
                        },
                        Exec::Parallel),
                    std::runtime_error);
}

TEST_CASE("thread count does not change results") {
    const int hw = max_threads();
    auto run_all = [&]() {
        const SampleSet refs = sample_reference(2000, 3, 99, Exec::Parallel);
        const GaussianTarget target({0.1, -0.2, 0.3},
                                    {1.0, 0.2, 0.0, 0.2, 1.0, 0.1, 0.0, 0.1, 1.0});
        const auto rule = make_integration_rule({IntegrationSpec::Kind::Quadrature, 5}, 3);
        TriangularMap map = instantiate_identity(
            MapTemplate::uniform(3, ComponentSpec{ComponentKind::Polynomial,
                                                  IndexSetKind::TotalOrder, 2}),
            Direction::Direct);
        std::vector<double> grad(map.coefficient_count());
        const double value =
            direct_objective(map, target, rule, grad, ConstraintMode::PointwiseAtNodes);
        auto inverted = push_inverse(map, refs, InvertOptions{}, Exec::Parallel);
        std::vector<double> out{value};
        out.insert(out.end(), grad.begin(), grad.end());
        out.insert(out.end(), inverted.points.data.begin(), inverted.points.data.end());
        out.insert(out.end(), refs.data.begin(), refs.data.end());
        return out;
    };

    set_max_threads(1);
    const auto with_one = run_all();
    set_max_threads(hw > 1 ? hw : 4);
    const auto with_many = run_all();
    set_max_threads(0);
    CHECK(with_one == with_many);
}

TEST_CASE("serial and parallel objective evaluations agree bitwise") {
    const GaussianTarget target({1.0}, {4.0});
    const auto rule = make_integration_rule({IntegrationSpec::Kind::MonteCarlo, 0, 20000, 5}, 1);
    TriangularMap map = instantiate_identity(
        MapTemplate::uniform(1, ComponentSpec{ComponentKind::IntegratedExponential,
                                              IndexSetKind::TotalOrder, 2}),
        Direction::Direct);
    std::vector<double> gs(map.coefficient_count()), gp(map.coefficient_count());
    const double vs = direct_objective(map, target, rule, gs, ConstraintMode::MonotoneParam,
                                       1e-6, Exec::Serial);
    const double vp = direct_objective(map, target, rule, gp, ConstraintMode::MonotoneParam,
                                       1e-6, Exec::Parallel);
    CHECK(vs == vp);
    CHECK(gs == gp);
}

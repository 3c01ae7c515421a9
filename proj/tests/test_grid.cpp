#include "doctest.h"

#include <random>

#include "saddlesim/field.hpp"

using namespace saddlesim;

TEST_CASE("two-node grid hits the Offset endpoints") {
    GridSpec spec;
    spec.nr = 2;
    spec.nz = 2;
    spec.grading = 1.0;
    const auto g = build_grid<double>(spec);
    CHECK(g.r_nodes() == std::vector<double>{0.0, 1.0});
    CHECK(g.z_nodes() == std::vector<double>{-0.125, 0.5});
}

TEST_CASE("graded grid is finest next to the axis") {
    GridSpec spec;
    spec.nr = 64;
    spec.grading = 0.9;
    const auto g = build_grid<double>(spec);
    CHECK(g.dr(0) < g.dr(g.nr() - 2));
    for (int i = 0; i + 1 < g.nr() - 1; ++i) CHECK(g.dr(i) < g.dr(i + 1));
    CHECK(g.h_min() == doctest::Approx(g.dr(0)).epsilon(1e-14));
}

TEST_CASE("Centered variant spans -5a/2 .. 5a/2") {
    GridSpec spec;
    spec.variant.kind = DomainKind::Centered;
    const auto g = build_grid<double>(spec);
    CHECK(g.z_min() == -0.3125);
    CHECK(g.z_max() == 0.3125);
    CHECK(g.r_min() == 0.0);
    CHECK(g.r_max() == 1.0);
}

TEST_CASE("grid metrics from explicit node lists") {
    SUBCASE("uniform 0.1 spacing") {
        std::vector<double> r, z;
        for (int k = 0; k <= 10; ++k) r.push_back(0.1 * k);
        for (int k = 0; k <= 5; ++k) z.push_back(0.1 * k);
        const auto m = grid_metrics(r, z);
        CHECK(m.h_max == doctest::Approx(0.1));
        CHECK(m.h_min == doctest::Approx(0.1));
        CHECK(m.h_avg == doctest::Approx(0.1));
    }
    SUBCASE("mixed gaps") {
        const auto m = grid_metrics(std::vector<double>{0, 0.1, 0.4}, std::vector<double>{0, 0.2});
        CHECK(m.h_max == doctest::Approx(0.3));
        CHECK(m.h_min == doctest::Approx(0.1));
        CHECK(m.h_min <= m.h_avg);
        CHECK(m.h_avg <= m.h_max);
    }
}

TEST_CASE("build_grid rejects bad counts and grading by key") {
    auto key_of = [](GridSpec s) {
        try {
            build_grid<double>(s);
        } catch (const ConfigError &e) {
            return e.key();
        }
        return std::string("none");
    };
    GridSpec s;
    s.nr = 1;
    CHECK(key_of(s) == "nr");
    s = {};
    s.nz = 0;
    CHECK(key_of(s) == "nz");
    s = {};
    s.grading = 0.0;
    CHECK(key_of(s) == "grading");
    s.grading = 1.5;
    CHECK(key_of(s) == "grading");
    s = {};
    s.variant.a = -1;
    CHECK(key_of(s) == "a");
}

TEST_CASE("locate: nodes, midpoints and outside points") {
    GridSpec spec;
    spec.nr = 9;
    spec.nz = 7;
    spec.grading = 0.8;
    const auto g = build_grid<double>(spec);

    const auto node = g.locate(g.r(3), g.z(2));
    CHECK(node.i == 3);
    CHECK(node.j == 2);
    CHECK(node.s == 0.0);
    CHECK(node.t == 0.0);

    const auto mid = g.locate((g.r(4) + g.r(5)) / 2, (g.z(1) + g.z(2)) / 2);
    CHECK(mid.i == 4);
    CHECK(mid.j == 1);
    CHECK(mid.s == doctest::Approx(0.5));
    CHECK(mid.t == doctest::Approx(0.5));

    // the upper boundary belongs to the last cell
    const auto top = g.locate(1.0, g.z_max());
    CHECK(top.i == g.nr() - 2);
    CHECK(top.s == 1.0);
    CHECK(top.t == 1.0);

    CHECK_THROWS_AS(g.locate(1.2, 0.0), OutOfDomainError);
    try {
        g.locate(1.2, 0.0);
    } catch (const OutOfDomainError &e) {
        CHECK(e.r() == 1.2);
        CHECK(e.z() == 0.0);
    }
}

TEST_CASE("random grids satisfy every invariant") {
    std::mt19937 rng(12345);
    std::uniform_int_distribution<int> count(2, 80);
    std::uniform_real_distribution<double> grade(0.5, 1.0);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int trial = 0; trial < 60; ++trial) {
        GridSpec spec;
        spec.nr = count(rng);
        spec.nz = count(rng);
        spec.grading = trial % 5 == 0 ? 1.0 : grade(rng);
        spec.variant.kind = trial % 2 ? DomainKind::Centered : DomainKind::Offset;
        const auto g = build_grid<double>(spec);

        CHECK(g.r(0) == 0.0);
        CHECK(g.r(g.nr() - 1) == 1.0);
        CHECK(g.z(0) == spec.variant.z_min());
        CHECK(g.z(g.nz() - 1) == spec.variant.z_max());
        for (int i = 0; i + 1 < g.nr(); ++i) CHECK(g.r(i) < g.r(i + 1));
        for (int j = 0; j + 1 < g.nz(); ++j) CHECK(g.z(j) < g.z(j + 1));
        if (g.nr() > 2 && spec.grading < 1.0) CHECK(g.dr(0) < g.dr(g.nr() - 2));
        CHECK(g.h_min() <= g.h_avg());
        CHECK(g.h_avg() <= g.h_max());

        // metrics depend only on the node lists
        const auto m = grid_metrics(std::vector<double>(g.r_nodes()), std::vector<double>(g.z_nodes()));
        CHECK(m.h_max == g.h_max());
        CHECK(m.h_min == g.h_min());
        CHECK(m.h_avg == g.h_avg());

        // bilinear reconstruction at nodes is exact
        VectorX<double> f(g.size());
        for (int k = 0; k < g.size(); ++k) f(k) = unit(rng);
        for (int j = 0; j < g.nz(); ++j)
            for (int i = 0; i < g.nr(); ++i) CHECK(bilinear(g, f, g.r(i), g.z(j)) == f(g.index(i, j)));
    }
}

TEST_CASE("dual-cell weights integrate the cylinder volume") {
    GridSpec spec;
    spec.nr = 30;
    spec.nz = 20;
    const auto g = build_grid<double>(spec);
    CHECK(g.volume_weights().sum() == doctest::Approx(std::numbers::pi * 0.625).epsilon(1e-13));
    CHECK(g.volume_weights().minCoeff() > 0.0);
}

#include "doctest.h"

#include <cmath>
#include <numbers>

#include "saddlesim/diagnostics.hpp"
#include "saddlesim/initial_data.hpp"

using namespace saddlesim;

namespace {

MeridianGrid<double> grid(int nr = 21, int nz = 41, double grading = 1.0) {
    GridSpec spec;
    spec.nr = nr;
    spec.nz = nz;
    spec.grading = grading;
    return build_grid<double>(spec);
}

template <typename F>
VectorX<double> sample(const MeridianGrid<double> &g, F f) {
    VectorX<double> v(g.size());
    for (int j = 0; j < g.nz(); ++j)
        for (int i = 0; i < g.nr(); ++i) v(g.index(i, j)) = f(g.r(i), g.z(j));
    return v;
}

std::vector<DiagnosticsRecord> series(const std::vector<std::pair<double, double>> &t_dist) {
    std::vector<DiagnosticsRecord> out;
    for (auto [t, d] : t_dist) {
        DiagnosticsRecord r;
        r.t = t;
        r.dist_axis = r.arg_r = d;
        out.push_back(r);
    }
    return out;
}

} // namespace

TEST_CASE("record of simple states") {
    const auto g = grid();
    auto s = FieldState<double>::zeros(g);
    auto rec = record(s, g, 0.1);
    CHECK(rec.max_v == 0.0);
    CHECK(rec.dist_axis == 0.0);
    CHECK(rec.energy == 0.0);
    CHECK(rec.max_w == 0.0);

    s.u_z.setConstant(1.0);
    s.t = 0.25;
    rec = record(s, g, 0.1);
    CHECK(rec.t == 0.25);
    CHECK(rec.min_core_uz == 1.0);
    CHECK(rec.max_core_uz == 1.0);
    CHECK(rec.dist_axis == rec.arg_r);

    CHECK_THROWS_AS(record(s, g, 0.0), ParameterError);
    CHECK_THROWS_AS(record(s, g, 1.0), ParameterError);
}

TEST_CASE("core extremes only look inside r_core") {
    const auto g = grid();
    auto s = FieldState<double>::zeros(g);
    s.u_z = sample(g, [](double r, double) { return r < 0.2 ? -1.0 : 5.0; });
    const auto rec = record(s, g, 0.1);
    CHECK(rec.min_core_uz == -1.0);
    CHECK(rec.max_core_uz == -1.0);
}

TEST_CASE("turning points") {
    CHECK(detect_turning_points(series({{0, 0.1}, {0.1, 0.1}, {0.2, 0.1}}), 0.25).empty());
    CHECK(detect_turning_points(series({{0.3, 0.05}}), 0.25).empty());
    CHECK(detect_turning_points({}, 0.25).empty());
    const auto hits = detect_turning_points(series({{0.3, 0.05}, {0.35, 0.6}, {0.4, 0.58}}), 0.3);
    REQUIRE(hits.size() == 1);
    CHECK(hits[0] == 0.35);
    CHECK_THROWS_AS(detect_turning_points(series({{0, 0}}), 0.0), ParameterError);

    // a uniform time shift moves the detections by the same amount
    const auto shifted = detect_turning_points(series({{1.3, 0.05}, {1.35, 0.6}, {1.4, 0.58}}), 0.3);
    REQUIRE(shifted.size() == 1);
    CHECK(shifted[0] == doctest::Approx(hits[0] + 1.0));
}

TEST_CASE("sample_line geometry") {
    const auto m = meridian_coords({0, 0.05, -0.125});
    CHECK(m.r == 0.05);
    CHECK(m.z == -0.125);
    CHECK(meridian_coords({0.3, 0.4, 0.2}).r == doctest::Approx(0.5));
}

TEST_CASE("sample_line in a rigid rotation") {
    const auto g = grid();
    auto s = FieldState<double>::zeros(g);
    s.u_theta = sample(g, [](double r, double) { return r; });
    std::vector<double> off;
    for (int k = 0; k < 11; ++k) off.push_back(0.01 * k);
    for (auto axis : {LineAxis::ParallelZ, LineAxis::ParallelX2}) {
        const auto line = sample_line(s, g, {0.0, 0.05, -0.125}, axis, off);
        REQUIRE(line.offsets.size() == off.size());
        for (std::size_t k = 0; k < off.size(); ++k) {
            CHECK(line.valid[k]);
            CHECK(line.xi[k][0] == doctest::Approx(0.0));
            CHECK(line.xi[k][1] == doctest::Approx(0.0));
            CHECK(line.xi[k][2] == doctest::Approx(1.0));
            CHECK(line.w_mag[k] == doctest::Approx(2.0));
        }
    }
}

TEST_CASE("sample_line maps azimuthal vorticity to Cartesian axes") {
    const auto g = grid();
    auto s = FieldState<double>::zeros(g);
    s.u_z = sample(g, [](double r, double) { return -r * r; }); // w_theta = 2r
    const auto line = sample_line(s, g, {0.0, 0.0, 0.1}, LineAxis::ParallelX2, {0.1, 0.2, 0.3});
    for (std::size_t k = 0; k < 3; ++k) {
        // at azimuth 90 degrees e_theta points along -x1
        CHECK(line.xi[k][0] == doctest::Approx(-1.0));
        CHECK(line.xi[k][1] == doctest::Approx(0.0));
        CHECK(line.w_mag[k] == doctest::Approx(2 * line.offsets[k]).epsilon(1e-10));
    }
}

TEST_CASE("sample_line failure modes") {
    const auto g = grid();
    const auto zero = FieldState<double>::zeros(g);
    const auto line = sample_line(zero, g, {0, 0.05, -0.125}, LineAxis::ParallelZ, {0.0, 0.1});
    for (bool v : line.valid) CHECK_FALSE(v);

    CHECK_THROWS_AS(sample_line(zero, g, {0, 0.05, -0.125}, LineAxis::ParallelZ, {0.1, 0.1}), ParameterError);
    try {
        sample_line(zero, g, {0, 0.05, -0.125}, LineAxis::ParallelZ, {0.0, 0.7});
        FAIL("expected out-of-domain");
    } catch (const OutOfDomainError &e) {
        CHECK(std::string(e.what()).find("offset 0.7") != std::string::npos);
    }
}

TEST_CASE("wall samples match the tangential wall identity") {
    // u_r and u_theta vanish on z = z0; on the wall w_r = -d_z u_theta and
    // w_theta = d_z u_r because u_z and its r-derivative vanish there
    auto err = [](int n) {
        const auto g = grid(n, n);
        const double z0 = g.z_min();
        auto s = FieldState<double>::zeros(g);
        s.u_r = sample(g, [&](double r, double z) { return std::sin(std::numbers::pi * r) * std::sin(z - z0); });
        s.u_theta = sample(g, [&](double r, double z) { return r * (1 - r) * (z - z0) * (1 + z); });
        const double r = 0.5;
        const auto line = sample_line(s, g, {0.0, r, z0}, LineAxis::ParallelZ, {0.0});
        // Cartesian at azimuth 90 degrees: x1 = -w_theta, x2 = w_r
        const double w_theta = std::sin(std::numbers::pi * r);
        const double w_r = -r * (1 - r) * (1 + z0);
        const double got_theta = -line.xi[0][0] * line.w_mag[0];
        const double got_r = line.xi[0][1] * line.w_mag[0];
        return std::hypot(got_theta - w_theta, got_r - w_r);
    };
    const double e1 = err(21), e2 = err(41);
    CHECK(e1 < 0.05);
    CHECK(e2 < e1 / 3);
}

TEST_CASE("alignment discontinuity") {
    const auto g = grid(11, 11);
    auto s = FieldState<double>::zeros(g);
    s.u_theta = sample(g, [](double r, double) { return r; });
    const auto w = vorticity(s, g);
    const auto uniform = alignment_discontinuity(w, g, 1e-8, 0.2);
    REQUIRE(uniform.has_value());
    CHECK(*uniform == doctest::Approx(0.0).epsilon(1e-12));

    // two adjacent nodes with opposite directions, every other node invalid
    DirectionField<double> d{VectorX<double>::Zero(g.size()), VectorX<double>::Zero(g.size()),
                             VectorX<double>::Zero(g.size()), std::vector<bool>(g.size(), false)};
    const int a = g.index(3, 4), b = g.index(4, 4);
    d.xi_z(a) = 1.0;
    d.xi_z(b) = -1.0;
    d.valid[a] = d.valid[b] = true;
    const auto opp = alignment_discontinuity(d, g, 1.5 * g.dr(3));
    REQUIRE(opp.has_value());
    CHECK(*opp == doctest::Approx(2.0));
    CHECK_FALSE(alignment_discontinuity(d, g, 0.5 * g.dr(3)).has_value());
    CHECK_FALSE(alignment_discontinuity(d, g, 1.0, ZBand{0.3, 0.5}).has_value());

    const auto none = alignment_discontinuity(vorticity(FieldState<double>::zeros(g), g), g, 1e-8, 0.2);
    CHECK_FALSE(none.has_value());

    CHECK_THROWS_AS(alignment_discontinuity(w, g, 0.0, 0.2), ParameterError);
    CHECK_THROWS_AS(alignment_discontinuity(w, g, 1e-8, 0.0), ParameterError);
}

TEST_CASE("alignment discontinuity ignores positive rescaling of the vorticity") {
    const auto g = grid(15, 21);
    auto s = initial_field(InitialParams{}, g);
    auto w = vorticity(s, g);
    const double before = alignment_discontinuity(w, g, 1e-8, 0.1).value();
    for (int j = 0; j < g.nz(); ++j)
        for (int i = 0; i < g.nr(); ++i) {
            const int k = g.index(i, j);
            const double c = 1.0 + 0.5 * std::sin(3.0 * g.r(i) + g.z(j));
            w.w_r(k) *= c;
            w.w_theta(k) *= c;
            w.w_z(k) *= c;
        }
    CHECK(alignment_discontinuity(w, g, 1e-8, 0.1).value() == doctest::Approx(before).epsilon(1e-12));
}

TEST_CASE("type-one indicator") {
    std::vector<DiagnosticsRecord> s(3);
    for (int k = 0; k < 3; ++k) {
        s[k].t = 0.1 * k;
        s[k].max_v = 2.0;
    }
    const auto ind = type_one_indicator(s, 1.0);
    REQUIRE(ind.size() == 3);
    for (int k = 0; k < 3; ++k) {
        CHECK(ind[k].first == s[k].t);
        CHECK(ind[k].second == doctest::Approx(2.0 * std::sqrt(1.0 - s[k].t)));
    }
    CHECK(ind[1].second < ind[0].second);

    for (auto &r : s) r.max_v = 0.0;
    for (auto [t, v] : type_one_indicator(s, 1.0)) CHECK(v == 0.0);
    CHECK_THROWS_AS(type_one_indicator(s, 0.2), ParameterError);
}

#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>

#include "saddlesim/fields_ops.hpp"
#include "saddlesim/initial_data.hpp"
#include "saddlesim/solver.hpp"

using namespace saddlesim;

namespace {

MeridianGrid<double> small_grid(int nr = 17, int nz = 33, double grading = 0.95) {
    GridSpec spec;
    spec.nr = nr;
    spec.nz = nz;
    spec.grading = grading;
    return build_grid<double>(spec);
}

void check_no_slip(const FieldState<double> &s, const MeridianGrid<double> &g) {
    for (int j = 0; j < g.nz(); ++j)
        for (int i = 0; i < g.nr(); ++i) {
            const int k = g.index(i, j);
            if (g.is_wall(i, j)) {
                CHECK(s.u_r(k) == 0.0);
                CHECK(s.u_theta(k) == 0.0);
                CHECK(s.u_z(k) == 0.0);
            }
            if (g.is_axis(i)) {
                CHECK(s.u_r(k) == 0.0);
                CHECK(s.u_theta(k) == 0.0);
            }
        }
}

} // namespace

TEST_CASE("backtrack in a zero field returns the point") {
    const auto g = small_grid();
    const auto s = FieldState<double>::zeros(g);
    const auto x = backtrack(s, g, 0.37, 0.21, 0.05);
    CHECK(x.r == 0.37);
    CHECK(x.z == 0.21);
}

TEST_CASE("backtrack along a uniform radial velocity") {
    const auto g = small_grid();
    auto s = FieldState<double>::zeros(g);
    s.u_r.setConstant(0.1);
    const auto x = backtrack(s, g, 0.5, 0.0, 0.01);
    CHECK(x.r == doctest::Approx(0.499).epsilon(1e-14));
    CHECK(x.z == doctest::Approx(0.0));
}

TEST_CASE("departures leaving the domain stop on the boundary segment") {
    const auto g = small_grid();
    auto s = FieldState<double>::zeros(g);
    SUBCASE("through r = 1") {
        s.u_r.setConstant(-1.0);
        s.u_z.setConstant(0.5);
        const auto x = backtrack(s, g, 0.95, 0.1, 0.1);
        CHECK(x.r == doctest::Approx(1.0));
        CHECK(x.z == doctest::Approx(0.075));
    }
    SUBCASE("through the lower wall") {
        s.u_z.setConstant(2.0);
        const auto x = backtrack(s, g, 0.3, -0.1, 0.1);
        CHECK(x.r == doctest::Approx(0.3));
        CHECK(x.z == g.z_min());
    }
    SUBCASE("through the axis") {
        s.u_r.setConstant(5.0);
        const auto x = backtrack(s, g, 0.2, 0.0, 0.1);
        CHECK(x.r == 0.0);
    }
}

TEST_CASE("interpolate is exact at nodes and for affine fields") {
    const auto g = small_grid();
    auto s = FieldState<double>::zeros(g);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int k = 0; k < g.size(); ++k) s.u_theta(k) = u(rng);
    for (int j = 0; j < g.nz(); ++j)
        for (int i = 0; i < g.nr(); ++i) s.u_z(g.index(i, j)) = 2 * g.r(i) + 3 * g.z(j);

    CHECK(interpolate(s, g, g.r(4), g.z(9)).u_theta == s.u_theta(g.index(4, 9)));
    std::uniform_real_distribution<double> rr(0, 1), zz(g.z_min(), g.z_max());
    for (int k = 0; k < 200; ++k) {
        const double r = rr(rng), z = zz(rng);
        CHECK(interpolate(s, g, r, z).u_z == doctest::Approx(2 * r + 3 * z).epsilon(1e-13));
    }
    CHECK_THROWS_AS(interpolate(s, g, 1.5, 0.0), OutOfDomainError);
    CHECK_THROWS_AS(interpolate(s, g, 0.5, 0.9), OutOfDomainError);
}

TEST_CASE("stepper rejects bad parameters") {
    const auto g = small_grid();
    CHECK_THROWS_AS(AxisymmetricStepper<double>(g, 0.0, 0.01), ParameterError);
    CHECK_THROWS_AS(AxisymmetricStepper<double>(g, 100.0, -0.01), ParameterError);
    SolverSettings bad;
    bad.delta0 = 0.0;
    CHECK_THROWS_AS(AxisymmetricStepper<double>(g, 100.0, 0.01, bad), ParameterError);
    bad = {};
    bad.lin_tol = 1.0;
    CHECK_THROWS_AS(AxisymmetricStepper<double>(g, 100.0, 0.01, bad), ParameterError);
    CHECK_THROWS_AS(AxisymmetricStepper<double>(small_grid(2, 5), 100.0, 0.01), ParameterError);
}

TEST_CASE("zero state stays exactly zero") {
    const auto g = small_grid();
    const AxisymmetricStepper<double> st(g, 1000.0, 0.01);
    auto s = FieldState<double>::zeros(g);
    for (int k = 1; k <= 20; ++k) s = st.advance(s, {}, k);
    CHECK(s.u_r.isZero(0.0));
    CHECK(s.u_theta.isZero(0.0));
    CHECK(s.u_z.isZero(0.0));
    CHECK(s.p.isZero(0.0));
    CHECK(s.t == doctest::Approx(0.2));
}

TEST_CASE("first step imposes no-slip and axis conditions exactly") {
    const auto g = small_grid();
    const AxisymmetricStepper<double> st(g, 5000.0, 0.0125);
    auto s = initial_field(InitialParams{}, g);
    for (int k = 1; k <= 4; ++k) {
        s = st.advance(s, {}, k);
        CHECK_FALSE(s.pre_stage);
        CHECK(s.all_finite());
        check_no_slip(s, g);
    }
}

TEST_CASE("no swirl in, no swirl out") {
    const auto g = small_grid();
    const AxisymmetricStepper<double> st(g, 5000.0, 0.01);
    InitialParams p;
    p.swirl = false;
    auto s = initial_field(p, g);
    for (int k = 1; k <= 10; ++k) {
        s = st.advance(s, {}, k);
        CHECK(s.u_theta.cwiseAbs().maxCoeff() <= 1e-10 * s.speed().maxCoeff());
    }
}

TEST_CASE("pressure comes out with zero weighted mean") {
    const auto g = small_grid();
    const AxisymmetricStepper<double> st(g, 1000.0, 0.01);
    const auto s = st.advance(initial_field(InitialParams{}, g), {}, 1);
    const double mean = g.volume_weights().dot(s.p) / g.volume_weights().sum();
    CHECK(std::abs(mean) < 1e-12 * (1.0 + s.p.cwiseAbs().maxCoeff()));
}

TEST_CASE("unforced low-Re energy does not grow") {
    const auto g = small_grid(25, 61);
    const AxisymmetricStepper<double> st(g, 1000.0, 0.005);
    auto s = st.advance(initial_field(InitialParams{}, g), {}, 1);
    double e = kinetic_energy(s, g);
    for (int k = 2; k <= 40; ++k) {
        s = st.advance(s, {}, k);
        const double next = kinetic_energy(s, g);
        CHECK(next <= e * 1.01);
        e = next;
    }
}

TEST_CASE("linear solver failure reports its residual history") {
    const auto g = small_grid();
    SolverSettings tight;
    tight.lin_tol = 1e-300;
    tight.lin_maxit = 2;
    const AxisymmetricStepper<double> st(g, 1000.0, 0.01, tight);
    try {
        st.advance(initial_field(InitialParams{}, g), {}, 7);
        FAIL("expected a step failure");
    } catch (const StepFailure &e) {
        CHECK(e.step() == 7);
        CHECK(e.residuals().size() == 3);
        CHECK(e.kind() == "step_failure");
    }
}

TEST_CASE("non-finite input is reported as divergence") {
    const auto g = small_grid();
    const AxisymmetricStepper<double> st(g, 1000.0, 0.01);
    auto s = initial_field(InitialParams{}, g);
    s.u_z(g.index(3, 5)) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(st.advance(s, {}, 3), DivergenceError);
}

TEST_CASE("local and representative stabilization lengths") {
    const auto g = small_grid();
    SolverSettings rep;
    rep.h_rule = HRule::Representative;
    const AxisymmetricStepper<double> a(g, 100.0, 0.01), b(g, 100.0, 0.01, rep);
    CHECK(b.stabilization_h(3, 3) == g.h_avg());
    CHECK(a.stabilization_h(1, 5) < a.stabilization_h(g.nr() - 2, 5));
    CHECK(a.stabilization_h(g.nr() - 2, 5) <= g.h_max());
}

TEST_CASE("implicit swirl coupling keeps an axis line vortex bounded") {
    const auto g = small_grid(25, 61);
    const AxisymmetricStepper<double> st(g, 5000.0, 0.0125);
    auto s = initial_field(InitialParams{}, g);
    for (int k = 1; k <= 16; ++k) {
        s = st.advance(s, {}, k);
        CHECK(s.speed().maxCoeff() < 10.0);
    }
}

TEST_CASE("explicit and implicit coupling differ at second order in tau") {
    const auto g = small_grid();
    const double z0 = g.z_min(), z1 = g.z_max();
    auto s = FieldState<double>::zeros(g);
    for (int j = 0; j < g.nz(); ++j)
        for (int i = 0; i < g.nr(); ++i) {
            const double r = g.r(i), z = g.z(j);
            s.u_theta(g.index(i, j)) = 40 * r * (1 - r) * (z - z0) * (z1 - z);
        }
    SolverSettings ex;
    ex.coupling = SwirlCoupling::Explicit;
    auto gap = [&](double tau) {
        const AxisymmetricStepper<double> a(g, 1000.0, tau), b(g, 1000.0, tau, ex);
        const auto sa = a.advance(s, {}, 1), sb = b.advance(s, {}, 1);
        return std::max((sa.u_r - sb.u_r).cwiseAbs().maxCoeff(), (sa.u_theta - sb.u_theta).cwiseAbs().maxCoeff());
    };
    const double g1 = gap(1e-3), g2 = gap(1e-4);
    CHECK(g1 > 0.0);
    CHECK(g1 / g2 > 30.0);
}

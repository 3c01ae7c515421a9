#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "saddlesim/solver.hpp"

namespace saddlesim {

/// Dense polynomial sum c[k] x^k.
template <typename Scalar = double>
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<Scalar> coeffs) : c_(std::move(coeffs)) {}

    Scalar operator()(Scalar x) const {
        Scalar acc{0};
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    const std::vector<Scalar> &coeffs() const { return c_; }

    Polynomial derivative() const {
        std::vector<Scalar> d;
        for (std::size_t k = 1; k < c_.size(); ++k) d.push_back(Scalar(k) * c_[k]);
        return Polynomial(d);
    }

    Polynomial operator*(const Polynomial &o) const {
        if (c_.empty() || o.c_.empty()) return {};
        std::vector<Scalar> p(c_.size() + o.c_.size() - 1, Scalar(0));
        for (std::size_t a = 0; a < c_.size(); ++a)
            for (std::size_t b = 0; b < o.c_.size(); ++b) p[a + b] += c_[a] * o.c_[b];
        return Polynomial(p);
    }

    /// p(x) / x; the constant coefficient must vanish.
    Polynomial over_x() const {
        if (!c_.empty() && c_[0] != Scalar(0)) throw ParameterError("polynomial is not divisible by x");
        return c_.empty() ? Polynomial{} : Polynomial(std::vector<Scalar>(c_.begin() + 1, c_.end()));
    }

    /// f'' + f'/r - f/r^2 for f odd in r: sum c_k (k^2 - 1) r^(k-2).
    Polynomial cyl_laplacian_odd() const {
        std::vector<Scalar> d(c_.size() > 2 ? c_.size() - 2 : 0, Scalar(0));
        for (std::size_t k = 0; k < c_.size(); ++k) {
            if (c_[k] == Scalar(0)) continue;
            if (k % 2 == 0) throw ParameterError("cyl_laplacian_odd needs an odd polynomial");
            if (k >= 3) d[k - 2] += Scalar(k * k - 1) * c_[k];
        }
        return Polynomial(d);
    }

    /// f'' + f'/r for f even in r: sum c_k k^2 r^(k-2).
    Polynomial cyl_laplacian_even() const {
        std::vector<Scalar> d(c_.size() > 2 ? c_.size() - 2 : 0, Scalar(0));
        for (std::size_t k = 0; k < c_.size(); ++k) {
            if (c_[k] == Scalar(0)) continue;
            if (k % 2 == 1) throw ParameterError("cyl_laplacian_even needs an even polynomial");
            if (k >= 2) d[k - 2] += Scalar(k * k) * c_[k];
        }
        return Polynomial(d);
    }

private:
    std::vector<Scalar> c_;
};

/// Smooth swirling solution in the cylinder r < 1, z0 < z < z1, built from
/// the stream function
///
///   psi = r^2 (1 - r^2)^2 Q(z) S(t),  Q = ((z - z0)(z1 - z))^2 / (L/2)^4
///
/// so that u_r = -A(r) Q' S and u_z = B(r) Q S with A = r (1 - r^2)^2 and
/// B = 2 - 8 r^2 + 6 r^4. Both vanish with the right parity on the axis
/// (d_r u_z = 0 there) and on every wall. The swirl is u_theta = r (1 - r^2) Q S
/// and the pressure p = P0 cos(pi r) cos(pi (z - z0) / L) S has zero normal
/// derivative on the whole boundary. S(t) = 1 + sin(t) / 2.
template <typename Scalar = double>
class ManufacturedCase {
public:
    ManufacturedCase(Scalar re, Scalar z0, Scalar z1, Scalar p0 = Scalar(1))
        : nu_(Scalar(1) / re), z0_(z0), z1_(z1), p0_(p0) {
        if (!(re > Scalar(0))) throw ParameterError("Reynolds number must be positive");
        if (!(z1 > z0)) throw ParameterError("manufactured case needs z1 > z0");
        a_ = Polynomial<Scalar>({0, 1, 0, -2, 0, 1});
        b_ = Polynomial<Scalar>({2, 0, -8, 0, 6});
        c_ = Polynomial<Scalar>({0, 1, 0, -1});
        const Scalar half = (z1 - z0) / 2, h4 = half * half * half * half;
        // (z - z0)(z1 - z) = -z^2 + (z0 + z1) z - z0 z1
        const Polynomial<Scalar> bump({-z0 * z1, z0 + z1, Scalar(-1)});
        const auto sq = bump * bump;
        std::vector<Scalar> q = sq.coeffs();
        for (auto &v : q) v /= h4;
        q_ = Polynomial<Scalar>(q);
    }

    Scalar nu() const { return nu_; }
    Scalar z0() const { return z0_; }
    Scalar z1() const { return z1_; }

    Scalar s(Scalar t) const {
        using std::sin;
        return 1 + sin(t) / 2;
    }
    Scalar ds(Scalar t) const {
        using std::cos;
        return cos(t) / 2;
    }

    Scalar u_r(Scalar r, Scalar z, Scalar t) const { return -a_(r) * q_.derivative()(z) * s(t); }
    Scalar u_theta(Scalar r, Scalar z, Scalar t) const { return c_(r) * q_(z) * s(t); }
    Scalar u_z(Scalar r, Scalar z, Scalar t) const { return b_(r) * q_(z) * s(t); }
    Scalar p(Scalar r, Scalar z, Scalar t) const {
        using std::cos;
        const Scalar pi = std::numbers::pi_v<Scalar>;
        return p0_ * cos(pi * r) * cos(pi * (z - z0_) / (z1_ - z0_)) * s(t);
    }

    /// Body force that makes the fields above an exact solution of the
    /// axisymmetric Navier-Stokes equations with viscosity 1/re.
    BodyForce<Scalar> forcing(Scalar r, Scalar z, Scalar t) const {
        using std::cos;
        using std::sin;
        const Scalar pi = std::numbers::pi_v<Scalar>;
        const Scalar k = pi / (z1_ - z0_);
        const Scalar S = s(t), dS = ds(t);

        const auto da = a_.derivative(), db = b_.derivative(), dc = c_.derivative();
        const auto q1 = q_.derivative(), q2 = q1.derivative(), q3 = q2.derivative();
        const Scalar A = a_(r), B = b_(r), C = c_(r);
        const Scalar Q = q_(z), Q1 = q1(z), Q2 = q2(z), Q3 = q3(z);

        const Scalar ur = -A * Q1 * S, uz = B * Q * S;
        const Scalar ur_r = -da(r) * Q1 * S, ur_z = -A * Q2 * S;
        const Scalar uz_r = db(r) * Q * S, uz_z = B * Q1 * S;
        const Scalar ut_r = dc(r) * Q * S, ut_z = C * Q1 * S;

        const Scalar lap_ur = -(a_.cyl_laplacian_odd()(r) * Q1 + A * Q3) * S;
        const Scalar lap_ut = (c_.cyl_laplacian_odd()(r) * Q + C * Q2) * S;
        const Scalar lap_uz = (b_.cyl_laplacian_even()(r) * Q + B * Q2) * S;

        // u_theta^2 / r and u_r u_theta / r without dividing by r
        const Scalar centrifugal = (c_ * c_).over_x()(r) * Q * Q * S * S;
        const Scalar coriolis = -a_.over_x()(r) * C * Q1 * Q * S * S;

        const Scalar p_r = -p0_ * pi * sin(pi * r) * cos(k * (z - z0_)) * S;
        const Scalar p_z = -p0_ * k * cos(pi * r) * sin(k * (z - z0_)) * S;

        BodyForce<Scalar> f;
        f.f_r = -A * Q1 * dS + ur * ur_r + uz * ur_z - centrifugal + p_r - nu_ * lap_ur;
        f.f_theta = C * Q * dS + ur * ut_r + uz * ut_z + coriolis - nu_ * lap_ut;
        f.f_z = B * Q * dS + ur * uz_r + uz * uz_z + p_z - nu_ * lap_uz;
        return f;
    }

    ForcingFn<Scalar> forcing_fn() const {
        return [c = *this](Scalar r, Scalar z, Scalar t) { return c.forcing(r, z, t); };
    }

    /// Nodal samples at time t.
    FieldState<Scalar> state(const MeridianGrid<Scalar> &g, Scalar t) const {
        auto st = FieldState<Scalar>::zeros(g, t);
        for (int j = 0; j < g.nz(); ++j)
            for (int i = 0; i < g.nr(); ++i) {
                const int n = g.index(i, j);
                const Scalar r = g.r(i), z = g.z(j);
                st.u_r(n) = u_r(r, z, t);
                st.u_theta(n) = u_theta(r, z, t);
                st.u_z(n) = u_z(r, z, t);
                st.p(n) = p(r, z, t);
            }
        return st;
    }

private:
    Scalar nu_, z0_, z1_, p0_;
    Polynomial<Scalar> a_, b_, c_, q_;
};

/// The fixed case on the grid's own z-range.
template <typename Scalar>
ManufacturedCase<Scalar> manufactured_case(Scalar re, const MeridianGrid<Scalar> &g) {
    return ManufacturedCase<Scalar>(re, g.z_min(), g.z_max());
}

template <typename Scalar>
struct ErrorNorms {
    Scalar l2{0};
    Scalar h1{0};
    Scalar p_l2{0};
};

/// Cylindrical L2 and H1-seminorm of the velocity difference, plus the L2
/// norm of the mean-free pressure difference.
///
/// The H1 part sums squared edge differences weighted by the measure of the
/// edge's dual strip, and adds the hoop terms (e_r^2 + e_theta^2) / r^2 that
/// come from differentiating the unit vectors e_r and e_theta.
template <typename Scalar>
ErrorNorms<Scalar> discrete_norms(const FieldState<Scalar> &a, const FieldState<Scalar> &b,
                                  const MeridianGrid<Scalar> &g) {
    using std::sqrt;
    const int n = g.size();
    if (a.u_r.size() != n || b.u_r.size() != n) throw ParameterError("state does not match the grid");
    const VectorX<Scalar> er = a.u_r - b.u_r, et = a.u_theta - b.u_theta, ez = a.u_z - b.u_z;
    const auto &w = g.volume_weights();
    const Scalar pi = std::numbers::pi_v<Scalar>;

    ErrorNorms<Scalar> out;
    out.l2 = sqrt((w.array() * (er.array().square() + et.array().square() + ez.array().square())).sum());

    auto edge = [&](int p, int q) {
        return (er(p) - er(q)) * (er(p) - er(q)) + (et(p) - et(q)) * (et(p) - et(q)) +
               (ez(p) - ez(q)) * (ez(p) - ez(q));
    };
    Scalar h1{0};
    for (int j = 0; j < g.nz(); ++j)
        for (int i = 0; i + 1 < g.nr(); ++i) {
            const Scalar h = g.dr(i);
            const Scalar strip = pi * (g.r(i + 1) * g.r(i + 1) - g.r(i) * g.r(i)) * g.axial_weight(j);
            h1 += strip * edge(g.index(i, j), g.index(i + 1, j)) / (h * h);
        }
    for (int j = 0; j + 1 < g.nz(); ++j)
        for (int i = 0; i < g.nr(); ++i) {
            const Scalar h = g.dz(j);
            h1 += 2 * pi * g.radial_weight(i) * h * edge(g.index(i, j), g.index(i, j + 1)) / (h * h);
        }
    for (int j = 0; j < g.nz(); ++j)
        for (int i = 1; i < g.nr(); ++i) {
            const int k = g.index(i, j);
            const Scalar r = g.r(i);
            h1 += w(k) * (er(k) * er(k) + et(k) * et(k)) / (r * r);
        }
    out.h1 = sqrt(h1);

    const Scalar vol = w.sum();
    VectorX<Scalar> ep = a.p - b.p;
    ep.array() -= w.dot(ep) / vol;
    out.p_l2 = sqrt((w.array() * ep.array().square()).sum());
    return out;
}

/// Errors of a numerical state against the case sampled at the state's time.
template <typename Scalar>
ErrorNorms<Scalar> discrete_norms(const FieldState<Scalar> &numeric, const ManufacturedCase<Scalar> &exact,
                                  const MeridianGrid<Scalar> &g) {
    return discrete_norms(numeric, exact.state(g, numeric.t), g);
}

} // namespace saddlesim

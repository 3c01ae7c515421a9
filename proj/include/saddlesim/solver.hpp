#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <vector>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "saddlesim/field.hpp"
#include "saddlesim/stencil.hpp"

namespace saddlesim {

/// Which mesh size enters the pressure stabilization delta0 * h^2.
enum class HRule { LocalCell, Representative };

/// Coupling between swirl and meridional flow. Explicit takes the
/// centrifugal force from the previous level at the departure point and
/// solves the circulation separately. Implicit linearizes the centrifugal
/// force and the radial advection of the circulation and solves everything
/// in one system, which stays bounded when the core rotation rate times
/// tau is large. Axial advection of the circulation stays on the
/// characteristic; linearizing it as well destabilizes the wall layers.
enum class SwirlCoupling { Implicit, Explicit };

struct SolverSettings {
    double delta0 = 1.0;
    double lin_tol = 1e-8;
    /// Cap on iterative-refinement sweeps after the direct solve.
    int lin_maxit = 20;
    HRule h_rule = HRule::LocalCell;
    SwirlCoupling coupling = SwirlCoupling::Implicit;
};

/// Body force per unit mass in the r, theta and z momentum equations.
template <typename Scalar>
struct BodyForce {
    Scalar f_r{0};
    Scalar f_theta{0};
    Scalar f_z{0};
};

template <typename Scalar>
using ForcingFn = std::function<BodyForce<Scalar>(Scalar r, Scalar z, Scalar t)>;

/// One time step of the stabilized characteristics scheme on the meridian
/// plane:
///
///   (u^k - u^{k-1}(X)) / tau - nu (Lap u^k - u_r^k / r^2 e_r) + grad p^k
///        = (u_theta^2 / r)^{k-1}(X) e_r + f
///   div u^k - delta0 h^2 Lap p^k = 0
///
/// for (u_r, u_z, p) as one coupled system, followed by
///
///   (G^k - G^{k-1}(X)) / tau - nu (d_rr - (1/r) d_r + d_zz) G^k = r f_theta
///
/// for the circulation G = r u_theta. X is the foot of the meridional
/// characteristic. With explicit coupling the operators do not depend on
/// the solution: both systems are factored once and every step costs two
/// back-substitutions. With implicit coupling (the default) the momentum
/// equations instead carry
///
///   (2 G^ G^k - G^^2) / r^3              in place of the centrifugal force
///   (u_r^k - u_r^{k-1}) d_r G^{k-1}       added to the circulation equation
///
/// with G^ = G^{k-1}(X), and one system in (u_r, u_z, p, G) is refactored
/// each step that has swirl. Not reentrant: one stepper per thread.
template <typename Scalar = double>
class AxisymmetricStepper {
public:
    using SparseMatrix = Eigen::SparseMatrix<Scalar>;
    using Triplet = Eigen::Triplet<Scalar>;
    using LinearSolver = Eigen::SparseLU<SparseMatrix>;

    AxisymmetricStepper(const MeridianGrid<Scalar> &grid, Scalar re, Scalar tau, SolverSettings settings = {})
        : grid_(grid), nu_(Scalar(1) / re), tau_(tau), settings_(settings) {
        if (!(re > Scalar(0))) throw ParameterError("Reynolds number must be positive");
        if (!(tau > Scalar(0))) throw ParameterError("time step must be positive");
        if (!(settings.delta0 > 0.0)) throw ParameterError("delta0 must be positive");
        if (!(settings.lin_tol > 0.0 && settings.lin_tol < 1.0)) throw ParameterError("lin_tol must lie in (0, 1)");
        if (settings.lin_maxit < 0) throw ParameterError("lin_maxit must be non-negative");
        if (grid.nr() < 3 || grid.nz() < 3)
            throw ParameterError("solver needs at least 3 nodes in each direction");
        assemble_coupled();
        assemble_circulation();
    }

    const MeridianGrid<Scalar> &grid() const { return grid_; }
    Scalar tau() const { return tau_; }
    Scalar nu() const { return nu_; }

    /// Stabilization length at node (i, j).
    Scalar stabilization_h(int i, int j) const {
        if (settings_.h_rule == HRule::Representative) return grid_.h_avg();
        const auto &g = grid_;
        const Scalar hr = (g.dr(std::max(i - 1, 0)) + g.dr(std::min(i, g.nr() - 2))) / 2;
        const Scalar hz = (g.dz(std::max(j - 1, 0)) + g.dz(std::min(j, g.nz() - 2))) / 2;
        return std::max(hr, hz);
    }

    /// Advance `prev` by one step. `step` only labels errors.
    FieldState<Scalar> advance(const FieldState<Scalar> &prev, const ForcingFn<Scalar> &forcing = {},
                               long step = 0) const {
        const auto &g = grid_;
        const int n = g.size();
        if (prev.u_r.size() != n || prev.u_z.size() != n || prev.u_theta.size() != n)
            throw ParameterError("state does not match the grid");
        const Scalar t_new = prev.t + tau_;
        if (!prev.u_r.allFinite() || !prev.u_z.allFinite() || !prev.u_theta.allFinite())
            throw DivergenceError(static_cast<double>(prev.t), step);

        VectorX<Scalar> circulation(n), centrifugal(n);
        for (int j = 0; j < g.nz(); ++j)
            for (int i = 0; i < g.nr(); ++i) {
                const int k = g.index(i, j);
                const Scalar r = g.r(i);
                circulation(k) = r * prev.u_theta(k);
                centrifugal(k) = r > Scalar(0) ? prev.u_theta(k) * prev.u_theta(k) / r : Scalar(0);
            }
        const bool implicit = settings_.coupling == SwirlCoupling::Implicit && !circulation.isZero(0.0);

        VectorX<Scalar> rhs = VectorX<Scalar>::Zero(implicit ? 4 * n + 1 : 3 * n + 1);
        VectorX<Scalar> rhs_g = VectorX<Scalar>::Zero(n);
        std::vector<Triplet> dyn;
        if (implicit) dyn.reserve(static_cast<std::size_t>(n) * 3);
        for (int j = 1; j < g.nz() - 1; ++j)
            for (int i = 1; i < g.nr() - 1; ++i) {
                const int k = g.index(i, j);
                const Scalar r = g.r(i), z = g.z(j);
                const auto foot = clamp_departure(g, r, z, r - prev.u_r(k) * tau_, z - prev.u_z(k) * tau_);
                const auto loc = g.locate(foot.r, foot.z);
                BodyForce<Scalar> f{};
                if (forcing) f = forcing(r, z, t_new);
                const Scalar gam_hat = bilinear(g, circulation, loc);
                rhs(n + k) = bilinear(g, prev.u_z, loc) / tau_ + f.f_z;
                rhs_g(k) = gam_hat / tau_ + r * f.f_theta;
                if (!implicit) {
                    rhs(k) = bilinear(g, prev.u_r, loc) / tau_ + bilinear(g, centrifugal, loc) + f.f_r;
                    continue;
                }
                const Scalar r3 = r * r * r;
                rhs(k) = bilinear(g, prev.u_r, loc) / tau_ - gam_hat * gam_hat / r3 + f.f_r;
                dyn.emplace_back(ur(k), gm(k), -2 * gam_hat / r3);
                const Scalar gr = stencil::d_dr(g, circulation, i, j);
                dyn.emplace_back(gm(k), ur(k), gr);
                rhs_g(k) += prev.u_r(k) * gr;
            }

        if (!rhs.allFinite() || !rhs_g.allFinite()) throw DivergenceError(static_cast<double>(t_new), step);
        VectorX<Scalar> x, gam;
        if (implicit) {
            rhs.tail(n) = rhs_g;
            factor_full(dyn, step);
            x = solve(full_, lu_full_, rhs, step, "coupled swirl");
            x -= (x(lambda()) / spread_full_(lambda())) * spread_full_;
            gam = x.tail(n);
        } else {
            x = solve(coupled_, lu_coupled_, rhs, step, "momentum-continuity");
            x -= (x(lambda()) / spread_(lambda())) * spread_;
            gam = solve(circ_, lu_circ_, rhs_g, step, "circulation");
        }

        FieldState<Scalar> next = FieldState<Scalar>::zeros(g, t_new);
        next.p = x.segment(2 * n, n);
        next.p.array() -= mean_w_.dot(next.p);
        for (int j = 0; j < g.nz(); ++j)
            for (int i = 0; i < g.nr(); ++i) {
                const int k = g.index(i, j);
                if (g.is_wall(i, j)) continue; // strong no-slip: exactly zero
                next.u_z(k) = x(n + k);
                if (g.is_axis(i)) continue; // u_r = u_theta = 0 on the axis
                next.u_r(k) = x(k);
                next.u_theta(k) = gam(k) / g.r(i);
            }
        if (!next.all_finite()) throw DivergenceError(static_cast<double>(t_new), step);
        return next;
    }

private:
    int ur(int k) const { return k; }
    int uz(int k) const { return grid_.size() + k; }
    int pr(int k) const { return 2 * grid_.size() + k; }
    int lambda() const { return 3 * grid_.size(); }
    int gm(int k) const { return 3 * grid_.size() + 1 + k; }

    // Static blocks of the implicit system plus this step's coupling
    // entries; the sparsity pattern is analyzed on the first call only.
    void factor_full(const std::vector<Triplet> &dyn, long step) const {
        const int n = grid_.size();
        std::vector<Triplet> trip = static_trip_;
        trip.insert(trip.end(), dyn.begin(), dyn.end());
        full_.resize(4 * n + 1, 4 * n + 1);
        full_.setFromTriplets(trip.begin(), trip.end());
        full_.makeCompressed();
        if (!full_analyzed_) {
            lu_full_.analyzePattern(full_);
            full_analyzed_ = true;
        }
        lu_full_.factorize(full_);
        if (lu_full_.info() != Eigen::Success)
            throw StepFailure(step, {}, "factorization of the coupled swirl system failed");
        VectorX<Scalar> w = VectorX<Scalar>::Zero(4 * n + 1);
        w.head(3 * n + 1) = gauge_rhs_;
        spread_full_ = solve(full_, lu_full_, w, step, "pressure-gauge", 1e-10, 20);
        if (!(std::abs(spread_full_(lambda())) > Scalar(0)))
            throw StepFailure(step, {}, "pressure gauge correction is singular");
    }

    // Radial operator d_rr + c/r d_r at interior node i, into row `row` of
    // the unknown block starting at `offset`, scaled by `scale`.
    void add_radial(std::vector<Triplet> &trip, int row, int offset, int i, int j, Scalar first_coeff,
                    Scalar scale) const {
        const auto d2 = stencil::second_derivative(grid_.r_nodes(), i);
        const auto d1 = stencil::first_derivative(grid_.r_nodes(), i);
        const Scalar r = grid_.r(i);
        for (int m = 0; m < 3; ++m) {
            trip.emplace_back(row, offset + grid_.index(d2.first + m, j), scale * d2.c[m]);
            trip.emplace_back(row, offset + grid_.index(d1.first + m, j), scale * first_coeff / r * d1.c[m]);
        }
    }

    void add_axial(std::vector<Triplet> &trip, int row, int offset, int i, int j, Scalar scale) const {
        const auto d2 = stencil::second_derivative(grid_.z_nodes(), j);
        for (int m = 0; m < 3; ++m) trip.emplace_back(row, offset + grid_.index(i, d2.first + m), scale * d2.c[m]);
    }

    void add_dr(std::vector<Triplet> &trip, int row, int offset, int i, int j, Scalar scale) const {
        const auto d1 = stencil::first_derivative(grid_.r_nodes(), i);
        for (int m = 0; m < 3; ++m)
            if (d1.c[m] != Scalar(0)) trip.emplace_back(row, offset + grid_.index(d1.first + m, j), scale * d1.c[m]);
    }

    void add_dz(std::vector<Triplet> &trip, int row, int offset, int i, int j, Scalar scale) const {
        const auto d1 = stencil::first_derivative(grid_.z_nodes(), j);
        for (int m = 0; m < 3; ++m)
            if (d1.c[m] != Scalar(0)) trip.emplace_back(row, offset + grid_.index(i, d1.first + m), scale * d1.c[m]);
    }

    void assemble_coupled() {
        const auto &g = grid_;
        const int n = g.size();
        std::vector<Triplet> trip;
        trip.reserve(static_cast<std::size_t>(n) * 40);
        const Scalar inv_tau = Scalar(1) / tau_;
        const VectorX<Scalar> mean_w = g.volume_weights() / g.volume_weights().sum();

        for (int j = 0; j < g.nz(); ++j)
            for (int i = 0; i < g.nr(); ++i) {
                const int k = g.index(i, j);
                const bool wall = g.is_wall(i, j), axis = g.is_axis(i);
                const bool z_wall = j == 0 || j == g.nz() - 1;

                if (wall || axis) {
                    trip.emplace_back(ur(k), ur(k), Scalar(1));
                    if (wall)
                        trip.emplace_back(uz(k), uz(k), Scalar(1));
                    else // d_r u_z = 0, scaled to O(1) entries
                        add_dr(trip, uz(k), uz(0), i, j, g.dr(0));
                    if (z_wall)
                        add_dz(trip, pr(k), pr(0), i, j, g.dz(j == 0 ? 0 : j - 1));
                    else
                        add_dr(trip, pr(k), pr(0), i, j, g.dr(axis ? 0 : i - 1));
                    continue;
                }

                const Scalar r = g.r(i);
                // radial momentum
                trip.emplace_back(ur(k), ur(k), inv_tau + nu_ / (r * r));
                add_radial(trip, ur(k), ur(0), i, j, Scalar(1), -nu_);
                add_axial(trip, ur(k), ur(0), i, j, -nu_);
                add_dr(trip, ur(k), pr(0), i, j, Scalar(1));
                // axial momentum
                trip.emplace_back(uz(k), uz(k), inv_tau);
                add_radial(trip, uz(k), uz(0), i, j, Scalar(1), -nu_);
                add_axial(trip, uz(k), uz(0), i, j, -nu_);
                add_dz(trip, uz(k), pr(0), i, j, Scalar(1));
                // stabilized continuity
                const Scalar h = stabilization_h(i, j);
                const Scalar stab = -Scalar(settings_.delta0) * h * h;
                add_dr(trip, pr(k), ur(0), i, j, Scalar(1));
                trip.emplace_back(pr(k), ur(k), Scalar(1) / r);
                add_dz(trip, pr(k), uz(0), i, j, Scalar(1));
                add_radial(trip, pr(k), pr(0), i, j, Scalar(1), stab);
                add_axial(trip, pr(k), pr(0), i, j, stab);
            }
        const int pin = g.index(g.nr() / 2, g.nz() / 2);
        trip.emplace_back(pr(pin), lambda(), Scalar(1));
        trip.emplace_back(lambda(), pr(pin), Scalar(1));

        static_trip_ = trip;
        coupled_.resize(3 * n + 1, 3 * n + 1);
        coupled_.setFromTriplets(trip.begin(), trip.end());
        coupled_.makeCompressed();
        lu_coupled_.analyzePattern(coupled_);
        lu_coupled_.factorize(coupled_);
        if (lu_coupled_.info() != Eigen::Success)
            throw StepFailure(0, {}, "factorization of the momentum-continuity system failed");

        // Pinning one pressure value makes the system regular but shifts the
        // compatibility defect into a single continuity row. Spreading it
        // uniformly instead needs one extra solve with the weights as data.
        mean_w_ = mean_w;
        VectorX<Scalar> w = VectorX<Scalar>::Zero(3 * n + 1);
        for (int j = 1; j < g.nz() - 1; ++j)
            for (int i = 1; i < g.nr() - 1; ++i) w(pr(g.index(i, j))) = mean_w(g.index(i, j));
        gauge_rhs_ = w;
        spread_ = solve(coupled_, lu_coupled_, w, 0, "pressure-gauge", 1e-10, 20);
        if (!(std::abs(spread_(lambda())) > Scalar(0)))
            throw StepFailure(0, {}, "pressure gauge correction is singular");
    }

    void assemble_circulation() {
        const auto &g = grid_;
        const int n = g.size();
        std::vector<Triplet> trip;
        trip.reserve(static_cast<std::size_t>(n) * 10);
        for (int j = 0; j < g.nz(); ++j)
            for (int i = 0; i < g.nr(); ++i) {
                const int k = g.index(i, j);
                if (g.is_wall(i, j) || g.is_axis(i)) {
                    trip.emplace_back(k, k, Scalar(1));
                    continue;
                }
                trip.emplace_back(k, k, Scalar(1) / tau_);
                add_radial(trip, k, 0, i, j, Scalar(-1), -nu_);
                add_axial(trip, k, 0, i, j, -nu_);
            }
        for (const auto &t : trip) static_trip_.emplace_back(gm(t.row()), gm(t.col()), t.value());
        // coupling slots, present in the pattern even where they are zero
        for (int j = 1; j < g.nz() - 1; ++j)
            for (int i = 1; i < g.nr() - 1; ++i) {
                const int k = g.index(i, j);
                static_trip_.emplace_back(ur(k), gm(k), Scalar(0));
                static_trip_.emplace_back(gm(k), ur(k), Scalar(0));
            }
        circ_.resize(n, n);
        circ_.setFromTriplets(trip.begin(), trip.end());
        circ_.makeCompressed();
        lu_circ_.analyzePattern(circ_);
        lu_circ_.factorize(circ_);
        if (lu_circ_.info() != Eigen::Success)
            throw StepFailure(0, {}, "factorization of the circulation system failed");
    }

    /// Direct solve followed by iterative refinement until the relative
    /// residual drops below lin_tol.
    VectorX<Scalar> solve(const SparseMatrix &a, const LinearSolver &lu, const VectorX<Scalar> &b, long step,
                          const char *what) const {
        return solve(a, lu, b, step, what, settings_.lin_tol, settings_.lin_maxit);
    }

    VectorX<Scalar> solve(const SparseMatrix &a, const LinearSolver &lu, const VectorX<Scalar> &b, long step,
                          const char *what, double tol, int maxit) const {
        using std::isfinite;
        const Scalar bnorm = b.norm();
        if (bnorm == Scalar(0)) return VectorX<Scalar>::Zero(b.size());
        VectorX<Scalar> x = lu.solve(b);
        std::vector<double> history;
        for (int it = 0;; ++it) {
            const VectorX<Scalar> res = b - a * x;
            const Scalar rel = res.norm() / bnorm;
            history.push_back(static_cast<double>(rel));
            if (!isfinite(rel)) break;
            if (rel <= Scalar(tol)) return x;
            if (it >= maxit) break;
            x += lu.solve(res);
        }
        std::ostringstream os;
        os.precision(3);
        os << what << " solve did not reach relative residual " << tol << " at step " << step
           << " (last " << history.back() << " after " << history.size() << " sweeps)";
        throw StepFailure(step, std::move(history), os.str());
    }

    MeridianGrid<Scalar> grid_;
    Scalar nu_;
    Scalar tau_;
    SolverSettings settings_;
    SparseMatrix coupled_, circ_;
    LinearSolver lu_coupled_, lu_circ_;
    VectorX<Scalar> spread_;
    VectorX<Scalar> mean_w_;
    VectorX<Scalar> gauge_rhs_;
    std::vector<Triplet> static_trip_;
    mutable SparseMatrix full_;
    mutable LinearSolver lu_full_;
    mutable bool full_analyzed_ = false;
    mutable VectorX<Scalar> spread_full_;
};

} // namespace saddlesim

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "saddlesim/fields_ops.hpp"

namespace saddlesim {

/// One time sample of the monitored quantities.
struct DiagnosticsRecord {
    double t = 0;
    double max_v = 0;
    double arg_r = 0;
    double arg_z = 0;
    double dist_axis = 0;
    double min_core_uz = 0;
    double max_core_uz = 0;
    double energy = 0;
    double max_w = 0;
};

/// Core extremes use the nodes with r < r_core.
template <typename Scalar>
DiagnosticsRecord record(const FieldState<Scalar> &s, const MeridianGrid<Scalar> &g, double r_core) {
    if (!(r_core > 0.0 && r_core < 1.0)) throw ParameterError("r_core must lie in (0, 1)");
    const auto mv = max_velocity(s, g);
    DiagnosticsRecord rec;
    rec.t = static_cast<double>(s.t);
    rec.max_v = static_cast<double>(mv.value);
    rec.arg_r = static_cast<double>(mv.r);
    rec.arg_z = static_cast<double>(mv.z);
    rec.dist_axis = rec.arg_r;

    bool first = true;
    for (int j = 0; j < g.nz(); ++j)
        for (int i = 0; i < g.nr() && static_cast<double>(g.r(i)) < r_core; ++i) {
            const double uz = static_cast<double>(s.u_z(g.index(i, j)));
            if (first) {
                rec.min_core_uz = rec.max_core_uz = uz;
                first = false;
            }
            rec.min_core_uz = std::min(rec.min_core_uz, uz);
            rec.max_core_uz = std::max(rec.max_core_uz, uz);
        }
    rec.energy = static_cast<double>(kinetic_energy(s, g));
    const VectorX<Scalar> wm = vorticity(s, g).magnitude();
    rec.max_w = wm.size() ? static_cast<double>(wm.maxCoeff()) : 0.0;
    return rec;
}

/// Times at which the distance of the max-|v| point to the axis moves by at
/// least `jump` between consecutive records.
inline std::vector<double> detect_turning_points(const std::vector<DiagnosticsRecord> &series, double jump) {
    if (!(jump > 0.0)) throw ParameterError("jump threshold must be positive");
    std::vector<double> hits;
    for (std::size_t k = 1; k < series.size(); ++k)
        if (std::abs(series[k].dist_axis - series[k - 1].dist_axis) >= jump) hits.push_back(series[k].t);
    return hits;
}

enum class LineAxis { ParallelZ, ParallelX2 };

using Point3 = std::array<double, 3>;

/// (r, z) of a Cartesian point (x1, x2, x3), x3 along the symmetry axis.
inline MeridianPoint<double> meridian_coords(const Point3 &x) { return {std::hypot(x[0], x[1]), x[2]}; }

/// |w| and the Cartesian direction xi = w / |w| along a straight probe line.
struct LineSample {
    Point3 base{};
    Point3 direction{};
    std::vector<double> offsets;
    std::vector<double> w_mag;
    std::vector<Point3> xi;
    std::vector<bool> valid;
};

/// Samples x = base + offset * e along a line parallel to x3 (the symmetry
/// axis) or to x2. Vorticity is computed on the nodes, interpolated
/// bilinearly at (r, z) = (hypot(x1, x2), x3) and rotated to Cartesian axes
/// at the sample's own azimuth. Validity uses the same relative floor as
/// `direction`, against the nodal maximum of |w|.
template <typename Scalar>
LineSample sample_line(const FieldState<Scalar> &s, const MeridianGrid<Scalar> &g, const Point3 &base,
                       LineAxis axis, const std::vector<double> &offsets, double floor = 1e-8) {
    if (floor < 0.0) throw ParameterError("direction floor must be non-negative");
    for (std::size_t k = 1; k < offsets.size(); ++k)
        if (!(offsets[k] > offsets[k - 1])) throw ParameterError("line offsets must be strictly increasing");

    const auto w = vorticity(s, g);
    const VectorX<Scalar> mag = w.magnitude();
    const double cut = floor * (mag.size() ? static_cast<double>(mag.maxCoeff()) : 0.0);

    LineSample out;
    out.base = base;
    out.direction = axis == LineAxis::ParallelZ ? Point3{0, 0, 1} : Point3{0, 1, 0};
    out.offsets = offsets;
    for (double d : offsets) {
        const Point3 x{base[0] + d * out.direction[0], base[1] + d * out.direction[1],
                       base[2] + d * out.direction[2]};
        const auto [r, z] = meridian_coords(x);
        if (!g.contains(Scalar(r), Scalar(z))) {
            std::ostringstream os;
            os.precision(9);
            os << "line sample at offset " << d;
            throw OutOfDomainError(r, z, os.str());
        }
        const auto loc = g.locate(Scalar(r), Scalar(z));
        const double wr = static_cast<double>(bilinear(g, w.w_r, loc));
        const double wt = static_cast<double>(bilinear(g, w.w_theta, loc));
        const double wz = static_cast<double>(bilinear(g, w.w_z, loc));
        const double phi = r > 0.0 ? std::atan2(x[1], x[0]) : 0.0;
        const double c = std::cos(phi), sn = std::sin(phi);
        const Point3 wc{wr * c - wt * sn, wr * sn + wt * c, wz};
        const double m = std::sqrt(wc[0] * wc[0] + wc[1] * wc[1] + wc[2] * wc[2]);
        const bool ok = m > cut && m > 0.0;
        out.w_mag.push_back(m);
        out.valid.push_back(ok);
        out.xi.push_back(ok ? Point3{wc[0] / m, wc[1] / m, wc[2] / m} : Point3{0, 0, 0});
    }
    return out;
}

/// Optional restriction of `alignment_discontinuity` to z_lo <= z <= z_hi.
struct ZBand {
    double z_lo;
    double z_hi;
};

/// Largest |xi(x) - xi(y)| over valid node pairs at meridian distance
/// <= sep. Empty when no such pair exists.
template <typename Scalar>
std::optional<double> alignment_discontinuity(const DirectionField<Scalar> &xi, const MeridianGrid<Scalar> &g,
                                              double sep, std::optional<ZBand> band = std::nullopt) {
    if (!(sep > 0.0)) throw ParameterError("separation must be positive");
    auto in_band = [&](int j) {
        const double z = static_cast<double>(g.z(j));
        return !band || (z >= band->z_lo && z <= band->z_hi);
    };
    auto ok = [&](int i, int j) { return xi.valid[static_cast<std::size_t>(g.index(i, j))] && in_band(j); };

    std::optional<double> best;
    for (int j = 0; j < g.nz(); ++j)
        for (int i = 0; i < g.nr(); ++i) {
            if (!ok(i, j)) continue;
            const int a = g.index(i, j);
            const double ra = static_cast<double>(g.r(i)), za = static_cast<double>(g.z(j));
            // visit each unordered pair once: later rows, or same row further out
            for (int jj = j; jj < g.nz() && static_cast<double>(g.z(jj)) - za <= sep; ++jj)
                for (int ii = jj == j ? i + 1 : 0; ii < g.nr(); ++ii) {
                    const double dr = static_cast<double>(g.r(ii)) - ra;
                    if (dr > sep) break;
                    if (-dr > sep || !ok(ii, jj)) continue;
                    const double dz = static_cast<double>(g.z(jj)) - za;
                    if (dr * dr + dz * dz > sep * sep) continue;
                    const int b = g.index(ii, jj);
                    const double d = std::sqrt(std::pow(static_cast<double>(xi.xi_r(a) - xi.xi_r(b)), 2) +
                                               std::pow(static_cast<double>(xi.xi_theta(a) - xi.xi_theta(b)), 2) +
                                               std::pow(static_cast<double>(xi.xi_z(a) - xi.xi_z(b)), 2));
                    if (!best || d > *best) best = d;
                }
        }
    return best;
}

template <typename Scalar>
std::optional<double> alignment_discontinuity(const VorticityField<Scalar> &w, const MeridianGrid<Scalar> &g,
                                              double floor, double sep, std::optional<ZBand> band = std::nullopt) {
    if (!(floor > 0.0 && floor < 1.0)) throw ParameterError("direction floor must lie in (0, 1)");
    return alignment_discontinuity(direction(w, Scalar(floor)), g, sep, band);
}

/// (t, max_v * sqrt(t_star - t)) for every record; bounded values are
/// consistent with a C / sqrt(T - t) growth rate.
inline std::vector<std::pair<double, double>> type_one_indicator(const std::vector<DiagnosticsRecord> &series,
                                                                 double t_star) {
    std::vector<std::pair<double, double>> out;
    out.reserve(series.size());
    for (const auto &rec : series) {
        if (!(t_star > rec.t)) throw ParameterError("t_star must exceed every recorded time");
        out.emplace_back(rec.t, rec.max_v * std::sqrt(t_star - rec.t));
    }
    return out;
}

} // namespace saddlesim

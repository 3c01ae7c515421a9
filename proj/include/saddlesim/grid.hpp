#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "saddlesim/errors.hpp"

namespace saddlesim {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Axial placement of the cylinder relative to the center of the initial data.
enum class DomainKind { Offset, Centered };

/// Cylinder of radius 1. Offset spans -a < z < 4a, Centered spans
/// -5a/2 < z < 5a/2.
struct DomainVariant {
    DomainKind kind = DomainKind::Offset;
    double a = 0.125;

    double z_min() const { return kind == DomainKind::Offset ? -a : -2.5 * a; }
    double z_max() const { return kind == DomainKind::Offset ? 4.0 * a : 2.5 * a; }
};

inline std::string to_string(DomainKind kind) {
    return kind == DomainKind::Offset ? "offset" : "centered";
}

struct GridSpec {
    int nr = 64;
    int nz = 160;
    /// Ratio between consecutive radial gaps, walking outward from the axis
    /// gap k+1 = gap k / grading. 1 gives a uniform grid.
    double grading = 0.964;
    DomainVariant variant{};
};

template <typename Scalar>
struct GridMetrics {
    Scalar h_max{0};
    Scalar h_min{0};
    Scalar h_avg{0};
};

/// Spacing statistics over every cell edge in both directions.
template <typename Scalar>
GridMetrics<Scalar> grid_metrics(const std::vector<Scalar> &r_nodes, const std::vector<Scalar> &z_nodes) {
    GridMetrics<Scalar> m;
    m.h_min = std::numeric_limits<Scalar>::infinity();
    Scalar sum{0};
    std::size_t count = 0;
    const auto nr = r_nodes.size(), nz = z_nodes.size();
    for (std::size_t i = 0; i + 1 < nr; ++i) {
        const Scalar d = r_nodes[i + 1] - r_nodes[i];
        m.h_max = std::max(m.h_max, d);
        m.h_min = std::min(m.h_min, d);
        // one radial edge per axial line
        sum += d * Scalar(nz);
        count += nz;
    }
    for (std::size_t j = 0; j + 1 < nz; ++j) {
        const Scalar d = z_nodes[j + 1] - z_nodes[j];
        m.h_max = std::max(m.h_max, d);
        m.h_min = std::min(m.h_min, d);
        sum += d * Scalar(nr);
        count += nr;
    }
    m.h_avg = count ? sum / Scalar(count) : Scalar(0);
    return m;
}

/// Cell containing a point, with local coordinates in [0,1]^2.
template <typename Scalar>
struct CellLocation {
    int i = 0;
    int j = 0;
    Scalar s{0}; ///< radial local coordinate
    Scalar t{0}; ///< axial local coordinate
};

/// Tensor grid on the meridian half-plane (r, z) in [0,1] x [z_min, z_max].
/// Nodes are flattened z-major: index(i, j) = j * nr + i.
template <typename Scalar = double>
class MeridianGrid {
public:
    MeridianGrid(std::vector<Scalar> r_nodes, std::vector<Scalar> z_nodes, DomainVariant variant = {})
        : r_(std::move(r_nodes)), z_(std::move(z_nodes)), variant_(variant) {
        if (r_.size() < 2 || z_.size() < 2)
            throw ParameterError("meridian grid needs at least two nodes per direction");
        for (std::size_t i = 1; i < r_.size(); ++i)
            if (!(r_[i] > r_[i - 1])) throw ParameterError("radial nodes must be strictly increasing");
        for (std::size_t j = 1; j < z_.size(); ++j)
            if (!(z_[j] > z_[j - 1])) throw ParameterError("axial nodes must be strictly increasing");
        metrics_ = saddlesim::grid_metrics(r_, z_);
        build_weights();
    }

    int nr() const { return static_cast<int>(r_.size()); }
    int nz() const { return static_cast<int>(z_.size()); }
    int size() const { return nr() * nz(); }
    int index(int i, int j) const { return j * nr() + i; }

    Scalar r(int i) const { return r_[static_cast<std::size_t>(i)]; }
    Scalar z(int j) const { return z_[static_cast<std::size_t>(j)]; }
    Scalar r_min() const { return r_.front(); }
    Scalar r_max() const { return r_.back(); }
    Scalar z_min() const { return z_.front(); }
    Scalar z_max() const { return z_.back(); }

    /// Gap between node i and i+1.
    Scalar dr(int i) const { return r(i + 1) - r(i); }
    Scalar dz(int j) const { return z(j + 1) - z(j); }

    const std::vector<Scalar> &r_nodes() const { return r_; }
    const std::vector<Scalar> &z_nodes() const { return z_; }
    const DomainVariant &variant() const { return variant_; }

    Scalar h_max() const { return metrics_.h_max; }
    Scalar h_min() const { return metrics_.h_min; }
    Scalar h_avg() const { return metrics_.h_avg; }

    bool is_axis(int i) const { return i == 0; }
    bool is_wall(int i, int j) const { return i == nr() - 1 || j == 0 || j == nz() - 1; }

    bool contains(Scalar r, Scalar z) const {
        return r >= r_min() && r <= r_max() && z >= z_min() && z <= z_max();
    }

    /// Volume of the dual cell around each node, 2*pi * int r dr dz over
    /// [r_{i-1/2}, r_{i+1/2}] x [z_{j-1/2}, z_{j+1/2}]. At the axis this is
    /// the half-cell integral; the weights sum to the cylinder volume.
    const VectorX<Scalar> &volume_weights() const { return weights_; }

    /// Radial part of the dual-cell measure: int r dr over the dual interval.
    Scalar radial_weight(int i) const { return radial_w_[static_cast<std::size_t>(i)]; }
    Scalar axial_weight(int j) const { return axial_w_[static_cast<std::size_t>(j)]; }

    /// Unique cell containing (r, z); the last cell is closed on its upper
    /// side so boundary points map to local coordinate 1.
    CellLocation<Scalar> locate(Scalar r, Scalar z) const {
        using std::isfinite;
        if (!isfinite(r) || !isfinite(z) || !contains(r, z))
            throw OutOfDomainError(static_cast<double>(r), static_cast<double>(z));
        CellLocation<Scalar> loc;
        loc.i = find_cell(r_, r);
        loc.j = find_cell(z_, z);
        loc.s = (r - r_[loc.i]) / (r_[loc.i + 1] - r_[loc.i]);
        loc.t = (z - z_[loc.j]) / (z_[loc.j + 1] - z_[loc.j]);
        return loc;
    }

private:
    static int find_cell(const std::vector<Scalar> &nodes, Scalar x) {
        const auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
        int k = static_cast<int>(it - nodes.begin()) - 1;
        return std::clamp(k, 0, static_cast<int>(nodes.size()) - 2);
    }

    void build_weights() {
        const int n_r = nr(), n_z = nz();
        radial_w_.assign(static_cast<std::size_t>(n_r), Scalar(0));
        axial_w_.assign(static_cast<std::size_t>(n_z), Scalar(0));
        for (int i = 0; i < n_r; ++i) {
            const Scalar lo = i == 0 ? r(0) : (r(i - 1) + r(i)) / 2;
            const Scalar hi = i == n_r - 1 ? r(i) : (r(i) + r(i + 1)) / 2;
            radial_w_[static_cast<std::size_t>(i)] = (hi * hi - lo * lo) / 2;
        }
        for (int j = 0; j < n_z; ++j) {
            const Scalar lo = j == 0 ? z(0) : (z(j - 1) + z(j)) / 2;
            const Scalar hi = j == n_z - 1 ? z(j) : (z(j) + z(j + 1)) / 2;
            axial_w_[static_cast<std::size_t>(j)] = hi - lo;
        }
        const Scalar two_pi = 2 * std::numbers::pi_v<Scalar>;
        weights_.resize(size());
        for (int j = 0; j < n_z; ++j)
            for (int i = 0; i < n_r; ++i)
                weights_(index(i, j)) = two_pi * radial_w_[static_cast<std::size_t>(i)] *
                                        axial_w_[static_cast<std::size_t>(j)];
    }

    std::vector<Scalar> r_, z_;
    DomainVariant variant_;
    GridMetrics<Scalar> metrics_;
    std::vector<Scalar> radial_w_, axial_w_;
    VectorX<Scalar> weights_;
};

template <typename Scalar>
GridMetrics<Scalar> grid_metrics(const MeridianGrid<Scalar> &grid) {
    return grid_metrics(grid.r_nodes(), grid.z_nodes());
}

/// Radial nodes refined geometrically toward the axis, uniform axial nodes
/// spanning the variant's z-range. Endpoints are exact.
template <typename Scalar = double>
MeridianGrid<Scalar> build_grid(const GridSpec &spec) {
    if (spec.nr < 2) throw ConfigError("nr", 0, "need at least 2 radial nodes");
    if (spec.nz < 2) throw ConfigError("nz", 0, "need at least 2 axial nodes");
    if (!(spec.grading > 0.0 && spec.grading <= 1.0))
        throw ConfigError("grading", 0, "grading ratio must lie in (0, 1]");
    if (!(spec.variant.a > 0.0)) throw ConfigError("a", 0, "cylinder scale must be positive");

    const int gaps = spec.nr - 1;
    std::vector<Scalar> gap(static_cast<std::size_t>(gaps));
    const Scalar growth = Scalar(1) / Scalar(spec.grading);
    Scalar g{1}, total{0};
    for (auto &d : gap) {
        d = g;
        total += g;
        g *= growth;
    }
    std::vector<Scalar> r(static_cast<std::size_t>(spec.nr));
    r[0] = Scalar(0);
    Scalar acc{0};
    for (int k = 0; k < gaps; ++k) {
        acc += gap[static_cast<std::size_t>(k)];
        r[static_cast<std::size_t>(k + 1)] = acc / total;
    }
    r.back() = Scalar(1);

    const Scalar z0 = Scalar(spec.variant.z_min()), z1 = Scalar(spec.variant.z_max());
    std::vector<Scalar> z(static_cast<std::size_t>(spec.nz));
    for (int j = 0; j < spec.nz; ++j)
        z[static_cast<std::size_t>(j)] = z0 + (z1 - z0) * Scalar(j) / Scalar(spec.nz - 1);
    z.front() = z0;
    z.back() = z1;

    return MeridianGrid<Scalar>(std::move(r), std::move(z), spec.variant);
}

} // namespace saddlesim

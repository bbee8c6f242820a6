// SPDX-License-Identifier: Apache-2.0
//
// mawet - movable-antenna wireless energy transfer toolkit
// Copyright (C) 2026 The mawet authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace mawet {

/// Square region of side `side_length` centered at the origin of the x-y plane,
/// with the minimum inter-antenna spacing enforced on it.
struct Region {
    double side_length = 1.0;
    double min_spacing = 0.15;

    Region() = default;
    Region(double side, double spacing) : side_length(side), min_spacing(spacing) {
        if (!(side > 0.0))
            throw std::invalid_argument("Region: side length must be positive");
        if (!(spacing > 0.0))
            throw std::invalid_argument("Region: minimum spacing must be positive");
        if (spacing > side * std::numbers::sqrt2)
            throw std::invalid_argument("Region: minimum spacing exceeds the region diagonal");
    }

    double half() const { return 0.5 * side_length; }
};

/// Antenna positions on the array plane, one column per antenna.
struct AntennaLayout {
    Eigen::Matrix2Xd positions;

    AntennaLayout() = default;
    explicit AntennaLayout(Eigen::Matrix2Xd p) : positions(std::move(p)) {}

    Eigen::Index size() const { return positions.cols(); }
    Eigen::Vector2d operator[](Eigen::Index n) const { return positions.col(n); }
    Eigen::Vector2d centroid() const { return positions.rowwise().mean(); }
};

/// Rigid grid parameterization of a uniformly spaced movable array.
struct UmaParams {
    Eigen::Vector2d reference = Eigen::Vector2d::Zero();
    double rotation = 0.0;
    double spacing = 0.15;
};

/// Devices on a plane parallel to the array, at height `standoff`.
struct Deployment {
    Eigen::Matrix3Xd devices;
    Eigen::VectorXd power_requirements;
    double plane_x = 0.0;
    double plane_y = 0.0;
    double standoff = 1.0;

    Eigen::Index size() const { return devices.cols(); }

    // Keeps the first `k` devices. Deployments are sampled sequentially, so this
    // is the deployment a k-device draw from the same stream would produce.
    Deployment prefix(Eigen::Index k) const {
        if (k < 1 || k > size())
            throw std::invalid_argument("Deployment::prefix: device count out of range");
        Deployment d = *this;
        d.devices = devices.leftCols(k);
        d.power_requirements = power_requirements.head(k);
        return d;
    }
};

struct GridShape {
    Eigen::Index columns = 1;
    Eigen::Index rows = 1;
};

/// Columns = ceil(sqrt(N)), rows = ceil(N / columns).
inline GridShape grid_shape(Eigen::Index n_antennas) {
    if (n_antennas < 1)
        throw std::invalid_argument("grid_shape: need at least one antenna");
    Eigen::Index nx = 1;
    while (nx * nx < n_antennas)
        ++nx;
    return {nx, (n_antennas + nx - 1) / nx};
}

inline Eigen::Matrix2d rotation_matrix(double beta) {
    return Eigen::Rotation2Dd(beta).toRotationMatrix();
}

inline double project_to_region(double coord, double side) {
    return std::clamp(coord, -0.5 * side, 0.5 * side);
}

inline void project_to_region(Eigen::Ref<Eigen::Matrix2Xd> positions, double side) {
    positions = positions.unaryExpr([side](double c) { return project_to_region(c, side); });
}

/// Index pairs (n, n') with n < n' closer than `delta` (strictly).
inline std::vector<std::pair<Eigen::Index, Eigen::Index>> spacing_violations(const AntennaLayout& layout,
                                                                             double delta) {
    std::vector<std::pair<Eigen::Index, Eigen::Index>> out;
    const auto& p = layout.positions;
    for (Eigen::Index a = 0; a < p.cols(); ++a)
        for (Eigen::Index b = a + 1; b < p.cols(); ++b)
            if ((p.col(a) - p.col(b)).norm() < delta)
                out.emplace_back(a, b);
    return out;
}

inline std::size_t count_spacing_violations(const AntennaLayout& layout, double delta) {
    std::size_t count = 0;
    const auto& p = layout.positions;
    const double d2 = delta * delta;
    for (Eigen::Index a = 0; a < p.cols(); ++a)
        for (Eigen::Index b = a + 1; b < p.cols(); ++b)
            if ((p.col(a) - p.col(b)).squaredNorm() < d2)
                ++count;
    return count;
}

/// Largest admissible grid spacing for a rotated UMA so that both axis
/// projections of the full grid fit inside a side of length `side`.
inline double uma_delta_max(double beta, Eigen::Index n_antennas, double side) {
    const auto g = grid_shape(n_antennas);
    const double c = std::abs(std::cos(beta));
    const double s = std::abs(std::sin(beta));
    const double ex = c * double(g.columns - 1) + s * double(g.rows - 1);
    const double ey = s * double(g.columns - 1) + c * double(g.rows - 1);
    const double extent = std::max(ex, ey);
    if (extent <= 0.0)
        return std::numeric_limits<double>::infinity();
    return side / extent;
}

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool empty() const { return lo > hi; }
    double clamp(double v) const { return std::clamp(v, lo, hi); }
    double width() const { return hi - lo; }
};

struct ReferenceBounds {
    Interval x;
    Interval y;

    bool empty() const { return x.empty() || y.empty(); }
};

/// Admissible box for the UMA reference point given rotation and spacing.
/// Intervals whose endpoints cross by less than a rounding margin are
/// collapsed onto their midpoint; genuinely infeasible ones stay empty.
inline ReferenceBounds uma_ref_interval(double beta, double spacing, Eigen::Index n_antennas, double side) {
    const auto g = grid_shape(n_antennas);
    const double width = double(g.columns - 1) * spacing;
    const double height = double(g.rows - 1) * spacing;
    const Eigen::Matrix2d rot = rotation_matrix(beta);

    Eigen::Matrix<double, 2, 4> corners;
    corners << 0.0, width, 0.0, width, 0.0, 0.0, height, height;
    const Eigen::Matrix<double, 2, 4> rotated = rot * corners;

    auto make = [&](int axis) {
        Interval iv{-0.5 * side - rotated.row(axis).minCoeff(), 0.5 * side - rotated.row(axis).maxCoeff()};
        const double margin = 1e-12 * std::max(1.0, side);
        if (iv.lo > iv.hi && iv.lo - iv.hi <= margin)
            iv.lo = iv.hi = 0.5 * (iv.lo + iv.hi);
        return iv;
    };
    return {make(0), make(1)};
}

/// Row-major fill of the UMA grid: column index along local x, row index
/// along local y, rotated counterclockwise by `rotation` and translated.
inline AntennaLayout uma_layout_unchecked(const UmaParams& params, Eigen::Index n_antennas) {
    const auto g = grid_shape(n_antennas);
    const Eigen::Matrix2d rot = rotation_matrix(params.rotation);
    Eigen::Matrix2Xd pos(2, n_antennas);
    for (Eigen::Index n = 0; n < n_antennas; ++n) {
        const Eigen::Vector2d local(double(n % g.columns) * params.spacing,
                                    double(n / g.columns) * params.spacing);
        pos.col(n) = params.reference + rot * local;
    }
    return AntennaLayout(std::move(pos));
}

class InfeasibleLayout : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Throws InfeasibleLayout if any element leaves the region.
inline AntennaLayout uma_positions(const UmaParams& params, Eigen::Index n_antennas, double side) {
    auto layout = uma_layout_unchecked(params, n_antennas);
    const double limit = 0.5 * side * (1.0 + 1e-12);
    if (layout.positions.cwiseAbs().maxCoeff() > limit)
        throw InfeasibleLayout("uma_positions: array leaves the movable region");
    project_to_region(layout.positions, side);
    return layout;
}

inline AntennaLayout fixed_ula_positions(Eigen::Index n_antennas, double delta) {
    if (n_antennas < 1)
        throw std::invalid_argument("fixed_ula_positions: need at least one antenna");
    Eigen::Matrix2Xd pos = Eigen::Matrix2Xd::Zero(2, n_antennas);
    const double offset = 0.5 * double(n_antennas - 1);
    for (Eigen::Index n = 0; n < n_antennas; ++n)
        pos(0, n) = (double(n) - offset) * delta;
    return AntennaLayout(std::move(pos));
}

/// Same grid sizing as the UMA, grid center at the origin.
inline AntennaLayout fixed_ura_positions(Eigen::Index n_antennas, double delta) {
    const auto g = grid_shape(n_antennas);
    const double ox = 0.5 * double(g.columns - 1);
    const double oy = 0.5 * double(g.rows - 1);
    Eigen::Matrix2Xd pos(2, n_antennas);
    for (Eigen::Index n = 0; n < n_antennas; ++n) {
        pos(0, n) = (double(n % g.columns) - ox) * delta;
        pos(1, n) = (double(n / g.columns) - oy) * delta;
    }
    return AntennaLayout(std::move(pos));
}

/// Diameter of the convex hull, i.e. the largest pairwise distance.
inline double aperture_diameter(const AntennaLayout& layout) {
    double best = 0.0;
    const auto& p = layout.positions;
    for (Eigen::Index a = 0; a < p.cols(); ++a)
        for (Eigen::Index b = a + 1; b < p.cols(); ++b)
            best = std::max(best, (p.col(a) - p.col(b)).squaredNorm());
    return std::sqrt(best);
}

inline double rayleigh_distance(double aperture, double wavelength) {
    return 2.0 * aperture * aperture / wavelength;
}

inline bool is_near_field(const AntennaLayout& layout, const Eigen::Vector3d& device, double wavelength) {
    if (!(wavelength > 0.0))
        throw std::invalid_argument("is_near_field: wavelength must be positive");
    const Eigen::Vector2d c = layout.centroid();
    const double dist = (Eigen::Vector3d(c.x(), c.y(), 0.0) - device).norm();
    return dist <= rayleigh_distance(aperture_diameter(layout), wavelength);
}

/// Uniform device drop on [-a_x/2, a_x/2] x [-a_y/2, a_y/2] at height a_z.
/// Devices are drawn in order (x then y per device), so the first k devices
/// of a K-device draw equal a k-device draw from the same stream.
template <class URBG>
Deployment sample_deployment(URBG& rng, Eigen::Index k_devices, double a_x, double a_y, double a_z,
                             double p_th) {
    if (k_devices < 1)
        throw std::invalid_argument("sample_deployment: need at least one device");
    if (a_x < 0.0 || a_y < 0.0 || !(a_z > 0.0))
        throw std::invalid_argument("sample_deployment: invalid plane dimensions");
    if (!(p_th > 0.0))
        throw std::invalid_argument("sample_deployment: power requirement must be positive");

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Deployment d;
    d.devices.resize(3, k_devices);
    for (Eigen::Index k = 0; k < k_devices; ++k) {
        const double ux = unit(rng);
        const double uy = unit(rng);
        d.devices.col(k) << a_x * (ux - 0.5), a_y * (uy - 0.5), a_z;
    }
    d.power_requirements = Eigen::VectorXd::Constant(k_devices, p_th);
    d.plane_x = a_x;
    d.plane_y = a_y;
    d.standoff = a_z;
    return d;
}

} // namespace mawet

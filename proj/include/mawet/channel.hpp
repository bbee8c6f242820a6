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

#include "mawet/geometry.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace mawet {

inline constexpr double kSpeedOfLight = 299792458.0;

inline double wavelength_for(double frequency_hz) {
    if (!(frequency_hz > 0.0))
        throw std::invalid_argument("wavelength_for: frequency must be positive");
    return kSpeedOfLight / frequency_hz;
}

struct ChannelParams {
    double wavelength = kSpeedOfLight / 1e9;
    double kappa = 2.0;

    ChannelParams() = default;
    ChannelParams(double lambda, double boresight_kappa) : wavelength(lambda), kappa(boresight_kappa) {
        if (!(lambda > 0.0))
            throw std::invalid_argument("ChannelParams: wavelength must be positive");
        if (!(boresight_kappa >= 2.0))
            throw std::invalid_argument("ChannelParams: kappa must be at least 2");
    }
};

// Element gain as a function of cos(theta); zero behind the array plane.
inline double radiation_profile_cos(double cos_theta, double kappa) {
    if (cos_theta < 0.0)
        return 0.0;
    return 2.0 * (kappa + 1.0) * std::pow(std::min(cos_theta, 1.0), kappa);
}

/// 2(kappa+1) cos^kappa(theta) on [0, pi/2], zero elsewhere.
inline double radiation_profile(double theta, double kappa) {
    if (theta < 0.0 || theta > 0.5 * std::numbers::pi)
        return 0.0;
    return radiation_profile_cos(std::cos(theta), kappa);
}

/// Line-of-sight spherical-wave coefficient between an antenna on the z=0
/// plane and a device, with the element boresight along +z.
inline std::complex<double> channel_coefficient(const Eigen::Vector2d& antenna, const Eigen::Vector3d& device,
                                                const ChannelParams& params) {
    const Eigen::Vector3d diff = device - Eigen::Vector3d(antenna.x(), antenna.y(), 0.0);
    const double d = diff.norm();
    if (!(d > 0.0))
        throw std::domain_error("channel_coefficient: device coincides with antenna");
    const double gain = radiation_profile_cos(diff.z() / d, params.kappa);
    const double lambda = params.wavelength;
    const double magnitude = std::sqrt(gain) * lambda / (4.0 * std::numbers::pi * d);
    return std::polar(magnitude, -2.0 * std::numbers::pi * d / lambda);
}

/// N x K coefficients; column k is the channel to device k.
struct ChannelMatrix {
    Eigen::MatrixXcd coefficients;

    Eigen::Index antennas() const { return coefficients.rows(); }
    Eigen::Index devices() const { return coefficients.cols(); }
    auto column(Eigen::Index k) const { return coefficients.col(k); }
};

inline ChannelMatrix channel_matrix(const AntennaLayout& layout, const Deployment& deployment,
                                    const ChannelParams& params) {
    ChannelMatrix h{Eigen::MatrixXcd(layout.size(), deployment.size())};
    for (Eigen::Index k = 0; k < deployment.size(); ++k)
        for (Eigen::Index n = 0; n < layout.size(); ++n)
            h.coefficients(n, k) = channel_coefficient(layout[n], deployment.devices.col(k), params);
    return h;
}

/// Constant-modulus analog precoder; weights are exp(j theta) / sqrt(N).
struct Precoder {
    Eigen::VectorXd phases;

    Eigen::VectorXcd weights() const {
        const double scale = 1.0 / std::sqrt(double(phases.size()));
        Eigen::VectorXcd w(phases.size());
        for (Eigen::Index n = 0; n < phases.size(); ++n)
            w(n) = std::polar(scale, phases(n));
        return w;
    }
};

inline double received_power(const Eigen::Ref<const Eigen::VectorXcd>& h, const Precoder& precoder,
                             double p_tx) {
    if (h.size() != precoder.phases.size())
        throw std::invalid_argument("received_power: channel and precoder sizes differ");
    return p_tx * std::norm(h.dot(precoder.weights()));
}

} // namespace mawet

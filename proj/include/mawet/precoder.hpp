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

#include "mawet/channel.hpp"
#include "mawet/sdp.hpp"

#include <Eigen/Dense>
#include <boost/random/normal_distribution.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace mawet {

/// Relaxed max-min beamforming covariance with solver diagnostics.
/// `xi` is the minimum over devices of tr(h_k h_k^H W), per watt transmitted.
struct SdpSolution {
    Eigen::MatrixXcd W;
    double xi = 0.0;
    double feasibility_gap = 0.0;
    double duality_gap = 0.0;
    int iterations = 0;
};

struct PowerAllocation {
    Precoder precoder;
    double p_tx = std::numeric_limits<double>::infinity();
    std::size_t candidates_evaluated = 0;
};

struct PrecoderConfig {
    double sdp_tolerance = 1e-8;
    std::size_t randomization_count = 10000;
    // Penalized layouts get a cheap lower bound instead of the SDP when set.
    bool skip_sdp_when_violating = false;
};

/// Transmit power needed so every device meets its requirement with weights
/// `w`: max_k p_k / |h_k^H w|^2, infinite if some device gets zero gain.
inline double required_power(const ChannelMatrix& channels, const Eigen::VectorXd& p_th,
                             const Eigen::VectorXcd& w) {
    double worst = 0.0;
    for (Eigen::Index k = 0; k < channels.devices(); ++k) {
        const double gain = std::norm(channels.column(k).dot(w));
        if (!(gain > 0.0))
            return std::numeric_limits<double>::infinity();
        worst = std::max(worst, p_th(k) / gain);
    }
    return worst;
}

/// Maximum ratio transmission for one device: theta_n = arg(h_n) and
/// p_tx = N p_th / ||h||_1^2.
inline PowerAllocation single_device_power(const Eigen::Ref<const Eigen::VectorXcd>& h, double p_th) {
    const double l1 = h.cwiseAbs().sum();
    if (!(l1 > 0.0))
        throw SolverError("single_device_power: zero channel");
    PowerAllocation out;
    out.precoder.phases.resize(h.size());
    for (Eigen::Index n = 0; n < h.size(); ++n)
        out.precoder.phases(n) = std::arg(h(n));
    out.p_tx = double(h.size()) * p_th / (l1 * l1);
    out.candidates_evaluated = 1;
    return out;
}

/// Max-min SDP relaxation with the constant-modulus diagonal diag(W) = 1/N.
///
/// Internally the channels are normalized by their largest column norm and
/// W is scaled by N so the interior-point iterates are O(1); the result is
/// mapped back before returning. Zero channel columns make xi = 0 for every
/// feasible W, in which case W = I/N is returned without solving.
inline SdpSolution solve_maxmin_sdp(const ChannelMatrix& channels, double tolerance = 1e-8) {
    const Eigen::Index n = channels.antennas();
    const Eigen::Index k = channels.devices();
    if (n < 1 || k < 1)
        throw std::invalid_argument("solve_maxmin_sdp: empty channel matrix");
    if (!channels.coefficients.allFinite())
        throw std::invalid_argument("solve_maxmin_sdp: non-finite channel coefficients");

    SdpSolution out;
    const Eigen::VectorXd col_norms = channels.coefficients.colwise().norm().transpose();
    if (n == 1 || col_norms.minCoeff() == 0.0) {
        out.W = Eigen::MatrixXcd::Identity(n, n) / double(n);
        out.xi = n == 1 ? channels.coefficients.row(0).cwiseAbs2().minCoeff() : 0.0;
        return out;
    }

    const double scale = col_norms.maxCoeff();
    sdp::Problem<std::complex<double>> prob;
    prob.objective = Eigen::MatrixXcd::Zero(n, n);
    prob.lp_objective = Eigen::VectorXd::Zero(k + 1);
    prob.lp_objective(k) = -1.0;
    prob.factors.resize(n, n + k);
    prob.factors.leftCols(n).setIdentity();
    prob.factors.rightCols(k) = channels.coefficients / scale;
    prob.weights = Eigen::VectorXd::Ones(n + k);
    prob.lp_coupling = Eigen::MatrixXd::Zero(n + k, k + 1);
    for (Eigen::Index j = 0; j < k; ++j) {
        prob.lp_coupling(n + j, j) = -1.0;
        prob.lp_coupling(n + j, k) = -1.0;
    }
    prob.rhs = Eigen::VectorXd::Zero(n + k);
    prob.rhs.head(n).setOnes();

    sdp::Options opt;
    opt.tolerance = tolerance;
    const auto res = sdp::solve(prob, opt);
    if (!res.converged)
        throw SolverError("solve_maxmin_sdp: interior point did not converge (" + res.summary() + ")");

    out.W = res.X / double(n);
    out.xi = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < k; ++j) {
        const auto h = channels.column(j);
        out.xi = std::min(out.xi, h.dot(out.W * h).real());
    }
    out.feasibility_gap = res.primal_infeasibility;
    out.duality_gap = res.relative_gap;
    out.iterations = res.iterations;
    return out;
}

namespace detail {

// Eigenvalues below this fraction of the largest are treated as interior-point
// residue when factoring W for sampling.
inline constexpr double kCovarianceRankTolerance = 1e-6;

inline constexpr Eigen::Index kRandomizationBlock = 256;

} // namespace detail

/// Gaussian randomization: draws `n_candidates` vectors from CN(0, W), keeps
/// their phases, and returns the candidate needing the least transmit power.
///
/// Candidates are drawn sequentially from `rng`, so a run with more
/// candidates sees a superset of a run with fewer. When W is numerically
/// rank one every draw equals its principal eigenvector up to a global phase
/// and a single candidate is evaluated.
template <class URBG>
PowerAllocation gaussian_randomization(const SdpSolution& sdp, const ChannelMatrix& channels,
                                       const Eigen::VectorXd& p_th, std::size_t n_candidates, URBG& rng) {
    if (n_candidates < 1)
        throw std::invalid_argument("gaussian_randomization: need at least one candidate");
    const Eigen::Index n = channels.antennas();
    if (sdp.W.rows() != n || p_th.size() != channels.devices())
        throw std::invalid_argument("gaussian_randomization: dimension mismatch");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sdp.W);
    const Eigen::VectorXd lambda = es.eigenvalues();
    const double lmax = lambda.maxCoeff();
    if (!(lmax > 0.0))
        throw SolverError("gaussian_randomization: covariance is not positive semidefinite");

    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < n; ++i)
        if (lambda(i) > detail::kCovarianceRankTolerance * lmax)
            ++rank;
    // Eigenvalues are ascending; the leading ones are the last columns.
    Eigen::MatrixXcd factor = es.eigenvectors().rightCols(rank);
    for (Eigen::Index i = 0; i < rank; ++i)
        factor.col(i) *= std::sqrt(lambda(n - rank + i));

    const double amp = 1.0 / std::sqrt(double(n));
    auto to_weights = [amp](const Eigen::VectorXcd& v) {
        Eigen::VectorXcd w(v.size());
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            const double mag = std::abs(v(i));
            w(i) = mag > 0.0 ? v(i) * (amp / mag) : std::complex<double>(amp, 0.0);
        }
        return w;
    };

    PowerAllocation out;
    Eigen::VectorXcd best;
    double best_cost = std::numeric_limits<double>::infinity();

    if (rank == 1) {
        best = to_weights(factor.col(0));
        best_cost = required_power(channels, p_th, best);
        out.candidates_evaluated = 1;
    } else {
        // Stacked real arithmetic: [Re v; Im v] = [[Fr, -Fi], [Fi, Fr]] [Re g; Im g],
        // and [Re h^H w; Im h^H w] = [[Hr', Hi'], [-Hi', Hr']] [Re w; Im w].
        const Eigen::Index k = channels.devices();
        Eigen::MatrixXd fstack(2 * n, 2 * rank);
        fstack << factor.real(), -factor.imag(), factor.imag(), factor.real();
        const Eigen::MatrixXd hr = channels.coefficients.real().transpose();
        const Eigen::MatrixXd hi = channels.coefficients.imag().transpose();
        Eigen::MatrixXd hstack(2 * k, 2 * n);
        hstack << hr, hi, -hi, hr;

        boost::random::normal_distribution<double> normal(0.0, 1.0);
        const Eigen::Index block = detail::kRandomizationBlock;
        Eigen::MatrixXd g(2 * rank, block);
        Eigen::MatrixXd v(2 * n, block);
        Eigen::MatrixXd proj(2 * k, block);
        Eigen::ArrayXd gains(k);
        const Eigen::ArrayXd need = p_th.array() / (amp * amp);
        std::size_t remaining = n_candidates;
        while (remaining > 0) {
            const Eigen::Index cols = Eigen::Index(std::min<std::size_t>(remaining, std::size_t(block)));
            for (Eigen::Index c = 0; c < cols; ++c)
                for (Eigen::Index i = 0; i < rank; ++i) {
                    g(i, c) = normal(rng);
                    g(rank + i, c) = normal(rng);
                }
            auto vb = v.leftCols(cols);
            vb.noalias() = fstack * g.leftCols(cols);
            const Eigen::ArrayXXd inv =
                (vb.topRows(n).array().square() + vb.bottomRows(n).array().square()).sqrt().inverse();
            vb.topRows(n).array() *= inv;
            vb.bottomRows(n).array() *= inv;
            proj.leftCols(cols).noalias() = hstack * vb;
            for (Eigen::Index c = 0; c < cols; ++c) {
                gains = proj.col(c).head(k).array().square() + proj.col(c).tail(k).array().square();
                const double cost = (gains > 0.0).all() ? (need / gains).maxCoeff()
                                                        : std::numeric_limits<double>::infinity();
                if (cost < best_cost) {
                    best_cost = cost;
                    best.resize(n);
                    for (Eigen::Index i = 0; i < n; ++i)
                        best(i) = {v(i, c), v(n + i, c)};
                }
            }
            remaining -= std::size_t(cols);
        }
        out.candidates_evaluated = n_candidates;
    }

    if (!std::isfinite(best_cost))
        throw SolverError("gaussian_randomization: every candidate leaves a device without power");

    out.precoder.phases.resize(n);
    for (Eigen::Index i = 0; i < n; ++i)
        out.precoder.phases(i) = std::arg(best(i));
    out.p_tx = required_power(channels, p_th, out.precoder.weights());
    return out;
}

/// Power allocation for a fixed layout: closed-form MRT for one device,
/// otherwise SDP relaxation followed by Gaussian randomization.
template <class URBG>
PowerAllocation allocate_power(const ChannelMatrix& channels, const Eigen::VectorXd& p_th,
                               const PrecoderConfig& config, URBG& rng) {
    if (channels.devices() == 1)
        return single_device_power(channels.column(0), p_th(0));
    const auto sdp = solve_maxmin_sdp(channels, config.sdp_tolerance);
    return gaussian_randomization(sdp, channels, p_th, config.randomization_count, rng);
}

/// Exhaustive search over quantized constant-modulus precoders with the first
/// phase pinned to zero. Cost grows as phase_levels^(N-1); meant as a test oracle.
inline PowerAllocation grid_oracle(const ChannelMatrix& channels, const Eigen::VectorXd& p_th,
                                   std::size_t phase_levels) {
    const Eigen::Index n = channels.antennas();
    if (n < 1 || phase_levels < 1)
        throw std::invalid_argument("grid_oracle: need antennas and at least one phase level");
    const double step = 2.0 * std::numbers::pi / double(phase_levels);

    std::vector<std::size_t> digits(std::size_t(n), 0);
    Precoder trial{Eigen::VectorXd::Zero(n)};
    PowerAllocation out;
    out.precoder = trial;
    while (true) {
        for (Eigen::Index i = 0; i < n; ++i)
            trial.phases(i) = step * double(digits[std::size_t(i)]);
        const double cost = required_power(channels, p_th, trial.weights());
        ++out.candidates_evaluated;
        if (cost < out.p_tx) {
            out.p_tx = cost;
            out.precoder = trial;
        }
        Eigen::Index pos = 1;
        while (pos < n && ++digits[std::size_t(pos)] == phase_levels)
            digits[std::size_t(pos++)] = 0;
        if (pos >= n)
            break;
    }
    return out;
}

} // namespace mawet

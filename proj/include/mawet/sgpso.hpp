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

// Particle swarm over antenna geometry. Each particle encodes a layout through
// a codec; its fitness is the transmit power returned by the power-allocation
// subproblem plus a fixed penalty per violated spacing pair.

#pragma once

#include "mawet/channel.hpp"
#include "mawet/geometry.hpp"
#include "mawet/parallel.hpp"
#include "mawet/precoder.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mawet {

struct PsoParams {
    std::size_t particles = 30;
    std::size_t iterations = 100;
    double omega_min = 0.1;
    double omega_max = 1.0;
    double c1 = 1.49;
    double c2 = 1.49;
    double tau = 1e4;
    std::uint64_t seed = 0;

    void validate() const {
        if (particles < 1)
            throw std::invalid_argument("PsoParams: need at least one particle");
        if (!(omega_min > 0.0) || omega_min > omega_max)
            throw std::invalid_argument("PsoParams: require 0 < omega_min <= omega_max");
        if (c1 < 0.0 || c2 < 0.0)
            throw std::invalid_argument("PsoParams: learning factors must be nonnegative");
        if (!(tau > 0.0))
            throw std::invalid_argument("PsoParams: penalty must be positive");
    }

    /// Swarm sized from the search dimension S: min(cap, 10 S) particles and
    /// factor * S iterations.
    static PsoParams scaled(std::size_t search_dim, std::size_t particle_cap, std::size_t iteration_factor) {
        PsoParams p;
        p.particles = std::min(particle_cap, 10 * search_dim);
        p.iterations = iteration_factor * search_dim;
        return p;
    }
};

inline double inertia_weight(std::size_t iteration, const PsoParams& params) {
    if (params.iterations == 0)
        return params.omega_max;
    return params.omega_max -
           (params.omega_max - params.omega_min) * double(iteration) / double(params.iterations);
}

// -- codecs -----------------------------------------------------------------

template <class C>
concept LayoutCodec = requires(const C& c, Eigen::VectorXd& q, const Eigen::VectorXd& cq, std::mt19937_64& rng,
                               const AntennaLayout& layout) {
    { c.dimension() } -> std::convertible_to<Eigen::Index>;
    { c.antennas() } -> std::convertible_to<Eigen::Index>;
    c.project(q);
    { c.random_position(rng) } -> std::same_as<Eigen::VectorXd>;
    { c.decode(cq) } -> std::same_as<std::optional<AntennaLayout>>;
    { c.violations(layout) } -> std::convertible_to<std::size_t>;
};

/// Independently movable antennas: the particle is the 2 x N coordinate
/// matrix, flattened column-major.
class ImaCodec {
public:
    ImaCodec(Eigen::Index antennas, Region region) : n_(antennas), region_(region) {
        if (antennas < 1)
            throw std::invalid_argument("ImaCodec: need at least one antenna");
    }

    Eigen::Index dimension() const { return 2 * n_; }
    Eigen::Index antennas() const { return n_; }
    const Region& region() const { return region_; }

    void project(Eigen::VectorXd& q) const {
        const double h = region_.half();
        q = q.cwiseMax(-h).cwiseMin(h);
    }

    template <class URBG>
    Eigen::VectorXd random_position(URBG& rng) const {
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        Eigen::VectorXd q(dimension());
        for (Eigen::Index i = 0; i < q.size(); ++i)
            q(i) = region_.side_length * (unit(rng) - 0.5);
        return q;
    }

    std::optional<AntennaLayout> decode(const Eigen::VectorXd& q) const {
        return AntennaLayout(Eigen::Map<const Eigen::Matrix2Xd>(q.data(), 2, n_));
    }

    std::size_t violations(const AntennaLayout& layout) const {
        return count_spacing_violations(layout, region_.min_spacing);
    }

    Eigen::VectorXd encode(const AntennaLayout& layout) const {
        return Eigen::Map<const Eigen::VectorXd>(layout.positions.data(), dimension());
    }

private:
    Eigen::Index n_;
    Region region_;
};

/// Uniformly spaced movable array: the particle is [r0_x, r0_y, beta, spacing].
/// Spacing is bounded below by `min_spacing` (half a wavelength) and above by
/// the rotation-dependent fit limit; rotation wraps onto [0, 2 pi).
class UmaCodec {
public:
    UmaCodec(Eigen::Index antennas, Region region, double min_spacing)
        : n_(antennas), region_(region), min_spacing_(std::max(min_spacing, region.min_spacing)) {
        if (antennas < 1)
            throw std::invalid_argument("UmaCodec: need at least one antenna");
    }

    Eigen::Index dimension() const { return 4; }
    Eigen::Index antennas() const { return n_; }
    const Region& region() const { return region_; }
    double min_spacing() const { return min_spacing_; }

    Interval spacing_bounds(double beta) const {
        const double upper = std::min(uma_delta_max(beta, n_, region_.side_length), region_.side_length);
        return {min_spacing_, std::max(min_spacing_, upper)};
    }

    static double wrap_angle(double beta) {
        constexpr double two_pi = 2.0 * std::numbers::pi;
        double b = std::fmod(beta, two_pi);
        if (b < 0.0)
            b += two_pi;
        return b >= two_pi ? 0.0 : b;
    }

    void project(Eigen::VectorXd& q) const {
        q(2) = wrap_angle(q(2));
        q(3) = spacing_bounds(q(2)).clamp(q(3));
        const auto box = uma_ref_interval(q(2), q(3), n_, region_.side_length);
        if (!box.x.empty())
            q(0) = box.x.clamp(q(0));
        if (!box.y.empty())
            q(1) = box.y.clamp(q(1));
    }

    template <class URBG>
    Eigen::VectorXd random_position(URBG& rng) const {
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        Eigen::VectorXd q(4);
        q(2) = wrap_angle(2.0 * std::numbers::pi * unit(rng));
        const auto sb = spacing_bounds(q(2));
        q(3) = sb.lo + sb.width() * unit(rng);
        const auto box = uma_ref_interval(q(2), q(3), n_, region_.side_length);
        q(0) = box.x.lo + std::max(0.0, box.x.width()) * unit(rng);
        q(1) = box.y.lo + std::max(0.0, box.y.width()) * unit(rng);
        return q;
    }

    UmaParams params(const Eigen::VectorXd& q) const {
        return {Eigen::Vector2d(q(0), q(1)), q(2), q(3)};
    }

    std::optional<AntennaLayout> decode(const Eigen::VectorXd& q) const {
        try {
            return uma_positions(params(q), n_, region_.side_length);
        } catch (const InfeasibleLayout&) {
            return std::nullopt;
        }
    }

    // The grid spacing is at least the minimum spacing by construction.
    std::size_t violations(const AntennaLayout&) const { return 0; }

private:
    Eigen::Index n_;
    Region region_;
    double min_spacing_;
};

// -- swarm state ------------------------------------------------------------

struct Particle {
    Eigen::VectorXd position;
    Eigen::VectorXd velocity;
    Eigen::VectorXd best_position;
    double best_fitness = std::numeric_limits<double>::infinity();
};

struct FitnessEvaluation {
    double fitness = std::numeric_limits<double>::infinity();
    double p_tx = std::numeric_limits<double>::infinity();
    std::size_t violations = 0;
    std::optional<PowerAllocation> allocation;
    std::string diagnostic;
};

struct SwarmState {
    std::vector<Particle> particles;
    Eigen::VectorXd best_position;
    double best_fitness = std::numeric_limits<double>::infinity();
    FitnessEvaluation best_evaluation;
    std::size_t iteration = 0;
    std::vector<double> fitness_trace;
};

/// Independent random stream for one (particle, iteration, purpose) triple,
/// so results do not depend on evaluation order or thread count.
enum class StreamPurpose : std::uint32_t { init = 1, velocity = 2, fitness = 3 };

inline std::mt19937_64 particle_stream(std::uint64_t seed, std::size_t particle, std::size_t iteration,
                                       StreamPurpose purpose) {
    std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(particle),
                      std::uint32_t(iteration), std::uint32_t(purpose)};
    return std::mt19937_64(seq);
}

/// V <- omega V + c1 E1 .* (pbest - Q) + c2 E2 .* (gbest - Q), E1, E2 ~ U[0,1].
template <class URBG>
Eigen::VectorXd update_velocity(const Particle& particle, const Eigen::VectorXd& global_best, double omega,
                                const PsoParams& params, URBG& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const Eigen::Index d = particle.position.size();
    Eigen::VectorXd e1(d), e2(d);
    for (Eigen::Index i = 0; i < d; ++i)
        e1(i) = unit(rng);
    for (Eigen::Index i = 0; i < d; ++i)
        e2(i) = unit(rng);
    return omega * particle.velocity +
           params.c1 * e1.cwiseProduct(particle.best_position - particle.position) +
           params.c2 * e2.cwiseProduct(global_best - particle.position);
}

template <LayoutCodec Codec>
Eigen::VectorXd update_position(const Particle& particle, const Eigen::VectorXd& velocity, const Codec& codec) {
    Eigen::VectorXd q = particle.position + velocity;
    codec.project(q);
    return q;
}

/// Fitness = allocated transmit power + tau * |spacing violations|.
/// Layouts that cannot be decoded, or whose power allocation fails, get an
/// infinite fitness with a diagnostic.
template <LayoutCodec Codec, class URBG>
FitnessEvaluation evaluate_fitness(const Eigen::VectorXd& position, const Codec& codec, const Deployment& deployment,
                                   const ChannelParams& channel, const PrecoderConfig& precoder, double tau,
                                   URBG& rng) {
    FitnessEvaluation out;
    const auto layout = codec.decode(position);
    if (!layout) {
        out.diagnostic = "layout leaves the movable region";
        return out;
    }
    out.violations = codec.violations(*layout);
    try {
        const ChannelMatrix h = channel_matrix(*layout, deployment, channel);
        if (out.violations > 0 && precoder.skip_sdp_when_violating) {
            // Each device alone needs at least its MRT power.
            double bound = 0.0;
            for (Eigen::Index k = 0; k < h.devices(); ++k)
                bound = std::max(bound, single_device_power(h.column(k), deployment.power_requirements(k)).p_tx);
            out.p_tx = bound;
        } else {
            out.allocation = allocate_power(h, deployment.power_requirements, precoder, rng);
            out.p_tx = out.allocation->p_tx;
        }
    } catch (const std::exception& e) {
        out.diagnostic = e.what();
        out.allocation.reset();
        out.p_tx = std::numeric_limits<double>::infinity();
        return out;
    }
    out.fitness = out.p_tx + tau * double(out.violations);
    return out;
}

/// Personal bests move on strict improvement; the global best moves to the
/// lowest-index particle attaining the iteration minimum, if that strictly
/// beats the incumbent.
inline void update_bests(SwarmState& swarm, std::span<const FitnessEvaluation> evaluations) {
    if (evaluations.size() != swarm.particles.size())
        throw std::invalid_argument("update_bests: one evaluation per particle required");
    std::size_t argmin = 0;
    for (std::size_t m = 0; m < evaluations.size(); ++m) {
        auto& p = swarm.particles[m];
        if (evaluations[m].fitness < p.best_fitness) {
            p.best_fitness = evaluations[m].fitness;
            p.best_position = p.position;
        }
        if (evaluations[m].fitness < evaluations[argmin].fitness)
            argmin = m;
    }
    if (!evaluations.empty() && evaluations[argmin].fitness < swarm.best_fitness) {
        swarm.best_fitness = evaluations[argmin].fitness;
        swarm.best_position = swarm.particles[argmin].position;
        swarm.best_evaluation = evaluations[argmin];
    }
}

struct SgpsoResult {
    AntennaLayout layout;
    Eigen::VectorXd position;
    PowerAllocation allocation;
    double p_tx = std::numeric_limits<double>::infinity();
    double fitness = std::numeric_limits<double>::infinity();
    std::size_t violations = 0;
    std::vector<double> fitness_trace;
};

template <LayoutCodec Codec>
class SgpsoRunner {
public:
    SgpsoRunner(Codec codec, Deployment deployment, ChannelParams channel, PsoParams pso, PrecoderConfig precoder,
                std::size_t threads = 1)
        : codec_(std::move(codec)), deployment_(std::move(deployment)), channel_(channel), pso_(pso),
          precoder_(precoder), threads_(std::max<std::size_t>(1, threads)) {
        pso_.validate();
    }

    /// Random positions, zero velocities, first evaluation and bests.
    SwarmState initialize() const {
        SwarmState swarm;
        swarm.particles.resize(pso_.particles);
        for (std::size_t m = 0; m < pso_.particles; ++m) {
            auto rng = particle_stream(pso_.seed, m, 0, StreamPurpose::init);
            auto& p = swarm.particles[m];
            p.position = codec_.random_position(rng);
            p.velocity = Eigen::VectorXd::Zero(codec_.dimension());
            p.best_position = p.position;
        }
        swarm.best_position = swarm.particles.front().position;
        evaluate_and_update(swarm);
        return swarm;
    }

    /// One velocity/position/fitness/best sweep over the swarm.
    void step(SwarmState& swarm) const {
        ++swarm.iteration;
        const double omega = inertia_weight(swarm.iteration, pso_);
        for (std::size_t m = 0; m < swarm.particles.size(); ++m) {
            auto& p = swarm.particles[m];
            auto rng = particle_stream(pso_.seed, m, swarm.iteration, StreamPurpose::velocity);
            p.velocity = update_velocity(p, swarm.best_position, omega, pso_, rng);
            p.position = update_position(p, p.velocity, codec_);
        }
        evaluate_and_update(swarm);
    }

    SgpsoResult run() const {
        SwarmState swarm = initialize();
        while (swarm.iteration < pso_.iterations)
            step(swarm);
        return finish(swarm);
    }

    SgpsoResult finish(const SwarmState& swarm) const {
        if (!std::isfinite(swarm.best_fitness) || !swarm.best_evaluation.allocation)
            throw SolverError("run_sgpso: no particle produced a finite fitness (" +
                              swarm.best_evaluation.diagnostic + ")");
        SgpsoResult r;
        r.position = swarm.best_position;
        r.layout = *codec_.decode(swarm.best_position);
        r.allocation = *swarm.best_evaluation.allocation;
        r.p_tx = swarm.best_evaluation.p_tx;
        r.fitness = swarm.best_fitness;
        r.violations = swarm.best_evaluation.violations;
        r.fitness_trace = swarm.fitness_trace;
        return r;
    }

    const Codec& codec() const { return codec_; }
    const PsoParams& params() const { return pso_; }

private:
    void evaluate_and_update(SwarmState& swarm) const {
        std::vector<FitnessEvaluation> evals(swarm.particles.size());
        parallel_for(evals.size(), threads_, [&](std::size_t m) {
            auto rng = particle_stream(pso_.seed, m, swarm.iteration, StreamPurpose::fitness);
            evals[m] = evaluate_fitness(swarm.particles[m].position, codec_, deployment_, channel_, precoder_,
                                        pso_.tau, rng);
        });
        update_bests(swarm, evals);
        swarm.fitness_trace.push_back(swarm.best_fitness);
    }

    Codec codec_;
    Deployment deployment_;
    ChannelParams channel_;
    PsoParams pso_;
    PrecoderConfig precoder_;
    std::size_t threads_;
};

/// Runs the SDP-guided swarm for `pso.iterations` iterations and returns the
/// best layout with its precoder, power, and the per-iteration best fitness.
template <LayoutCodec Codec>
SgpsoResult run_sgpso(const Codec& codec, const Deployment& deployment, const ChannelParams& channel,
                      const PsoParams& pso, const PrecoderConfig& precoder, std::size_t threads = 1) {
    return SgpsoRunner<Codec>(codec, deployment, channel, pso, precoder, threads).run();
}

} // namespace mawet

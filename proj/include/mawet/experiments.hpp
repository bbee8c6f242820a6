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

// Monte-Carlo harness: configuration, paired sweeps over architectures and
// deployments, near-field statistics, and CSV/JSON persistence.

#pragma once

#include "mawet/channel.hpp"
#include "mawet/geometry.hpp"
#include "mawet/parallel.hpp"
#include "mawet/precoder.hpp"
#include "mawet/sgpso.hpp"

#include <json.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace mawet {

enum class Architecture { ima, uma, ula, ura };

inline constexpr Architecture kAllArchitectures[] = {Architecture::ima, Architecture::uma, Architecture::ula,
                                                     Architecture::ura};

inline const char* to_string(Architecture a) {
    switch (a) {
    case Architecture::ima: return "ima";
    case Architecture::uma: return "uma";
    case Architecture::ula: return "ula";
    case Architecture::ura: return "ura";
    }
    return "?";
}

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline Architecture parse_architecture(const std::string& s) {
    for (auto a : kAllArchitectures)
        if (s == to_string(a))
            return a;
    throw ConfigError("unknown architecture '" + s + "' (expected ima, uma, ula or ura)");
}

inline bool is_movable(Architecture a) { return a == Architecture::ima || a == Architecture::uma; }

enum ExitCode : int { exit_ok = 0, exit_config = 1, exit_solver = 2, exit_io = 3 };

// -- configuration ------------------------------------------------------------

struct ExperimentConfig {
    std::uint64_t seed = 0;
    std::vector<Architecture> architectures{Architecture::ima};
    std::vector<Eigen::Index> n_antennas{9};
    std::vector<Eigen::Index> n_devices{3};
    double freq_hz = 1e9;
    double kappa = 2.0;
    double side_l = 1.0;
    std::optional<double> delta; // unset: half a wavelength
    double a_x = 8.0;
    double a_y = 8.0;
    double a_z = 3.0;
    std::vector<double> areas;   // square a_x = a_y sweep; empty: (a_x, a_y) only
    double p_th = 1e-3;

    std::size_t particle_cap = 30;
    std::size_t iteration_factor = 50;
    std::optional<std::size_t> particles;
    std::optional<std::size_t> iterations;
    double omega_min = 0.1;
    double omega_max = 1.0;
    double c1 = 1.49;
    double c2 = 1.49;
    double tau = 1e4;
    bool skip_sdp_when_violating = false;

    double sdp_tolerance = 1e-8;
    std::size_t randomization_count = 10000;
    std::size_t n_deployments = 10;
    bool full_scale = false;

    double wavelength() const { return wavelength_for(freq_hz); }
    double spacing() const { return delta.value_or(0.5 * wavelength()); }
    Region region() const { return Region(side_l, spacing()); }
    ChannelParams channel() const { return ChannelParams(wavelength(), kappa); }

    PrecoderConfig precoder() const {
        PrecoderConfig p;
        p.sdp_tolerance = sdp_tolerance;
        p.randomization_count = randomization_count;
        p.skip_sdp_when_violating = skip_sdp_when_violating;
        return p;
    }

    /// Search dimension: 2N coordinates for IMA, 4 parameters for UMA.
    static std::size_t search_dimension(Architecture a, Eigen::Index n) {
        return a == Architecture::uma ? 4 : 2 * std::size_t(n);
    }

    PsoParams pso(Architecture a, Eigen::Index n) const {
        PsoParams p = PsoParams::scaled(search_dimension(a, n), particle_cap, iteration_factor);
        if (particles)
            p.particles = *particles;
        if (iterations)
            p.iterations = *iterations;
        p.omega_min = omega_min;
        p.omega_max = omega_max;
        p.c1 = c1;
        p.c2 = c2;
        p.tau = tau;
        return p;
    }

    std::vector<double> area_values() const {
        return areas.empty() ? std::vector<double>{a_x} : areas;
    }

    Eigen::Index max_devices() const { return *std::max_element(n_devices.begin(), n_devices.end()); }

    /// Switches the budget-bearing defaults to the full-scale values.
    void apply_full_scale() {
        full_scale = true;
        particle_cap = 150;
        iteration_factor = 200;
        randomization_count = 1000000;
        n_deployments = 100;
    }

    void validate() const {
        auto positive = [](double v, const char* name) {
            if (!(v > 0.0) || !std::isfinite(v))
                throw ConfigError(std::string(name) + " must be positive and finite");
        };
        positive(freq_hz, "freq_hz");
        positive(side_l, "side_l");
        positive(a_z, "a_z");
        positive(p_th, "p_th");
        positive(sdp_tolerance, "sdp_tolerance");
        positive(tau, "tau");
        if (delta)
            positive(*delta, "delta");
        if (!(kappa >= 2.0))
            throw ConfigError("kappa must be at least 2");
        if (a_x < 0.0 || a_y < 0.0)
            throw ConfigError("a_x and a_y must be nonnegative");
        for (double a : areas)
            if (!(a >= 0.0))
                throw ConfigError("area values must be nonnegative");
        if (architectures.empty() || n_antennas.empty() || n_devices.empty())
            throw ConfigError("sweep lists must be non-empty");
        for (auto n : n_antennas)
            if (n < 1)
                throw ConfigError("n_antennas entries must be >= 1");
        for (auto k : n_devices)
            if (k < 1)
                throw ConfigError("n_devices entries must be >= 1");
        if (randomization_count < 1)
            throw ConfigError("randomization_count must be >= 1");
        if (n_deployments < 1)
            throw ConfigError("n_deployments must be >= 1");
        if (particle_cap < 1 || (particles && *particles < 1))
            throw ConfigError("particle count must be >= 1");
        if (!(omega_min > 0.0) || omega_min > omega_max)
            throw ConfigError("require 0 < omega_min <= omega_max");
        if (!(c1 > 0.0) || !(c2 > 0.0))
            throw ConfigError("c1 and c2 must be positive");
        try {
            (void)region();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
};

namespace detail {

template <class T>
std::vector<T> scalar_or_list(const nlohmann::json& v, const char* key) {
    try {
        if (v.is_array())
            return v.get<std::vector<T>>();
        return {v.get<T>()};
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config key '") + key + "': " + e.what());
    }
}

template <class T>
T get_value(const nlohmann::json& v, const char* key) {
    try {
        return v.get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config key '") + key + "': " + e.what());
    }
}

} // namespace detail

/// Overlays the keys of a flat JSON object onto `base`. Unknown keys are
/// rejected. `full_scale: true` is applied before the other keys so that
/// explicit values still win.
inline ExperimentConfig apply_config_json(ExperimentConfig cfg, const nlohmann::json& j) {
    if (!j.is_object())
        throw ConfigError("config must be a JSON object");
    if (auto it = j.find("full_scale"); it != j.end() && detail::get_value<bool>(*it, "full_scale"))
        cfg.apply_full_scale();

    for (const auto& [key, v] : j.items()) {
        const char* k = key.c_str();
        if (key == "full_scale") {
        } else if (key == "seed") {
            cfg.seed = detail::get_value<std::uint64_t>(v, k);
        } else if (key == "architecture") {
            cfg.architectures.clear();
            for (const auto& s : detail::scalar_or_list<std::string>(v, k))
                cfg.architectures.push_back(parse_architecture(s));
        } else if (key == "n_antennas") {
            cfg.n_antennas = detail::scalar_or_list<Eigen::Index>(v, k);
        } else if (key == "n_devices") {
            cfg.n_devices = detail::scalar_or_list<Eigen::Index>(v, k);
        } else if (key == "freq_hz") {
            cfg.freq_hz = detail::get_value<double>(v, k);
        } else if (key == "kappa") {
            cfg.kappa = detail::get_value<double>(v, k);
        } else if (key == "side_l") {
            cfg.side_l = detail::get_value<double>(v, k);
        } else if (key == "delta") {
            if (v.is_null())
                cfg.delta.reset();
            else
                cfg.delta = detail::get_value<double>(v, k);
        } else if (key == "a_x") {
            cfg.a_x = detail::get_value<double>(v, k);
        } else if (key == "a_y") {
            cfg.a_y = detail::get_value<double>(v, k);
        } else if (key == "a_z") {
            cfg.a_z = detail::get_value<double>(v, k);
        } else if (key == "areas") {
            cfg.areas = v.is_null() ? std::vector<double>{} : detail::scalar_or_list<double>(v, k);
        } else if (key == "p_th") {
            cfg.p_th = detail::get_value<double>(v, k);
        } else if (key == "particle_cap") {
            cfg.particle_cap = detail::get_value<std::size_t>(v, k);
        } else if (key == "iteration_factor") {
            cfg.iteration_factor = detail::get_value<std::size_t>(v, k);
        } else if (key == "particles") {
            if (v.is_null())
                cfg.particles.reset();
            else
                cfg.particles = detail::get_value<std::size_t>(v, k);
        } else if (key == "iterations") {
            if (v.is_null())
                cfg.iterations.reset();
            else
                cfg.iterations = detail::get_value<std::size_t>(v, k);
        } else if (key == "omega_min") {
            cfg.omega_min = detail::get_value<double>(v, k);
        } else if (key == "omega_max") {
            cfg.omega_max = detail::get_value<double>(v, k);
        } else if (key == "c1") {
            cfg.c1 = detail::get_value<double>(v, k);
        } else if (key == "c2") {
            cfg.c2 = detail::get_value<double>(v, k);
        } else if (key == "tau") {
            cfg.tau = detail::get_value<double>(v, k);
        } else if (key == "skip_sdp_when_violating") {
            cfg.skip_sdp_when_violating = detail::get_value<bool>(v, k);
        } else if (key == "sdp_tolerance") {
            cfg.sdp_tolerance = detail::get_value<double>(v, k);
        } else if (key == "randomization_count") {
            cfg.randomization_count = detail::get_value<std::size_t>(v, k);
        } else if (key == "n_deployments") {
            cfg.n_deployments = detail::get_value<std::size_t>(v, k);
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
    return cfg;
}

inline ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base = {}) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config file " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config file " + path.string() + ": " + e.what());
    }
    return apply_config_json(std::move(base), j);
}

/// Every effective setting, including derived wavelength and spacing.
inline nlohmann::json resolved_json(const ExperimentConfig& c) {
    nlohmann::json j;
    j["seed"] = c.seed;
    std::vector<std::string> arch;
    for (auto a : c.architectures)
        arch.emplace_back(to_string(a));
    j["architecture"] = arch;
    j["n_antennas"] = c.n_antennas;
    j["n_devices"] = c.n_devices;
    j["freq_hz"] = c.freq_hz;
    j["wavelength_m"] = c.wavelength();
    j["kappa"] = c.kappa;
    j["side_l"] = c.side_l;
    j["delta"] = c.spacing();
    j["a_x"] = c.a_x;
    j["a_y"] = c.a_y;
    j["a_z"] = c.a_z;
    j["areas"] = c.area_values();
    j["p_th"] = c.p_th;
    j["particle_cap"] = c.particle_cap;
    j["iteration_factor"] = c.iteration_factor;
    j["particles"] = c.particles ? nlohmann::json(*c.particles) : nlohmann::json(nullptr);
    j["iterations"] = c.iterations ? nlohmann::json(*c.iterations) : nlohmann::json(nullptr);
    j["omega_min"] = c.omega_min;
    j["omega_max"] = c.omega_max;
    j["c1"] = c.c1;
    j["c2"] = c.c2;
    j["tau"] = c.tau;
    j["skip_sdp_when_violating"] = c.skip_sdp_when_violating;
    j["sdp_tolerance"] = c.sdp_tolerance;
    j["randomization_count"] = c.randomization_count;
    j["n_deployments"] = c.n_deployments;
    j["full_scale"] = c.full_scale;
    return j;
}

/// FNV-1a over the resolved configuration text.
inline std::string config_hash(const ExperimentConfig& c) {
    const std::string text = resolved_json(c).dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// -- records --------------------------------------------------------------

struct ExperimentRecord {
    Architecture architecture = Architecture::ima;
    Eigen::Index n_antennas = 0;
    Eigen::Index n_devices = 0;
    double a_x = 0.0;
    double a_y = 0.0;
    double a_z = 0.0;
    std::size_t deployment = 0;
    std::uint64_t seed = 0;
    double p_tx = std::numeric_limits<double>::quiet_NaN();
    double nf_fraction = std::numeric_limits<double>::quiet_NaN();
    double wall_s = 0.0;

    // In-memory only.
    std::string config_hash;
    std::vector<bool> near_field;
    std::vector<double> fitness_trace;
    AntennaLayout layout;
    std::size_t violations = 0;
    std::string diagnostic;

    bool ok() const { return std::isfinite(p_tx) && p_tx > 0.0; }

    auto key() const {
        return std::make_tuple(int(architecture), n_antennas, n_devices, a_x, a_y, a_z, deployment);
    }
};

/// Devices for deployment `index`, drawn from a stream keyed only on
/// (seed, index); every architecture, N and K sees the same draw, and the
/// area enters only as a scale on the unit draws.
inline Deployment shared_deployment(std::uint64_t seed, std::size_t index, Eigen::Index k_devices, double a_x,
                                    double a_y, double a_z, double p_th) {
    std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(index), 0x64657031u};
    std::mt19937_64 rng(seq);
    return sample_deployment(rng, k_devices, a_x, a_y, a_z, p_th);
}

inline std::uint64_t instance_seed(std::uint64_t seed, Architecture a, Eigen::Index n, Eigen::Index k,
                                   std::size_t deployment) {
    std::seed_seq seq{std::uint32_t(seed),       std::uint32_t(seed >> 32), std::uint32_t(a),
                      std::uint32_t(n),          std::uint32_t(k),          std::uint32_t(deployment),
                      0x696e7374u};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (std::uint64_t(out[0]) << 32) | out[1];
}

inline std::vector<bool> near_field_flags(const AntennaLayout& layout, const Deployment& d, double wavelength) {
    std::vector<bool> flags(std::size_t(d.size()));
    for (Eigen::Index k = 0; k < d.size(); ++k)
        flags[std::size_t(k)] = is_near_field(layout, d.devices.col(k), wavelength);
    return flags;
}

/// One optimization instance. Solver failures are captured in the record
/// (p_T = NaN, diagnostic set) instead of propagating.
inline ExperimentRecord run_instance(const ExperimentConfig& cfg, Architecture arch, Eigen::Index n_antennas,
                                     const Deployment& deployment, std::size_t deployment_index,
                                     std::size_t threads = 1) {
    ExperimentRecord r;
    r.architecture = arch;
    r.n_antennas = n_antennas;
    r.n_devices = deployment.size();
    r.a_x = deployment.plane_x;
    r.a_y = deployment.plane_y;
    r.a_z = deployment.standoff;
    r.deployment = deployment_index;
    r.seed = cfg.seed;
    r.config_hash = config_hash(cfg);

    const auto start = std::chrono::steady_clock::now();
    const std::uint64_t seed = instance_seed(cfg.seed, arch, n_antennas, deployment.size(), deployment_index);
    const ChannelParams channel = cfg.channel();
    try {
        switch (arch) {
        case Architecture::ima:
        case Architecture::uma: {
            PsoParams pso = cfg.pso(arch, n_antennas);
            pso.seed = seed;
            SgpsoResult res;
            if (arch == Architecture::ima)
                res = run_sgpso(ImaCodec(n_antennas, cfg.region()), deployment, channel, pso, cfg.precoder(),
                                threads);
            else
                res = run_sgpso(UmaCodec(n_antennas, cfg.region(), 0.5 * channel.wavelength), deployment, channel,
                                pso, cfg.precoder(), threads);
            r.layout = res.layout;
            r.p_tx = res.p_tx;
            r.violations = res.violations;
            r.fitness_trace = std::move(res.fitness_trace);
            break;
        }
        case Architecture::ula:
        case Architecture::ura: {
            r.layout = arch == Architecture::ula ? fixed_ula_positions(n_antennas, cfg.spacing())
                                                 : fixed_ura_positions(n_antennas, cfg.spacing());
            std::mt19937_64 rng(seed);
            const auto h = channel_matrix(r.layout, deployment, channel);
            r.p_tx = allocate_power(h, deployment.power_requirements, cfg.precoder(), rng).p_tx;
            break;
        }
        }
        r.near_field = near_field_flags(r.layout, deployment, channel.wavelength);
        r.nf_fraction = double(std::count(r.near_field.begin(), r.near_field.end(), true)) /
                        double(r.near_field.size());
    } catch (const std::exception& e) {
        r.p_tx = std::numeric_limits<double>::quiet_NaN();
        r.nf_fraction = std::numeric_limits<double>::quiet_NaN();
        r.diagnostic = e.what();
    }
    r.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

inline void canonical_sort(std::vector<ExperimentRecord>& records) {
    std::stable_sort(records.begin(), records.end(),
                     [](const ExperimentRecord& a, const ExperimentRecord& b) { return a.key() < b.key(); });
}

/// Cartesian product architectures x N x K x area x deployment. Instances run
/// in parallel; the output order is canonical.
inline std::vector<ExperimentRecord> sweep(const ExperimentConfig& cfg, std::size_t threads = thread_budget()) {
    cfg.validate();
    struct Job {
        Architecture arch;
        Eigen::Index n, k;
        double area;
        std::size_t deployment;
    };
    std::vector<Job> jobs;
    const auto areas = cfg.area_values();
    for (auto a : cfg.architectures)
        for (auto n : cfg.n_antennas)
            for (auto k : cfg.n_devices)
                for (double area : areas)
                    for (std::size_t d = 0; d < cfg.n_deployments; ++d)
                        jobs.push_back({a, n, k, area, d});

    const bool square = !cfg.areas.empty();
    const Eigen::Index k_max = cfg.max_devices();
    std::vector<ExperimentRecord> out(jobs.size());
    parallel_for(jobs.size(), threads, [&](std::size_t i) {
        const Job& j = jobs[i];
        const double ax = square ? j.area : cfg.a_x;
        const double ay = square ? j.area : cfg.a_y;
        const Deployment d =
            shared_deployment(cfg.seed, j.deployment, k_max, ax, ay, cfg.a_z, cfg.p_th).prefix(j.k);
        out[i] = run_instance(cfg, j.arch, j.n, d, j.deployment);
    });
    canonical_sort(out);
    return out;
}

// -- aggregation -----------------------------------------------------------

struct GroupSummary {
    Architecture architecture = Architecture::ima;
    Eigen::Index n_antennas = 0;
    Eigen::Index n_devices = 0;
    double a_x = 0.0;
    double a_y = 0.0;
    double a_z = 0.0;
    std::size_t count = 0;
    std::size_t failures = 0;
    double mean_p_tx = std::numeric_limits<double>::quiet_NaN();
    double std_p_tx = std::numeric_limits<double>::quiet_NaN();
    double nf_per_pair = std::numeric_limits<double>::quiet_NaN();
    double nf_any_device = std::numeric_limits<double>::quiet_NaN();
};

/// Per-group mean/std of p_T over successful deployments, plus both near-field
/// aggregations: fraction of (device, deployment) pairs, and fraction of
/// deployments with at least one near-field device. Groups are keyed by
/// (arch, N, K, area); summation is in deployment order so results do not
/// depend on record order.
inline std::vector<GroupSummary> summarize(std::vector<ExperimentRecord> records) {
    canonical_sort(records);
    std::vector<GroupSummary> out;
    std::size_t i = 0;
    while (i < records.size()) {
        const auto& head = records[i];
        GroupSummary g{head.architecture, head.n_antennas, head.n_devices, head.a_x, head.a_y, head.a_z};
        std::vector<double> p;
        double pairs = 0.0, pair_nf = 0.0, any = 0.0, nf_runs = 0.0;
        std::size_t j = i;
        for (; j < records.size(); ++j) {
            const auto& r = records[j];
            if (std::tie(r.architecture, r.n_antennas, r.n_devices, r.a_x, r.a_y, r.a_z) !=
                std::tie(head.architecture, head.n_antennas, head.n_devices, head.a_x, head.a_y, head.a_z))
                break;
            ++g.count;
            if (!r.ok()) {
                ++g.failures;
                continue;
            }
            p.push_back(r.p_tx);
            if (std::isfinite(r.nf_fraction)) {
                pairs += double(r.n_devices);
                pair_nf += r.nf_fraction * double(r.n_devices);
                any += r.nf_fraction > 0.0 ? 1.0 : 0.0;
                nf_runs += 1.0;
            }
        }
        if (!p.empty()) {
            double s = 0.0;
            for (double v : p)
                s += v;
            g.mean_p_tx = s / double(p.size());
            double ss = 0.0;
            for (double v : p)
                ss += (v - g.mean_p_tx) * (v - g.mean_p_tx);
            g.std_p_tx = p.size() > 1 ? std::sqrt(ss / double(p.size() - 1)) : 0.0;
        }
        if (nf_runs > 0.0) {
            g.nf_per_pair = pair_nf / pairs;
            g.nf_any_device = any / nf_runs;
        }
        out.push_back(g);
        i = j;
    }
    return out;
}

struct NearFieldRow {
    Architecture architecture = Architecture::ima;
    Eigen::Index n_antennas = 0;
    double a_x = 0.0;
    double per_pair = 0.0;
    double any_device = 0.0;
    std::size_t deployments = 0;
};

/// Near-field probability grouped by (architecture, N, a_x), pooled over K.
inline std::vector<NearFieldRow> nearfield_probability(const std::vector<ExperimentRecord>& records) {
    std::map<std::tuple<int, Eigen::Index, double>, std::array<double, 4>> acc; // pairs, nf pairs, runs, any
    for (const auto& r : records) {
        if (!r.ok() || !std::isfinite(r.nf_fraction))
            continue;
        auto& a = acc[{int(r.architecture), r.n_antennas, r.a_x}];
        a[0] += double(r.n_devices);
        a[1] += std::round(r.nf_fraction * double(r.n_devices));
        a[2] += 1.0;
        a[3] += r.nf_fraction > 0.0 ? 1.0 : 0.0;
    }
    std::vector<NearFieldRow> out;
    for (const auto& [key, a] : acc)
        out.push_back({Architecture(std::get<0>(key)), std::get<1>(key), std::get<2>(key), a[1] / a[0], a[3] / a[2],
                       std::size_t(a[2])});
    return out;
}

// -- persistence -------------------------------------------------------------

inline constexpr const char* kCsvHeader = "arch,N,K,ax,ay,az,deployment,seed,p_T_watts,nf_fraction,wall_s";

inline std::string format_double(double v) {
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline double parse_double(const std::string& s) {
    if (s == "nan")
        return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf")
        return std::numeric_limits<double>::infinity();
    if (s == "-inf")
        return -std::numeric_limits<double>::infinity();
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size())
        throw std::invalid_argument("trailing characters in '" + s + "'");
    return v;
}

inline std::filesystem::path sidecar_path(const std::filesystem::path& csv) {
    auto p = csv;
    p.replace_extension(".config.json");
    return p;
}

inline void write_csv(const std::vector<ExperimentRecord>& records, std::ostream& out) {
    out << kCsvHeader << '\n';
    for (const auto& r : records)
        out << to_string(r.architecture) << ',' << r.n_antennas << ',' << r.n_devices << ',' << format_double(r.a_x)
            << ',' << format_double(r.a_y) << ',' << format_double(r.a_z) << ',' << r.deployment << ',' << r.seed
            << ',' << format_double(r.p_tx) << ',' << format_double(r.nf_fraction) << ','
            << format_double(r.wall_s) << '\n';
}

/// Writes the CSV and, next to it, `<stem>.config.json` with the resolved
/// configuration.
inline void write_results(const std::vector<ExperimentRecord>& records, const std::filesystem::path& path,
                          const ExperimentConfig& cfg) {
    {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw IoError("cannot open " + path.string() + " for writing");
        write_csv(records, out);
        if (!out)
            throw IoError("write failed for " + path.string());
    }
    const auto side = sidecar_path(path);
    std::ofstream js(side, std::ios::binary);
    if (!js)
        throw IoError("cannot open " + side.string() + " for writing");
    auto j = resolved_json(cfg);
    j["config_hash"] = config_hash(cfg);
    js << j.dump(2) << '\n';
    if (!js)
        throw IoError("write failed for " + side.string());
}

inline std::vector<ExperimentRecord> read_csv(std::istream& in, const std::string& name = "<stream>") {
    std::string line;
    if (!std::getline(in, line))
        throw IoError(name + ": empty file");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (line != kCsvHeader)
        throw IoError(name + ": unexpected header '" + line + "'");
    std::vector<ExperimentRecord> out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');)
            f.push_back(cell);
        if (f.size() != 11)
            throw IoError(name + ":" + std::to_string(lineno) + ": expected 11 fields");
        try {
            ExperimentRecord r;
            r.architecture = parse_architecture(f[0]);
            r.n_antennas = std::stol(f[1]);
            r.n_devices = std::stol(f[2]);
            r.a_x = parse_double(f[3]);
            r.a_y = parse_double(f[4]);
            r.a_z = parse_double(f[5]);
            r.deployment = std::stoul(f[6]);
            r.seed = std::stoull(f[7]);
            r.p_tx = parse_double(f[8]);
            r.nf_fraction = parse_double(f[9]);
            r.wall_s = parse_double(f[10]);
            out.push_back(std::move(r));
        } catch (const std::exception& e) {
            throw IoError(name + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

inline std::vector<ExperimentRecord> read_results(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string());
    return read_csv(in, path.string());
}

} // namespace mawet

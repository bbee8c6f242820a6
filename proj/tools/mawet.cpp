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


// mawet command-line driver.
//
//   mawet optimize  --arch ima --n 9 --k 3 --seed 1 [--deployment 0]
//   mawet sweep-n   --seed 1 --out power_vs_n.csv
//   mawet sweep-k   --seed 1 --out power_vs_k.csv
//   mawet nearfield --seed 1 --out nearfield.csv
//   mawet plotdata  --in a.csv b.csv --out summary.csv

#include "mawet.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using mawet::ExperimentConfig;

struct RunOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> arch;
    std::vector<long> n;
    std::vector<long> k;
    std::vector<double> areas;
    std::optional<std::size_t> deployments;
    std::optional<std::size_t> particles;
    std::optional<std::size_t> iterations;
    std::optional<std::size_t> candidates;
    std::optional<double> kappa;
    std::optional<double> a_z;
    bool full_scale = false;
    std::string out;
};

void add_run_options(CLI::App* cmd, RunOptions& o, bool seed_required) {
    cmd->add_option("-c,--config", o.config_path, "JSON config file (flat keys)")->check(CLI::ExistingFile);
    auto* seed = cmd->add_option("--seed", o.seed, "master seed");
    if (seed_required)
        seed->required();
    cmd->add_option("--arch", o.arch, "architectures: ima uma ula ura");
    cmd->add_option("--n", o.n, "antenna counts");
    cmd->add_option("--k", o.k, "device counts");
    cmd->add_option("--areas", o.areas, "square device-plane sides a_x = a_y (m)");
    cmd->add_option("--deployments", o.deployments, "deployments per configuration");
    cmd->add_option("--particles", o.particles, "swarm size override");
    cmd->add_option("--iterations", o.iterations, "iteration count override");
    cmd->add_option("--candidates", o.candidates, "Gaussian randomization candidates");
    cmd->add_option("--kappa", o.kappa, "element boresight gain exponent");
    cmd->add_option("--az", o.a_z, "device plane standoff (m)");
    cmd->add_flag("--full-scale", o.full_scale, "full-size swarm, candidates and deployment count");
    cmd->add_option("-o,--out", o.out, "output CSV path");
}

ExperimentConfig resolve(ExperimentConfig cfg, const RunOptions& o) {
    if (o.full_scale)
        cfg.apply_full_scale();
    if (!o.config_path.empty())
        cfg = mawet::load_config(o.config_path, cfg);
    if (o.seed)
        cfg.seed = *o.seed;
    if (!o.arch.empty()) {
        cfg.architectures.clear();
        for (const auto& a : o.arch)
            cfg.architectures.push_back(mawet::parse_architecture(a));
    }
    if (!o.n.empty())
        cfg.n_antennas.assign(o.n.begin(), o.n.end());
    if (!o.k.empty())
        cfg.n_devices.assign(o.k.begin(), o.k.end());
    if (!o.areas.empty())
        cfg.areas = o.areas;
    if (o.deployments)
        cfg.n_deployments = *o.deployments;
    if (o.particles)
        cfg.particles = *o.particles;
    if (o.iterations)
        cfg.iterations = *o.iterations;
    if (o.candidates)
        cfg.randomization_count = *o.candidates;
    if (o.kappa)
        cfg.kappa = *o.kappa;
    if (o.a_z)
        cfg.a_z = *o.a_z;
    cfg.validate();
    return cfg;
}

int finish_sweep(const std::vector<mawet::ExperimentRecord>& records, const ExperimentConfig& cfg,
                 const std::string& out) {
    if (out.empty())
        mawet::write_csv(records, std::cout);
    else
        mawet::write_results(records, out, cfg);

    std::size_t failed = 0;
    for (const auto& r : records)
        if (!r.ok()) {
            ++failed;
            std::fprintf(stderr, "warning: %s N=%ld K=%ld deployment %zu failed: %s\n", to_string(r.architecture),
                         long(r.n_antennas), long(r.n_devices), r.deployment, r.diagnostic.c_str());
        }
    for (const auto& g : mawet::summarize(records))
        std::fprintf(stderr, "%-3s N=%-3ld K=%-2ld a=%-5g mean p_T = %.6g W  (n=%zu, nf=%.3f)\n",
                     to_string(g.architecture), long(g.n_antennas), long(g.n_devices), g.a_x, g.mean_p_tx,
                     g.count - g.failures, g.nf_per_pair);
    return !records.empty() && failed == records.size() ? mawet::exit_solver : mawet::exit_ok;
}

int run_optimize(const RunOptions& o, std::size_t deployment) {
    ExperimentConfig base;
    auto cfg = resolve(base, o);
    const auto arch = cfg.architectures.front();
    const auto n = cfg.n_antennas.front();
    const auto k = cfg.n_devices.front();
    const auto d = mawet::shared_deployment(cfg.seed, deployment, k, cfg.a_x, cfg.a_y, cfg.a_z, cfg.p_th);
    const auto r = mawet::run_instance(cfg, arch, n, d, deployment, mawet::thread_budget());

    nlohmann::json j;
    j["arch"] = to_string(arch);
    j["N"] = n;
    j["K"] = k;
    j["deployment"] = deployment;
    j["seed"] = cfg.seed;
    j["config_hash"] = r.config_hash;
    j["ok"] = r.ok();
    if (!r.ok())
        j["diagnostic"] = r.diagnostic;
    j["p_T_watts"] = r.ok() ? nlohmann::json(r.p_tx) : nlohmann::json(nullptr);
    j["wall_s"] = r.wall_s;
    std::vector<std::array<double, 2>> pos;
    for (Eigen::Index i = 0; i < r.layout.size(); ++i)
        pos.push_back({r.layout[i].x(), r.layout[i].y()});
    j["antennas"] = pos;
    std::vector<std::array<double, 3>> dev;
    for (Eigen::Index i = 0; i < d.size(); ++i)
        dev.push_back({d.devices(0, i), d.devices(1, i), d.devices(2, i)});
    j["devices"] = dev;
    j["near_field"] = r.near_field;
    j["violations"] = r.violations;
    j["fitness_trace"] = r.fitness_trace;
    std::cout << j.dump(2) << '\n';

    if (!o.out.empty())
        mawet::write_results({r}, o.out, cfg);
    return r.ok() ? mawet::exit_ok : mawet::exit_solver;
}

int run_plotdata(const std::vector<std::string>& inputs, const std::string& out) {
    std::vector<mawet::ExperimentRecord> all;
    for (const auto& path : inputs) {
        auto r = mawet::read_results(path);
        all.insert(all.end(), r.begin(), r.end());
    }
    std::ofstream file;
    if (!out.empty()) {
        file.open(out, std::ios::binary);
        if (!file)
            throw mawet::IoError("cannot open " + out + " for writing");
    }
    std::ostream& os = out.empty() ? std::cout : file;
    os << "arch,N,K,ax,ay,az,count,failures,mean_p_T_watts,std_p_T_watts,nf_per_pair,nf_any_device\n";
    using mawet::format_double;
    for (const auto& g : mawet::summarize(all))
        os << to_string(g.architecture) << ',' << g.n_antennas << ',' << g.n_devices << ',' << format_double(g.a_x)
           << ',' << format_double(g.a_y) << ',' << format_double(g.a_z) << ',' << g.count << ',' << g.failures
           << ',' << format_double(g.mean_p_tx) << ',' << format_double(g.std_p_tx) << ','
           << format_double(g.nf_per_pair) << ',' << format_double(g.nf_any_device) << '\n';
    if (!os)
        throw mawet::IoError("write failed for " + (out.empty() ? std::string("<stdout>") : out));
    return mawet::exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Movable-antenna wireless energy transfer: SDP-guided swarm placement and benchmarks"};
    app.require_subcommand(1);

    RunOptions opt_o, opt_n, opt_k, opt_f;
    std::size_t deployment = 0;
    auto* optimize = app.add_subcommand("optimize", "optimize a single deployment");
    add_run_options(optimize, opt_o, false);
    optimize->add_option("--deployment", deployment, "deployment index");

    auto* sweep_n = app.add_subcommand("sweep-n", "power versus antenna count");
    add_run_options(sweep_n, opt_n, true);
    auto* sweep_k = app.add_subcommand("sweep-k", "power versus device count");
    add_run_options(sweep_k, opt_k, true);
    auto* nearfield = app.add_subcommand("nearfield", "near-field probability versus device area");
    add_run_options(nearfield, opt_f, true);

    std::vector<std::string> inputs;
    std::string summary_out;
    auto* plotdata = app.add_subcommand("plotdata", "aggregate result CSVs for plotting");
    plotdata->add_option("-i,--in", inputs, "result CSVs")->required()->check(CLI::ExistingFile);
    plotdata->add_option("-o,--out", summary_out, "summary CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? mawet::exit_ok : mawet::exit_config;
    }

    const std::vector<mawet::Architecture> all(std::begin(mawet::kAllArchitectures),
                                               std::end(mawet::kAllArchitectures));
    try {
        if (*optimize)
            return run_optimize(opt_o, deployment);
        if (*plotdata)
            return run_plotdata(inputs, summary_out);

        ExperimentConfig base;
        base.architectures = all;
        const RunOptions* o = nullptr;
        if (*sweep_n) {
            base.n_antennas = {4, 9, 16};
            base.n_devices = {3};
            o = &opt_n;
        } else if (*sweep_k) {
            base.n_antennas = {9};
            base.n_devices = {1, 2, 3};
            o = &opt_k;
        } else {
            base.n_antennas = {4, 9, 16};
            base.n_devices = {3};
            base.areas = {2, 4, 8, 16};
            o = &opt_f;
        }
        const auto cfg = resolve(base, *o);
        if (!o->out.empty() && !std::ofstream(o->out, std::ios::binary | std::ios::app))
            throw mawet::IoError("cannot open " + o->out + " for writing");
        const auto records = mawet::sweep(cfg);
        return finish_sweep(records, cfg, o->out);
    } catch (const mawet::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return mawet::exit_config;
    } catch (const mawet::IoError& e) {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return mawet::exit_io;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return mawet::exit_config;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return mawet::exit_solver;
    }
}

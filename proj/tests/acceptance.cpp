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


// Acceptance suite. Prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion in the selected group fails.
//
//   acceptance --group fast     criteria 1, 2, 3, 6, 7 (seconds)
//   acceptance --group trends   criteria 4, 5 (desk-scale sweeps, tens of minutes)
//   acceptance --group all

#include "mawet.hpp"

#include <CLI11.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

using namespace mawet;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

class Report {
public:
    void run(int id, const char* title, const std::function<Outcome()>& body) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = body();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] criterion %d: %s -- %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(),
                    secs);
        std::fflush(stdout);
        failures_ += o.pass ? 0 : 1;
    }
    int failures() const { return failures_; }

private:
    int failures_ = 0;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

AntennaLayout random_layout(std::mt19937_64& rng, Eigen::Index n, double side) {
    std::uniform_real_distribution<double> u(-0.5 * side, 0.5 * side);
    Eigen::Matrix2Xd p(2, n);
    for (Eigen::Index i = 0; i < p.size(); ++i)
        p.data()[i] = u(rng);
    return AntennaLayout(p);
}

// -- criterion 1 -------------------------------------------------------------

Outcome ura_near_field_distance() {
    const double lambda = wavelength_for(1e9);
    const auto ura = fixed_ura_positions(9, lambda / 2);
    const double rd = rayleigh_distance(aperture_diameter(ura), lambda);

    ExperimentConfig c;
    c.seed = 101;
    c.architectures = {Architecture::ura};
    c.n_antennas = {9};
    c.n_devices = {3};
    c.a_z = 3.0;
    c.areas = {2, 4, 8, 16};
    c.n_deployments = 25;
    const auto table = nearfield_probability(sweep(c, 1));
    double worst = 0.0;
    for (const auto& row : table)
        worst = std::max({worst, row.per_pair, row.any_device});
    const bool pass = rd >= 1.19 && rd <= 1.21 && worst == 0.0 && table.size() == 4;
    return {pass, fmt("2D^2/lambda = %.6f m (need [1.19, 1.21]); max near-field probability at a_z=3 over "
                      "a in {2,4,8,16}: %g (need 0)",
                      rd, worst)};
}

// -- criterion 2 -------------------------------------------------------------

Outcome single_device_oracle() {
    std::mt19937_64 rng(202);
    const ChannelParams ch;
    double worst_xi = 0.0, worst_p = 0.0;
    for (int t = 0; t < 100; ++t) {
        const Eigen::Index n = 2 + t % 15;
        const auto layout = random_layout(rng, n, 1.0);
        const auto dep = sample_deployment(rng, 1, 8.0, 8.0, 3.0, 1e-3);
        const auto h = channel_matrix(layout, dep, ch);
        const double l1 = h.column(0).cwiseAbs().sum();

        const auto sdp = solve_maxmin_sdp(h);
        worst_xi = std::max(worst_xi, std::abs(sdp.xi / (l1 * l1 / double(n)) - 1.0));
        const auto alloc = gaussian_randomization(sdp, h, dep.power_requirements, 10000, rng);
        worst_p = std::max(worst_p, std::abs(alloc.p_tx / (double(n) * 1e-3 / (l1 * l1)) - 1.0));
    }
    return {worst_xi <= 1e-6 && worst_p <= 0.01,
            fmt("max rel. error: SDP value %.3e (need <= 1e-6), randomized power %.3e (need <= 1e-2)", worst_xi,
                worst_p)};
}

// -- criterion 3 -------------------------------------------------------------

Outcome brute_force_equivalence() {
    std::mt19937_64 rng(303);
    const ChannelParams ch;
    double worst_ratio = 1e300, worst_bound = 0.0;
    int instances = 0;
    for (Eigen::Index n : {2, 3})
        for (Eigen::Index k : {1, 2})
            for (int t = 0; t < 20; ++t) {
                const auto layout = random_layout(rng, n, 1.0);
                const auto dep = sample_deployment(rng, k, 8.0, 8.0, 3.0, 1e-3);
                const auto h = channel_matrix(layout, dep, ch);
                const auto sdp = solve_maxmin_sdp(h);
                const auto rand = gaussian_randomization(sdp, h, dep.power_requirements, 10000, rng);
                const auto grid = grid_oracle(h, dep.power_requirements, 64);
                worst_ratio = std::min(worst_ratio, grid.p_tx / rand.p_tx);
                const Eigen::VectorXcd w = grid.precoder.weights();
                double g = 1e300;
                for (Eigen::Index j = 0; j < k; ++j)
                    g = std::min(g, std::norm(h.column(j).dot(w)));
                worst_bound = std::max(worst_bound, g / sdp.xi);
                ++instances;
            }
    return {worst_ratio >= 0.95 && worst_bound <= 1.0 + 1e-6,
            fmt("%d instances; min grid/randomized power %.6f (need >= 0.95); max grid gain / SDP bound %.9f "
                "(need <= 1 + 1e-6)",
                instances, worst_ratio, worst_bound)};
}

// -- criterion 6 -------------------------------------------------------------

Outcome radiation_normalization() {
    using boost::math::quadrature::gauss_kronrod;
    double worst = 0.0;
    std::ostringstream vals;
    for (double kappa : {2.0, 3.0, 4.0, 8.0}) {
        auto f = [kappa](double theta) { return radiation_profile(theta, kappa) * std::sin(theta); };
        const double total = 2.0 * std::numbers::pi * gauss_kronrod<double, 61>::integrate(f, 0.0, std::numbers::pi,
                                                                                           15, 1e-14);
        const double rel = std::abs(total / (4.0 * std::numbers::pi) - 1.0);
        worst = std::max(worst, rel);
        vals << " k=" << kappa << ":" << rel;
    }
    return {worst <= 1e-6, fmt("max rel. deviation from 4 pi %.3e (need <= 1e-6);%s", worst, vals.str().c_str())};
}

// -- criterion 7 -------------------------------------------------------------

Outcome ula_dichotomy() {
    ExperimentConfig c;
    c.seed = 707;
    c.architectures = {Architecture::ula};
    c.n_antennas = {9, 16};
    c.n_devices = {3};
    c.a_z = 3.0;
    c.areas = {2, 8, 16};
    c.n_deployments = 100;
    const auto records = sweep(c, 1);
    const double lambda = c.wavelength();

    std::size_t mismatches = 0, checked = 0;
    for (const auto& r : records) {
        // Independent recomputation: a centred ULA has D = (N-1) delta and its
        // centroid at the origin.
        const double d = double(r.n_antennas - 1) * c.spacing();
        const double limit = 2.0 * d * d / lambda;
        const auto dep = shared_deployment(c.seed, r.deployment, 3, r.a_x, r.a_y, c.a_z, c.p_th);
        for (Eigen::Index k = 0; k < dep.size(); ++k) {
            const bool expect = dep.devices.col(k).norm() <= limit;
            mismatches += expect != bool(r.near_field[std::size_t(k)]);
            ++checked;
        }
    }
    std::ostringstream probs;
    bool n16_all_near = true;
    for (const auto& row : nearfield_probability(records)) {
        probs << " N=" << row.n_antennas << ",a=" << row.a_x << ":" << row.per_pair;
        if (row.n_antennas == 16)
            n16_all_near = n16_all_near && row.per_pair == 1.0;
    }
    const double d16 = 15.0 * c.spacing();
    return {mismatches == 0 && n16_all_near,
            fmt("%zu device checks, %zu mismatches with the per-device distance rule; N=16 2D^2/lambda = %.2f m, "
                "probability 1 in every area: %s; per-pair probabilities:%s",
                checked, mismatches, 2 * d16 * d16 / lambda, n16_all_near ? "yes" : "no", probs.str().c_str())};
}

// -- criteria 4 and 5 --------------------------------------------------------

using GroupKey = std::tuple<Architecture, Eigen::Index, Eigen::Index>;

struct TrendData {
    ExperimentConfig config;
    std::vector<ExperimentRecord> records;
    std::map<GroupKey, double> mean;
    std::size_t failures = 0;
};

TrendData run_trend_sweeps(std::size_t threads) {
    TrendData t;
    ExperimentConfig& c = t.config;
    c.seed = 4;
    c.architectures.assign(std::begin(kAllArchitectures), std::end(kAllArchitectures));
    c.side_l = 1.0;
    c.n_deployments = 10;

    ExperimentConfig by_n = c;
    by_n.n_antennas = {4, 9, 16};
    by_n.n_devices = {3};
    ExperimentConfig by_k = c;
    by_k.n_antennas = {9};
    by_k.n_devices = {1, 2};
    t.records = sweep(by_n, threads);
    auto more = sweep(by_k, threads);
    t.records.insert(t.records.end(), more.begin(), more.end());
    canonical_sort(t.records);

    for (const auto& g : summarize(t.records)) {
        t.mean[{g.architecture, g.n_antennas, g.n_devices}] = g.mean_p_tx;
        t.failures += g.failures;
    }
    return t;
}

Outcome trend_reproduction(const TrendData& t) {
    std::ostringstream os;
    bool a = true, b, cc = true, d;
    for (auto arch : kAllArchitectures) {
        const double p4 = t.mean.at({arch, 4, 3}), p9 = t.mean.at({arch, 9, 3}), p16 = t.mean.at({arch, 16, 3});
        const double k1 = t.mean.at({arch, 9, 1}), k2 = t.mean.at({arch, 9, 2});
        a = a && p4 > p9 && p9 > p16;
        cc = cc && k1 <= k2 && k2 <= p9;
        os << fmt(" %s: N4=%.4g N9=%.4g N16=%.4g K1=%.4g K2=%.4g;", to_string(arch), p4, p9, p16, k1, k2);
    }
    const double ima = t.mean.at({Architecture::ima, 9, 3});
    const double uma = t.mean.at({Architecture::uma, 9, 3});
    b = ima <= t.mean.at({Architecture::ula, 9, 3}) && ima <= t.mean.at({Architecture::ura, 9, 3});
    const double gap = uma / ima - 1.0;
    d = std::abs(gap) <= 0.25;
    const bool pass = a && b && cc && d && t.failures == 0;
    return {pass, fmt("(a) decreasing in N: %s, (b) IMA <= ULA and URA at N=9: %s, (c) non-decreasing in K: %s, "
                      "(d) UMA/IMA - 1 = %+.4f (need |.| <= 0.25): %s; failed runs: %zu; means [W]:%s",
                      a ? "yes" : "no", b ? "yes" : "no", cc ? "yes" : "no", gap, d ? "yes" : "no", t.failures,
                      os.str().c_str())};
}

Outcome swarm_invariants(const TrendData& t, std::size_t threads) {
    std::size_t runs = 0, trace_bad = 0, ima_bad = 0;
    const double delta = t.config.spacing();
    const double half = 0.5 * t.config.side_l;
    for (const auto& r : t.records) {
        if (!is_movable(r.architecture))
            continue;
        ++runs;
        for (std::size_t i = 1; i < r.fitness_trace.size(); ++i)
            if (r.fitness_trace[i] > r.fitness_trace[i - 1]) {
                ++trace_bad;
                break;
            }
        if (r.architecture == Architecture::ima &&
            (!spacing_violations(r.layout, delta).empty() || r.layout.positions.cwiseAbs().maxCoeff() > half))
            ++ima_bad;
    }

    // Rerun deployment 0 of every movable-array configuration and compare bits.
    std::vector<const ExperimentRecord*> subset;
    for (const auto& r : t.records)
        if (is_movable(r.architecture) && r.deployment == 0)
            subset.push_back(&r);
    std::vector<char> same(subset.size(), 0);
    parallel_for(subset.size(), threads, [&](std::size_t i) {
        const auto& r = *subset[i];
        const auto dep = shared_deployment(t.config.seed, r.deployment, 3, r.a_x, r.a_y, r.a_z, t.config.p_th)
                             .prefix(r.n_devices);
        const auto again = run_instance(t.config, r.architecture, r.n_antennas, dep, r.deployment);
        same[i] = again.p_tx == r.p_tx && again.fitness_trace == r.fitness_trace &&
                  again.layout.positions == r.layout.positions && again.near_field == r.near_field;
    });
    const auto identical = std::size_t(std::count(same.begin(), same.end(), 1));
    return {trace_bad == 0 && ima_bad == 0 && identical == subset.size() && runs > 0,
            fmt("%zu swarm runs: %zu with a rising gbest trace, %zu IMA layouts violating spacing or bounds; "
                "reruns bitwise identical: %zu/%zu",
                runs, trace_bad, ima_bad, identical, subset.size())};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mawet acceptance suite"};
    std::string group = "all";
    app.add_option("--group", group, "fast, trends or all")->check(CLI::IsMember({"fast", "trends", "all"}));
    CLI11_PARSE(app, argc, argv);

    Report report;
    const bool fast = group != "trends";
    const bool trends = group != "fast";
    if (fast) {
        report.run(1, "URA N=9 near-field distance and zero near-field probability", ura_near_field_distance);
        report.run(2, "single-device analytic optimum", single_device_oracle);
        report.run(3, "brute-force phase grid versus SDP randomization", brute_force_equivalence);
        report.run(6, "element pattern radiates 4 pi", radiation_normalization);
        report.run(7, "ULA near-field rule and N=16 dichotomy", ula_dichotomy);
    }
    if (trends) {
        const std::size_t threads = thread_budget();
        TrendData data;
        bool ran = false;
        report.run(4, "power trends over N, K and architecture (10 shared deployments, K=3, l=1 m)", [&] {
            data = run_trend_sweeps(threads);
            ran = true;
            return trend_reproduction(data);
        });
        report.run(5, "swarm invariants on every trend run", [&]() -> Outcome {
            if (!ran)
                return {false, "trend sweeps did not complete"};
            return swarm_invariants(data, threads);
        });
    }
    std::printf("%d failing criteria\n", report.failures());
    return report.failures() == 0 ? 0 : 1;
}

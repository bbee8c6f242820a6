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


#include "mawet/sdp.hpp"

#include <catch_amalgamated.hpp>

#include <complex>
#include <random>

using namespace mawet;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using cplx = std::complex<double>;

namespace {

// minimize <C, X>  s.t.  X_ii = 1, X PSD  (no LP block).
template <class Scalar>
sdp::Problem<Scalar> unit_diagonal(const sdp::Matrix<Scalar>& c) {
    const Eigen::Index n = c.rows();
    sdp::Problem<Scalar> p;
    p.objective = c;
    p.lp_objective = Eigen::VectorXd::Zero(0);
    p.factors = sdp::Matrix<Scalar>::Identity(n, n);
    p.weights = Eigen::VectorXd::Ones(n);
    p.lp_coupling = Eigen::MatrixXd::Zero(n, 0);
    p.rhs = Eigen::VectorXd::Ones(n);
    return p;
}

template <class Scalar>
double min_eigenvalue(const sdp::Matrix<Scalar>& m) {
    Eigen::SelfAdjointEigenSolver<sdp::Matrix<Scalar>> es(m);
    return es.eigenvalues().minCoeff();
}

} // namespace

TEST_CASE("rank-one objective on the elliptope has a closed form") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> g;
    for (int t = 0; t < 30; ++t) {
        const Eigen::Index n = 2 + t % 7;
        Eigen::VectorXd a = Eigen::VectorXd::NullaryExpr(n, [&] { return g(rng); });
        const auto res = sdp::solve(unit_diagonal<double>(-a * a.transpose()));
        REQUIRE(res.converged);
        const double l1 = a.cwiseAbs().sum();
        CHECK_THAT(res.primal_objective, WithinRel(-l1 * l1, 1e-7));
        CHECK_THAT(res.dual_objective, WithinRel(-l1 * l1, 1e-7));
    }
}

TEST_CASE("two by two complex problem") {
    // X = [[1, t], [conj t, 1]], |t| <= 1: optimum C11 + C22 - 2|C12|.
    std::mt19937_64 rng(23);
    std::normal_distribution<double> g;
    for (int t = 0; t < 20; ++t) {
        sdp::Matrix<cplx> c(2, 2);
        c(0, 0) = g(rng);
        c(1, 1) = g(rng);
        c(0, 1) = cplx(g(rng), g(rng));
        c(1, 0) = std::conj(c(0, 1));
        const auto res = sdp::solve(unit_diagonal<cplx>(c));
        REQUIRE(res.converged);
        const double expect = c(0, 0).real() + c(1, 1).real() - 2.0 * std::abs(c(0, 1));
        CHECK_THAT(res.primal_objective, WithinAbs(expect, 1e-7 * (1 + std::abs(expect))));
    }
}

TEST_CASE("KKT conditions on random complex problems with an LP block") {
    // minimize -s  s.t.  X_ii = 1,  a_k^H X a_k - e_k - s = 0,  e >= 0, s >= 0.
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    for (int t = 0; t < 25; ++t) {
        const Eigen::Index n = 2 + t % 6;
        const Eigen::Index k = 1 + t % 4;
        sdp::Problem<cplx> p;
        p.objective = sdp::Matrix<cplx>::Zero(n, n);
        p.lp_objective = Eigen::VectorXd::Zero(k + 1);
        p.lp_objective(k) = -1.0;
        p.factors.resize(n, n + k);
        p.factors.leftCols(n).setIdentity();
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < k; ++j)
                p.factors(i, n + j) = cplx(g(rng), g(rng)) / std::sqrt(double(n));
        p.weights = Eigen::VectorXd::Ones(n + k);
        p.lp_coupling = Eigen::MatrixXd::Zero(n + k, k + 1);
        for (Eigen::Index j = 0; j < k; ++j) {
            p.lp_coupling(n + j, j) = -1.0;
            p.lp_coupling(n + j, k) = -1.0;
        }
        p.rhs = Eigen::VectorXd::Zero(n + k);
        p.rhs.head(n).setOnes();

        const auto r = sdp::solve(p);
        REQUIRE(r.converged);
        CHECK(r.relative_gap <= 1e-8);
        CHECK(r.primal_infeasibility <= 1e-8);
        CHECK(r.dual_infeasibility <= 1e-8);
        CHECK(min_eigenvalue<cplx>(r.X) > -1e-9);
        CHECK(min_eigenvalue<cplx>(r.Z) > -1e-9);
        CHECK(r.x.minCoeff() >= 0.0);
        CHECK(r.z.minCoeff() >= 0.0);

        // Recompute the residuals and the objectives from the returned iterates.
        for (Eigen::Index i = 0; i < n + k; ++i) {
            const auto a = p.factors.col(i);
            const double lhs = a.dot(r.X * a).real() + p.lp_coupling.row(i).dot(r.x);
            CHECK_THAT(lhs, WithinAbs(p.rhs(i), 1e-7));
        }
        sdp::Matrix<cplx> s = p.objective;
        for (Eigen::Index i = 0; i < n + k; ++i)
            s -= r.y(i) * p.factors.col(i) * p.factors.col(i).adjoint();
        CHECK((s - r.Z).cwiseAbs().maxCoeff() < 1e-7);
        CHECK(((p.lp_objective - p.lp_coupling.transpose() * r.y) - r.z).cwiseAbs().maxCoeff() < 1e-7);

        // The slack s equals the smallest quadratic form; X = I is feasible so
        // it lower-bounds the optimum value of s.
        double smin = 1e300, at_identity = 1e300;
        for (Eigen::Index j = 0; j < k; ++j) {
            const auto a = p.factors.col(n + j);
            smin = std::min(smin, a.dot(r.X * a).real());
            at_identity = std::min(at_identity, a.squaredNorm());
        }
        CHECK_THAT(r.x(k), WithinAbs(smin, 1e-7));
        CHECK(r.x(k) >= at_identity - 1e-7);
    }
}

TEST_CASE("pure LP coupling") {
    // minimize -x  s.t.  X + x = 1 (1x1), optimum x = 1, X = 0.
    sdp::Problem<double> p;
    p.objective = sdp::Matrix<double>::Zero(1, 1);
    p.lp_objective = Eigen::VectorXd::Constant(1, -1.0);
    p.factors = sdp::Matrix<double>::Ones(1, 1);
    p.weights = Eigen::VectorXd::Ones(1);
    p.lp_coupling = Eigen::MatrixXd::Ones(1, 1);
    p.rhs = Eigen::VectorXd::Ones(1);
    const auto r = sdp::solve(p);
    REQUIRE(r.converged);
    CHECK_THAT(r.primal_objective, WithinAbs(-1.0, 1e-7));
    CHECK_THAT(r.x(0), WithinAbs(1.0, 1e-7));
}

TEST_CASE("invalid problems are rejected") {
    auto p = unit_diagonal<double>(sdp::Matrix<double>::Identity(3, 3));
    p.rhs.resize(2);
    CHECK_THROWS_AS(sdp::solve(p), std::invalid_argument);
}

TEST_CASE("iteration cap reports non-convergence") {
    Eigen::VectorXd a = Eigen::VectorXd::LinSpaced(6, -1.0, 2.0);
    sdp::Options opt;
    opt.max_iterations = 2;
    const auto r = sdp::solve(unit_diagonal<double>(-a * a.transpose()), opt);
    CHECK_FALSE(r.converged);
    CHECK(r.iterations <= 2);
}

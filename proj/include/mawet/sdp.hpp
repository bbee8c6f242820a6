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

// Primal-dual interior-point method for semidefinite programs whose
// constraint matrices are rank one, with an auxiliary nonnegative block:
//
//   minimize    <C, X> + c'x
//   subject to  w_i a_i^H X a_i + L_i x = b_i,   i = 1..m
//               X Hermitian PSD (n x n), x >= 0 (p entries)
//
// Dual:  maximize b'y  s.t.  C - sum_i y_i w_i a_i a_i^H = Z PSD,
//                            c - L'y = z >= 0.
//
// Search directions are HKM with a Mehrotra predictor-corrector; the start
// point may be infeasible. Rank-one structure makes the Schur complement
//   M_ij = w_i w_j Re[(a_i^H X a_j)(a_j^H Z^-1 a_i)] + sum_l L_il L_jl x_l / z_l
// cost O(n^2 m + n m^2) instead of O(n^3 m^2).

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace mawet {

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace sdp {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
struct Problem {
    Matrix<Scalar> objective;        // C
    Eigen::VectorXd lp_objective;    // c
    Matrix<Scalar> factors;          // column i is a_i
    Eigen::VectorXd weights;         // w_i
    Eigen::MatrixXd lp_coupling;     // L, m x p
    Eigen::VectorXd rhs;             // b

    Eigen::Index dim() const { return objective.rows(); }
    Eigen::Index lp_dim() const { return lp_objective.size(); }
    Eigen::Index constraints() const { return rhs.size(); }

    void validate() const {
        const auto n = dim(), m = constraints(), p = lp_dim();
        if (objective.cols() != n || factors.rows() != n || factors.cols() != m || weights.size() != m ||
            lp_coupling.rows() != m || lp_coupling.cols() != p)
            throw std::invalid_argument("sdp::Problem: inconsistent dimensions");
        if (n < 1 || m < 1)
            throw std::invalid_argument("sdp::Problem: empty problem");
    }
};

struct Options {
    double tolerance = 1e-8;
    int max_iterations = 100;
    double step_fraction = 0.98;
};

template <typename Scalar>
struct Result {
    Matrix<Scalar> X;
    Eigen::VectorXd x;
    Eigen::VectorXd y;
    Matrix<Scalar> Z;
    Eigen::VectorXd z;
    double primal_objective = 0.0;
    double dual_objective = 0.0;
    double primal_infeasibility = std::numeric_limits<double>::infinity();
    double dual_infeasibility = std::numeric_limits<double>::infinity();
    double relative_gap = std::numeric_limits<double>::infinity();
    int iterations = 0;
    bool converged = false;

    std::string summary() const {
        std::ostringstream os;
        os << "iterations=" << iterations << " pinf=" << primal_infeasibility << " dinf=" << dual_infeasibility
           << " gap=" << relative_gap << " pobj=" << primal_objective << " dobj=" << dual_objective;
        return os.str();
    }
};

namespace detail {

template <typename Scalar>
double real_part(const Scalar& s) {
    if constexpr (std::is_arithmetic_v<Scalar>)
        return s;
    else
        return s.real();
}

template <typename Derived>
auto hermitian_part(const Eigen::MatrixBase<Derived>& b) {
    return (0.5 * (b + b.adjoint())).eval();
}

// tr(A^H B) without forming the product.
template <typename Scalar>
double inner(const Matrix<Scalar>& a, const Matrix<Scalar>& b) {
    return real_part(a.conjugate().cwiseProduct(b).sum());
}

// Cholesky feasibility test; skips the condition-number bookkeeping of Eigen::LLT.
template <typename Scalar>
bool positive_definite(Matrix<Scalar> m) {
    return Eigen::internal::llt_inplace<Scalar, Eigen::Lower>::blocked(m) == -1;
}

// Step along dX keeping X + alpha dX positive definite, capped at one and
// backed off to `fraction` of the boundary distance. The boundary is located
// by Cholesky tests: a full step is accepted outright, otherwise a short
// bisection brackets it.
template <typename Scalar>
double boundary_step(const Matrix<Scalar>& X, const Matrix<Scalar>& dX, double fraction, int bisections = 6) {
    const double full = 1.0 / fraction;
    if (positive_definite<Scalar>(X + full * dX))
        return 1.0;
    double lo = 0.0, hi = full;
    for (int i = 0; i < bisections; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (positive_definite<Scalar>(X + mid * dX))
            lo = mid;
        else
            hi = mid;
    }
    return fraction * lo;
}

inline double boundary_step(const Eigen::VectorXd& x, const Eigen::VectorXd& dx, double fraction) {
    double a = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (dx(i) < 0.0)
            a = std::min(a, -x(i) / dx(i));
    return std::min(1.0, fraction * a);
}

} // namespace detail

template <typename Scalar>
class Solver {
public:
    using Mat = Matrix<Scalar>;

    explicit Solver(const Problem<Scalar>& problem, Options options = {}) : prob_(problem), opt_(options) {
        prob_.validate();
    }

    Result<Scalar> solve() const {
        const auto n = prob_.dim();
        const auto p = prob_.lp_dim();
        const auto& A = prob_.factors;
        const auto& w = prob_.weights;
        const auto& L = prob_.lp_coupling;
        const auto& b = prob_.rhs;
        const Mat& C = prob_.objective;
        const Eigen::VectorXd& c = prob_.lp_objective;

        // Scaled identities as the starting point.
        double sx = 1.0, sz = std::max(1.0, C.norm());
        for (Eigen::Index i = 0; i < prob_.constraints(); ++i) {
            const double anorm = std::abs(w(i)) * A.col(i).squaredNorm() + L.row(i).norm();
            if (anorm > 0.0)
                sx = std::max(sx, std::abs(b(i)) / anorm);
            sz = std::max(sz, anorm);
        }

        Result<Scalar> r;
        r.X = sx * Mat::Identity(n, n);
        r.Z = sz * Mat::Identity(n, n);
        r.x = Eigen::VectorXd::Constant(p, sx);
        r.z = Eigen::VectorXd::Constant(p, sz);
        r.y = Eigen::VectorXd::Zero(prob_.constraints());

        const double bnorm = b.norm();
        const double cnorm = std::sqrt(C.squaredNorm() + c.squaredNorm());
        const double nu = double(n + p);

        for (int it = 0;; ++it) {
            r.iterations = it;
            const Eigen::VectorXd rp = b - apply(r.X) - L * r.x;
            const Mat Rd = C - adjoint_apply(r.y) - r.Z;
            const Eigen::VectorXd rd = c - L.transpose() * r.y - r.z;

            r.primal_objective = detail::inner<Scalar>(C, r.X) + c.dot(r.x);
            r.dual_objective = b.dot(r.y);
            r.primal_infeasibility = rp.norm() / (1.0 + bnorm);
            r.dual_infeasibility = std::sqrt(Rd.squaredNorm() + rd.squaredNorm()) / (1.0 + cnorm);
            r.relative_gap = std::abs(r.primal_objective - r.dual_objective) /
                             (1.0 + std::abs(r.primal_objective) + std::abs(r.dual_objective));

            if (r.primal_infeasibility <= opt_.tolerance && r.dual_infeasibility <= opt_.tolerance &&
                r.relative_gap <= opt_.tolerance) {
                r.converged = true;
                return r;
            }
            if (it >= opt_.max_iterations)
                return r;

            Eigen::LLT<Mat> zchol(r.Z);
            if (zchol.info() != Eigen::Success)
                return r;
            const Mat G = zchol.solve(Mat::Identity(n, n));
            const double mu = (detail::inner<Scalar>(r.X, r.Z) + r.x.dot(r.z)) / nu;

            // Schur complement.
            const Mat P = A.adjoint() * r.X * A;
            const Mat Q = A.adjoint() * G * A;
            const Eigen::VectorXd xz = r.x.cwiseQuotient(r.z);
            Eigen::MatrixXd M = (w * w.transpose()).cwiseProduct(P.cwiseProduct(Q.conjugate()).real());
            M.noalias() += L * xz.asDiagonal() * L.transpose();
            Eigen::LDLT<Eigen::MatrixXd> mfac(0.5 * (M + M.transpose()));
            if (mfac.info() != Eigen::Success)
                return r;

            const Mat XRdG = r.X * Rd * G;
            const Eigen::VectorXd xzrd = xz.cwiseProduct(rd);

            struct Direction {
                Mat dX, dZ;
                Eigen::VectorXd dx, dy, dz;
            };
            auto direction = [&](const Mat& T, const Eigen::VectorXd& Tlp) {
                Direction d;
                const Eigen::VectorXd rhs = rp - apply(T - XRdG) - L * (Tlp - xzrd);
                d.dy = mfac.solve(rhs);
                d.dZ = Rd - adjoint_apply(d.dy);
                d.dX = detail::hermitian_part(T - r.X * d.dZ * G);
                d.dz = rd - L.transpose() * d.dy;
                d.dx = Tlp - xz.cwiseProduct(d.dz);
                return d;
            };
            auto steps = [&](const Direction& d, double fraction) {
                const double ap = std::min(detail::boundary_step<Scalar>(r.X, d.dX, fraction),
                                           detail::boundary_step(r.x, d.dx, fraction));
                const double ad = std::min(detail::boundary_step<Scalar>(r.Z, d.dZ, fraction),
                                           detail::boundary_step(r.z, d.dz, fraction));
                return std::pair{ap, ad};
            };

            const Direction pred = direction(-r.X, -r.x);
            const auto [app, adp] = steps(pred, 1.0);
            const Mat Xa = r.X + app * pred.dX;
            const Mat Za = r.Z + adp * pred.dZ;
            const double mu_aff =
                (detail::inner<Scalar>(Xa, Za) + (r.x + app * pred.dx).dot(r.z + adp * pred.dz)) / nu;
            const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3.0), 0.0, 1.0);

            const Mat T = sigma * mu * G - r.X - pred.dX * pred.dZ * G;
            const Eigen::VectorXd Tlp =
                (sigma * mu * Eigen::VectorXd::Ones(p) - pred.dx.cwiseProduct(pred.dz)).cwiseQuotient(r.z) - r.x;
            const Direction corr = direction(T, Tlp);
            const auto [ap, ad] = steps(corr, opt_.step_fraction);

            r.X = detail::hermitian_part(r.X + ap * corr.dX);
            r.x += ap * corr.dx;
            r.y += ad * corr.dy;
            r.Z = detail::hermitian_part(r.Z + ad * corr.dZ);
            r.z += ad * corr.dz;
        }
    }

    // w_i Re(a_i^H B a_i); only the Hermitian part of B contributes.
    Eigen::VectorXd apply(const Mat& B) const {
        const Mat BA = B * prob_.factors;
        return prob_.weights.cwiseProduct(
            prob_.factors.conjugate().cwiseProduct(BA).colwise().sum().real().transpose());
    }

    Mat adjoint_apply(const Eigen::VectorXd& y) const {
        const Eigen::VectorXd s = prob_.weights.cwiseProduct(y);
        return prob_.factors * s.cast<Scalar>().asDiagonal() * prob_.factors.adjoint();
    }

private:
    Problem<Scalar> prob_;
    Options opt_;
};

template <typename Scalar>
Result<Scalar> solve(const Problem<Scalar>& problem, Options options = {}) {
    return Solver<Scalar>(problem, options).solve();
}

} // namespace sdp
} // namespace mawet

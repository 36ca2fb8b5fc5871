// SPDX-License-Identifier: Apache-2.0
//
// iasim: downlink interference alignment simulator
// Copyright (C) 2026 The iasim authors
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

#ifndef IASIM_RECEIVER_HPP
#define IASIM_RECEIVER_HPP

#include "iasim/common.hpp"
#include "iasim/linalg.hpp"
#include "iasim/precoding.hpp"

#include <Eigen/Cholesky>

#include <optional>
#include <span>
#include <vector>

namespace iasim {

/// One candidate decoding direction reported by a UE.
struct FeedbackEntry
{
    std::size_t ue_id = 0;
    CVector c;            // unit norm, reduced space
    double lambda = 0.0;  // estimated SINR, inter-cell interference only
    int rank = 0;         // 0 = strongest
};

/// Interference-plus-noise covariance seen by one UE.
struct InCovariance
{
    CMatrix Phi;
};

/// Unit-norm u with u^H [H_1 P, ..., H_n P] = 0, using the first `n_ri`
/// interferer matrices. When the null space has more than one dimension the
/// returned vector is the normalized projection of `desired` (the direct
/// response H P v0) onto it, which maximizes |u^H desired| over the null space.
inline CVector zf_null_decoder(std::span<const CMatrix> interferers, std::size_t n_ri,
                               const std::optional<CVector> &desired = std::nullopt)
{
    if (interferers.empty() && n_ri > 0)
        throw DimensionMismatch("no interferer matrices supplied");
    if (n_ri > interferers.size())
        throw DimensionMismatch("n_ri exceeds the number of interferer matrices");
    const Eigen::Index rows = interferers.empty() ? (desired ? desired->size() : 0) : interferers[0].rows();
    Eigen::Index total_cols = 0;
    for (std::size_t i = 0; i < n_ri; ++i)
    {
        if (interferers[i].rows() != rows)
            throw DimensionMismatch("interferer matrices differ in row count");
        total_cols += interferers[i].cols();
    }
    CMatrix stacked(rows, total_cols);
    Eigen::Index at = 0;
    for (std::size_t i = 0; i < n_ri; ++i)
    {
        stacked.middleCols(at, interferers[i].cols()) = interferers[i];
        at += interferers[i].cols();
    }

    const CMatrix null = linalg::left_null_space(stacked);
    if (null.cols() == 0)
        throw NoNullSpace("stacked interference matrix has full row rank");

    CVector u;
    if (null.cols() > 1 && desired)
    {
        if (desired->size() != rows)
            throw DimensionMismatch("desired response length");
        u = null * (null.adjoint() * *desired);
        if (u.norm() <= 1e-300)
            u = null.col(0);
    }
    else
    {
        u = null.col(0);
    }
    u.normalize();
    linalg::canonical_phase(u);
    return u;
}

/// (sigma2 + inr_rem) I + (p/S) H P V V^H P^H H^H. Without V the product V V^H
/// is replaced by the identity on the reduced space.
inline InCovariance in_covariance(const CMatrix &H_strong, const MixingMatrix &mix,
                                  const std::optional<CMatrix> &V_n, double p, int S, double sigma2,
                                  double inr_rem)
{
    const Eigen::Index n = H_strong.rows();
    InCovariance out;
    out.Phi = CMatrix::Identity(n, n) * cplx(sigma2 + inr_rem, 0.0);
    const CMatrix HP = H_strong * mix.P;
    const CMatrix A = V_n ? CMatrix(HP * *V_n) : HP;
    out.Phi.noalias() += (p / S) * (A * A.adjoint());
    out.Phi = (0.5 * (out.Phi + out.Phi.adjoint())).eval();
    return out;
}

/// P^H H^H Phi^-1 H P, symmetrized.
inline CMatrix equivalent_channel(const CMatrix &H, const MixingMatrix &mix, const InCovariance &cov)
{
    const CMatrix HP = H * mix.P;
    const CMatrix G = HP.adjoint() * cov.Phi.llt().solve(HP);
    return 0.5 * (G + G.adjoint());
}

/// Dominant eigenvector of the whitened channel, lowest-index tie-break and
/// first nonzero entry real positive.
inline CVector init_vector(const CMatrix &H, const MixingMatrix &mix, const InCovariance &cov)
{
    return linalg::hermitian_eigen(equivalent_channel(H, mix, cov)).vectors.col(0);
}

/// Phi^-1 H P v0, normalized.
inline CVector mmse_decoder(const InCovariance &cov, const CMatrix &H, const MixingMatrix &mix, const CVector &v0)
{
    const CVector response = H * (mix.P * v0);
    if (response.norm() == 0.0)
        throw ZeroDirection("H P v0 = 0");
    CVector u = cov.Phi.llt().solve(response);
    return u / u.norm();
}

struct Direction
{
    CVector c;
    double lambda = 0.0;
};

/// Full eigenbasis of a Hermitian G, eigenvalues in decreasing order.
inline std::vector<Direction> eigen_directions(const CMatrix &G)
{
    const linalg::HermitianEigen eig = linalg::hermitian_eigen(G);
    std::vector<Direction> out;
    out.reserve(static_cast<std::size_t>(eig.values.size()));
    for (Eigen::Index i = 0; i < eig.values.size(); ++i)
        out.push_back({eig.vectors.col(i), eig.values(i)});
    return out;
}

/// Top-L eigen-directions of G as feedback entries for `ue`.
inline std::vector<FeedbackEntry> build_feedback(std::size_t ue, const CMatrix &G, int L)
{
    if (L < 1 || L > G.rows())
        throw LTooLarge("L = " + std::to_string(L) + " for a " + std::to_string(G.rows()) + "-dimensional channel");
    const auto dirs = eigen_directions(G);
    std::vector<FeedbackEntry> out;
    out.reserve(static_cast<std::size_t>(L));
    for (int i = 0; i < L; ++i)
        out.push_back({ue, dirs[static_cast<std::size_t>(i)].c, std::max(0.0, dirs[static_cast<std::size_t>(i)].lambda), i});
    return out;
}

/// Column-normalized Phi^-1 H P C_d.
inline CMatrix final_decoder(const CMatrix &H, const MixingMatrix &mix, const InCovariance &cov, const CMatrix &C_d)
{
    const CMatrix response = H * (mix.P * C_d);
    CMatrix U = cov.Phi.llt().solve(response);
    for (Eigen::Index k = 0; k < U.cols(); ++k)
    {
        const double nrm = U.col(k).norm();
        if (response.col(k).norm() == 0.0 || !(nrm > 0.0))
            throw ZeroDirection("column " + std::to_string(k));
        U.col(k) /= nrm;
    }
    return U;
}

/// Feedback for a UE using a fixed ZF null decoder u: the single direction
/// P^H H^H u with gain signal_power * ||P^H H^H u||^2 / noise_floor.
inline FeedbackEntry zf_feedback(std::size_t ue, const CMatrix &H, const MixingMatrix &mix, const CVector &u,
                                 double signal_power, double noise_floor)
{
    CVector c = mix.P.adjoint() * (H.adjoint() * u);
    const double nrm = c.norm();
    if (!(nrm > 0.0))
        throw ZeroDirection("u^H H P = 0");
    c /= nrm;
    linalg::canonical_phase(c);
    return {ue, c, signal_power * nrm * nrm / noise_floor, 0};
}

} // namespace iasim

#endif

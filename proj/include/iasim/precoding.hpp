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

#ifndef IASIM_PRECODING_HPP
#define IASIM_PRECODING_HPP

#include "iasim/common.hpp"
#include "iasim/config.hpp"
#include "iasim/linalg.hpp"

#include <cmath>
#include <numbers>

namespace iasim {

/// Common transmit basis shared by every BS. The first M_K - N_f columns are
/// orthonormal; the trailing N_f columns are scaled by kappa, or dropped when
/// kappa = 0.
struct MixingMatrix
{
    CMatrix P;
    double kappa = 0.0;
    MixingFamily family = MixingFamily::Fourier;

    Eigen::Index dims() const { return P.rows(); }
    Eigen::Index n_cols() const { return P.cols(); }
};

inline CMatrix unitary_dft(int n)
{
    CMatrix F(n, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            F(r, c) = std::polar(scale, -2.0 * std::numbers::pi * r * c / n);
    return F;
}

inline CMatrix normalized_hadamard(int n)
{
    if (n < 1 || (n & (n - 1)) != 0)
        throw HadamardUnavailable("M_K = " + std::to_string(n) + " is not a power of 2");
    Eigen::MatrixXd H = Eigen::MatrixXd::Ones(1, 1);
    while (H.rows() < n)
    {
        const Eigen::Index m = H.rows();
        Eigen::MatrixXd next(2 * m, 2 * m);
        next << H, H, H, -H;
        H = std::move(next);
    }
    return (H / std::sqrt(static_cast<double>(n))).cast<cplx>();
}

inline MixingMatrix make_mixing_matrix(int dims, int freed, double kappa, MixingFamily family)
{
    if (!(kappa >= 0.0 && kappa <= 1.0))
        throw InvalidKappa("kappa = " + std::to_string(kappa) + " outside [0, 1]");
    if (dims < 1 || freed < 0 || freed >= dims)
        throw DimensionMismatch("need 0 <= N_f < M_K");

    CMatrix base = family == MixingFamily::Hadamard ? normalized_hadamard(dims) : unitary_dft(dims);
    const int kept = dims - freed;
    MixingMatrix out;
    out.kappa = kappa;
    out.family = family;
    if (kappa == 0.0)
    {
        out.P = base.leftCols(kept);
    }
    else
    {
        out.P = base;
        out.P.rightCols(freed) *= kappa;
    }
    return out;
}

/// Identity basis, used by the plain OFDM reference.
inline MixingMatrix identity_mixing(int dims)
{
    return {CMatrix::Identity(dims, dims), 1.0, MixingFamily::Fourier};
}

/// Zero-forcing precoders for one BS, one column per scheduled stream.
struct PrecoderSet
{
    CMatrix raw;       // C^H (C C^H)^-1, reduced space
    CMatrix reduced;   // raw columns scaled by 1 / ||P raw||, so P * reduced = transmit
    CMatrix transmit;  // unit-norm M_K-dimensional vectors P v / ||P v||

    Eigen::Index size() const { return raw.cols(); }
};

/// ZF beamforming over the rows of C_bar (one row per stream, each row the
/// conjugate of a fed-back direction). Throws IllConditioned when the Gram
/// matrix C C^H has condition number above `condition_limit`.
inline PrecoderSet zf_beamform(const CMatrix &C_bar, const MixingMatrix &mix, double condition_limit = 1e8)
{
    if (C_bar.cols() != mix.n_cols())
        throw DimensionMismatch("C_bar has " + std::to_string(C_bar.cols()) + " columns, P has " +
                                std::to_string(mix.n_cols()));
    const CMatrix gram = C_bar * C_bar.adjoint();
    const double cond = linalg::hermitian_condition(gram);
    if (!(cond <= condition_limit))
        throw IllConditioned("condition number " + std::to_string(cond));

    PrecoderSet out;
    out.raw = C_bar.adjoint() * gram.ldlt().solve(CMatrix::Identity(gram.rows(), gram.cols()));
    out.reduced = out.raw;
    out.transmit = mix.P * out.raw;
    for (Eigen::Index k = 0; k < out.raw.cols(); ++k)
    {
        const double nrm = out.transmit.col(k).norm();
        if (!(nrm > 0.0))
            throw IllConditioned("precoder vanishes through P");
        out.reduced.col(k) /= nrm;
        out.transmit.col(k) /= nrm;
    }
    return out;
}

/// Power (default) or amplitude of the inner product between a fed-back
/// direction and a reduced-space precoder.
inline double precoder_cross_gain(const CVector &c, const CVector &v, CrossGainMode mode = CrossGainMode::Power)
{
    if (c.size() != v.size())
        throw DimensionMismatch("direction length " + std::to_string(c.size()) + " vs precoder length " +
                                std::to_string(v.size()));
    const double mag = std::abs(c.dot(v));
    return mode == CrossGainMode::Power ? mag * mag : mag;
}

} // namespace iasim

#endif

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

#ifndef IASIM_LINALG_HPP
#define IASIM_LINALG_HPP

#include "iasim/common.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace iasim::linalg {

/// Rotates `v` so that its first entry with magnitude above `tol` is real and positive.
inline void canonical_phase(Eigen::Ref<CVector> v, double tol = 1e-12)
{
    for (Eigen::Index i = 0; i < v.size(); ++i)
    {
        double mag = std::abs(v(i));
        if (mag > tol)
        {
            v *= std::conj(v(i)) / mag;
            v(i) = cplx(v(i).real(), 0.0);
            return;
        }
    }
}

struct HermitianEigen
{
    RVector values;   // descending
    CMatrix vectors;  // column i pairs with values(i)
};

/// Eigen-decomposition of a Hermitian matrix with eigenvalues sorted descending.
///
/// Results are made reproducible: inside every cluster of (numerically) equal
/// eigenvalues the basis is rebuilt by projecting e_1, e_2, ... onto the cluster
/// and orthonormalizing, so the lowest-index standard direction wins. Each
/// vector then gets the canonical phase.
inline HermitianEigen hermitian_eigen(const CMatrix &G, double cluster_tol = 1e-10)
{
    const Eigen::Index n = G.rows();
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(G);
    const RVector &asc = solver.eigenvalues();
    const CMatrix &vec = solver.eigenvectors();

    HermitianEigen out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
    {
        out.values(i) = asc(n - 1 - i);
        out.vectors.col(i) = vec.col(n - 1 - i);
    }

    const double scale = std::max(1.0, n > 0 ? out.values.cwiseAbs().maxCoeff() : 0.0);
    Eigen::Index start = 0;
    while (start < n)
    {
        Eigen::Index stop = start + 1;
        while (stop < n && std::abs(out.values(start) - out.values(stop)) <= cluster_tol * scale)
            ++stop;
        const Eigen::Index dim = stop - start;
        if (dim > 1)
        {
            CMatrix Q = out.vectors.middleCols(start, dim);
            CMatrix basis(n, dim);
            Eigen::Index found = 0;
            for (Eigen::Index e = 0; e < n && found < dim; ++e)
            {
                CVector cand = Q * Q.row(e).adjoint(); // projection of e_e onto span(Q)
                for (Eigen::Index k = 0; k < found; ++k)
                    cand -= basis.col(k) * basis.col(k).dot(cand);
                double nrm = cand.norm();
                if (nrm > 1e-6)
                    basis.col(found++) = cand / nrm;
            }
            if (found == dim)
                out.vectors.middleCols(start, dim) = basis;
        }
        start = stop;
    }
    for (Eigen::Index i = 0; i < n; ++i)
        canonical_phase(out.vectors.col(i));
    return out;
}

/// Orthonormal basis of the left null space of A (vectors u with u^H A = 0).
/// Rank is decided relative to the largest singular value.
inline CMatrix left_null_space(const CMatrix &A, double rel_tol = 1e-10)
{
    const Eigen::Index m = A.rows();
    if (A.cols() == 0)
        return CMatrix::Identity(m, m);
    Eigen::JacobiSVD<CMatrix> svd(A, Eigen::ComputeFullU);
    const RVector &s = svd.singularValues();
    const double smax = s.size() > 0 ? s(0) : 0.0;
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > rel_tol * smax && smax > 0.0)
            ++rank;
    return svd.matrixU().rightCols(m - rank);
}

/// Ratio of largest to smallest eigenvalue of a Hermitian PSD matrix (inf if singular).
inline double hermitian_condition(const CMatrix &A)
{
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(A, Eigen::EigenvaluesOnly);
    const RVector &ev = solver.eigenvalues();
    if (ev.size() == 0)
        return 1.0;
    const double lo = ev(0);
    const double hi = ev(ev.size() - 1);
    if (lo <= 0.0)
        return std::numeric_limits<double>::infinity();
    return hi / lo;
}

} // namespace iasim::linalg

#endif

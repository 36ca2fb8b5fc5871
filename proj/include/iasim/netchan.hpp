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

#ifndef IASIM_NETCHAN_HPP
#define IASIM_NETCHAN_HPP

#include "iasim/common.hpp"
#include "iasim/config.hpp"
#include "iasim/rng.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace iasim {

struct Point
{
    double x = 0.0;
    double y = 0.0;
    bool operator==(const Point &) const = default;
};

struct PathLossModel
{
    double exponent = 3.5;
    double ref_distance = 50.0;  // d0
    double ref_gain = 1.0;       // g0
    double shadowing_db = 8.0;   // log-normal std-dev

    static PathLossModel from(const NetworkConfig &c)
    {
        return {c.pathloss_exponent, c.ref_distance, c.ref_gain, c.shadowing_db};
    }
};

/// g0 * (d/d0)^-alpha * 10^(shadowing_db/10). Non-positive distances are clamped to d0.
inline double path_gain(double distance, const PathLossModel &model, double shadowing_db = 0.0)
{
    if (!(distance > 0.0))
        distance = model.ref_distance;
    return model.ref_gain * std::pow(distance / model.ref_distance, -model.exponent) *
           std::pow(10.0, shadowing_db / 10.0);
}

template <class Rng>
double draw_shadowing_db(Rng &rng, const PathLossModel &model)
{
    if (model.shadowing_db <= 0.0)
        return 0.0;
    std::normal_distribution<double> n(0.0, model.shadowing_db);
    return n(rng);
}

struct Geometry
{
    std::vector<Point> bs_positions;
    std::vector<double> bs_boresight_deg;  // empty for omni sites
    std::vector<int> bs_cell;              // site index of every BS
    std::vector<Point> ue_positions;
    std::vector<int> ue_cell;              // site the UE was dropped in
    std::vector<std::size_t> serving_bs;
    std::vector<std::size_t> strongest_interferer;  // kNoBs when only one BS exists
    std::vector<std::vector<double>> avg_gain;       // [ue][bs], linear

    std::size_t num_bs() const { return bs_positions.size(); }
    std::size_t num_ue() const { return ue_positions.size(); }

    bool operator==(const Geometry &) const = default;
};

/// Block-diagonal M_K x M_K channel of every (UE, BS) pair.
struct ChannelSet
{
    std::vector<std::vector<CMatrix>> H;  // [ue][bs]

    bool operator==(const ChannelSet &o) const
    {
        if (H.size() != o.H.size())
            return false;
        for (std::size_t u = 0; u < H.size(); ++u)
        {
            if (H[u].size() != o.H[u].size())
                return false;
            for (std::size_t b = 0; b < H[u].size(); ++b)
                if (H[u][b] != o.H[u][b])
                    return false;
        }
        return true;
    }
};

namespace detail {

// Site centres: centre plus a ring of six at the inter-site distance.
inline std::vector<Point> hex_sites(int count, double isd)
{
    std::vector<Point> out{{0.0, 0.0}};
    for (int k = 0; k < 6 && static_cast<int>(out.size()) < count; ++k)
    {
        double a = (30.0 + 60.0 * k) * std::numbers::pi / 180.0;
        out.push_back({isd * std::cos(a), isd * std::sin(a)});
    }
    return out;
}

// Point-in-hexagon for a cell whose flat sides face its neighbours.
inline bool in_cell(double dx, double dy, double isd)
{
    const double apothem = isd / 2.0;
    for (double deg : {30.0, 90.0, 150.0})
    {
        double a = deg * std::numbers::pi / 180.0;
        if (std::abs(dx * std::cos(a) + dy * std::sin(a)) > apothem)
            return false;
    }
    return true;
}

// Three-lobe sector pattern, 65 deg beamwidth, 20 dB front-to-back.
inline double sector_gain_db(double ue_angle_deg, double boresight_deg)
{
    double off = std::remainder(ue_angle_deg - boresight_deg, 360.0);
    return -std::min(12.0 * (off / 65.0) * (off / 65.0), 20.0);
}

} // namespace detail

/// Drops users in a hexagonal layout and computes average link gains.
inline Geometry drop_users(const NetworkConfig &cfg, std::uint64_t seed)
{
    Geometry g;
    const std::vector<Point> sites = detail::hex_sites(cfg.cells, cfg.inter_site_distance);
    for (std::size_t s = 0; s < sites.size(); ++s)
    {
        for (int j = 0; j < cfg.sectors_per_cell; ++j)
        {
            g.bs_positions.push_back(sites[s]);
            g.bs_cell.push_back(static_cast<int>(s));
            if (cfg.sectors_per_cell > 1)
                g.bs_boresight_deg.push_back(30.0 + 120.0 * j);
        }
    }

    auto rng = make_rng(seed, Purpose::Geometry);
    const double R = cfg.inter_site_distance / std::sqrt(3.0);  // hexagon corner radius
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::poisson_distribution<int> poisson(static_cast<double>(cfg.users_per_cell));
    for (std::size_t s = 0; s < sites.size(); ++s)
    {
        int count = cfg.poisson_users ? poisson(rng) : cfg.users_per_cell;
        for (int n = 0; n < count;)
        {
            double dx = R * unit(rng);
            double dy = R * unit(rng);
            if (!detail::in_cell(dx, dy, cfg.inter_site_distance) || std::hypot(dx, dy) < cfg.min_ue_distance)
                continue;
            g.ue_positions.push_back({sites[s].x + dx, sites[s].y + dy});
            g.ue_cell.push_back(static_cast<int>(s));
            ++n;
        }
    }

    const PathLossModel model = PathLossModel::from(cfg);
    const std::size_t nbs = g.num_bs();
    g.avg_gain.assign(g.num_ue(), std::vector<double>(nbs, 0.0));
    g.serving_bs.assign(g.num_ue(), 0);
    g.strongest_interferer.assign(g.num_ue(), kNoBs);
    for (std::size_t u = 0; u < g.num_ue(); ++u)
    {
        auto shadow_rng = make_rng(seed, Purpose::Shadowing, {u});
        for (std::size_t b = 0; b < nbs; ++b)
        {
            double dx = g.ue_positions[u].x - g.bs_positions[b].x;
            double dy = g.ue_positions[u].y - g.bs_positions[b].y;
            double shadow = draw_shadowing_db(shadow_rng, model);
            if (!g.bs_boresight_deg.empty())
                shadow += detail::sector_gain_db(std::atan2(dy, dx) * 180.0 / std::numbers::pi,
                                                 g.bs_boresight_deg[b]);
            g.avg_gain[u][b] = path_gain(std::hypot(dx, dy), model, shadow);
        }
        const auto &row = g.avg_gain[u];
        std::size_t best = 0;
        for (std::size_t b = 1; b < nbs; ++b)
            if (row[b] > row[best])
                best = b;
        g.serving_bs[u] = best;
        for (std::size_t b = 0; b < nbs; ++b)
        {
            if (b == best)
                continue;
            if (g.strongest_interferer[u] == kNoBs || row[b] > row[g.strongest_interferer[u]])
                g.strongest_interferer[u] = b;
        }
    }
    return g;
}

/// Hermitian square root of the exponential correlation matrix R[i][j] = rho^|i-j|.
inline Eigen::MatrixXd correlation_sqrt(int M, double rho)
{
    Eigen::MatrixXd R(M, M);
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j)
            R(i, j) = std::pow(rho, std::abs(i - j));
    if (rho == 0.0)
        return R;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(R);
    return es.operatorSqrt();
}

/// Kronecker-correlated Rayleigh fading, one independent M x M block per subcarrier.
inline ChannelSet gen_fading(const NetworkConfig &cfg, const Geometry &geo, std::uint64_t seed)
{
    const int M = cfg.antennas;
    const int K = cfg.subcarriers;
    const int MK = cfg.dims();
    const CMatrix Rs = correlation_sqrt(M, cfg.correlation).cast<cplx>();
    const bool correlated = cfg.correlation != 0.0;
    std::normal_distribution<double> half(0.0, std::sqrt(0.5));

    ChannelSet out;
    out.H.resize(geo.num_ue());
    for (std::size_t u = 0; u < geo.num_ue(); ++u)
    {
        auto rng = make_rng(seed, Purpose::Fading, {u});
        out.H[u].resize(geo.num_bs());
        for (std::size_t b = 0; b < geo.num_bs(); ++b)
        {
            CMatrix H = CMatrix::Zero(MK, MK);
            const double amp = std::sqrt(geo.avg_gain[u][b]);
            for (int k = 0; k < K; ++k)
            {
                CMatrix W(M, M);
                for (int j = 0; j < M; ++j)
                    for (int i = 0; i < M; ++i)
                    {
                        double re = half(rng);
                        double im = half(rng);
                        W(i, j) = cplx(re, im);
                    }
                if (correlated)
                    W = Rs * W * Rs;
                H.block(k * M, k * M, M, M) = amp * W;
            }
            out.H[u][b] = std::move(H);
        }
    }
    return out;
}

/// Long-term SINR of every UE in dB, from average gains only.
inline std::vector<double> geometry_sinr(const Geometry &geo, const NetworkConfig &cfg)
{
    std::vector<double> out(geo.num_ue());
    for (std::size_t u = 0; u < geo.num_ue(); ++u)
    {
        double interference = 0.0;
        for (std::size_t b = 0; b < geo.num_bs(); ++b)
            if (b != geo.serving_bs[u])
                interference += geo.avg_gain[u][b];
        double sinr = cfg.tx_power * geo.avg_gain[u][geo.serving_bs[u]] /
                      (cfg.noise_power + cfg.tx_power * interference);
        out[u] = 10.0 * std::log10(sinr);
    }
    return out;
}

} // namespace iasim

#endif

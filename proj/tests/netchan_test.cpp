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

#include "iasim/netchan.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>

using namespace iasim;

TEST(DropUsers, SingleBsSingleUe)
{
    NetworkConfig cfg;
    cfg.cells = 1;
    cfg.users_per_cell = 1;
    const Geometry g = drop_users(cfg, 7);
    ASSERT_EQ(g.num_ue(), 1u);
    ASSERT_EQ(g.num_bs(), 1u);
    EXPECT_EQ(g.serving_bs[0], 0u);
    EXPECT_EQ(g.strongest_interferer[0], kNoBs);
}

TEST(DropUsers, SeededDeterminism)
{
    NetworkConfig cfg;
    EXPECT_EQ(drop_users(cfg, 42), drop_users(cfg, 42));
    EXPECT_FALSE(drop_users(cfg, 42) == drop_users(cfg, 43));
}

TEST(DropUsers, FixedCountPerCellOverManySeeds)
{
    NetworkConfig cfg;
    double total = 0.0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed)
    {
        const Geometry g = drop_users(cfg, seed);
        std::map<int, int> per_cell;
        for (int c : g.ue_cell)
            ++per_cell[c];
        ASSERT_EQ(per_cell.size(), 7u);
        for (const auto &[cell, n] : per_cell)
        {
            ASSERT_EQ(n, 10) << "seed " << seed << " cell " << cell;
            total += n;
        }
    }
    EXPECT_DOUBLE_EQ(total / (1000.0 * 7.0), 10.0);
}

TEST(DropUsers, PoissonCountsAverageToMean)
{
    NetworkConfig cfg;
    cfg.poisson_users = true;
    double total = 0.0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed)
        total += static_cast<double>(drop_users(cfg, seed).num_ue());
    EXPECT_NEAR(total / (1000.0 * 7.0), 10.0, 0.2);
}

TEST(DropUsers, ServingAndInterfererMaximizeGain)
{
    NetworkConfig cfg;
    for (std::uint64_t seed = 0; seed < 20; ++seed)
    {
        const Geometry g = drop_users(cfg, seed);
        for (std::size_t u = 0; u < g.num_ue(); ++u)
        {
            const auto &row = g.avg_gain[u];
            for (double x : row)
                ASSERT_GT(x, 0.0);
            EXPECT_EQ(row[g.serving_bs[u]], *std::max_element(row.begin(), row.end()));
            const std::size_t si = g.strongest_interferer[u];
            ASSERT_NE(si, g.serving_bs[u]);
            for (std::size_t b = 0; b < row.size(); ++b)
                if (b != g.serving_bs[u])
                    EXPECT_LE(row[b], row[si]);
            const double d = std::hypot(g.ue_positions[u].x - g.bs_positions[static_cast<std::size_t>(g.ue_cell[u])].x,
                                        g.ue_positions[u].y - g.bs_positions[static_cast<std::size_t>(g.ue_cell[u])].y);
            EXPECT_GE(d, cfg.min_ue_distance);
            EXPECT_LE(d, cfg.inter_site_distance / std::sqrt(3.0) + 1e-9);
        }
    }
}

TEST(DropUsers, ThreeSectorsMakeThreeBsPerSite)
{
    NetworkConfig cfg;
    cfg.sectors_per_cell = 3;
    const Geometry g = drop_users(cfg, 3);
    EXPECT_EQ(g.num_bs(), 21u);
    EXPECT_EQ(g.bs_boresight_deg.size(), 21u);
    EXPECT_EQ(g.num_ue(), 70u);
}

TEST(PathGain, ReferenceDistanceAndSlope)
{
    PathLossModel m;
    EXPECT_DOUBLE_EQ(path_gain(m.ref_distance, m), m.ref_gain);
    EXPECT_NEAR(path_gain(2.0 * m.ref_distance, m), m.ref_gain * std::pow(2.0, -3.5), 1e-15);
    EXPECT_DOUBLE_EQ(path_gain(0.0, m), m.ref_gain);
}

TEST(PathGain, ShadowingIsZeroMeanInDb)
{
    PathLossModel m;
    auto rng = make_rng(5, Purpose::Test);
    const double base = 10.0 * std::log10(path_gain(100.0, m));
    double sum = 0.0;
    const int n = 10000;
    for (int i = 0; i < n; ++i)
        sum += 10.0 * std::log10(path_gain(100.0, m, draw_shadowing_db(rng, m)));
    EXPECT_NEAR(sum / n, base, 0.5);
}

namespace {

// Unit-gain single link, M x M, K = 1.
NetworkConfig link_config(int M, double rho)
{
    NetworkConfig cfg;
    cfg.antennas = M;
    cfg.subcarriers = 1;
    cfg.freed_dims = 0;
    cfg.correlation = rho;
    return cfg;
}

double entry_correlation(int M, double rho, int r1, int c1, int r2, int c2)
{
    const NetworkConfig cfg = link_config(M, rho);
    const Geometry g = test::single_ue_geometry({1.0});
    cplx cross = 0.0;
    double p1 = 0.0;
    double p2 = 0.0;
    for (std::uint64_t s = 0; s < 10000; ++s)
    {
        const ChannelSet ch = gen_fading(cfg, g, s);
        const CMatrix &H = ch.H[0][0];
        cross += H(r1, c1) * std::conj(H(r2, c2));
        p1 += std::norm(H(r1, c1));
        p2 += std::norm(H(r2, c2));
    }
    return std::abs(cross) / std::sqrt(p1 * p2);
}

} // namespace

TEST(GenFading, UncorrelatedEntries)
{
    EXPECT_LT(entry_correlation(2, 0.0, 0, 0, 1, 0), 0.02);
    EXPECT_LT(entry_correlation(2, 0.0, 0, 0, 0, 1), 0.02);
}

TEST(GenFading, ExponentialCorrelation)
{
    EXPECT_NEAR(entry_correlation(2, 0.3, 0, 0, 1, 0), 0.3, 0.02);
    EXPECT_NEAR(entry_correlation(2, 0.3, 0, 0, 0, 1), 0.3, 0.02);
}

TEST(GenFading, BlockDiagonalAndScaled)
{
    NetworkConfig cfg;
    cfg.antennas = 2;
    cfg.subcarriers = 3;
    cfg.correlation = 0.3;
    const Geometry g = test::single_ue_geometry({0.25, 0.01});
    double frob[2] = {0.0, 0.0};
    const int draws = 4000;
    for (std::uint64_t s = 0; s < draws; ++s)
    {
        const ChannelSet ch = gen_fading(cfg, g, s);
        for (std::size_t b = 0; b < 2; ++b)
        {
            const CMatrix &H = ch.H[0][b];
            ASSERT_EQ(H.rows(), 6);
            for (int i = 0; i < 6; ++i)
                for (int j = 0; j < 6; ++j)
                    if (i / 2 != j / 2)
                        ASSERT_EQ(H(i, j), cplx(0.0, 0.0));
            frob[b] += H.block(0, 0, 2, 2).squaredNorm();
        }
    }
    EXPECT_NEAR(frob[0] / draws, 4.0 * 0.25, 0.05 * 4.0 * 0.25);
    EXPECT_NEAR(frob[1] / draws, 4.0 * 0.01, 0.05 * 4.0 * 0.01);
}

TEST(GenFading, SeededDeterminism)
{
    NetworkConfig cfg;
    const Geometry g = drop_users(cfg, 1);
    EXPECT_EQ(gen_fading(cfg, g, 9), gen_fading(cfg, g, 9));
    EXPECT_FALSE(gen_fading(cfg, g, 9) == gen_fading(cfg, g, 10));
}

TEST(GeometrySinr, InterferenceFree)
{
    NetworkConfig cfg;
    const Geometry g = test::single_ue_geometry({0.01});
    EXPECT_NEAR(geometry_sinr(g, cfg)[0], 10.0 * std::log10(cfg.tx_power * 0.01 / cfg.noise_power), 1e-12);
}

TEST(GeometrySinr, SymmetricTwoBs)
{
    NetworkConfig cfg;
    cfg.noise_power = 1e-15;
    const Geometry g = test::single_ue_geometry({0.3, 0.3});
    EXPECT_NEAR(geometry_sinr(g, cfg)[0], 0.0, 1e-9);
}

TEST(GeometrySinr, GainScalingInvariantWithoutNoise)
{
    NetworkConfig cfg;
    cfg.noise_power = 0.0;
    Geometry g = drop_users(NetworkConfig{}, 4);
    const auto before = geometry_sinr(g, cfg);
    for (auto &row : g.avg_gain)
        for (double &x : row)
            x *= 37.5;
    const auto after = geometry_sinr(g, cfg);
    for (std::size_t u = 0; u < before.size(); ++u)
        EXPECT_NEAR(before[u], after[u], 1e-9);
}

TEST(GeometrySinr, SevenCellCdfSpan)
{
    NetworkConfig cfg;
    std::vector<double> all;
    for (std::uint64_t seed = 0; seed < 100; ++seed)
    {
        const Geometry g = drop_users(cfg, seed);
        const auto s = geometry_sinr(g, cfg);
        for (std::size_t u = 0; u < s.size(); ++u)
            if (g.bs_cell[g.serving_bs[u]] == 0)
                all.push_back(s[u]);
    }
    std::sort(all.begin(), all.end());
    const double p05 = all[all.size() / 20];
    const double p50 = all[all.size() / 2];
    const double p95 = all[all.size() * 19 / 20];
    RecordProperty("p05_db", std::to_string(p05));
    RecordProperty("p95_db", std::to_string(p95));
    EXPECT_LT(all.front(), 0.0);
    EXPECT_GT(p05, -10.0);
    EXPECT_LT(p05, 3.0);
    EXPECT_GT(p50, 0.0);
    EXPECT_LT(p50, 20.0);
    EXPECT_GT(p95, 15.0);
}

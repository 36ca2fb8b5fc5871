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

#include "iasim/scheduler.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

using namespace iasim;

namespace {

CandidatePool random_pool(std::mt19937_64 &rng, std::size_t n_ue, int per_ue, Eigen::Index dims)
{
    std::exponential_distribution<double> gain(1.0 / 20.0);
    CandidatePool pool;
    for (std::size_t u = 0; u < n_ue; ++u)
        for (int r = 0; r < per_ue; ++r)
            pool.entries.push_back({u, test::random_unit(rng, dims), gain(rng), r});
    return pool;
}

// Brute-force weighted sum rate of a subset, via SVD pseudo-inverse.
double oracle_utility(const std::vector<std::size_t> &subset, const CandidatePool &pool, const PfState &pf,
                      const MixingMatrix &mix, double cap)
{
    const auto n = static_cast<Eigen::Index>(subset.size());
    CMatrix C(n, mix.P.cols());
    for (Eigen::Index k = 0; k < n; ++k)
        C.row(k) = pool.entries[subset[static_cast<std::size_t>(k)]].c.adjoint();
    Eigen::JacobiSVD<CMatrix> svd(C, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RVector s = svd.singularValues();
    if (s(n - 1) <= 0.0 || s(0) / s(n - 1) > 1e8)
        return -std::numeric_limits<double>::infinity();
    RVector inv = s.cwiseInverse();
    const CMatrix pinv = svd.matrixV() * inv.cast<cplx>().asDiagonal() * svd.matrixU().adjoint();
    double u = 0.0;
    for (Eigen::Index k = 0; k < n; ++k)
    {
        const FeedbackEntry &e = pool.entries[subset[static_cast<std::size_t>(k)]];
        const CVector v = pinv.col(k) / (mix.P * pinv.col(k)).norm();
        const double g = std::norm(e.c.dot(v));
        u += pf.omega[e.ue_id] * std::min(cap, std::log2(1.0 + e.lambda * g));
    }
    return u;
}

double oracle_best(const CandidatePool &pool, int S, const PfState &pf, const MixingMatrix &mix, double cap)
{
    const std::size_t n = pool.size();
    double best = 0.0;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask)
    {
        if (std::popcount(mask) > S)
            continue;
        std::vector<std::size_t> sub;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1u << i))
                sub.push_back(i);
        best = std::max(best, oracle_utility(sub, pool, pf, mix, cap));
    }
    return best;
}

} // namespace

TEST(Rate, CappedAndConventions)
{
    RateModel m;
    m.rate_cap = 8.0;
    EXPECT_DOUBLE_EQ(capped_rate(3.0, 1.0, m), 2.0);
    EXPECT_DOUBLE_EQ(capped_rate(1e6, 1.0, m), 8.0);
    EXPECT_DOUBLE_EQ(capped_rate(0.0, 1.0, m), 0.0);
    EXPECT_DOUBLE_EQ(stream_rate(3.0, 1.0, 0.5, m), 1.0);
    m.convention = SinrConvention::LiteralPowerScaled;
    m.stream_power = 0.5;
    EXPECT_DOUBLE_EQ(capped_rate(6.0, 1.0, m), 2.0);
}

TEST(Rate, MonotoneInLambda)
{
    RateModel m;
    auto rng = make_rng(30, Purpose::Test);
    std::uniform_real_distribution<double> d(0.0, 100.0);
    for (int i = 0; i < 1000; ++i)
    {
        const double a = d(rng), b = d(rng), g = d(rng) / 100.0;
        EXPECT_EQ(a <= b, capped_rate(a, g, m) <= capped_rate(b, g, m) || capped_rate(a, g, m) == m.rate_cap);
    }
}

TEST(Binomial, Values)
{
    EXPECT_EQ(binomial(12, 1), 12.0);
    EXPECT_EQ(binomial(12, 2), 66.0);
    EXPECT_EQ(binomial(12, 3), 220.0);
    EXPECT_EQ(binomial(3, 5), 0.0);
}

TEST(Exhaustive, MatchesBruteForceOracle)
{
    auto rng = make_rng(31, Purpose::Test);
    const MixingMatrix mix = make_mixing_matrix(4, 1, 0.0, MixingFamily::Fourier);
    const RateModel model;
    std::uniform_real_distribution<double> w(0.2, 1.0);
    for (int trial = 0; trial < 30; ++trial)
    {
        const CandidatePool pool = random_pool(rng, 4, 2, 3);
        PfState pf = PfState::fresh(4);
        for (auto &o : pf.omega)
            o = w(rng);
        const ScheduleDecision d = schedule_exhaustive(pool, 3, pf, mix, model);
        const double oracle = oracle_best(pool, 3, pf, mix, model.rate_cap);
        EXPECT_NEAR(d.utility, oracle, 1e-9 * std::max(1.0, oracle));
        EXPECT_NEAR(oracle_utility(d.chosen, pool, pf, mix, model.rate_cap), d.utility, 1e-9 * std::max(1.0, oracle));
        EXPECT_TRUE(std::is_sorted(d.chosen.begin(), d.chosen.end()));
        EXPECT_LE(d.chosen.size(), 3u);
        EXPECT_EQ(d.subsets_evaluated, 8u + 28u + 56u);
    }
}

TEST(Exhaustive, SubsetCountForTwelveCandidates)
{
    auto rng = make_rng(32, Purpose::Test);
    const MixingMatrix mix = make_mixing_matrix(4, 1, 0.0, MixingFamily::Fourier);
    const CandidatePool pool = random_pool(rng, 12, 1, 3);
    const ScheduleDecision d = schedule_exhaustive(pool, 3, PfState::fresh(12), mix, RateModel{});
    EXPECT_EQ(d.subsets_evaluated, 12u + 66u + 220u);
    EXPECT_THROW(schedule_exhaustive(pool, 3, PfState::fresh(12), mix, RateModel{}, 100.0), BudgetExceeded);
}

TEST(Greedy, NeverBeatsExhaustive)
{
    auto rng = make_rng(33, Purpose::Test);
    const MixingMatrix mix = make_mixing_matrix(4, 1, 0.0, MixingFamily::Fourier);
    const RateModel model;
    for (int trial = 0; trial < 100; ++trial)
    {
        const CandidatePool pool = random_pool(rng, 12, 1, 3);
        const PfState pf = PfState::fresh(12);
        const ScheduleDecision g = schedule_greedy(pool, 3, pf, mix, model);
        const ScheduleDecision e = schedule_exhaustive(pool, 3, pf, mix, model);
        EXPECT_LE(g.utility, e.utility);
        EXPECT_LE(g.zf_invocations, 33u);
        EXPECT_GE(g.chosen.size(), 1u);
        EXPECT_TRUE(std::is_sorted(g.chosen.begin(), g.chosen.end()));
        EXPECT_NEAR(oracle_utility(g.chosen, pool, pf, mix, model.rate_cap), g.utility, 1e-9 * std::max(1.0, g.utility));
    }
}

TEST(Greedy, OrthogonalCandidatesAllScheduled)
{
    const MixingMatrix mix = make_mixing_matrix(4, 1, 0.0, MixingFamily::Fourier);
    CandidatePool pool;
    for (std::size_t i = 0; i < 3; ++i)
    {
        CVector e = CVector::Zero(3);
        e(static_cast<Eigen::Index>(i)) = 1.0;
        pool.entries.push_back({i, e, 10.0, 0});
    }
    const ScheduleDecision d = schedule_greedy(pool, 3, PfState::fresh(3), mix, RateModel{});
    EXPECT_EQ(d.chosen, (std::vector<std::size_t>{0, 1, 2}));
    for (double g : d.cross_gain)
        EXPECT_NEAR(g, 1.0, 1e-12);
    EXPECT_NEAR(d.utility, 3.0 * std::log2(11.0), 1e-12);
}

TEST(Greedy, CollinearCandidatesNotPaired)
{
    auto rng = make_rng(34, Purpose::Test);
    const MixingMatrix mix = make_mixing_matrix(4, 1, 0.0, MixingFamily::Fourier);
    const CVector c = test::random_unit(rng, 3);
    CandidatePool pool;
    pool.entries.push_back({0, c, 10.0, 0});
    pool.entries.push_back({1, c, 5.0, 0});
    const ScheduleDecision d = schedule_greedy(pool, 3, PfState::fresh(2), mix, RateModel{});
    EXPECT_EQ(d.chosen, (std::vector<std::size_t>{0}));
}

TEST(Greedy, PerUeStreamCap)
{
    const MixingMatrix mix = make_mixing_matrix(4, 1, 0.0, MixingFamily::Fourier);
    CandidatePool pool;
    for (int i = 0; i < 3; ++i)
    {
        CVector e = CVector::Zero(3);
        e(i) = 1.0;
        pool.entries.push_back({0, e, 10.0, i});
    }
    RateModel model;
    model.max_streams_per_ue = 1;
    const ScheduleDecision d = schedule_greedy(pool, 3, PfState::fresh(1), mix, model);
    EXPECT_EQ(d.chosen.size(), 1u);
}

TEST(Greedy, EmptyPool)
{
    const MixingMatrix mix = make_mixing_matrix(4, 1, 0.0, MixingFamily::Fourier);
    const ScheduleDecision d = schedule_greedy(CandidatePool{}, 3, PfState::fresh(0), mix, RateModel{});
    EXPECT_TRUE(d.chosen.empty());
    EXPECT_EQ(d.utility, 0.0);
}

TEST(PfUpdate, RunningMeanAndWeights)
{
    PfState pf = PfState::fresh(2);
    pf = update_pf_state(pf, {2.0, 0.0}, 1, 0.1);
    EXPECT_DOUBLE_EQ(pf.r_avg[0], 2.0);
    EXPECT_DOUBLE_EQ(pf.r_avg[1], 0.0);
    EXPECT_DOUBLE_EQ(pf.omega[0], 0.05);
    EXPECT_DOUBLE_EQ(pf.omega[1], 1.0);
    pf = update_pf_state(pf, {0.0, 0.05}, 2, 0.1);
    EXPECT_DOUBLE_EQ(pf.r_avg[0], 1.0);
    EXPECT_DOUBLE_EQ(pf.r_avg[1], 0.025);
    EXPECT_DOUBLE_EQ(pf.omega[1], 1.0);
    EXPECT_DOUBLE_EQ(pf.omega[0], 0.1);
}

TEST(PfUpdate, WeightsInUnitInterval)
{
    auto rng = make_rng(35, Purpose::Test);
    std::exponential_distribution<double> d(0.5);
    PfState pf = PfState::fresh(5);
    for (std::size_t t = 1; t <= 200; ++t)
    {
        std::vector<double> r(5);
        for (auto &x : r)
            x = d(rng);
        pf = update_pf_state(pf, r, t, 0.1);
        for (double w : pf.omega)
        {
            EXPECT_GT(w, 0.0);
            EXPECT_LE(w, 1.0);
        }
    }
}

TEST(Greedy, OrthogonalPoolMatchesExhaustive)
{
    const MixingMatrix mix = make_mixing_matrix(4, 1, 0.0, MixingFamily::Fourier);
    CandidatePool pool;
    for (std::size_t i = 0; i < 3; ++i)
    {
        CVector e = CVector::Zero(3);
        e(static_cast<Eigen::Index>(i)) = 1.0;
        pool.entries.push_back({i, e, 3.0 + static_cast<double>(i), 0});
    }
    const ScheduleDecision g = schedule_greedy(pool, 3, PfState::fresh(3), mix, RateModel{});
    const ScheduleDecision e = schedule_exhaustive(pool, 3, PfState::fresh(3), mix, RateModel{});
    EXPECT_EQ(g.chosen, e.chosen);
    EXPECT_EQ(g.utility, e.utility);
}

TEST(Greedy, StopsWhenAdditionsHurt)
{
    const MixingMatrix mix = make_mixing_matrix(4, 1, 0.0, MixingFamily::Fourier);
    CVector a(3);
    a << 1.0, 0.0, 0.0;
    CVector b(3);
    b << 0.995, 0.0998749, 0.0;
    b.normalize();
    CandidatePool pool;
    pool.entries.push_back({0, a, 1000.0, 0});
    pool.entries.push_back({1, b, 1.0, 0});
    const ScheduleDecision d = schedule_greedy(pool, 3, PfState::fresh(2), mix, RateModel{});
    EXPECT_EQ(d.chosen, (std::vector<std::size_t>{0}));
    EXPECT_DOUBLE_EQ(d.utility, 8.0);
}

TEST(Exhaustive, PermutationEquivariant)
{
    auto rng = make_rng(36, Purpose::Test);
    const MixingMatrix mix = make_mixing_matrix(4, 1, 0.0, MixingFamily::Fourier);
    for (int trial = 0; trial < 20; ++trial)
    {
        const CandidatePool pool = random_pool(rng, 8, 1, 3);
        std::vector<std::size_t> perm(pool.size());
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        CandidatePool shuffled;
        for (std::size_t i : perm)
            shuffled.entries.push_back(pool.entries[i]);
        const PfState pf = PfState::fresh(8);
        const ScheduleDecision a = schedule_exhaustive(pool, 3, pf, mix, RateModel{});
        const ScheduleDecision b = schedule_exhaustive(shuffled, 3, pf, mix, RateModel{});
        std::vector<std::size_t> mapped;
        for (std::size_t i : b.chosen)
            mapped.push_back(perm[i]);
        std::sort(mapped.begin(), mapped.end());
        EXPECT_EQ(mapped, a.chosen);
        EXPECT_NEAR(a.utility, b.utility, 1e-9 * std::max(1.0, a.utility));
    }
}

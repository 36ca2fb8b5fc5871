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

#ifndef IASIM_SCHEDULER_HPP
#define IASIM_SCHEDULER_HPP

#include "iasim/common.hpp"
#include "iasim/config.hpp"
#include "iasim/precoding.hpp"
#include "iasim/receiver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace iasim {

/// All stream candidates fed back to one BS.
struct CandidatePool
{
    std::vector<FeedbackEntry> entries;

    std::size_t size() const { return entries.size(); }
};

/// Proportional-fair bookkeeping, indexed by UE id.
struct PfState
{
    std::vector<double> r_avg;
    std::vector<double> omega;

    static PfState fresh(std::size_t n_ue) { return {std::vector<double>(n_ue, 0.0), std::vector<double>(n_ue, 1.0)}; }
};

/// Everything needed to turn (lambda, cross gain, weight) into a rate.
struct RateModel
{
    double rate_cap = 8.0;
    double stream_power = 1.0;  // p / S, used only by the literal convention
    SinrConvention convention = SinrConvention::TrueSinr;
    CrossGainMode cross_mode = CrossGainMode::Power;
    double condition_limit = 1e8;
    int max_streams_per_ue = 0;

    static RateModel from(const NetworkConfig &c, int streams)
    {
        return {c.rate_cap, c.tx_power / streams, c.sinr_convention, c.cross_gain_mode, c.zf_condition_limit,
                c.max_streams_per_ue};
    }
};

/// Unweighted, capped rate of one stream in bits per resource use.
inline double capped_rate(double lambda, double cross_gain, const RateModel &m)
{
    double sinr = lambda * cross_gain;
    if (m.convention == SinrConvention::LiteralPowerScaled)
        sinr *= m.stream_power;
    return std::min(m.rate_cap, std::log2(1.0 + sinr));
}

inline double stream_rate(double lambda, double cross_gain, double omega, const RateModel &m)
{
    return omega * capped_rate(lambda, cross_gain, m);
}

struct SubsetEvaluation
{
    double utility = -std::numeric_limits<double>::infinity();
    PrecoderSet precoders;
    std::vector<double> cross_gain;
    std::vector<double> rate;  // unweighted, capped

    bool feasible() const { return std::isfinite(utility); }
};

/// Weighted sum rate of serving `subset` together under ZF precoding.
/// Rank-deficient or ill-conditioned subsets, and subsets breaking the
/// per-UE stream cap, get utility -inf.
inline SubsetEvaluation evaluate_subset(const std::vector<std::size_t> &subset, const CandidatePool &pool,
                                        const PfState &pf, const MixingMatrix &mix, const RateModel &model)
{
    SubsetEvaluation out;
    if (subset.empty())
    {
        out.utility = 0.0;
        return out;
    }
    if (model.max_streams_per_ue > 0)
    {
        for (std::size_t a = 0; a < subset.size(); ++a)
        {
            int same = 0;
            for (std::size_t b = 0; b < subset.size(); ++b)
                same += pool.entries[subset[a]].ue_id == pool.entries[subset[b]].ue_id;
            if (same > model.max_streams_per_ue)
                return out;
        }
    }
    CMatrix C_bar(static_cast<Eigen::Index>(subset.size()), mix.n_cols());
    for (std::size_t k = 0; k < subset.size(); ++k)
        C_bar.row(static_cast<Eigen::Index>(k)) = pool.entries[subset[k]].c.adjoint();
    try
    {
        out.precoders = zf_beamform(C_bar, mix, model.condition_limit);
    }
    catch (const IllConditioned &)
    {
        return out;
    }
    double utility = 0.0;
    for (std::size_t k = 0; k < subset.size(); ++k)
    {
        const FeedbackEntry &e = pool.entries[subset[k]];
        const double g = precoder_cross_gain(e.c, out.precoders.reduced.col(static_cast<Eigen::Index>(k)), model.cross_mode);
        const double r = capped_rate(e.lambda, g, model);
        out.cross_gain.push_back(g);
        out.rate.push_back(r);
        utility += pf.omega[e.ue_id] * r;
    }
    out.utility = utility;
    return out;
}

struct ScheduleDecision
{
    std::vector<std::size_t> chosen;  // pool indices, ascending
    PrecoderSet precoders;            // column k serves chosen[k]
    std::vector<double> per_stream_rate;
    std::vector<double> cross_gain;
    double utility = 0.0;
    std::uint64_t zf_invocations = 0;
    std::uint64_t subsets_evaluated = 0;
};

inline double binomial(std::size_t n, std::size_t k)
{
    if (k > n)
        return 0.0;
    double r = 1.0;
    for (std::size_t i = 1; i <= k; ++i)
        r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return std::round(r);
}

namespace detail {

inline ScheduleDecision to_decision(std::vector<std::size_t> chosen, SubsetEvaluation eval)
{
    ScheduleDecision d;
    d.chosen = std::move(chosen);
    d.utility = eval.utility;
    d.precoders = std::move(eval.precoders);
    d.per_stream_rate = std::move(eval.rate);
    d.cross_gain = std::move(eval.cross_gain);
    return d;
}

} // namespace detail

/// Evaluates every subset of size 1..S and returns the best. Ties go to the
/// lexicographically smallest sorted index list.
inline ScheduleDecision schedule_exhaustive(const CandidatePool &pool, int S, const PfState &pf,
                                            const MixingMatrix &mix, const RateModel &model, double budget = 2e6)
{
    const std::size_t n = pool.size();
    const std::size_t max_k = std::min<std::size_t>(static_cast<std::size_t>(S), n);
    double total = 0.0;
    for (std::size_t k = 1; k <= max_k; ++k)
        total += binomial(n, k);
    if (total > budget)
        throw BudgetExceeded(std::to_string(total) + " subsets exceed budget " + std::to_string(budget));

    std::vector<std::size_t> best;
    SubsetEvaluation best_eval;
    std::uint64_t evaluated = 0;

    std::vector<std::size_t> idx;
    for (std::size_t k = 1; k <= max_k; ++k)
    {
        idx.resize(k);
        for (std::size_t i = 0; i < k; ++i)
            idx[i] = i;
        while (true)
        {
            SubsetEvaluation e = evaluate_subset(idx, pool, pf, mix, model);
            ++evaluated;
            bool take = false;
            if (e.feasible())
            {
                if (!best_eval.feasible() || e.utility > best_eval.utility)
                    take = true;
                else if (e.utility == best_eval.utility &&
                         std::lexicographical_compare(idx.begin(), idx.end(), best.begin(), best.end()))
                    take = true;
            }
            if (take)
            {
                best = idx;
                best_eval = std::move(e);
            }
            // next combination in lexicographic order
            std::size_t i = k;
            while (i > 0 && idx[i - 1] == n - k + i - 1)
                --i;
            if (i == 0)
                break;
            ++idx[i - 1];
            for (std::size_t j = i; j < k; ++j)
                idx[j] = idx[j - 1] + 1;
        }
    }

    ScheduleDecision d = best_eval.feasible() ? detail::to_decision(best, std::move(best_eval)) : ScheduleDecision{};
    d.subsets_evaluated = evaluated;
    d.zf_invocations = evaluated;
    return d;
}

/// Greedy extension: seed with the best single stream, then repeatedly add the
/// candidate giving the largest utility, stopping when nothing strictly
/// improves it or S streams are chosen. Subsets are kept sorted so a set gets
/// bit-identical utility here and in schedule_exhaustive.
inline ScheduleDecision schedule_greedy(const CandidatePool &pool, int S, const PfState &pf,
                                        const MixingMatrix &mix, const RateModel &model)
{
    std::uint64_t zf_calls = 0;
    const std::size_t n = pool.size();

    std::vector<std::size_t> chosen;
    SubsetEvaluation q_opt;
    for (std::size_t i = 0; i < n; ++i)
    {
        SubsetEvaluation e = evaluate_subset({i}, pool, pf, mix, model);
        ++zf_calls;
        if (e.feasible() && (!q_opt.feasible() || e.utility > q_opt.utility))
        {
            chosen = {i};
            q_opt = std::move(e);
        }
    }
    if (!q_opt.feasible())
    {
        ScheduleDecision empty;
        empty.zf_invocations = zf_calls;
        return empty;
    }

    std::vector<bool> used(n, false);
    used[chosen.front()] = true;
    while (chosen.size() < static_cast<std::size_t>(S))
    {
        std::size_t pick = n;
        SubsetEvaluation pick_eval;
        double bar = q_opt.utility;
        for (std::size_t i = 0; i < n; ++i)
        {
            if (used[i])
                continue;
            std::vector<std::size_t> trial = chosen;
            trial.insert(std::upper_bound(trial.begin(), trial.end(), i), i);
            SubsetEvaluation e = evaluate_subset(trial, pool, pf, mix, model);
            ++zf_calls;
            if (e.feasible() && e.utility > bar)
            {
                bar = e.utility;
                pick = i;
                pick_eval = std::move(e);
            }
        }
        if (pick == n)
            break;
        chosen.insert(std::upper_bound(chosen.begin(), chosen.end(), pick), pick);
        used[pick] = true;
        q_opt = std::move(pick_eval);
    }

    ScheduleDecision d = detail::to_decision(std::move(chosen), std::move(q_opt));
    d.zf_invocations = zf_calls;
    d.subsets_evaluated = zf_calls;
    return d;
}

/// Running-mean PF update after transmission number `transmission_index` (1-based).
inline PfState update_pf_state(PfState pf, const std::vector<double> &delivered, std::size_t transmission_index,
                               double r_min)
{
    const double t = static_cast<double>(std::max<std::size_t>(transmission_index, 1));
    for (std::size_t u = 0; u < pf.r_avg.size(); ++u)
    {
        pf.r_avg[u] += (delivered[u] - pf.r_avg[u]) / t;
        pf.omega[u] = r_min / std::max(r_min, pf.r_avg[u]);
    }
    return pf;
}

} // namespace iasim

#endif

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

#ifndef IASIM_SIMHARNESS_HPP
#define IASIM_SIMHARNESS_HPP

#include "iasim/common.hpp"
#include "iasim/config.hpp"
#include "iasim/netchan.hpp"
#include "iasim/precoding.hpp"
#include "iasim/receiver.hpp"
#include "iasim/scheduler.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace iasim {

enum class Scheme
{
    IA_ZF,     // null-space decoding of the strongest interferer(s)
    IA_MMSE,   // whitening of the strongest interferer, multi-direction feedback
    MF,        // full unitary basis, no freed dimension, same feedback and scheduler
    OFDM_REF,  // identity basis, all interference treated as white noise
};

inline std::string scheme_name(Scheme s)
{
    switch (s)
    {
    case Scheme::IA_ZF: return "IA_ZF";
    case Scheme::IA_MMSE: return "IA_MMSE";
    case Scheme::MF: return "MF";
    case Scheme::OFDM_REF: return "OFDM_REF";
    }
    return "?";
}

struct SchemeSpec
{
    Scheme scheme = Scheme::IA_MMSE;
    double kappa = 0.0;  // only meaningful for the IA schemes

    bool operator==(const SchemeSpec &) const = default;
};

/// Parses NAME or NAME:kappa, e.g. "IA_MMSE:0.4". Without a kappa the IA
/// schemes take `default_kappa`; MF and OFDM_REF always report kappa 1.
inline SchemeSpec parse_scheme(const std::string &text, double default_kappa = 0.0)
{
    const auto colon = text.find(':');
    const std::string name = text.substr(0, colon);
    SchemeSpec spec;
    if (name == "IA_ZF")
        spec.scheme = Scheme::IA_ZF;
    else if (name == "IA_MMSE")
        spec.scheme = Scheme::IA_MMSE;
    else if (name == "MF")
        spec.scheme = Scheme::MF;
    else if (name == "OFDM_REF")
        spec.scheme = Scheme::OFDM_REF;
    else
        throw ValidationError("unknown scheme '" + name + "'");
    spec.kappa = default_kappa;
    if (colon != std::string::npos)
    {
        std::size_t used = 0;
        const std::string num = text.substr(colon + 1);
        try
        {
            spec.kappa = std::stod(num, &used);
        }
        catch (const std::exception &)
        {
            used = 0;
        }
        if (used == 0 || used != num.size())
            throw ValidationError("bad kappa in scheme '" + text + "'");
    }
    if (spec.scheme == Scheme::MF || spec.scheme == Scheme::OFDM_REF)
        spec.kappa = 1.0;
    if (!(spec.kappa >= 0.0 && spec.kappa <= 1.0))
        throw ValidationError("kappa in [0, 1] for scheme '" + text + "'");
    return spec;
}

/// Per-scheme transmit basis, stream budget and receiver behaviour.
struct SchemeSetup
{
    MixingMatrix mix;
    int streams = 1;       // S, per-stream power is p / S
    int feedback = 1;      // L
    bool null_decoding = false;
    bool interference_as_noise = false;
};

inline SchemeSetup setup_for(const NetworkConfig &cfg, const SchemeSpec &spec)
{
    const int MK = cfg.dims();
    SchemeSetup s;
    switch (spec.scheme)
    {
    case Scheme::IA_ZF:
    case Scheme::IA_MMSE:
        s.mix = make_mixing_matrix(MK, cfg.freed_dims, spec.kappa, cfg.mixing_family);
        s.streams = MK - cfg.freed_dims;
        s.feedback = std::min<int>(cfg.feedback_count(), static_cast<int>(s.mix.n_cols()));
        s.null_decoding = spec.scheme == Scheme::IA_ZF;
        if (s.null_decoding)
            s.feedback = 1;
        break;
    case Scheme::MF:
        s.mix = make_mixing_matrix(MK, 0, 1.0, cfg.mixing_family);
        s.streams = MK;
        s.feedback = MK;
        break;
    case Scheme::OFDM_REF:
        s.mix = identity_mixing(MK);
        s.streams = MK;
        s.feedback = MK;
        s.interference_as_noise = true;
        break;
    }
    return s;
}

// ----- Rate realization ----------------------------------------------------

/// What one BS actually sends in a slot.
struct BsTransmission
{
    std::vector<std::size_t> owners;      // UE per stream
    CMatrix transmit;                     // M_K x streams, unit-norm columns
    std::vector<double> estimated_rate;   // scheduler estimate per stream (unweighted)
};

struct RealizedStream
{
    std::size_t bs = 0;
    std::size_t ue = 0;
    double desired = 0.0;
    double intra = 0.0;
    double inter = 0.0;
    double nulled = 0.0;  // part of `inter` coming from the UE's strongest interferer
    double sinr = 0.0;
    double rate = 0.0;
};

struct Realization
{
    std::vector<double> delivered;  // per UE, bits per resource use
    std::vector<RealizedStream> streams;
};

/// Ground-truth post-combining SINR of every scheduled stream given what all
/// BSs transmit. `decoders[b][k]` is the receive vector of stream k of BS b.
inline Realization realize_rates(const std::vector<BsTransmission> &tx, const ChannelSet &channels,
                                 const std::vector<std::vector<CVector>> &decoders, const Geometry &geo,
                                 const NetworkConfig &cfg, double stream_power)
{
    Realization out;
    out.delivered.assign(geo.num_ue(), 0.0);
    for (std::size_t b = 0; b < tx.size(); ++b)
    {
        for (std::size_t k = 0; k < tx[b].owners.size(); ++k)
        {
            const std::size_t ue = tx[b].owners[k];
            const CVector &u = decoders[b][k];
            RealizedStream rs;
            rs.bs = b;
            rs.ue = ue;
            for (std::size_t j = 0; j < tx.size(); ++j)
            {
                if (tx[j].owners.empty())
                    continue;
                const Eigen::RowVectorXcd g = u.adjoint() * channels.H[ue][j] * tx[j].transmit;
                for (Eigen::Index s = 0; s < g.size(); ++s)
                {
                    const double pw = stream_power * std::norm(g(s));
                    if (j == b && static_cast<std::size_t>(s) == k)
                        rs.desired = pw;
                    else if (j == b)
                        rs.intra += pw;
                    else
                    {
                        rs.inter += pw;
                        if (j == geo.strongest_interferer[ue])
                            rs.nulled += pw;
                    }
                }
            }
            const double noise = cfg.noise_power * u.squaredNorm();
            rs.sinr = rs.desired / (noise + rs.intra + rs.inter);
            rs.rate = std::min(cfg.rate_cap, std::log2(1.0 + rs.sinr));
            out.delivered[ue] += rs.rate;
            out.streams.push_back(rs);
        }
    }
    return out;
}

// ----- Scenario ---------------------------------------------------------------

struct ScenarioResult
{
    std::string scheme;
    double kappa = 0.0;
    std::uint64_t seed = 0;
    std::vector<double> geometry_sinr_db;        // per UE
    std::vector<bool> recorded;                  // UE served from the centre site
    std::vector<std::vector<double>> delivered;  // [transmission][ue]
    std::vector<std::size_t> scheduled_slots;    // per UE
    double max_realized_stream_rate = 0.0;
    double max_estimated_stream_rate = 0.0;
    double max_nulled_ratio = 0.0;     // nulled-interferer power / desired, null-decoded streams
    double max_estimate_gap = 0.0;     // |estimated - realized weighted rate| per BS and slot
    std::uint64_t zf_invocations = 0;
    std::uint64_t subsets_evaluated = 0;
    std::uint64_t schedule_calls = 0;
    std::uint64_t streams_scheduled = 0;

    /// Mean delivered bits per resource use of every UE over the run.
    std::vector<double> mean_se() const
    {
        std::vector<double> se(geometry_sinr_db.size(), 0.0);
        for (const auto &slot : delivered)
            for (std::size_t u = 0; u < se.size(); ++u)
                se[u] += slot[u];
        if (!delivered.empty())
            for (double &v : se)
                v /= static_cast<double>(delivered.size());
        return se;
    }

    bool operator==(const ScenarioResult &) const = default;
};

namespace detail {

// Per-UE receive state for one slot.
struct UeState
{
    InCovariance cov;
    std::optional<CVector> null_decoder;
    std::vector<FeedbackEntry> feedback;
};

inline std::vector<std::size_t> interferers_by_gain(const Geometry &geo, std::size_t ue)
{
    std::vector<std::size_t> order;
    for (std::size_t b = 0; b < geo.num_bs(); ++b)
        if (b != geo.serving_bs[ue])
            order.push_back(b);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return geo.avg_gain[ue][a] > geo.avg_gain[ue][b]; });
    return order;
}

// Average received power per receive dimension from a fully loaded BS: p * g * M / M_K.
inline double per_dim_power(const NetworkConfig &cfg, double gain)
{
    return cfg.tx_power * gain / cfg.subcarriers;
}

} // namespace detail

/// Fading seed of slot `t` (0-based) in the scenario with seed `seed`; equal
/// for every scheme so they see the same channels.
inline std::uint64_t slot_fading_seed(std::uint64_t seed, int t, bool frozen)
{
    return splitmix64(seed ^ splitmix64(frozen ? 0u : static_cast<std::uint64_t>(t) + 1));
}

/// Runs `transmissions` slots on a fixed geometry.
inline ScenarioResult run_scenario_on(const NetworkConfig &cfg, const SchemeSpec &spec, std::uint64_t seed,
                                      const Geometry &geo, int transmissions)
{
    const SchemeSetup setup = setup_for(cfg, spec);
    const double stream_power = cfg.tx_power / setup.streams;
    const RateModel model = RateModel::from(cfg, setup.streams);
    const bool literal = cfg.sinr_convention == SinrConvention::LiteralPowerScaled;
    const double signal_scale = literal ? 1.0 : stream_power;
    const std::size_t n_ue = geo.num_ue();
    const std::size_t n_bs = geo.num_bs();

    ScenarioResult res;
    res.scheme = scheme_name(spec.scheme);
    res.kappa = spec.kappa;
    res.seed = seed;
    res.geometry_sinr_db = geometry_sinr(geo, cfg);
    res.recorded.resize(n_ue);
    for (std::size_t u = 0; u < n_ue; ++u)
        res.recorded[u] = geo.bs_cell[geo.serving_bs[u]] == 0;
    res.scheduled_slots.assign(n_ue, 0);

    // Interferer bookkeeping is fixed for the scenario.
    const std::size_t n_modeled = setup.null_decoding ? static_cast<std::size_t>(std::max(cfg.n_ri, 0)) : 1;
    std::vector<std::vector<std::size_t>> modeled(n_ue);
    std::vector<double> floor(n_ue);
    for (std::size_t u = 0; u < n_ue; ++u)
    {
        const auto order = detail::interferers_by_gain(geo, u);
        double rem = 0.0;
        double all = 0.0;
        for (std::size_t i = 0; i < order.size(); ++i)
        {
            const double pw = detail::per_dim_power(cfg, geo.avg_gain[u][order[i]]);
            all += pw;
            if (i < n_modeled && !setup.interference_as_noise)
                modeled[u].push_back(order[i]);
            else
                rem += pw;
        }
        if (setup.interference_as_noise)
            floor[u] = cfg.noise_power + all;
        else
            floor[u] = cfg.noise_power + (cfg.inr_rem ? *cfg.inr_rem : rem);
    }

    PfState pf = PfState::fresh(n_ue);
    std::vector<std::optional<CMatrix>> previous_reduced(n_bs);
    const double sqrt_scale = std::sqrt(signal_scale);

    for (int t = 0; t < transmissions; ++t)
    {
        const ChannelSet ch = gen_fading(cfg, geo, slot_fading_seed(seed, t, cfg.freeze_fading));

        // Receiver side: covariance, decoders and feedback of every UE.
        std::vector<detail::UeState> ues(n_ue);
        for (std::size_t u = 0; u < n_ue; ++u)
        {
            detail::UeState &st = ues[u];
            const CMatrix &H = ch.H[u][geo.serving_bs[u]];
            const std::size_t MK = static_cast<std::size_t>(H.rows());
            const std::size_t strongest = modeled[u].empty() ? kNoBs : modeled[u].front();
            const double rem = floor[u] - cfg.noise_power;
            if (strongest == kNoBs)
            {
                st.cov.Phi = CMatrix::Identity(MK, MK) * cplx(floor[u], 0.0);
            }
            else
            {
                std::optional<CMatrix> V;
                if (cfg.exact_interferer_cov && previous_reduced[strongest])
                    V = previous_reduced[strongest];
                st.cov = in_covariance(ch.H[u][strongest], setup.mix, V, cfg.tx_power, setup.streams,
                                       cfg.noise_power, rem);
            }

            bool fed = false;
            if (setup.null_decoding && !modeled[u].empty())
            {
                std::vector<CMatrix> hint;
                for (std::size_t b : modeled[u])
                    hint.push_back(ch.H[u][b] * setup.mix.P);
                try
                {
                    const CVector v0 = init_vector(H, setup.mix, st.cov);
                    const CVector desired = H * (setup.mix.P * v0);
                    CVector un = zf_null_decoder(hint, hint.size(), desired);
                    st.feedback.push_back(zf_feedback(u, H, setup.mix, un, signal_scale, floor[u]));
                    st.null_decoder = std::move(un);
                    fed = true;
                }
                catch (const NoNullSpace &)
                {
                }
                catch (const ZeroDirection &)
                {
                }
            }
            if (!fed)
            {
                const CMatrix G = equivalent_channel(sqrt_scale * H, setup.mix, st.cov);
                st.feedback = build_feedback(u, G, setup.feedback);
            }
        }

        // Scheduling at every BS.
        std::vector<BsTransmission> tx(n_bs);
        std::vector<std::vector<CVector>> decoders(n_bs);
        std::vector<ScheduleDecision> decisions(n_bs);
        for (std::size_t b = 0; b < n_bs; ++b)
        {
            CandidatePool pool;
            for (std::size_t u = 0; u < n_ue; ++u)
                if (geo.serving_bs[u] == b)
                    for (const auto &e : ues[u].feedback)
                        pool.entries.push_back(e);
            if (pool.size() == 0)
            {
                previous_reduced[b].reset();
                continue;
            }
            ScheduleDecision d;
            if (cfg.scheduler == SchedulerKind::Exhaustive)
            {
                try
                {
                    d = schedule_exhaustive(pool, setup.streams, pf, setup.mix, model, cfg.exhaustive_budget);
                }
                catch (const BudgetExceeded &)
                {
                    d = schedule_greedy(pool, setup.streams, pf, setup.mix, model);
                }
            }
            else
            {
                d = schedule_greedy(pool, setup.streams, pf, setup.mix, model);
            }
            ++res.schedule_calls;
            res.zf_invocations += d.zf_invocations;
            res.subsets_evaluated += d.subsets_evaluated;
            res.streams_scheduled += d.chosen.size();

            BsTransmission &out = tx[b];
            out.transmit = d.precoders.transmit;
            out.estimated_rate = d.per_stream_rate;
            for (std::size_t k = 0; k < d.chosen.size(); ++k)
            {
                const FeedbackEntry &e = pool.entries[d.chosen[k]];
                out.owners.push_back(e.ue_id);
                res.max_estimated_stream_rate = std::max(res.max_estimated_stream_rate, d.per_stream_rate[k]);
                const CMatrix &H = ch.H[e.ue_id][b];
                if (ues[e.ue_id].null_decoder)
                    decoders[b].push_back(*ues[e.ue_id].null_decoder);
                else
                    decoders[b].push_back(final_decoder(H, setup.mix, ues[e.ue_id].cov, e.c).col(0));
            }
            if (d.chosen.empty())
                previous_reduced[b].reset();
            else
                previous_reduced[b] = d.precoders.reduced;
            decisions[b] = std::move(d);
        }

        const Realization real = realize_rates(tx, ch, decoders, geo, cfg, stream_power);
        std::size_t at = 0;
        for (std::size_t b = 0; b < n_bs; ++b)
        {
            double realized_utility = 0.0;
            for (std::size_t k = 0; k < tx[b].owners.size(); ++k, ++at)
            {
                const RealizedStream &rs = real.streams[at];
                res.max_realized_stream_rate = std::max(res.max_realized_stream_rate, rs.rate);
                realized_utility += pf.omega[rs.ue] * rs.rate;
                if (ues[rs.ue].null_decoder && rs.desired > 0.0)
                    res.max_nulled_ratio = std::max(res.max_nulled_ratio, rs.nulled / rs.desired);
            }
            if (!tx[b].owners.empty())
                res.max_estimate_gap = std::max(res.max_estimate_gap, std::abs(realized_utility - decisions[b].utility));
        }
        for (std::size_t u = 0; u < n_ue; ++u)
        {
            bool served = false;
            for (const auto &b : tx)
                served = served || std::find(b.owners.begin(), b.owners.end(), u) != b.owners.end();
            res.scheduled_slots[u] += served;
        }
        res.delivered.push_back(real.delivered);
        pf = update_pf_state(std::move(pf), real.delivered, static_cast<std::size_t>(t) + 1, cfg.r_min);
    }
    return res;
}

/// One geometry drop followed by `transmissions` slots.
inline ScenarioResult run_scenario(const NetworkConfig &cfg, const SchemeSpec &spec, std::uint64_t seed,
                                   int transmissions = 100)
{
    return run_scenario_on(cfg, spec, seed, drop_users(cfg, seed), transmissions);
}

// ----- Campaign ---------------------------------------------------------------

struct CampaignSettings
{
    int scenarios = 20;
    int transmissions = 20;
    std::uint64_t seed = 1;
    double bin_width_db = 1.0;
    int threads = 1;
    std::vector<SchemeSpec> schemes;

    bool operator==(const CampaignSettings &) const = default;
};

struct UeRecord
{
    std::uint64_t scenario_seed = 0;
    double sinr_db = 0.0;
    double se = 0.0;
    bool operator==(const UeRecord &) const = default;
};

struct SeBin
{
    double lower_db = 0.0;
    double mean_se = 0.0;
    std::size_t n_ue = 0;
    bool operator==(const SeBin &) const = default;
};

struct SchemeSummary
{
    SchemeSpec spec;
    std::vector<UeRecord> records;
    std::vector<SeBin> bins;
    std::uint64_t zf_invocations = 0;
    std::uint64_t subsets_evaluated = 0;
    std::uint64_t schedule_calls = 0;
    std::uint64_t streams_scheduled = 0;
    double max_realized_stream_rate = 0.0;
    double max_estimated_stream_rate = 0.0;

    bool operator==(const SchemeSummary &) const = default;
};

struct CampaignSummary
{
    double bin_width_db = 1.0;
    std::vector<SchemeSummary> schemes;
    std::vector<double> geometry_sinr_db;  // recorded UEs, ascending
    std::vector<double> cdf;               // cdf[i] = (i+1)/n

    bool operator==(const CampaignSummary &) const = default;
};

/// Mean SE per SINR bin [k*w, (k+1)*w), bins ascending, empty bins omitted.
inline std::vector<SeBin> bin_records(const std::vector<UeRecord> &records, double width)
{
    std::vector<std::pair<long long, std::size_t>> keyed;
    keyed.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i)
        keyed.emplace_back(static_cast<long long>(std::floor(records[i].sinr_db / width)), i);
    std::stable_sort(keyed.begin(), keyed.end(), [](const auto &a, const auto &b) { return a.first < b.first; });
    std::vector<SeBin> bins;
    for (std::size_t i = 0; i < keyed.size();)
    {
        std::size_t j = i;
        double sum = 0.0;
        while (j < keyed.size() && keyed[j].first == keyed[i].first)
            sum += records[keyed[j++].second].se;
        bins.push_back({static_cast<double>(keyed[i].first) * width, sum / static_cast<double>(j - i), j - i});
        i = j;
    }
    return bins;
}

namespace detail {

inline void finalize(CampaignSummary &s)
{
    std::sort(s.geometry_sinr_db.begin(), s.geometry_sinr_db.end());
    s.cdf.resize(s.geometry_sinr_db.size());
    for (std::size_t i = 0; i < s.cdf.size(); ++i)
        s.cdf[i] = static_cast<double>(i + 1) / static_cast<double>(s.cdf.size());
    for (auto &sc : s.schemes)
        sc.bins = bin_records(sc.records, s.bin_width_db);
}

} // namespace detail

/// Monte-Carlo campaign: scenario i uses seed settings.seed + i. Scenarios are
/// independent, so the result does not depend on `threads`.
inline CampaignSummary run_campaign(const NetworkConfig &cfg, const CampaignSettings &settings)
{
    if (settings.scenarios < 1)
        throw ValidationError("scenarios >= 1");
    if (settings.transmissions < 1)
        throw ValidationError("transmissions >= 1");
    if (!(settings.bin_width_db > 0.0))
        throw ValidationError("bin_width_db > 0");
    validate(cfg);

    const std::size_t n = static_cast<std::size_t>(settings.scenarios);
    std::vector<std::vector<ScenarioResult>> results(n);
    auto work = [&](std::size_t i) {
        const std::uint64_t seed = settings.seed + i;
        const Geometry geo = drop_users(cfg, seed);
        for (const auto &spec : settings.schemes)
            results[i].push_back(run_scenario_on(cfg, spec, seed, geo, settings.transmissions));
    };

    const int threads = std::max(1, std::min<int>(settings.threads, settings.scenarios));
    if (threads == 1)
    {
        for (std::size_t i = 0; i < n; ++i)
            work(i);
    }
    else
    {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (int w = 0; w < threads; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++)
                    work(i);
            });
    }

    CampaignSummary s;
    s.bin_width_db = settings.bin_width_db;
    for (const auto &spec : settings.schemes)
        s.schemes.push_back({spec, {}, {}});
    for (std::size_t i = 0; i < n; ++i)
    {
        for (std::size_t k = 0; k < settings.schemes.size(); ++k)
        {
            const ScenarioResult &r = results[i][k];
            SchemeSummary &sc = s.schemes[k];
            const auto se = r.mean_se();
            for (std::size_t u = 0; u < se.size(); ++u)
                if (r.recorded[u])
                    sc.records.push_back({r.seed, r.geometry_sinr_db[u], se[u]});
            sc.zf_invocations += r.zf_invocations;
            sc.subsets_evaluated += r.subsets_evaluated;
            sc.schedule_calls += r.schedule_calls;
            sc.streams_scheduled += r.streams_scheduled;
            sc.max_realized_stream_rate = std::max(sc.max_realized_stream_rate, r.max_realized_stream_rate);
            sc.max_estimated_stream_rate = std::max(sc.max_estimated_stream_rate, r.max_estimated_stream_rate);
        }
        if (!results[i].empty())
        {
            const ScenarioResult &r = results[i].front();
            for (std::size_t u = 0; u < r.recorded.size(); ++u)
                if (r.recorded[u])
                    s.geometry_sinr_db.push_back(r.geometry_sinr_db[u]);
        }
        else
        {
            const Geometry geo = drop_users(cfg, settings.seed + i);
            const auto sinr = geometry_sinr(geo, cfg);
            for (std::size_t u = 0; u < sinr.size(); ++u)
                if (geo.bs_cell[geo.serving_bs[u]] == 0)
                    s.geometry_sinr_db.push_back(sinr[u]);
        }
    }
    detail::finalize(s);
    return s;
}

/// Concatenates two campaigns over disjoint seed ranges (a first).
inline CampaignSummary merge_campaigns(const CampaignSummary &a, const CampaignSummary &b)
{
    if (a.bin_width_db != b.bin_width_db || a.schemes.size() != b.schemes.size())
        throw BinMismatch("campaigns use different bins or scheme lists");
    CampaignSummary s = a;
    s.geometry_sinr_db.insert(s.geometry_sinr_db.end(), b.geometry_sinr_db.begin(), b.geometry_sinr_db.end());
    for (std::size_t k = 0; k < s.schemes.size(); ++k)
    {
        if (!(s.schemes[k].spec == b.schemes[k].spec))
            throw BinMismatch("scheme lists differ");
        SchemeSummary &sc = s.schemes[k];
        const SchemeSummary &o = b.schemes[k];
        sc.records.insert(sc.records.end(), o.records.begin(), o.records.end());
        sc.zf_invocations += o.zf_invocations;
        sc.subsets_evaluated += o.subsets_evaluated;
        sc.schedule_calls += o.schedule_calls;
        sc.streams_scheduled += o.streams_scheduled;
        sc.max_realized_stream_rate = std::max(sc.max_realized_stream_rate, o.max_realized_stream_rate);
        sc.max_estimated_stream_rate = std::max(sc.max_estimated_stream_rate, o.max_estimated_stream_rate);
    }
    detail::finalize(s);
    return s;
}

} // namespace iasim

#endif

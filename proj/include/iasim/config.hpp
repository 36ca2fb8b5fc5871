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

#ifndef IASIM_CONFIG_HPP
#define IASIM_CONFIG_HPP

#include "iasim/common.hpp"

#include <optional>
#include <string>

namespace iasim {

enum class MixingFamily
{
    Fourier,
    Hadamard
};

/// Where the per-stream power p/S enters the scheduler's rate estimate.
enum class SinrConvention
{
    TrueSinr,            // feedback gains already include p/S: rate = log2(1 + lambda * g)
    LiteralPowerScaled,  // raw gains, rate = log2(1 + (p/S) * lambda * g)
};

enum class CrossGainMode
{
    Power,      // |<c, v>|^2
    Amplitude,  // |<c, v>|
};

enum class SchedulerKind
{
    Greedy,
    Exhaustive
};

/// Scalar parameters of the system model, the propagation model and the
/// algorithm switches. Defaults are the desk-scale reference setup:
/// 7 omni cells, 10 UEs per cell, M_K = 4 with one freed dimension.
struct NetworkConfig
{
    // topology
    int cells = 7;
    int sectors_per_cell = 1;
    int users_per_cell = 10;
    bool poisson_users = false;
    double inter_site_distance = 500.0;  // meters
    double min_ue_distance = 35.0;       // meters

    // propagation: g0 * (d/d0)^-alpha * shadowing
    double pathloss_exponent = 3.5;
    double ref_distance = 50.0;
    double ref_gain = 1.0;
    double shadowing_db = 8.0;

    // signal space
    int antennas = 4;     // M
    int subcarriers = 1;  // K
    int freed_dims = 1;   // N_f
    double kappa = 0.0;
    MixingFamily mixing_family = MixingFamily::Fourier;

    // power and fading
    double tx_power = 1.0;       // p
    double noise_power = 1e-4;   // sigma^2
    double correlation = 0.0;    // rho
    std::optional<double> inr_rem;  // unset: derived per UE from geometry

    // feedback and scheduling
    int feedback_dirs = 0;  // L; 0 selects M_K - N_f
    int n_ri = 1;
    double r_min = 0.1;
    double rate_cap = 8.0;
    SchedulerKind scheduler = SchedulerKind::Greedy;
    double exhaustive_budget = 2e6;
    int max_streams_per_ue = 0;  // 0: unlimited
    double zf_condition_limit = 1e8;
    SinrConvention sinr_convention = SinrConvention::TrueSinr;
    CrossGainMode cross_gain_mode = CrossGainMode::Power;

    // harness switches
    bool freeze_fading = false;
    bool exact_interferer_cov = false;

    int dims() const { return antennas * subcarriers; }
    int base_stations() const { return cells * sectors_per_cell; }
    int streams() const { return dims() - freed_dims; }
    int feedback_count() const { return feedback_dirs > 0 ? feedback_dirs : dims() - freed_dims; }

    bool operator==(const NetworkConfig &) const = default;
};

/// Throws ValidationError naming the first violated invariant.
inline void validate(const NetworkConfig &c)
{
    auto require = [](bool ok, const char *what) {
        if (!ok)
            throw ValidationError(what);
    };
    require(c.cells >= 1 && c.cells <= 7, "1 <= cells <= 7");
    require(c.sectors_per_cell == 1 || c.sectors_per_cell == 3, "sectors_per_cell in {1, 3}");
    require(c.users_per_cell >= 1, "users_per_cell >= 1");
    require(c.inter_site_distance > 0.0, "inter_site_distance > 0");
    require(c.min_ue_distance >= 0.0 && c.min_ue_distance < c.inter_site_distance / 2.0,
            "0 <= min_ue_distance < inter_site_distance / 2");
    require(c.pathloss_exponent > 0.0, "pathloss_exponent > 0");
    require(c.ref_distance > 0.0, "ref_distance > 0");
    require(c.ref_gain > 0.0, "ref_gain > 0");
    require(c.shadowing_db >= 0.0, "shadowing_db >= 0");
    require(c.antennas >= 1, "antennas >= 1");
    require(c.subcarriers >= 1, "subcarriers >= 1");
    require(c.freed_dims >= 0 && c.freed_dims < c.dims(), "0 <= N_f < M_K");
    require(c.kappa >= 0.0 && c.kappa <= 1.0, "kappa in [0, 1]");
    require(c.tx_power > 0.0, "p > 0");
    require(c.noise_power > 0.0, "sigma2 > 0");
    require(c.correlation >= 0.0 && c.correlation < 1.0, "0 <= rho < 1");
    require(!c.inr_rem || *c.inr_rem >= 0.0, "inr_rem >= 0");
    require(c.feedback_dirs >= 0, "feedback_dirs >= 0");
    if (c.kappa == 0.0)
        require(c.feedback_count() <= c.dims() - c.freed_dims, "1 <= L <= M_K - N_f when kappa = 0");
    else
        require(c.feedback_count() <= c.dims(), "1 <= L <= M_K");
    require(c.n_ri >= 0, "n_ri >= 0");
    require(c.r_min > 0.0, "r_min > 0");
    require(c.rate_cap > 0.0, "rate_cap > 0");
    require(c.exhaustive_budget >= 1.0, "exhaustive_budget >= 1");
    require(c.max_streams_per_ue >= 0, "max_streams_per_ue >= 0");
    require(c.zf_condition_limit > 1.0, "zf_condition_limit > 1");
}

} // namespace iasim

#endif

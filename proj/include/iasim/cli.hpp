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

#ifndef IASIM_CLI_HPP
#define IASIM_CLI_HPP

#include "iasim/common.hpp"
#include "iasim/config.hpp"
#include "iasim/simharness.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

namespace iasim::cli {

// ----- Locale-free number formatting -------------------------------------

/// Shortest representation that parses back to the same double.
inline std::string fmt_shortest(double v)
{
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, r.ptr);
}

inline std::string fmt_fixed(double v, int precision = 6)
{
    char buf[128];
    auto r = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, precision);
    std::string s(buf, r.ptr);
    if (s == "-0." + std::string(static_cast<std::size_t>(precision), '0'))
        s.erase(0, 1);
    return s;
}

inline std::optional<double> parse_double(std::string_view s)
{
    double v = 0.0;
    if (!s.empty() && s.front() == '+')
        s.remove_prefix(1);
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size())
        return std::nullopt;
    return v;
}

template <class Int>
std::optional<Int> parse_int(std::string_view s)
{
    Int v{};
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size())
        return std::nullopt;
    return v;
}

// ----- Configuration file --------------------------------------------------

/// Everything one run needs: model parameters plus campaign settings.
struct RunConfig
{
    NetworkConfig net;
    CampaignSettings campaign = default_campaign();

    static CampaignSettings default_campaign()
    {
        CampaignSettings c;
        c.schemes = {{Scheme::IA_MMSE, 0.0}, {Scheme::MF, 1.0}, {Scheme::OFDM_REF, 1.0}};
        return c;
    }

    bool operator==(const RunConfig &) const = default;
};

inline std::string scheme_label(const SchemeSpec &s)
{
    return scheme_name(s.scheme) + ":" + fmt_shortest(s.kappa);
}

namespace detail {

inline std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

struct Field
{
    std::function<void(RunConfig &, const std::string &)> read;  // returns false on bad value via exception
    std::function<std::string(const RunConfig &)> write;
};

struct BadValue
{
    std::string why;
};

inline double need_double(const std::string &v)
{
    auto d = parse_double(v);
    if (!d || !std::isfinite(*d))
        throw BadValue{"expected a number"};
    return *d;
}

inline int need_int(const std::string &v)
{
    auto i = parse_int<int>(v);
    if (!i)
        throw BadValue{"expected an integer"};
    return *i;
}

inline bool need_bool(const std::string &v)
{
    if (v == "true" || v == "1")
        return true;
    if (v == "false" || v == "0")
        return false;
    throw BadValue{"expected true or false"};
}

template <class E>
E need_enum(const std::string &v, std::initializer_list<std::pair<const char *, E>> names)
{
    for (const auto &[n, e] : names)
        if (v == n)
            return e;
    std::string list;
    for (const auto &[n, e] : names)
        list += (list.empty() ? "" : "|") + std::string(n);
    throw BadValue{"expected one of " + list};
}

template <class E>
std::string enum_name(E e, std::initializer_list<std::pair<const char *, E>> names)
{
    for (const auto &[n, x] : names)
        if (x == e)
            return n;
    return "?";
}

inline const std::initializer_list<std::pair<const char *, MixingFamily>> kFamilies = {
    {"fourier", MixingFamily::Fourier}, {"hadamard", MixingFamily::Hadamard}};
inline const std::initializer_list<std::pair<const char *, SchedulerKind>> kSchedulers = {
    {"greedy", SchedulerKind::Greedy}, {"exhaustive", SchedulerKind::Exhaustive}};
inline const std::initializer_list<std::pair<const char *, SinrConvention>> kConventions = {
    {"true_sinr", SinrConvention::TrueSinr}, {"literal", SinrConvention::LiteralPowerScaled}};
inline const std::initializer_list<std::pair<const char *, CrossGainMode>> kCrossModes = {
    {"power", CrossGainMode::Power}, {"amplitude", CrossGainMode::Amplitude}};

#define IASIM_INT(key, member)                                                                    \
    {                                                                                             \
        key, {[](RunConfig &c, const std::string &v) { c.member = need_int(v); },                 \
              [](const RunConfig &c) { return std::to_string(c.member); }}                        \
    }
#define IASIM_DBL(key, member)                                                                    \
    {                                                                                             \
        key, {[](RunConfig &c, const std::string &v) { c.member = need_double(v); },              \
              [](const RunConfig &c) { return fmt_shortest(c.member); }}                          \
    }
#define IASIM_BOOL(key, member)                                                                   \
    {                                                                                             \
        key, {[](RunConfig &c, const std::string &v) { c.member = need_bool(v); },                \
              [](const RunConfig &c) { return std::string(c.member ? "true" : "false"); }}        \
    }
#define IASIM_ENUM(key, member, table)                                                            \
    {                                                                                             \
        key, {[](RunConfig &c, const std::string &v) { c.member = need_enum(v, table); },         \
              [](const RunConfig &c) { return enum_name(c.member, table); }}                      \
    }

// Ordered key table; emission follows this order.
inline const std::vector<std::pair<std::string, Field>> &fields()
{
    static const std::vector<std::pair<std::string, Field>> table = {
        IASIM_INT("cells", net.cells),
        IASIM_INT("sectors_per_cell", net.sectors_per_cell),
        IASIM_INT("users_per_cell", net.users_per_cell),
        IASIM_BOOL("poisson_users", net.poisson_users),
        IASIM_DBL("inter_site_distance", net.inter_site_distance),
        IASIM_DBL("min_ue_distance", net.min_ue_distance),
        IASIM_DBL("pathloss_exponent", net.pathloss_exponent),
        IASIM_DBL("ref_distance", net.ref_distance),
        IASIM_DBL("ref_gain", net.ref_gain),
        IASIM_DBL("shadowing_db", net.shadowing_db),
        IASIM_INT("antennas", net.antennas),
        IASIM_INT("subcarriers", net.subcarriers),
        IASIM_INT("freed_dims", net.freed_dims),
        IASIM_DBL("kappa", net.kappa),
        IASIM_ENUM("mixing_family", net.mixing_family, kFamilies),
        IASIM_DBL("tx_power", net.tx_power),
        IASIM_DBL("noise_power", net.noise_power),
        IASIM_DBL("correlation", net.correlation),
        {"inr_rem",
         {[](RunConfig &c, const std::string &v) {
              if (v == "auto")
                  c.net.inr_rem.reset();
              else
                  c.net.inr_rem = need_double(v);
          },
          [](const RunConfig &c) { return c.net.inr_rem ? fmt_shortest(*c.net.inr_rem) : std::string("auto"); }}},
        {"feedback_dirs",
         {[](RunConfig &c, const std::string &v) { c.net.feedback_dirs = v == "auto" ? 0 : need_int(v); },
          [](const RunConfig &c) {
              return c.net.feedback_dirs == 0 ? std::string("auto") : std::to_string(c.net.feedback_dirs);
          }}},
        IASIM_INT("n_ri", net.n_ri),
        IASIM_DBL("r_min", net.r_min),
        IASIM_DBL("rate_cap", net.rate_cap),
        IASIM_ENUM("scheduler", net.scheduler, kSchedulers),
        IASIM_DBL("exhaustive_budget", net.exhaustive_budget),
        IASIM_INT("max_streams_per_ue", net.max_streams_per_ue),
        IASIM_DBL("zf_condition_limit", net.zf_condition_limit),
        IASIM_ENUM("sinr_convention", net.sinr_convention, kConventions),
        IASIM_ENUM("cross_gain_mode", net.cross_gain_mode, kCrossModes),
        IASIM_BOOL("freeze_fading", net.freeze_fading),
        IASIM_BOOL("exact_interferer_cov", net.exact_interferer_cov),
        IASIM_INT("scenarios", campaign.scenarios),
        IASIM_INT("transmissions", campaign.transmissions),
        {"seed",
         {[](RunConfig &c, const std::string &v) {
              auto s = parse_int<std::uint64_t>(v);
              if (!s)
                  throw BadValue{"expected a non-negative integer"};
              c.campaign.seed = *s;
          },
          [](const RunConfig &c) { return std::to_string(c.campaign.seed); }}},
        IASIM_DBL("bin_width_db", campaign.bin_width_db),
        IASIM_INT("threads", campaign.threads),
        {"schemes",
         {[](RunConfig &c, const std::string &v) {
              c.campaign.schemes.clear();
              std::stringstream ss(v);
              std::string item;
              while (std::getline(ss, item, ','))
              {
                  item = trim(item);
                  if (item.empty())
                      continue;
                  try
                  {
                      c.campaign.schemes.push_back(parse_scheme(item, c.net.kappa));
                  }
                  catch (const ValidationError &e)
                  {
                      throw BadValue{e.what()};
                  }
              }
              if (c.campaign.schemes.empty())
                  throw BadValue{"empty scheme list"};
          },
          [](const RunConfig &c) {
              std::string out;
              for (const auto &s : c.campaign.schemes)
                  out += (out.empty() ? "" : ",") + scheme_label(s);
              return out;
          }}},
    };
    return table;
}

#undef IASIM_INT
#undef IASIM_DBL
#undef IASIM_BOOL
#undef IASIM_ENUM

} // namespace detail

inline void validate(const RunConfig &rc)
{
    iasim::validate(rc.net);
    if (rc.campaign.scenarios < 1)
        throw ValidationError("scenarios >= 1");
    if (rc.campaign.transmissions < 1)
        throw ValidationError("transmissions >= 1");
    if (!(rc.campaign.bin_width_db > 0.0))
        throw ValidationError("bin_width_db > 0");
    if (rc.campaign.threads < 1)
        throw ValidationError("threads >= 1");
    if (rc.campaign.schemes.empty())
        throw ValidationError("at least one scheme");
    for (const auto &s : rc.campaign.schemes)
        if (s.scheme == Scheme::IA_ZF || s.scheme == Scheme::IA_MMSE)
            if (s.kappa == 0.0 && rc.net.feedback_count() > rc.net.dims() - rc.net.freed_dims)
                throw ValidationError("1 <= L <= M_K - N_f when kappa = 0");
}

/// Parses flat `key = value` text. `#` starts a comment. Omitted keys keep
/// their defaults; unknown or repeated keys are rejected.
inline RunConfig parse_config_text(const std::string &text)
{
    RunConfig rc;
    const auto &table = detail::fields();
    std::map<std::string, std::pair<std::size_t, std::string>> seen;
    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw))
    {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = detail::trim(raw.substr(0, hash));
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(line_no, detail::trim(line), "expected 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty())
            throw ParseError(line_no, key, "empty key");
        const bool known = std::any_of(table.begin(), table.end(), [&](const auto &f) { return f.first == key; });
        if (!known)
            throw ParseError(line_no, key, "unknown key");
        if (seen.count(key))
            throw ParseError(line_no, key, "duplicate key");
        seen[key] = {line_no, value};
    }
    // Apply in table order so `schemes` sees the final kappa.
    for (const auto &[key, field] : table)
    {
        auto it = seen.find(key);
        if (it == seen.end())
            continue;
        try
        {
            field.read(rc, it->second.second);
        }
        catch (const detail::BadValue &e)
        {
            throw ParseError(it->second.first, key, e.why);
        }
    }
    if (!seen.count("schemes"))
        for (auto &sc : rc.campaign.schemes)
            if (sc.scheme == Scheme::IA_ZF || sc.scheme == Scheme::IA_MMSE)
                sc.kappa = rc.net.kappa;
    validate(rc);
    return rc;
}

inline std::string read_file(const std::string &path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline RunConfig parse_config(const std::string &path)
{
    return parse_config_text(read_file(path));
}

/// Every key in canonical order; parse_config_text(emit_config(c)) == c.
inline std::string emit_config(const RunConfig &rc)
{
    std::string out;
    for (const auto &[key, field] : detail::fields())
        out += key + " = " + field.write(rc) + "\n";
    return out;
}

// ----- Outputs ---------------------------------------------------------------

inline std::string se_vs_sinr_csv(const CampaignSummary &s)
{
    std::string out = "scheme,kappa,sinr_bin_db,mean_se_bps_hz,n_ue\n";
    for (const auto &sc : s.schemes)
        for (const auto &b : sc.bins)
            out += scheme_name(sc.spec.scheme) + "," + fmt_shortest(sc.spec.kappa) + "," + fmt_shortest(b.lower_db) +
                   "," + fmt_fixed(b.mean_se) + "," + std::to_string(b.n_ue) + "\n";
    return out;
}

inline std::string geometry_cdf_csv(const CampaignSummary &s)
{
    std::string out = "sinr_db,cdf\n";
    for (std::size_t i = 0; i < s.cdf.size(); ++i)
        out += fmt_fixed(s.geometry_sinr_db[i]) + "," + fmt_fixed(s.cdf[i]) + "\n";
    return out;
}

inline std::string counters_csv(const CampaignSummary &s)
{
    std::string out = "scheme,kappa,schedule_calls,zf_invocations,subsets_evaluated,streams_scheduled,"
                      "max_estimated_stream_rate,max_realized_stream_rate\n";
    for (const auto &sc : s.schemes)
        out += scheme_name(sc.spec.scheme) + "," + fmt_shortest(sc.spec.kappa) + "," +
               std::to_string(sc.schedule_calls) + "," + std::to_string(sc.zf_invocations) + "," +
               std::to_string(sc.subsets_evaluated) + "," + std::to_string(sc.streams_scheduled) + "," +
               fmt_fixed(sc.max_estimated_stream_rate) + "," + fmt_fixed(sc.max_realized_stream_rate) + "\n";
    return out;
}

/// Deterministic identifier of a run: FNV-1a over the emitted configuration.
inline std::string run_id(const RunConfig &rc)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : emit_config(rc))
    {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct RunManifest
{
    RunConfig config;
    std::string out_dir;
};

inline const std::vector<std::string> &output_files()
{
    static const std::vector<std::string> names = {"se_vs_sinr.csv", "geometry_cdf.csv", "counters.csv",
                                                   "manifest.json"};
    return names;
}

inline void write_file(const std::filesystem::path &p, const std::string &content)
{
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f)
        throw Error("cannot write '" + p.string() + "'");
    f << content;
    if (!f)
        throw Error("write failed for '" + p.string() + "'");
}

/// Runs the campaign and writes the CSVs plus manifest.json into out_dir.
/// Returns the summary so callers can inspect it.
inline CampaignSummary run(const RunManifest &m)
{
    validate(m.config);
    const auto t0 = std::chrono::steady_clock::now();
    const std::time_t started = std::time(nullptr);
    CampaignSummary summary = run_campaign(m.config.net, m.config.campaign);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const std::filesystem::path dir(m.out_dir);
    std::filesystem::create_directories(dir);
    write_file(dir / "se_vs_sinr.csv", se_vs_sinr_csv(summary));
    write_file(dir / "geometry_cdf.csv", geometry_cdf_csv(summary));
    write_file(dir / "counters.csv", counters_csv(summary));

    char when[32];
    std::strftime(when, sizeof(when), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&started));
    nlohmann::ordered_json j;
    j["tool"] = "iasim";
    j["version"] = kVersion;
    j["run_id"] = run_id(m.config);
    j["config"] = emit_config(m.config);
    j["schemes"] = nlohmann::json::array();
    for (const auto &s : m.config.campaign.schemes)
        j["schemes"].push_back(scheme_label(s));
    j["seed_first"] = m.config.campaign.seed;
    j["seed_last"] = m.config.campaign.seed + static_cast<std::uint64_t>(m.config.campaign.scenarios) - 1;
    j["transmissions"] = m.config.campaign.transmissions;
    j["outputs"] = output_files();
    j["started_utc"] = when;
    j["wall_clock_seconds"] = wall;
    write_file(dir / "manifest.json", j.dump(2) + "\n");
    return summary;
}

// ----- compare -----------------------------------------------------------------

struct SeRow
{
    std::string series;
    double bin = 0.0;
    double se = 0.0;
};

inline std::vector<SeRow> parse_se_csv(const std::string &text, const std::string &prefix = "")
{
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    std::vector<SeRow> rows;
    while (std::getline(in, line))
    {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (line_no == 1)
        {
            if (line != "scheme,kappa,sinr_bin_db,mean_se_bps_hz,n_ue")
                throw ParseError(line_no, "header", "not an se_vs_sinr.csv header");
            continue;
        }
        std::vector<std::string> cols;
        std::stringstream ss(line);
        std::string c;
        while (std::getline(ss, c, ','))
            cols.push_back(c);
        if (cols.size() != 5)
            throw ParseError(line_no, "row", "expected 5 columns");
        auto bin = parse_double(cols[2]);
        auto se = parse_double(cols[3]);
        if (!bin || !se)
            throw ParseError(line_no, "row", "non-numeric field");
        rows.push_back({prefix + cols[0] + ":" + cols[1], *bin, *se});
    }
    return rows;
}

namespace detail {

inline double grid_width(const std::vector<SeRow> &rows)
{
    std::set<double> bins;
    for (const auto &r : rows)
        bins.insert(r.bin);
    double w = 0.0;
    for (auto it = bins.begin(); it != bins.end() && std::next(it) != bins.end(); ++it)
    {
        const double d = *std::next(it) - *it;
        if (w == 0.0 || d < w)
            w = d;
    }
    return w;
}

inline bool on_grid(double a, double b, double w)
{
    const double k = (a - b) / w;
    return std::abs(k - std::round(k)) < 1e-6;
}

} // namespace detail

/// Per-bin comparison of every series against the first one. Output columns:
/// sinr_bin_db, series, mean_se_bps_hz, delta_vs_ref, best (1 when the series
/// has the highest SE in that bin). Rows whose bin the reference lacks are omitted.
inline std::string compare(const std::vector<std::string> &csv_texts)
{
    if (csv_texts.empty())
        throw Error("compare needs at least one file");
    std::vector<std::vector<SeRow>> files;
    for (std::size_t i = 0; i < csv_texts.size(); ++i)
        files.push_back(parse_se_csv(csv_texts[i], csv_texts.size() > 1 ? "f" + std::to_string(i) + "/" : ""));

    double width = 0.0;
    double anchor = 0.0;
    bool have_anchor = false;
    for (const auto &rows : files)
    {
        const double w = detail::grid_width(rows);
        if (w > 0.0)
        {
            if (width > 0.0 && std::abs(w - width) > 1e-9 * std::max(w, width))
                throw BinMismatch("bin widths " + fmt_shortest(width) + " and " + fmt_shortest(w));
            width = w;
        }
    }
    for (const auto &rows : files)
        for (const auto &r : rows)
        {
            if (!have_anchor)
            {
                anchor = r.bin;
                have_anchor = true;
            }
            else if (width > 0.0 && !detail::on_grid(r.bin, anchor, width))
                throw BinMismatch("bin edge " + fmt_shortest(r.bin) + " is off the common grid");
        }

    std::vector<std::string> order;
    std::map<std::string, std::map<double, double>> table;
    for (const auto &rows : files)
        for (const auto &r : rows)
        {
            if (!table.count(r.series))
                order.push_back(r.series);
            table[r.series][r.bin] = r.se;
        }
    if (order.empty())
        return "sinr_bin_db,series,mean_se_bps_hz,delta_vs_ref,best\n";
    const auto &ref = table[order.front()];

    std::string out = "sinr_bin_db,series,mean_se_bps_hz,delta_vs_ref,best\n";
    for (const auto &[bin, ref_se] : ref)
    {
        double best = -std::numeric_limits<double>::infinity();
        for (const auto &name : order)
        {
            auto it = table[name].find(bin);
            if (it != table[name].end())
                best = std::max(best, it->second);
        }
        for (const auto &name : order)
        {
            auto it = table[name].find(bin);
            if (it == table[name].end())
                continue;
            out += fmt_shortest(bin) + "," + name + "," + fmt_fixed(it->second) + "," +
                   fmt_fixed(it->second - ref_se) + "," + (it->second == best ? "1" : "0") + "\n";
        }
    }
    return out;
}

} // namespace iasim::cli

#endif

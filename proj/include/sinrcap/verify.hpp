#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sinrcap/baselines.hpp"
#include "sinrcap/csv.hpp"
#include "sinrcap/game.hpp"
#include "sinrcap/sinr.hpp"

namespace sinrcap {

/// Outcome of one structural check. A failing report always names witnesses.
struct Report
{
    std::string check;
    bool pass = true;
    bool inconclusive = false;
    std::vector<std::size_t> witnesses;
    std::vector<std::pair<std::string, double>> metrics;
    std::string note;

    std::optional<double> metric(const std::string& key) const
    {
        for (const auto& [k, v] : metrics)
            if (k == key)
                return v;
        return std::nullopt;
    }
    /// First metric, used as the run-log key value.
    double key_metric() const { return metrics.empty() ? 0.0 : metrics.front().second; }
};

inline constexpr double kCheckTolerance = 1e-9;

/// Half of any feasible set causes at most 2 total outgoing affectance:
/// L' = {u : sum_{v in L} a_u(v) <= 2} has |L'| >= |L|/2.
/// Note the sum is over affectance *caused by* u, unlike Channel::load.
inline Report check_half_set(const Channel& ch, std::span<const std::size_t> set)
{
    if (!ch.is_feasible(set))
        throw std::invalid_argument("check_half_set requires a feasible set");
    Report r;
    r.check = "half_set";
    std::size_t kept = 0;
    double worst = 0.0;
    std::vector<std::size_t> dropped;
    for (std::size_t u : set) {
        const double out = ch.outgoing_load(u, set);
        worst = std::max(worst, out);
        if (out <= 2.0)
            ++kept;
        else
            dropped.push_back(u);
    }
    r.pass = 2 * kept >= set.size();
    if (!r.pass)
        r.witnesses = std::move(dropped);
    r.metrics = {{"kept_fraction", set.empty() ? 1.0 : static_cast<double>(kept) / static_cast<double>(set.size())},
                 {"max_outgoing", worst}};
    return r;
}

/// In a q^alpha-signal set every pair satisfies d_uv * d_vu >= q^2 * l_u * l_v.
/// The signal precondition is checked first; an overloaded link fails the report.
/// The inequality relies on c_u * c_v >= 1. When that does not hold (beta < 1)
/// only q^2 * (c_u c_v)^(1/alpha) is implied, and a pair between the two bounds
/// makes the report inconclusive instead of failing.
inline Report check_separation(const Channel& ch, std::span<const std::size_t> set, double q)
{
    Report r;
    r.check = "separation";
    const double bound = 1.0 / std::pow(q, ch.params().alpha);
    for (std::size_t v : set) {
        const double load = ch.load(v, set);
        if (load > bound) {
            r.pass = false;
            r.witnesses = {v};
            r.note = "precondition violated: link " + std::to_string(v) + " has load " + csv::num(load) +
                     " > 1/q^alpha = " + csv::num(bound);
            r.metrics = {{"max_load", ch.max_load(set)}};
            return r;
        }
    }
    const auto& inst = ch.instance();
    double min_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < set.size(); ++i)
        for (std::size_t j = i + 1; j < set.size(); ++j) {
            const std::size_t u = set[i], v = set[j];
            const double ratio = inst.cross(u, v) * inst.cross(v, u) / (inst.length(u) * inst.length(v));
            min_ratio = std::min(min_ratio, ratio);
            if (ratio >= q * q * (1.0 - kCheckTolerance) || !r.pass)
                continue;
            const double cc = ch.c(u) * ch.c(v);
            const double weak = q * q * std::pow(std::min(cc, 1.0), 1.0 / ch.params().alpha);
            if (cc < 1.0 && ratio >= weak * (1.0 - kCheckTolerance)) {
                if (!r.inconclusive) {
                    r.inconclusive = true;
                    r.note = "c_u*c_v = " + csv::num(cc) + " < 1 for pair (" + std::to_string(u) + "," +
                             std::to_string(v) + "); only the weaker bound applies";
                }
                continue;
            }
            r.pass = false;
            r.inconclusive = false;
            r.witnesses = {u, v};
            r.note.clear();
        }
    r.metrics = {{"min_separation_ratio", min_ratio}, {"q_squared", q * q}};
    return r;
}

/// X <= Q <= 2X + eps*n with eps the largest measured regret.
inline Report check_sandwich(const GameStats& stats, std::size_t n)
{
    Report r;
    r.check = "sandwich";
    const double eps = stats.max_regret();
    const double upper = 2.0 * stats.X + eps * static_cast<double>(n);
    r.pass = stats.X <= stats.Q + kCheckTolerance && stats.Q <= upper + kCheckTolerance;
    if (!r.pass) {
        for (std::size_t u = 0; u < stats.q.size(); ++u)
            if (stats.x[u] > stats.q[u] || stats.q[u] - 2.0 * stats.x[u] > eps)
                r.witnesses.push_back(u);
        if (r.witnesses.empty())
            for (std::size_t u = 0; u < stats.q.size(); ++u)
                r.witnesses.push_back(u);
    }
    r.metrics = {{"Q", stats.Q}, {"X", stats.X}, {"eps", eps}, {"upper", upper}};
    return r;
}

inline constexpr std::size_t kFailureFractionMinRounds = 200;
inline constexpr double kFailureFractionSlack = 0.05;

/// Links transmitting less than 1/2 - eps of the time must find the channel
/// blocked at least 1/4 of the time (checked with slack 0.05).
inline Report check_failure_fraction(const GameStats& stats)
{
    Report r;
    r.check = "failure_fraction";
    const double eps = stats.max_regret();
    double min_margin = std::numeric_limits<double>::infinity();
    std::size_t outside = 0;
    for (std::size_t u = 0; u < stats.q.size(); ++u) {
        if (stats.q[u] >= 0.5 - eps)
            continue;
        ++outside;
        const double margin = stats.f[u] - (0.25 - kFailureFractionSlack);
        min_margin = std::min(min_margin, margin);
        if (margin < 0.0)
            r.witnesses.push_back(u);
    }
    r.metrics = {{"min_margin", std::isinf(min_margin) ? 0.0 : min_margin},
                 {"eps", eps},
                 {"links_outside_G", static_cast<double>(outside)}};
    if (stats.rounds < kFailureFractionMinRounds) {
        r.inconclusive = true;
        r.note = "horizon of " + std::to_string(stats.rounds) + " rounds is below the " +
                 std::to_string(kFailureFractionMinRounds) + "-round minimum";
        r.witnesses.clear();
        return r;
    }
    r.pass = r.witnesses.empty();
    return r;
}

inline Report check_failure_fraction(const History& h) { return check_failure_fraction(summarize(h)); }

struct OptRatioOptions
{
    std::size_t rounds = 500;
    std::uint64_t seed = 1;
    std::vector<PowerScheme> schemes{PowerScheme::uniform, PowerScheme::mean, PowerScheme::linear};
    std::vector<double> power_grid;  // empty: default_power_grid(p_max)
};

/// Logs |OPT_P(grid)| / |OPT|, log2(Delta) and, per scheme, the game's Q
/// against that scheme's optimum. Constants are unknown so the only hard
/// failure is a containment violation (grid optimum below uniform optimum).
inline Report opt_ratio_report(const Instance& inst, const SinrParams& params, const OptRatioOptions& opt = {})
{
    if (inst.size() > kPowerGridLimit)
        throw std::invalid_argument("opt_ratio_report needs n <= " + std::to_string(kPowerGridLimit));
    Report r;
    r.check = "opt_ratio";
    const Channel uniform(inst, PowerScheme::uniform, params);
    const auto opt_uniform = brute_force_opt(uniform);
    const auto opt_power =
        brute_force_opt_power(inst, params, opt.power_grid.empty() ? default_power_grid(params.p_max) : opt.power_grid);
    const double delta = inst.delta();
    const double log_delta = std::max(1.0, std::log2(delta));
    const double ratio = opt_uniform.size() == 0 ? 0.0
                                                 : static_cast<double>(opt_power.size()) /
                                                       static_cast<double>(opt_uniform.size());
    r.metrics = {{"opt_power_over_opt", ratio},
                 {"opt_uniform", static_cast<double>(opt_uniform.size())},
                 {"opt_power_grid", static_cast<double>(opt_power.size())},
                 {"delta", delta},
                 {"log2_delta", log_delta},
                 {"ratio_over_log2_delta", ratio / log_delta}};
    for (PowerScheme s : opt.schemes) {
        auto ch = std::make_shared<const Channel>(inst, s, params);
        const auto best = brute_force_opt(*ch);
        const auto stats = summarize(run_game(ch, LearnerKind::rwm, opt.rounds, opt.seed));
        const std::string name(to_string(s));
        r.metrics.emplace_back("opt_" + name, static_cast<double>(best.size()));
        r.metrics.emplace_back("Q_" + name, stats.Q);
        r.metrics.emplace_back("X_" + name, stats.X);
    }
    if (opt_power.size() < opt_uniform.size()) {
        r.pass = false;
        r.witnesses = opt_uniform.active;
        r.note = "power-grid optimum smaller than the uniform optimum";
    }
    return r;
}

/// Columns: check, instance_id, pass, key_metric.
inline void write_report_row(std::ostream& os, const Report& r, const std::string& instance_id)
{
    os << r.check << ',' << instance_id << ',' << (r.pass ? 1 : 0) << ',' << csv::num(r.key_metric()) << '\n';
}

} // namespace sinrcap

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sinrcap/csv.hpp"
#include "sinrcap/sinr.hpp"

namespace sinrcap {

struct ScheduleResult
{
    std::string algorithm;
    std::vector<std::size_t> active;  // sorted by id
    PowerAssignment power;
    bool feasible = false;
    std::optional<double> c;

    // Greedy only: links in admission order and the incoming load each saw when admitted.
    std::vector<std::size_t> admission_order;
    std::vector<double> admission_loads;

    std::size_t size() const noexcept { return active.size(); }
};

/// Threshold of the length-ordered greedy:
/// c = 1 / (2 + max(2, (2^6 * 3 * beta * (alpha-1)/(alpha-2))^(1/alpha)))^alpha.
inline double hw_constant(double alpha, double beta)
{
    if (!(alpha > 2.0))
        throw std::domain_error("hw_constant requires alpha > 2");
    if (!(beta > 0.0))
        throw std::domain_error("hw_constant requires beta > 0");
    const double inner = std::pow(64.0 * 3.0 * beta * (alpha - 1.0) / (alpha - 2.0), 1.0 / alpha);
    return 1.0 / std::pow(2.0 + std::max(2.0, inner), alpha);
}

/// Scans links by non-decreasing length (ties by id) and admits v iff the
/// affectance the current active set causes on v is at most c. Links that
/// cannot succeed even alone are skipped. Feasibility of the output is
/// checked, not assumed.
inline ScheduleResult hw_greedy(const Channel& ch, double c)
{
    if (!(c > 0.0))
        throw std::invalid_argument("greedy threshold must be > 0");
    const auto& inst = ch.instance();
    std::vector<std::size_t> order(inst.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return inst.length(a) < inst.length(b); });

    ScheduleResult r;
    r.algorithm = "hw";
    r.power = ch.power();
    r.c = c;
    for (std::size_t v : order) {
        if (!ch.viable(v))
            continue;
        const double load = ch.load(v, r.admission_order);
        if (load <= c) {
            r.admission_order.push_back(v);
            r.admission_loads.push_back(load);
        }
    }
    r.active = r.admission_order;
    std::sort(r.active.begin(), r.active.end());
    r.feasible = ch.is_feasible(r.active);
    return r;
}

/// Searches the greedy threshold for the largest SINR-feasible outcome:
/// a 25-point log grid on [1e-6, 1] (plus the HW constant when defined and in
/// range), then 20 geometric bisection steps around the incumbent.
inline ScheduleResult hw_binary_search(const Channel& ch)
{
    constexpr double lo_c = 1e-6, hi_c = 1.0;
    constexpr int grid_points = 25;
    constexpr int refine_steps = 20;

    std::optional<ScheduleResult> best;
    auto consider = [&](double c) -> long {
        ScheduleResult r = hw_greedy(ch, c);
        if (!r.feasible)
            return -1;
        const long size = static_cast<long>(r.size());
        if (!best || r.size() > best->size())
            best = std::move(r);
        return size;
    };

    std::vector<double> grid(grid_points);
    for (int i = 0; i < grid_points; ++i)
        grid[i] = lo_c * std::pow(hi_c / lo_c, static_cast<double>(i) / (grid_points - 1));
    std::vector<long> scores(grid_points);
    for (int i = 0; i < grid_points; ++i)
        scores[i] = consider(grid[i]);

    const double alpha = ch.params().alpha;
    if (alpha > 2.0) {
        const double c_hw = hw_constant(alpha, ch.params().beta);
        if (c_hw >= lo_c && c_hw <= hi_c)
            consider(c_hw);
    }

    const auto arg = static_cast<int>(std::max_element(scores.begin(), scores.end()) - scores.begin());
    double lo = grid[std::max(arg - 1, 0)];
    double hi = grid[std::min(arg + 1, grid_points - 1)];
    double mid = grid[arg];
    long mid_score = scores[arg];
    for (int step = 0; step < refine_steps; ++step) {
        const double left = std::sqrt(lo * mid);
        const double right = std::sqrt(mid * hi);
        const long left_score = consider(left);
        const long right_score = consider(right);
        if (left_score > mid_score) {
            hi = mid;
            mid = left;
            mid_score = left_score;
        } else if (right_score > mid_score) {
            lo = mid;
            mid = right;
            mid_score = right_score;
        } else {
            lo = left;
            hi = right;
        }
    }

    if (!best) {
        ScheduleResult empty;
        empty.power = ch.power();
        empty.feasible = true;
        best = std::move(empty);
    }
    best->algorithm = "hw_bsearch";
    return *best;
}

inline constexpr std::size_t kBruteForceLimit = 20;
inline constexpr std::size_t kPowerGridLimit = 8;

/// Maximum-cardinality feasible subset under the channel's fixed powers,
/// by include-first branch and bound in id order. Among optimal sets the
/// lexicographically smallest id list is returned.
inline ScheduleResult brute_force_opt(const Channel& ch)
{
    const std::size_t n = ch.size();
    if (n > kBruteForceLimit)
        throw std::invalid_argument("brute_force_opt supports at most " + std::to_string(kBruteForceLimit) +
                                    " links, got " + std::to_string(n));
    const double beta = ch.params().beta;

    std::vector<std::size_t> current, best;
    // Interference at each member's receiver, accumulated in ascending id order
    // so the final sums match Channel::sinr bit for bit.
    std::vector<double> interference(n, 0.0);

    std::function<void(std::size_t)> search = [&](std::size_t i) {
        if (current.size() + (n - i) <= best.size())
            return;
        if (i == n) {
            best = current;
            return;
        }
        if (ch.viable(i)) {
            const std::vector<double> saved = interference;
            double own = 0.0;
            for (std::size_t w : current)
                own += ch.received(w, i);
            bool ok = ch.sinr_from_interference(i, own) >= beta;
            for (std::size_t k = 0; ok && k < current.size(); ++k) {
                const std::size_t v = current[k];
                interference[v] += ch.received(i, v);
                ok = ch.sinr_from_interference(v, interference[v]) >= beta;
            }
            if (ok) {
                interference[i] = own;
                current.push_back(i);
                search(i + 1);
                current.pop_back();
            }
            interference = saved;
        }
        search(i + 1);
    };
    search(0);

    ScheduleResult r;
    r.algorithm = "brute";
    r.active = best;
    r.power = ch.power();
    r.feasible = ch.is_feasible(r.active);
    return r;
}

/// Power levels {2^0, 2^-1, ..., 2^-10} * p_max.
inline std::vector<double> default_power_grid(double p_max)
{
    std::vector<double> g;
    for (int i = 0; i <= 10; ++i)
        g.push_back(std::ldexp(p_max, -i));
    return g;
}

/// Best (subset, per-link grid power) pair by exhaustive branch and bound.
/// A lower bound on the optimum over continuous power assignments.
inline ScheduleResult brute_force_opt_power(const Instance& inst, const SinrParams& params,
                                            std::vector<double> power_grid)
{
    params.validate();
    const std::size_t n = inst.size();
    if (n > kPowerGridLimit)
        throw std::invalid_argument("brute_force_opt_power supports at most " + std::to_string(kPowerGridLimit) +
                                    " links, got " + std::to_string(n));
    if (power_grid.empty())
        throw std::invalid_argument("power grid is empty");
    for (double p : power_grid)
        if (!(p > 0.0) || p > params.p_max)
            throw std::invalid_argument("power grid levels must lie in (0, p_max]");
    std::sort(power_grid.begin(), power_grid.end(), std::greater<>());

    const std::size_t levels = power_grid.size();
    // gain[(w*levels + j)*n + v]: power received at r_v from s_w transmitting at level j.
    std::vector<double> gain(n * levels * n), signal(n * levels);
    for (std::size_t w = 0; w < n; ++w)
        for (std::size_t j = 0; j < levels; ++j) {
            signal[w * levels + j] = received_power(power_grid[j], inst.length(w), params);
            for (std::size_t v = 0; v < n; ++v)
                gain[(w * levels + j) * n + v] = received_power(power_grid[j], inst.cross(w, v), params);
        }
    auto meets = [&](std::size_t v, std::size_t level, double interference) {
        const double denom = interference + params.noise;
        return denom == 0.0 || signal[v * levels + level] / denom >= params.beta;
    };

    std::vector<std::size_t> members, member_level, best, best_level;
    std::vector<double> interference(n, 0.0);

    std::function<void(std::size_t)> search = [&](std::size_t i) {
        if (members.size() + (n - i) <= best.size())
            return;
        if (i == n) {
            best = members;
            best_level = member_level;
            return;
        }
        for (std::size_t j = 0; j < levels; ++j) {
            const std::vector<double> saved = interference;
            double own = 0.0;
            for (std::size_t k = 0; k < members.size(); ++k)
                own += gain[(members[k] * levels + member_level[k]) * n + i];
            bool ok = meets(i, j, own);
            for (std::size_t k = 0; ok && k < members.size(); ++k) {
                const std::size_t v = members[k];
                interference[v] += gain[(i * levels + j) * n + v];
                ok = meets(v, member_level[k], interference[v]);
            }
            if (ok) {
                interference[i] = own;
                members.push_back(i);
                member_level.push_back(j);
                search(i + 1);
                members.pop_back();
                member_level.pop_back();
            }
            interference = saved;
            if (members.size() + (n - i) <= best.size())
                return;
        }
        search(i + 1);
    };
    search(0);

    ScheduleResult r;
    r.algorithm = "brute_power";
    r.active = best;
    r.power.scheme = PowerScheme::explicit_powers;
    r.power.powers.assign(n, params.p_max);
    for (std::size_t k = 0; k < best.size(); ++k)
        r.power.powers[best[k]] = power_grid[best_level[k]];
    r.feasible = best.empty() || Channel(inst, r.power, params).is_feasible(r.active);
    return r;
}

/// Columns: algorithm, c, active_count, feasible.
inline void write_schedule_row(std::ostream& os, const ScheduleResult& r)
{
    os << r.algorithm << ',' << (r.c ? csv::num(*r.c) : std::string{}) << ',' << r.size() << ','
       << (r.feasible ? 1 : 0) << '\n';
}

} // namespace sinrcap

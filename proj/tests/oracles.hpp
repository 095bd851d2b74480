#pragma once

// Independent reference computations for tests. Nothing here goes through
// sinrcap::Channel: distances come straight from the instance and every SINR
// is evaluated from scratch.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "sinrcap/metric.hpp"

namespace oracle {

struct Physics
{
    double alpha;
    double beta;
    double noise;
};

inline double sinr(const sinrcap::Instance& inst, const std::vector<double>& power, const Physics& ph,
                   std::size_t v, const std::vector<std::size_t>& set)
{
    double interference = 0.0;
    for (std::size_t w : set)
        if (w != v)
            interference += power[w] / std::pow(inst.cross(w, v), ph.alpha);
    const double denom = interference + ph.noise;
    const double signal = power[v] / std::pow(inst.length(v), ph.alpha);
    return denom == 0.0 ? std::numeric_limits<double>::infinity() : signal / denom;
}

inline bool feasible(const sinrcap::Instance& inst, const std::vector<double>& power, const Physics& ph,
                     const std::vector<std::size_t>& set)
{
    for (std::size_t v : set)
        if (sinr(inst, power, ph, v, set) < ph.beta)
            return false;
    return true;
}

/// Plain 2^n enumeration of the largest feasible subset size.
inline std::size_t max_feasible_size(const sinrcap::Instance& inst, const std::vector<double>& power,
                                     const Physics& ph)
{
    const std::size_t n = inst.size();
    std::size_t best = 0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        std::vector<std::size_t> set;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1u << i))
                set.push_back(i);
        if (set.size() > best && feasible(inst, power, ph, set))
            best = set.size();
    }
    return best;
}

/// a_w(v) straight from its definition (noise-free c_v = beta).
inline double affectance_n0(const sinrcap::Instance& inst, const std::vector<double>& power, const Physics& ph,
                            std::size_t w, std::size_t v)
{
    if (w == v)
        return 0.0;
    const double raw = ph.beta * (power[w] / power[v]) * std::pow(inst.length(v) / inst.cross(w, v), ph.alpha);
    return std::min(1.0, raw);
}

/// Step-by-step replay of the length-ordered greedy with threshold c.
inline std::vector<std::size_t> greedy_replay(const sinrcap::Instance& inst, const std::vector<double>& power,
                                              const Physics& ph, double c)
{
    std::vector<std::size_t> order(inst.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    // insertion sort by (length, id)
    for (std::size_t i = 1; i < order.size(); ++i)
        for (std::size_t j = i; j > 0; --j) {
            const auto a = order[j - 1], b = order[j];
            if (inst.length(b) < inst.length(a))
                std::swap(order[j - 1], order[j]);
        }
    std::vector<std::size_t> active;
    for (std::size_t v : order) {
        double load = 0.0;
        for (std::size_t u : active)
            load += affectance_n0(inst, power, ph, u, v);
        if (load <= c)
            active.push_back(v);
    }
    return active;
}

/// Regret of `player` over recorded action profiles by evaluating both constant actions.
inline double regret(const sinrcap::Instance& inst, const std::vector<double>& power, const Physics& ph,
                     const std::vector<std::vector<std::uint8_t>>& profiles, std::size_t player)
{
    double achieved = 0.0, always_transmit = 0.0, always_silent = 0.0;
    for (const auto& prof : profiles) {
        std::vector<std::size_t> others_plus_me;
        for (std::size_t w = 0; w < prof.size(); ++w)
            if (prof[w] || w == player)
                others_plus_me.push_back(w);
        const bool would = sinr(inst, power, ph, player, others_plus_me) >= ph.beta;
        always_transmit += would ? 1.0 : -1.0;
        if (prof[player])
            achieved += would ? 1.0 : -1.0;
    }
    const double T = static_cast<double>(profiles.size());
    return std::max(always_transmit / T, always_silent / T) - achieved / T;
}

} // namespace oracle

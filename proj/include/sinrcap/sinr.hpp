#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sinrcap/metric.hpp"

namespace sinrcap {

enum class SignalModel { unbounded, bounded };

/// Physical-model parameters. `strict_noise_margin` turns on the c_v <= 2*beta check.
struct SinrParams
{
    double alpha = 2.1;
    double beta = 0.5;
    double noise = 0.0;
    double p_max = 1.0;
    SignalModel model = SignalModel::unbounded;
    bool strict_noise_margin = false;

    void validate() const
    {
        if (!(alpha > 0.0) || !std::isfinite(alpha))
            throw std::invalid_argument("alpha must be > 0");
        if (!(beta > 0.0) || !std::isfinite(beta))
            throw std::invalid_argument("beta must be > 0");
        if (!(noise >= 0.0) || !std::isfinite(noise))
            throw std::invalid_argument("noise must be >= 0");
        if (!(p_max > 0.0) || !std::isfinite(p_max))
            throw std::invalid_argument("p_max must be > 0");
    }
};

/// A link that cannot meet the SINR threshold even when transmitting alone.
class LinkInfeasible : public std::domain_error
{
public:
    LinkInfeasible(std::size_t link, const std::string& what) : std::domain_error(what), link_(link) {}
    std::size_t link() const noexcept { return link_; }

private:
    std::size_t link_;
};

enum class PowerScheme { uniform, linear, mean, explicit_powers };

inline std::string_view to_string(PowerScheme s)
{
    switch (s) {
    case PowerScheme::uniform: return "uniform";
    case PowerScheme::linear: return "linear";
    case PowerScheme::mean: return "mean";
    case PowerScheme::explicit_powers: return "explicit";
    }
    return "?";
}

inline PowerScheme parse_power_scheme(std::string_view s)
{
    if (s == "uniform") return PowerScheme::uniform;
    if (s == "linear") return PowerScheme::linear;
    if (s == "mean") return PowerScheme::mean;
    if (s == "explicit") return PowerScheme::explicit_powers;
    throw std::invalid_argument("unknown power scheme '" + std::string(s) + "'");
}

struct PowerAssignment
{
    PowerScheme scheme = PowerScheme::uniform;
    std::vector<double> powers;

    double operator[](std::size_t v) const { return powers[v]; }
    std::size_t size() const noexcept { return powers.size(); }
};

/// Linear and mean schemes are normalized so the longest link transmits at p_max.
inline PowerAssignment assign_power(PowerScheme scheme, const Instance& inst, const SinrParams& params,
                                    std::span<const double> explicit_powers = {})
{
    params.validate();
    PowerAssignment pa{scheme, std::vector<double>(inst.size(), params.p_max)};
    const double lmax = inst.max_length();
    switch (scheme) {
    case PowerScheme::uniform: break;
    case PowerScheme::linear:
        for (std::size_t v = 0; v < inst.size(); ++v)
            pa.powers[v] = params.p_max * inst.length(v) / lmax;
        break;
    case PowerScheme::mean:
        for (std::size_t v = 0; v < inst.size(); ++v)
            pa.powers[v] = params.p_max * std::sqrt(inst.length(v) / lmax);
        break;
    case PowerScheme::explicit_powers:
        if (explicit_powers.size() != inst.size())
            throw std::invalid_argument("explicit power list has " + std::to_string(explicit_powers.size()) +
                                        " entries for " + std::to_string(inst.size()) + " links");
        for (std::size_t v = 0; v < inst.size(); ++v) {
            const double p = explicit_powers[v];
            if (!(p > 0.0) || p > params.p_max)
                throw std::invalid_argument("explicit power for link " + std::to_string(v) + " outside (0, p_max]");
            pa.powers[v] = p;
        }
        break;
    }
    return pa;
}

/// Power received at distance `d` from a sender using `power`.
inline double received_power(double power, double d, const SinrParams& params)
{
    const double r = d > 0.0 ? power / std::pow(d, params.alpha) : std::numeric_limits<double>::infinity();
    return params.model == SignalModel::bounded ? std::min(1.0, r) : r;
}

/// c_v = beta / (1 - beta * N / signal_v); reduces to beta/(1 - beta N l^alpha / P) when unbounded.
inline double c_factor(std::size_t v, const Instance& inst, const PowerAssignment& power, const SinrParams& params)
{
    const double signal = received_power(power[v], inst.length(v), params);
    const double denom = 1.0 - params.beta * params.noise / signal;
    if (!(denom > 0.0))
        throw LinkInfeasible(v, "link " + std::to_string(v) + " infeasible under noise");
    const double c = params.beta / denom;
    if (params.strict_noise_margin && c > 2.0 * params.beta)
        throw std::domain_error("link " + std::to_string(v) + " violates the noise margin c_v <= 2*beta");
    return c;
}

/// Affectance of w on v before clipping at 1.
inline double raw_affectance(std::size_t w, std::size_t v, const Instance& inst, const PowerAssignment& power,
                             const SinrParams& params)
{
    if (w == v)
        return 0.0;
    const double c = c_factor(v, inst, power, params);
    const double d = inst.cross(w, v);
    if (params.model == SignalModel::unbounded) {
        if (d <= 0.0)
            return std::numeric_limits<double>::infinity();
        return c * (power[w] / power[v]) * std::pow(inst.length(v) / d, params.alpha);
    }
    return c * received_power(power[w], d, params) / received_power(power[v], inst.length(v), params);
}

/// a_w(v) = min{1, c_v (P_w/P_v)(l_v/d_wv)^alpha}; a_v(v) = 0.
inline double affectance(std::size_t w, std::size_t v, const Instance& inst, const PowerAssignment& power,
                         const SinrParams& params)
{
    return std::min(1.0, raw_affectance(w, v, inst, power, params));
}

/// Groups of a signal-strengthening decomposition.
struct Partition
{
    std::vector<std::vector<std::size_t>> groups;
    double strength = 1.0;
    std::size_t target_count = 0;  // ceil(2t/beta)
    bool exceeds_target = false;
};

/// Precomputed channel for one (instance, power assignment, params) triple.
/// Every set-level SINR query goes through here so that played rounds,
/// counterfactuals and oracles all sum interference in the same (id) order.
class Channel
{
public:
    Channel(Instance inst, PowerAssignment power, SinrParams params)
        : inst_(std::move(inst)), power_(std::move(power)), params_(params)
    {
        params_.validate();
        const std::size_t n = inst_.size();
        if (power_.size() != n)
            throw std::invalid_argument("power assignment size does not match instance");
        signal_.resize(n);
        c_.assign(n, std::numeric_limits<double>::quiet_NaN());
        incoming_.resize(n * n);
        affect_.resize(n * n);
        clipped_.assign(n * n, 0);
        for (std::size_t v = 0; v < n; ++v) {
            signal_[v] = received_power(power_[v], inst_.length(v), params_);
            try {
                c_[v] = c_factor(v, inst_, power_, params_);
            } catch (const LinkInfeasible&) {
            }
            for (std::size_t w = 0; w < n; ++w) {
                incoming_[v * n + w] = w == v ? 0.0 : received_power(power_[w], inst_.cross(w, v), params_);
                if (std::isnan(c_[v]))
                    continue;
                const double raw = raw_affectance(w, v, inst_, power_, params_);
                affect_[v * n + w] = std::min(1.0, raw);
                clipped_[v * n + w] = raw > 1.0;
            }
        }
    }

    Channel(const Instance& inst, PowerScheme scheme, const SinrParams& params)
        : Channel(inst, assign_power(scheme, inst, params), params)
    {}

    const Instance& instance() const noexcept { return inst_; }
    const PowerAssignment& power() const noexcept { return power_; }
    const SinrParams& params() const noexcept { return params_; }
    std::size_t size() const noexcept { return inst_.size(); }

    /// Whether v meets the threshold when transmitting alone.
    bool viable(std::size_t v) const { return !std::isnan(c_[v]); }
    /// c_v of a viable link (NaN otherwise).
    double c(std::size_t v) const { return c_[v]; }

    /// Power received at r_v from s_w (0 for w == v).
    double received(std::size_t w, std::size_t v) const { return incoming_[v * size() + w]; }
    double signal(std::size_t v) const { return signal_[v]; }

    /// SINR of v given an already-summed interference total.
    double sinr_from_interference(std::size_t v, double interference) const { return ratio(v, interference); }

    double affectance(std::size_t w, std::size_t v) const
    {
        require_viable(v);
        return affect_[v * size() + w];
    }
    bool clipped(std::size_t w, std::size_t v) const { return clipped_[v * size() + w] != 0; }

    /// SINR of v when the links in `set` transmit (v need not be listed; it is skipped in the sum).
    double sinr(std::size_t v, std::span<const std::size_t> set) const
    {
        double interference = 0.0;
        for (std::size_t w : set)
            if (w != v)
                interference += incoming_[v * size() + w];
        return ratio(v, interference);
    }

    /// SINR of v against every other link flagged in `transmitting`.
    double sinr_masked(std::size_t v, std::span<const std::uint8_t> transmitting) const
    {
        double interference = 0.0;
        const double* row = &incoming_[v * size()];
        for (std::size_t w = 0; w < transmitting.size(); ++w)
            if (transmitting[w] && w != v)
                interference += row[w];
        return ratio(v, interference);
    }

    bool succeeds(std::size_t v, std::span<const std::size_t> set) const { return sinr(v, set) >= params_.beta; }
    bool succeeds_masked(std::size_t v, std::span<const std::uint8_t> transmitting) const
    {
        return sinr_masked(v, transmitting) >= params_.beta;
    }

    bool is_feasible(std::span<const std::size_t> set) const
    {
        return std::all_of(set.begin(), set.end(), [&](std::size_t v) { return succeeds(v, set); });
    }

    /// Incoming affectance on v: sum over u in set of a_u(v).
    double load(std::size_t v, std::span<const std::size_t> set) const
    {
        require_viable(v);
        double total = 0.0;
        const double* row = &affect_[v * size()];
        for (std::size_t u : set)
            total += row[u];
        return total;
    }

    /// Outgoing affectance of u: sum over v in set of a_u(v).
    double outgoing_load(std::size_t u, std::span<const std::size_t> set) const
    {
        double total = 0.0;
        for (std::size_t v : set)
            if (v != u)
                total += affectance(u, v);
        return total;
    }

    double max_load(std::span<const std::size_t> set) const
    {
        double m = 0.0;
        for (std::size_t v : set)
            m = std::max(m, load(v, set));
        return m;
    }

    /// delta-signal test: every link's load is at most 1/delta.
    bool is_signal_set(std::span<const std::size_t> set, double delta) const
    {
        return std::all_of(set.begin(), set.end(), [&](std::size_t v) { return load(v, set) <= 1.0 / delta; });
    }

    /// Affectance-sum form of feasibility (1-signal).
    bool is_feasible_by_load(std::span<const std::size_t> set) const { return is_signal_set(set, 1.0); }

    /// First-fit decomposition of a feasible set into t-signal groups,
    /// visiting links longest first. Groups are kept in id order.
    Partition strengthen(std::span<const std::size_t> set, double t) const
    {
        if (!(t > 0.0))
            throw std::invalid_argument("strengthening factor must be > 0");
        if (!is_feasible(set))
            throw std::invalid_argument("strengthen requires a feasible input set");
        std::vector<std::size_t> order(set.begin(), set.end());
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const double la = inst_.length(a), lb = inst_.length(b);
            return la != lb ? la > lb : a < b;
        });
        Partition part;
        part.strength = t;
        for (std::size_t v : order) {
            bool placed = false;
            for (auto& group : part.groups) {
                auto trial = group;
                trial.insert(std::upper_bound(trial.begin(), trial.end(), v), v);
                if (is_signal_set(trial, t)) {
                    group = std::move(trial);
                    placed = true;
                    break;
                }
            }
            if (!placed)
                part.groups.push_back({v});
        }
        part.target_count = static_cast<std::size_t>(std::ceil(2.0 * t / params_.beta));
        part.exceeds_target = part.groups.size() > part.target_count;
        return part;
    }

private:
    double ratio(std::size_t v, double interference) const
    {
        const double denom = interference + params_.noise;
        if (denom == 0.0)
            return std::numeric_limits<double>::infinity();
        return signal_[v] / denom;
    }

    void require_viable(std::size_t v) const
    {
        if (!viable(v))
            throw LinkInfeasible(v, "link " + std::to_string(v) + " infeasible under noise");
    }

    Instance inst_;
    PowerAssignment power_;
    SinrParams params_;
    std::vector<double> signal_;
    std::vector<double> c_;
    std::vector<double> incoming_;   // [v*n + w] = power received at r_v from s_w
    std::vector<double> affect_;     // [v*n + w] = a_w(v)
    std::vector<std::uint8_t> clipped_;
};

// Set-level conveniences for one-off queries; each builds a Channel.

inline double sinr_ratio(std::size_t v, std::span<const std::size_t> set, const Instance& inst,
                         const PowerAssignment& power, const SinrParams& params)
{
    return Channel(inst, power, params).sinr(v, set);
}

inline bool is_feasible(std::span<const std::size_t> set, const Instance& inst, const PowerAssignment& power,
                        const SinrParams& params)
{
    return Channel(inst, power, params).is_feasible(set);
}

inline double affectance_load(std::size_t v, std::span<const std::size_t> set, const Instance& inst,
                              const PowerAssignment& power, const SinrParams& params)
{
    return Channel(inst, power, params).load(v, set);
}

inline Partition strengthen(std::span<const std::size_t> set, double t, const Instance& inst,
                            const PowerAssignment& power, const SinrParams& params)
{
    return Channel(inst, power, params).strengthen(set, t);
}

} // namespace sinrcap

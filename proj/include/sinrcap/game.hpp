#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <numbers>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sinrcap/csv.hpp"
#include "sinrcap/rng.hpp"
#include "sinrcap/sinr.hpp"

namespace sinrcap {

enum class LearnerKind { rwm, exp3 };

inline std::string_view to_string(LearnerKind k) { return k == LearnerKind::rwm ? "rwm" : "exp3"; }

inline LearnerKind parse_learner_kind(std::string_view s)
{
    if (s == "rwm") return LearnerKind::rwm;
    if (s == "exp3") return LearnerKind::exp3;
    throw std::invalid_argument("unknown learner '" + std::string(s) + "'");
}

/// EXP3 exploration rate for two actions; tuned to `horizon` rounds when known.
inline double exp3_gamma(std::optional<std::size_t> horizon)
{
    if (!horizon || *horizon == 0)
        return 0.1;
    constexpr double k = 2.0;
    const double g = static_cast<double>(*horizon);
    return std::min(1.0, std::sqrt(k * std::log(k) / ((std::numbers::e - 1.0) * g)));
}

/// Two-action (transmit / stay silent) no-regret learner owning its random stream.
///
/// RWM keeps its weights as halving exponents: after k transmit-failures and
/// m transmit-successes the weights are (2^-k, 2^-m), exactly, for any horizon.
/// EXP3 keeps explicit weights renormalized after each update.
class Learner
{
public:
    static Learner rwm(std::uint64_t seed) { return rwm_biased(0, 0, seed); }

    /// RWM whose transmit weight has already been halved `fail_halvings` times
    /// and whose silent weight `success_halvings` times.
    static Learner rwm_biased(std::int64_t fail_halvings, std::int64_t success_halvings, std::uint64_t seed)
    {
        Learner l(LearnerKind::rwm, seed);
        l.fail_halvings_ = fail_halvings;
        l.success_halvings_ = success_halvings;
        return l;
    }

    static Learner exp3(double gamma, std::uint64_t seed)
    {
        if (!(gamma > 0.0 && gamma <= 1.0))
            throw std::invalid_argument("gamma must be in (0,1]");
        Learner l(LearnerKind::exp3, seed);
        l.gamma_ = gamma;
        return l;
    }

    LearnerKind kind() const noexcept { return kind_; }
    double gamma() const noexcept { return gamma_; }

    double weight_transmit() const
    {
        return kind_ == LearnerKind::rwm ? std::ldexp(1.0, static_cast<int>(-fail_halvings_)) : w_transmit_;
    }
    double weight_silent() const
    {
        return kind_ == LearnerKind::rwm ? std::ldexp(1.0, static_cast<int>(-success_halvings_)) : w_silent_;
    }

    double transmit_probability() const
    {
        if (kind_ == LearnerKind::rwm) {
            // w_t/(w_t+w_s) = 1/(1 + 2^(k-m))
            const auto diff = static_cast<double>(fail_halvings_ - success_halvings_);
            return 1.0 / (1.0 + std::exp2(diff));
        }
        return (1.0 - gamma_) * w_transmit_ / (w_transmit_ + w_silent_) + gamma_ / 2.0;
    }

    /// Samples this round's action from the learner's own stream.
    bool decide()
    {
        return uniform01(rng_) < transmit_probability();
    }

    /// Bandit feedback: only the player's own outcome is observed.
    void update(bool transmitted, bool success)
    {
        if (kind_ == LearnerKind::rwm) {
            if (!transmitted)
                return;
            if (success)
                ++success_halvings_;
            else
                ++fail_halvings_;
            return;
        }
        const double p_transmit = transmit_probability();
        const double utility = transmitted ? (success ? 1.0 : -1.0) : 0.0;
        const double reward = (utility + 1.0) / 2.0;
        const double p_chosen = transmitted ? p_transmit : 1.0 - p_transmit;
        const double estimate = reward / p_chosen;
        double& w = transmitted ? w_transmit_ : w_silent_;
        w *= std::exp(gamma_ * estimate / 2.0);
        const double top = std::max(w_transmit_, w_silent_);
        w_transmit_ /= top;
        w_silent_ /= top;
    }

private:
    Learner(LearnerKind kind, std::uint64_t seed) : kind_(kind), rng_(seed) {}

    LearnerKind kind_;
    Rng rng_;
    std::int64_t fail_halvings_ = 0;
    std::int64_t success_halvings_ = 0;
    double w_transmit_ = 1.0;
    double w_silent_ = 1.0;
    double gamma_ = 0.1;
};

/// Learner for link `link` of a run seeded with `root_seed`.
inline Learner new_learner(LearnerKind kind, std::uint64_t root_seed, std::size_t link,
                           std::optional<std::size_t> horizon = std::nullopt)
{
    const std::uint64_t seed = derive_seed(root_seed, link);
    return kind == LearnerKind::rwm ? Learner::rwm(seed) : Learner::exp3(exp3_gamma(horizon), seed);
}

struct RoundRecord
{
    std::size_t round = 0;  // 1-based
    std::vector<std::uint8_t> actions;
    std::vector<std::uint8_t> successes;
    std::vector<std::int8_t> utilities;

    std::size_t attempts() const { return static_cast<std::size_t>(std::count(actions.begin(), actions.end(), 1)); }
    std::size_t success_count() const
    {
        return static_cast<std::size_t>(std::count(successes.begin(), successes.end(), 1));
    }
};

/// Resolves one round for a fixed action profile: v succeeds iff SINR(v, S) >= beta over the transmitting set S.
inline RoundRecord resolve_round(const Channel& channel, std::vector<std::uint8_t> actions, std::size_t round)
{
    const std::size_t n = channel.size();
    if (actions.size() != n)
        throw std::invalid_argument("action profile size does not match instance");
    RoundRecord rec;
    rec.round = round;
    rec.successes.assign(n, 0);
    rec.utilities.assign(n, 0);
    for (std::size_t v = 0; v < n; ++v) {
        if (!actions[v])
            continue;
        const bool ok = channel.succeeds_masked(v, actions);
        rec.successes[v] = ok;
        rec.utilities[v] = ok ? 1 : -1;
    }
    rec.actions = std::move(actions);
    return rec;
}

/// Every learner samples independently, the round is resolved, then each learner sees its own outcome.
inline RoundRecord play_round(const Channel& channel, std::span<Learner> learners, std::size_t round)
{
    if (learners.size() != channel.size())
        throw std::invalid_argument("need exactly one learner per link");
    std::vector<std::uint8_t> actions(learners.size());
    for (std::size_t v = 0; v < learners.size(); ++v)
        actions[v] = learners[v].decide();
    RoundRecord rec = resolve_round(channel, std::move(actions), round);
    for (std::size_t v = 0; v < learners.size(); ++v)
        learners[v].update(rec.actions[v] != 0, rec.successes[v] != 0);
    return rec;
}

struct History
{
    std::shared_ptr<const Channel> channel;
    LearnerKind kind = LearnerKind::rwm;
    std::uint64_t seed = 0;
    std::vector<RoundRecord> rounds;

    std::size_t size() const noexcept { return rounds.size(); }
    std::size_t links() const noexcept { return channel ? channel->size() : 0; }

    std::vector<double> success_series() const
    {
        std::vector<double> s;
        s.reserve(rounds.size());
        for (const auto& r : rounds)
            s.push_back(static_cast<double>(r.success_count()));
        return s;
    }
    std::vector<double> attempt_series() const
    {
        std::vector<double> s;
        s.reserve(rounds.size());
        for (const auto& r : rounds)
            s.push_back(static_cast<double>(r.attempts()));
        return s;
    }
};

/// Continues a game from caller-supplied learner states for `rounds` rounds.
inline History run_game_from(std::shared_ptr<const Channel> channel, std::vector<Learner> learners,
                             std::size_t rounds, std::uint64_t seed = 0)
{
    if (rounds < 1)
        throw std::invalid_argument("a game needs at least one round");
    History h;
    h.kind = learners.empty() ? LearnerKind::rwm : learners.front().kind();
    h.seed = seed;
    h.rounds.reserve(rounds);
    for (std::size_t t = 1; t <= rounds; ++t)
        h.rounds.push_back(play_round(*channel, learners, t));
    h.channel = std::move(channel);
    return h;
}

inline History run_game(std::shared_ptr<const Channel> channel, LearnerKind kind, std::size_t rounds,
                        std::uint64_t seed)
{
    if (rounds < 1)
        throw std::invalid_argument("a game needs at least one round");
    std::vector<Learner> learners;
    learners.reserve(channel->size());
    for (std::size_t v = 0; v < channel->size(); ++v)
        learners.push_back(new_learner(kind, seed, v, rounds));
    return run_game_from(std::move(channel), std::move(learners), rounds, seed);
}

inline History run_game(const Instance& inst, PowerScheme scheme, const SinrParams& params, LearnerKind kind,
                        std::size_t rounds, std::uint64_t seed)
{
    return run_game(std::make_shared<const Channel>(inst, scheme, params), kind, rounds, seed);
}

/// Per-link counts behind every game statistic.
struct LinkCounts
{
    std::size_t transmitted = 0;
    std::size_t succeeded = 0;
    std::size_t would_fail = 0;  // rounds where transmitting would have failed against the others' actions
};

struct GameStats
{
    std::size_t rounds = 0;
    std::vector<double> q;
    std::vector<double> x;
    std::vector<double> f;
    std::vector<double> regret;
    double Q = 0.0;
    double X = 0.0;

    double max_regret() const { return regret.empty() ? 0.0 : *std::max_element(regret.begin(), regret.end()); }
};

/// Counterfactual success uses the same SINR routine as the played rounds, so
/// for rounds where u did transmit it coincides with the recorded outcome.
inline LinkCounts count_link(const History& h, std::size_t u)
{
    LinkCounts c;
    for (const auto& r : h.rounds) {
        c.transmitted += r.actions[u];
        c.succeeded += r.successes[u];
        if (!h.channel->succeeds_masked(u, r.actions))
            ++c.would_fail;
    }
    return c;
}

/// max over constant actions of average utility, minus average achieved utility.
/// Constant transmit earns 1 - 2f on average, constant silence 0; achieved is 2x - q.
inline double regret_from_counts(const LinkCounts& c, std::size_t rounds)
{
    const auto T = static_cast<long long>(rounds);
    const long long best_constant = std::max(T - 2 * static_cast<long long>(c.would_fail), 0LL);
    const long long achieved = 2 * static_cast<long long>(c.succeeded) - static_cast<long long>(c.transmitted);
    return static_cast<double>(best_constant - achieved) / static_cast<double>(T);
}

inline double regret(const History& h, std::size_t player)
{
    if (h.rounds.empty())
        throw std::invalid_argument("regret of an empty history");
    if (player >= h.links())
        throw std::out_of_range("player index out of range");
    return regret_from_counts(count_link(h, player), h.size());
}

inline GameStats summarize(const History& h)
{
    if (h.rounds.empty())
        throw std::invalid_argument("cannot summarize an empty history");
    const std::size_t n = h.links();
    const auto T = static_cast<double>(h.size());
    GameStats s;
    s.rounds = h.size();
    s.q.resize(n);
    s.x.resize(n);
    s.f.resize(n);
    s.regret.resize(n);
    for (std::size_t u = 0; u < n; ++u) {
        const LinkCounts c = count_link(h, u);
        s.q[u] = static_cast<double>(c.transmitted) / T;
        s.x[u] = static_cast<double>(c.succeeded) / T;
        s.f[u] = static_cast<double>(c.would_fail) / T;
        s.regret[u] = regret_from_counts(c, h.size());
        s.Q += s.q[u];
        s.X += s.x[u];
    }
    return s;
}

/// First round at which the mean of the last `window` rounds differs from the
/// mean of the `window` rounds before it by less than `tolerance` (relative).
/// Rounds are 1-based; nullopt if the series never settles.
inline std::optional<std::size_t> detect_convergence(std::span<const double> series, std::size_t window = 20,
                                                     double tolerance = 0.05)
{
    if (window == 0)
        throw std::invalid_argument("window must be positive");
    for (std::size_t end = 2 * window; end <= series.size(); ++end) {
        double prev = 0.0, cur = 0.0;
        for (std::size_t i = end - 2 * window; i < end - window; ++i)
            prev += series[i];
        for (std::size_t i = end - window; i < end; ++i)
            cur += series[i];
        prev /= static_cast<double>(window);
        cur /= static_cast<double>(window);
        if ((prev == 0.0 && cur == 0.0) || std::abs(cur - prev) < tolerance * prev)
            return end;
    }
    return std::nullopt;
}

/// Columns: round, attempts, successes.
inline void write_round_csv(std::ostream& os, const History& h, std::string_view provenance = {})
{
    csv::comment_block(os, provenance);
    os << "round,attempts,successes\n";
    for (const auto& r : h.rounds)
        os << r.round << ',' << r.attempts() << ',' << r.success_count() << '\n';
}

/// Columns: link_id, q, x, f, regret.
inline void write_link_summary_csv(std::ostream& os, const GameStats& s, std::string_view provenance = {})
{
    csv::comment_block(os, provenance);
    os << "link_id,q,x,f,regret\n";
    for (std::size_t u = 0; u < s.q.size(); ++u)
        os << u << ',' << csv::num(s.q[u]) << ',' << csv::num(s.x[u]) << ',' << csv::num(s.f[u]) << ','
           << csv::num(s.regret[u]) << '\n';
}

} // namespace sinrcap

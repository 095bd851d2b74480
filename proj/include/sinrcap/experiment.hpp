#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <tuple>
#include <vector>

#include "json.hpp"
#include "sinrcap/baselines.hpp"
#include "sinrcap/csv.hpp"
#include "sinrcap/game.hpp"
#include "sinrcap/instances.hpp"
#include "sinrcap/rng.hpp"
#include "sinrcap/sinr.hpp"
#include "sinrcap/verify.hpp"

namespace sinrcap {

/// Invalid experiment configuration; the message starts with the field name.
class ConfigError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

enum class ExperimentKind { convergence, sweep_n, sweep_dmax, tight, verify_suite };
enum class Algorithm { game_rwm, game_exp3, hw, hw_bsearch, brute };

inline std::string_view to_string(ExperimentKind k)
{
    switch (k) {
    case ExperimentKind::convergence: return "convergence";
    case ExperimentKind::sweep_n: return "sweep_n";
    case ExperimentKind::sweep_dmax: return "sweep_dmax";
    case ExperimentKind::tight: return "tight";
    case ExperimentKind::verify_suite: return "verify_suite";
    }
    return "?";
}

inline std::string_view to_string(Algorithm a)
{
    switch (a) {
    case Algorithm::game_rwm: return "game_rwm";
    case Algorithm::game_exp3: return "game_exp3";
    case Algorithm::hw: return "hw";
    case Algorithm::hw_bsearch: return "hw_bsearch";
    case Algorithm::brute: return "brute";
    }
    return "?";
}

inline ExperimentKind parse_experiment_kind(std::string_view s)
{
    for (auto k : {ExperimentKind::convergence, ExperimentKind::sweep_n, ExperimentKind::sweep_dmax,
                   ExperimentKind::tight, ExperimentKind::verify_suite})
        if (to_string(k) == s)
            return k;
    throw ConfigError("experiment: unknown kind '" + std::string(s) + "'");
}

inline Algorithm parse_algorithm(std::string_view s)
{
    for (auto a : {Algorithm::game_rwm, Algorithm::game_exp3, Algorithm::hw, Algorithm::hw_bsearch, Algorithm::brute})
        if (to_string(a) == s)
            return a;
    throw ConfigError("algorithms: unknown algorithm '" + std::string(s) + "'");
}

inline bool is_game(Algorithm a) { return a == Algorithm::game_rwm || a == Algorithm::game_exp3; }

struct ExperimentConfig
{
    ExperimentKind kind = ExperimentKind::convergence;
    SinrParams params;
    GenConfig gen;
    std::optional<std::string> instance_path;
    std::vector<PowerScheme> schemes{PowerScheme::uniform, PowerScheme::mean, PowerScheme::linear};
    std::vector<Algorithm> algorithms{Algorithm::game_rwm};
    std::size_t rounds = 100;
    std::size_t replicates = 10;
    std::uint64_t seed = 1;
    std::string out = "out";
    std::vector<std::size_t> n_values{25, 50, 100, 200};
    std::vector<double> dmax_values{2, 5, 10, 20, 40};
    std::size_t tail = 100;  // trailing rounds averaged for a game's per-instance value
    double tight_D = 9.0;
    unsigned threads = 0;    // 0: hardware concurrency

    void validate() const
    {
        try {
            params.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("params: ") + e.what());
        }
        try {
            gen.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        if (schemes.empty())
            throw ConfigError("schemes: at least one power scheme is required");
        for (auto s : schemes)
            if (s == PowerScheme::explicit_powers)
                throw ConfigError("schemes: 'explicit' is not an experiment scheme");
        if (algorithms.empty())
            throw ConfigError("algorithms: at least one algorithm is required");
        if (rounds < 1)
            throw ConfigError("rounds: must be >= 1");
        if (replicates < 1)
            throw ConfigError("replicates: must be >= 1");
        if (tail < 1)
            throw ConfigError("tail: must be >= 1");
        if (kind == ExperimentKind::sweep_n && n_values.empty())
            throw ConfigError("n_values: required for sweep_n");
        if (kind == ExperimentKind::sweep_dmax && dmax_values.empty())
            throw ConfigError("dmax_values: required for sweep_dmax");
        for (double d : dmax_values)
            if (!(d > 0.0))
                throw ConfigError("dmax_values: entries must be > 0");
        for (std::size_t n : n_values)
            if (n < 1)
                throw ConfigError("n_values: entries must be >= 1");
        if (kind == ExperimentKind::tight && !(tight_D >= 3.0))
            throw ConfigError("tight_D: must be >= 3");
    }
};

inline nlohmann::json to_json(const ExperimentConfig& c)
{
    nlohmann::json j;
    j["experiment"] = to_string(c.kind);
    j["params"] = {{"alpha", c.params.alpha},
                   {"beta", c.params.beta},
                   {"noise", c.params.noise},
                   {"p_max", c.params.p_max},
                   {"model", c.params.model == SignalModel::bounded ? "bounded" : "unbounded"},
                   {"strict", c.params.strict_noise_margin}};
    j["gen"] = {{"n", c.gen.n}, {"d_max", c.gen.d_max}, {"world", c.gen.world}, {"seed", c.gen.seed}};
    if (c.instance_path)
        j["instance"] = *c.instance_path;
    for (auto s : c.schemes)
        j["schemes"].push_back(to_string(s));
    for (auto a : c.algorithms)
        j["algorithms"].push_back(to_string(a));
    j["rounds"] = c.rounds;
    j["replicates"] = c.replicates;
    j["seed"] = c.seed;
    j["out"] = c.out;
    j["n_values"] = c.n_values;
    j["dmax_values"] = c.dmax_values;
    j["tail"] = c.tail;
    j["tight_D"] = c.tight_D;
    return j;
}

namespace detail {

template <class T>
T get_as(const nlohmann::json& j, const std::string& name)
{
    try {
        return j.get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(name + ": wrong type");
    }
}

} // namespace detail

/// Reads a config document; absent fields keep their defaults.
inline ExperimentConfig config_from_json(const nlohmann::json& j)
{
    using detail::get_as;
    if (!j.is_object())
        throw ConfigError("config: expected a JSON object");
    ExperimentConfig c;
    if (j.contains("experiment"))
        c.kind = parse_experiment_kind(get_as<std::string>(j["experiment"], "experiment"));
    if (j.contains("params")) {
        const auto& p = j["params"];
        if (!p.is_object())
            throw ConfigError("params: expected an object");
        if (p.contains("alpha")) c.params.alpha = get_as<double>(p["alpha"], "params.alpha");
        if (p.contains("beta")) c.params.beta = get_as<double>(p["beta"], "params.beta");
        if (p.contains("noise")) c.params.noise = get_as<double>(p["noise"], "params.noise");
        if (p.contains("p_max")) c.params.p_max = get_as<double>(p["p_max"], "params.p_max");
        if (p.contains("strict")) c.params.strict_noise_margin = get_as<bool>(p["strict"], "params.strict");
        if (p.contains("model")) {
            const auto m = get_as<std::string>(p["model"], "params.model");
            if (m == "bounded")
                c.params.model = SignalModel::bounded;
            else if (m == "unbounded")
                c.params.model = SignalModel::unbounded;
            else
                throw ConfigError("params.model: expected 'bounded' or 'unbounded'");
        }
    }
    if (j.contains("gen")) {
        const auto& g = j["gen"];
        if (!g.is_object())
            throw ConfigError("gen: expected an object");
        if (g.contains("n")) c.gen.n = get_as<std::size_t>(g["n"], "gen.n");
        if (g.contains("d_max")) c.gen.d_max = get_as<double>(g["d_max"], "gen.d_max");
        if (g.contains("world")) c.gen.world = get_as<double>(g["world"], "gen.world");
        if (g.contains("seed")) c.gen.seed = get_as<std::uint64_t>(g["seed"], "gen.seed");
    }
    if (j.contains("instance"))
        c.instance_path = get_as<std::string>(j["instance"], "instance");
    if (j.contains("schemes")) {
        c.schemes.clear();
        for (const auto& s : j["schemes"]) {
            try {
                c.schemes.push_back(parse_power_scheme(get_as<std::string>(s, "schemes")));
            } catch (const ConfigError&) {
                throw;
            } catch (const std::invalid_argument& e) {
                throw ConfigError(std::string("schemes: ") + e.what());
            }
        }
    }
    if (j.contains("algorithms")) {
        c.algorithms.clear();
        for (const auto& a : j["algorithms"])
            c.algorithms.push_back(parse_algorithm(get_as<std::string>(a, "algorithms")));
    }
    if (j.contains("rounds")) c.rounds = get_as<std::size_t>(j["rounds"], "rounds");
    if (j.contains("replicates")) c.replicates = get_as<std::size_t>(j["replicates"], "replicates");
    if (j.contains("seed")) c.seed = get_as<std::uint64_t>(j["seed"], "seed");
    if (j.contains("out")) c.out = get_as<std::string>(j["out"], "out");
    if (j.contains("n_values")) c.n_values = get_as<std::vector<std::size_t>>(j["n_values"], "n_values");
    if (j.contains("dmax_values")) c.dmax_values = get_as<std::vector<double>>(j["dmax_values"], "dmax_values");
    if (j.contains("tail")) c.tail = get_as<std::size_t>(j["tail"], "tail");
    if (j.contains("tight_D")) c.tight_D = get_as<double>(j["tight_D"], "tight_D");
    if (j.contains("threads")) c.threads = get_as<unsigned>(j["threads"], "threads");
    return c;
}

/// One measured value of one algorithm/scheme on one run or instance.
struct RunOutcome
{
    std::string algorithm;
    std::string scheme;
    std::string point;  // sweep coordinate, empty outside sweeps
    double value = 0.0;
};

struct SummaryRow
{
    std::string algorithm;
    std::string scheme;
    std::string point;
    std::size_t runs = 0;
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation; 0 for a single run
};

struct ExperimentOutput
{
    std::vector<std::filesystem::path> files;
    std::vector<RunOutcome> outcomes;
    std::vector<Report> reports;
    std::vector<SummaryRow> summary;
    std::optional<std::size_t> convergence_round;
    bool verify_failed = false;
};

/// Means and standard deviations per (algorithm, scheme, point), in first-seen order.
inline std::vector<SummaryRow> emit_summary(const std::vector<RunOutcome>& outcomes)
{
    if (outcomes.empty())
        throw std::invalid_argument("emit_summary: no runs to summarize");
    std::vector<SummaryRow> rows;
    std::map<std::tuple<std::string, std::string, std::string>, std::vector<double>> groups;
    for (const auto& o : outcomes) {
        auto key = std::make_tuple(o.algorithm, o.scheme, o.point);
        auto [it, inserted] = groups.try_emplace(key);
        if (inserted)
            rows.push_back({o.algorithm, o.scheme, o.point, 0, 0.0, 0.0});
        it->second.push_back(o.value);
    }
    for (auto& row : rows) {
        const auto& vals = groups.at(std::make_tuple(row.algorithm, row.scheme, row.point));
        row.runs = vals.size();
        double sum = 0.0;
        for (double v : vals)
            sum += v;
        row.mean = sum / static_cast<double>(vals.size());
        if (vals.size() > 1) {
            double ss = 0.0;
            for (double v : vals)
                ss += (v - row.mean) * (v - row.mean);
            row.stddev = std::sqrt(ss / static_cast<double>(vals.size() - 1));
        }
    }
    return rows;
}

inline void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows, std::string_view provenance = {})
{
    csv::comment_block(os, provenance);
    os << "algorithm,scheme,point,runs,mean,std\n";
    for (const auto& r : rows)
        os << r.algorithm << ',' << r.scheme << ',' << r.point << ',' << r.runs << ',' << csv::num(r.mean) << ','
           << csv::num(r.stddev) << '\n';
}

namespace detail {

/// Runs fn(0..count-1) on up to `threads` workers. Each index writes only its own slot.
inline void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn)
{
    unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = next++; i < count; i = next++)
                    fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    for (auto& t : pool)
        t.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

inline double tail_mean(std::span<const double> series, std::size_t tail)
{
    const std::size_t k = std::min(tail, series.size());
    double s = 0.0;
    for (std::size_t i = series.size() - k; i < series.size(); ++i)
        s += series[i];
    return k ? s / static_cast<double>(k) : 0.0;
}

inline LearnerKind learner_of(Algorithm a) { return a == Algorithm::game_exp3 ? LearnerKind::exp3 : LearnerKind::rwm; }

struct Runner
{
    const ExperimentConfig& cfg;
    std::filesystem::path out;
    std::string provenance;
    ExperimentOutput result;

    explicit Runner(const ExperimentConfig& c) : cfg(c), out(c.out)
    {
        // The output directory is left out so relocated runs stay byte-identical.
        auto j = to_json(c);
        j.erase("out");
        provenance = "sinrcap experiment\nconfig: " + j.dump() + "\nseed: " + std::to_string(c.seed);
    }

    std::ofstream open(const std::filesystem::path& rel)
    {
        const auto path = out / rel;
        std::filesystem::create_directories(path.parent_path());
        std::ofstream os(path, std::ios::binary);
        if (!os)
            throw std::runtime_error("cannot write " + path.string());
        return os;
    }

    Instance base_instance() const
    {
        return cfg.instance_path ? load(*cfg.instance_path) : gen_random(cfg.gen);
    }

    /// Single-shot value of a centralized algorithm; nullopt if the instance is too large for it.
    static std::optional<ScheduleResult> centralized(Algorithm a, const Channel& ch, const SinrParams& params)
    {
        switch (a) {
        case Algorithm::hw:
            if (!(params.alpha > 2.0))
                return std::nullopt;
            return hw_greedy(ch, hw_constant(params.alpha, params.beta));
        case Algorithm::hw_bsearch: return hw_binary_search(ch);
        case Algorithm::brute:
            if (ch.size() > kBruteForceLimit)
                return std::nullopt;
            return brute_force_opt(ch);
        default: return std::nullopt;
        }
    }

    void convergence()
    {
        const Instance inst = base_instance();
        for (Algorithm algo : cfg.algorithms)
            for (PowerScheme scheme : cfg.schemes) {
                const std::string tag = std::string(to_string(algo)) + "_" + std::string(to_string(scheme));
                auto ch = std::make_shared<const Channel>(inst, scheme, cfg.params);
                if (!is_game(algo)) {
                    if (auto r = centralized(algo, *ch, cfg.params)) {
                        result.outcomes.push_back({std::string(to_string(algo)), std::string(to_string(scheme)), "",
                                                   static_cast<double>(r->size())});
                        auto os = open("single_" + tag + ".csv");
                        csv::comment_block(os, provenance);
                        os << "algorithm,c,active_count,feasible\n";
                        write_schedule_row(os, *r);
                        result.files.push_back(out / ("single_" + tag + ".csv"));
                    }
                    continue;
                }
                std::vector<std::vector<double>> attempts(cfg.replicates), successes(cfg.replicates);
                std::vector<double> tails(cfg.replicates);
                parallel_for(cfg.replicates, cfg.threads, [&](std::size_t r) {
                    const History h = run_game(ch, learner_of(algo), cfg.rounds, derive_seed(cfg.seed, r));
                    attempts[r] = h.attempt_series();
                    successes[r] = h.success_series();
                    tails[r] = tail_mean(successes[r], cfg.tail);
                    const std::string run = "runs/" + tag + "_rep" + std::to_string(r);
                    {
                        auto os = open(run + ".csv");
                        write_round_csv(os, h, provenance + "\nreplicate: " + std::to_string(r));
                    }
                    auto os = open(run + "_links.csv");
                    write_link_summary_csv(os, summarize(h), provenance + "\nreplicate: " + std::to_string(r));
                });
                std::vector<double> mean_att(cfg.rounds, 0.0), mean_succ(cfg.rounds, 0.0);
                for (std::size_t r = 0; r < cfg.replicates; ++r) {
                    result.files.push_back(out / ("runs/" + tag + "_rep" + std::to_string(r) + ".csv"));
                    result.files.push_back(out / ("runs/" + tag + "_rep" + std::to_string(r) + "_links.csv"));
                    result.outcomes.push_back(
                        {std::string(to_string(algo)), std::string(to_string(scheme)), "", tails[r]});
                    for (std::size_t t = 0; t < cfg.rounds; ++t) {
                        mean_att[t] += attempts[r][t] / static_cast<double>(cfg.replicates);
                        mean_succ[t] += successes[r][t] / static_cast<double>(cfg.replicates);
                    }
                }
                const auto conv = detect_convergence(mean_succ);
                if (!result.convergence_round && scheme == PowerScheme::uniform)
                    result.convergence_round = conv;
                auto os = open("convergence_" + tag + ".csv");
                csv::comment_block(os, provenance + "\nconverged_at: " + (conv ? std::to_string(*conv) : "none"));
                os << "round,attempts,successes\n";
                for (std::size_t t = 0; t < cfg.rounds; ++t)
                    os << t + 1 << ',' << csv::num(mean_att[t]) << ',' << csv::num(mean_succ[t]) << '\n';
                result.files.push_back(out / ("convergence_" + tag + ".csv"));
            }
    }

    void sweep(bool over_n)
    {
        const std::size_t points = over_n ? cfg.n_values.size() : cfg.dmax_values.size();
        struct Cell
        {
            std::size_t n;
            double d_max;
            std::size_t instance;
            std::vector<std::string> rows;
            std::vector<RunOutcome> outcomes;
        };
        std::vector<Cell> cells(points * cfg.replicates);
        parallel_for(cells.size(), cfg.threads, [&](std::size_t idx) {
            const std::size_t p = idx / cfg.replicates, i = idx % cfg.replicates;
            GenConfig g = cfg.gen;
            if (over_n)
                g.n = cfg.n_values[p];
            else
                g.d_max = cfg.dmax_values[p];
            g.seed = derive_seed(derive_seed(cfg.seed, p), i);
            const Instance inst = gen_random(g);
            Cell& cell = cells[idx];
            cell.n = g.n;
            cell.d_max = g.d_max;
            cell.instance = i;
            const std::string point = over_n ? std::to_string(g.n) : csv::num(g.d_max);
            const std::string prefix = std::to_string(g.n) + ',' + csv::num(g.d_max) + ',' + std::to_string(i) + ',';
            for (PowerScheme scheme : cfg.schemes) {
                auto ch = std::make_shared<const Channel>(inst, scheme, cfg.params);
                for (Algorithm algo : cfg.algorithms) {
                    const std::string a(to_string(algo)), s(to_string(scheme));
                    if (is_game(algo)) {
                        const History h = run_game(ch, learner_of(algo), cfg.rounds, derive_seed(g.seed, 0x9a3e));
                        const double v = tail_mean(h.success_series(), cfg.tail);
                        cell.rows.push_back(prefix + a + ',' + s + ",," + csv::num(v) + ",");
                        cell.outcomes.push_back({a, s, point, v});
                    } else if (auto r = centralized(algo, *ch, cfg.params)) {
                        cell.rows.push_back(prefix + a + ',' + s + ',' + (r->c ? csv::num(*r->c) : std::string{}) +
                                            ',' + std::to_string(r->size()) + ',' + (r->feasible ? "1" : "0"));
                        cell.outcomes.push_back({a, s, point, static_cast<double>(r->size())});
                    }
                }
            }
        });
        const std::string name = over_n ? "sweep_n.csv" : "sweep_dmax.csv";
        auto os = open(name);
        csv::comment_block(os, provenance);
        os << "n,d_max,instance,algorithm,scheme,c,active_count,feasible\n";
        for (const auto& cell : cells) {
            for (const auto& row : cell.rows)
                os << row << '\n';
            result.outcomes.insert(result.outcomes.end(), cell.outcomes.begin(), cell.outcomes.end());
        }
        result.files.push_back(out / name);
    }

    void tight()
    {
        const Instance inst = gen_linear_tight(cfg.tight_D, cfg.params.alpha);
        auto ch = std::make_shared<const Channel>(inst, PowerScheme::linear, cfg.params);
        const std::size_t n = inst.size();
        std::vector<std::size_t> short_links;
        for (std::size_t v = 1; v < n; ++v)
            short_links.push_back(v);

        std::vector<Learner> fixed;
        for (std::size_t v = 0; v < n; ++v) {
            const auto seed = derive_seed(cfg.seed, v);
            fixed.push_back(v == 0 ? Learner::rwm_biased(0, 64, seed) : Learner::rwm_biased(64, 0, seed));
        }
        const GameStats from_profile = summarize(run_game_from(ch, std::move(fixed), cfg.rounds, cfg.seed));
        const GameStats from_neutral = summarize(run_game(ch, LearnerKind::rwm, cfg.rounds, cfg.seed));

        auto os = open("tight.csv");
        csv::comment_block(os, provenance);
        os << "quantity,value\n";
        auto row = [&](const std::string& k, double v) {
            os << k << ',' << csv::num(v) << '\n';
            result.outcomes.push_back({k, "linear", "", v});
        };
        row("short_links", static_cast<double>(n - 1));
        row("delta", inst.delta());
        row("short_set_feasible", ch->is_feasible(short_links) ? 1.0 : 0.0);
        if (n <= kBruteForceLimit)
            row("opt_linear", static_cast<double>(brute_force_opt(*ch).size()));
        row("Q_from_profile", from_profile.Q);
        row("X_from_profile", from_profile.X);
        row("max_regret_from_profile", from_profile.max_regret());
        row("Q_rwm", from_neutral.Q);
        row("X_rwm", from_neutral.X);
        row("max_regret_rwm", from_neutral.max_regret());
        result.files.push_back(out / "tight.csv");
    }

    void verify_suite()
    {
        std::vector<std::vector<std::pair<Report, std::string>>> per(cfg.replicates);
        parallel_for(cfg.replicates, cfg.threads, [&](std::size_t i) {
            GenConfig g = cfg.gen;
            g.seed = derive_seed(cfg.seed, i);
            const Instance inst = cfg.instance_path ? load(*cfg.instance_path) : gen_random(g);
            const std::string id = std::to_string(i);
            auto ch = std::make_shared<const Channel>(inst, PowerScheme::uniform, cfg.params);
            auto& reports = per[i];

            std::optional<ScheduleResult> opt;
            if (inst.size() <= kBruteForceLimit)
                opt = brute_force_opt(*ch);
            const ScheduleResult bs = hw_binary_search(*ch);
            const ScheduleResult& feasible_set = opt ? *opt : bs;

            reports.emplace_back(check_half_set(*ch, feasible_set.active), id);
            reports.emplace_back(check_half_set(*ch, bs.active), id);
            const double t = std::pow(3.0, cfg.params.alpha);
            for (const auto& group : ch->strengthen(feasible_set.active, t).groups)
                reports.emplace_back(check_separation(*ch, group, 3.0), id);

            const History h = run_game(ch, LearnerKind::rwm, cfg.rounds, derive_seed(g.seed, 0x5eed));
            const GameStats stats = summarize(h);
            reports.emplace_back(check_sandwich(stats, inst.size()), id);
            reports.emplace_back(check_failure_fraction(stats), id);
            if (opt) {
                Report bound;
                bound.check = "oracle_bound";
                std::size_t worst = bs.size();
                for (const auto& r : h.rounds)
                    worst = std::max(worst, r.success_count());
                bound.pass = worst <= opt->size();
                if (!bound.pass)
                    bound.witnesses = opt->active;
                bound.metrics = {{"max_produced", static_cast<double>(worst)},
                                 {"opt", static_cast<double>(opt->size())}};
                reports.emplace_back(std::move(bound), id);
            }
        });
        auto os = open("verify_log.csv");
        csv::comment_block(os, provenance);
        os << "check,instance_id,pass,key_metric\n";
        for (auto& list : per)
            for (auto& [rep, id] : list) {
                write_report_row(os, rep, id);
                if (!rep.pass)
                    result.verify_failed = true;
                result.outcomes.push_back({rep.check, "uniform", "", rep.pass ? 1.0 : 0.0});
                result.reports.push_back(std::move(rep));
            }
        result.files.push_back(out / "verify_log.csv");
    }
};

} // namespace detail

/// Runs one experiment and writes its CSVs under `config.out`. Output bytes
/// are a pure function of the config (thread count does not matter).
inline ExperimentOutput run_experiment(const ExperimentConfig& config)
{
    config.validate();
    detail::Runner runner(config);
    switch (config.kind) {
    case ExperimentKind::convergence: runner.convergence(); break;
    case ExperimentKind::sweep_n: runner.sweep(true); break;
    case ExperimentKind::sweep_dmax: runner.sweep(false); break;
    case ExperimentKind::tight: runner.tight(); break;
    case ExperimentKind::verify_suite: runner.verify_suite(); break;
    }
    if (!runner.result.outcomes.empty()) {
        runner.result.summary = emit_summary(runner.result.outcomes);
        auto os = runner.open("summary.csv");
        write_summary_csv(os, runner.result.summary, runner.provenance);
        runner.result.files.push_back(runner.out / "summary.csv");
    }
    return std::move(runner.result);
}

} // namespace sinrcap

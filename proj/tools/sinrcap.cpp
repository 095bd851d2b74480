// Experiment runner for SINR capacity games.
//
// Usage:
//   sinrcap --config configs/convergence.json
//   sinrcap --experiment sweep_n --scheme uniform,mean --algo game_rwm,hw_bsearch --out out/sweep
//
// Exit codes: 0 success, 1 configuration error, 2 verify_suite reported a failed check.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sinrcap/experiment.hpp"

namespace {

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty())
            out.push_back(item);
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"SINR capacity game simulator"};

    std::string config_path, experiment, schemes, algos, out, instance;
    std::size_t n = 0, rounds = 0, replicates = 0;
    double dmax = 0, alpha = 0, beta = 0, noise = -1;
    std::uint64_t seed = 0;
    unsigned threads = 0;

    app.add_option("--config", config_path, "JSON experiment config")->check(CLI::ExistingFile);
    app.add_option("--experiment", experiment, "convergence | sweep_n | sweep_dmax | tight | verify_suite");
    auto* o_n = app.add_option("--n", n, "number of links");
    auto* o_dmax = app.add_option("--dmax", dmax, "max sender-receiver distance");
    auto* o_alpha = app.add_option("--alpha", alpha, "path-loss exponent");
    auto* o_beta = app.add_option("--beta", beta, "SINR threshold");
    auto* o_noise = app.add_option("--noise", noise, "ambient noise");
    app.add_option("--scheme", schemes, "comma-separated power schemes (uniform,mean,linear)");
    app.add_option("--algo", algos, "comma-separated algorithms (game_rwm,game_exp3,hw,hw_bsearch,brute)");
    auto* o_rounds = app.add_option("--rounds", rounds, "rounds per game");
    auto* o_reps = app.add_option("--replicates", replicates, "replicates / instances per point");
    auto* o_seed = app.add_option("--seed", seed, "root seed");
    app.add_option("--out", out, "output directory");
    app.add_option("--instance", instance, "instance JSON file (instead of a generated topology)");
    auto* o_threads = app.add_option("--threads", threads, "worker threads (0 = all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    sinrcap::ExperimentConfig cfg;
    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            cfg = sinrcap::config_from_json(nlohmann::json::parse(in));
        }
        if (!experiment.empty())
            cfg.kind = sinrcap::parse_experiment_kind(experiment);
        if (*o_n) cfg.gen.n = n;
        if (*o_dmax) cfg.gen.d_max = dmax;
        if (*o_alpha) cfg.params.alpha = alpha;
        if (*o_beta) cfg.params.beta = beta;
        if (*o_noise) cfg.params.noise = noise;
        if (!schemes.empty()) {
            cfg.schemes.clear();
            for (const auto& s : split_list(schemes)) {
                try {
                    cfg.schemes.push_back(sinrcap::parse_power_scheme(s));
                } catch (const std::invalid_argument& e) {
                    throw sinrcap::ConfigError(std::string("scheme: ") + e.what());
                }
            }
        }
        if (!algos.empty()) {
            cfg.algorithms.clear();
            for (const auto& a : split_list(algos))
                cfg.algorithms.push_back(sinrcap::parse_algorithm(a));
        }
        if (*o_rounds) cfg.rounds = rounds;
        if (*o_reps) cfg.replicates = replicates;
        if (*o_seed) cfg.seed = seed;
        if (*o_threads) cfg.threads = threads;
        if (!out.empty()) cfg.out = out;
        if (!instance.empty()) cfg.instance_path = instance;
        cfg.validate();
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    }

    sinrcap::ExperimentOutput result;
    try {
        result = sinrcap::run_experiment(cfg);
    } catch (const sinrcap::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        // oracle size limits, malformed instance files
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    std::cout << std::left << std::setw(26) << "algorithm" << std::setw(10) << "scheme" << std::setw(10) << "point"
              << std::setw(6) << "runs" << std::setw(14) << "mean" << "std\n";
    for (const auto& r : result.summary)
        std::cout << std::setw(26) << r.algorithm << std::setw(10) << r.scheme << std::setw(10) << r.point
                  << std::setw(6) << r.runs << std::setw(14) << r.mean << r.stddev << '\n';
    if (result.convergence_round)
        std::cout << "converged at round " << *result.convergence_round << '\n';
    std::cout << "wrote " << result.files.size() << " files under " << cfg.out << '\n';

    if (result.verify_failed) {
        std::cerr << "verify_suite: at least one check failed (see verify_log.csv)\n";
        return 2;
    }
    return 0;
}

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sinrcap/experiment.hpp"

using namespace sinrcap;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name)
{
    const auto dir = fs::temp_directory_path() / ("sinrcap_exp_" + name);
    fs::remove_all(dir);
    return dir;
}

ExperimentConfig small_convergence()
{
    ExperimentConfig c;
    c.gen = {20, 10, 50, 3};
    c.rounds = 60;
    c.replicates = 3;
    c.algorithms = {Algorithm::game_rwm, Algorithm::hw_bsearch};
    return c;
}

std::size_t data_lines(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    std::size_t k = 0;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '#')
            ++k;
    return k;
}

} // namespace

TEST(Summary, MeansAndSampleStd)
{
    const auto rows = emit_summary({{"game_rwm", "uniform", "", 1.0},
                                    {"game_rwm", "uniform", "", 3.0},
                                    {"hw", "uniform", "", 5.0}});
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].runs, 2u);
    EXPECT_DOUBLE_EQ(rows[0].mean, 2.0);
    EXPECT_DOUBLE_EQ(rows[0].stddev, std::sqrt(2.0));
    EXPECT_EQ(rows[1].runs, 1u);
    EXPECT_EQ(rows[1].stddev, 0.0);
    std::ostringstream os;
    write_summary_csv(os, rows);
    EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "algorithm,scheme,point,runs,mean,std");
}

TEST(Summary, EmptyIsAnError)
{
    EXPECT_THROW(emit_summary({}), std::invalid_argument);
}

TEST(Config, DefaultsFromEmptyObject)
{
    const auto c = config_from_json(nlohmann::json::object());
    EXPECT_EQ(c.kind, ExperimentKind::convergence);
    EXPECT_EQ(c.rounds, 100u);
    EXPECT_EQ(c.schemes.size(), 3u);
    EXPECT_NO_THROW(c.validate());
}

TEST(Config, JsonRoundTrip)
{
    auto c = small_convergence();
    c.kind = ExperimentKind::sweep_dmax;
    c.params.beta = 1.5;
    c.schemes = {PowerScheme::mean};
    const auto back = config_from_json(to_json(c));
    EXPECT_EQ(to_json(back), to_json(c));
}

TEST(Config, ErrorsNameTheField)
{
    auto expect_error = [](const char* text, const std::string& prefix) {
        try {
            config_from_json(nlohmann::json::parse(text)).validate();
            ADD_FAILURE() << "accepted " << text;
        } catch (const ConfigError& e) {
            EXPECT_EQ(std::string(e.what()).rfind(prefix, 0), 0u) << e.what();
        }
    };
    expect_error(R"({"algorithms": ["quantum"]})", "algorithms");
    expect_error(R"({"schemes": ["loud"]})", "schemes");
    expect_error(R"({"schemes": ["explicit"]})", "schemes");
    expect_error(R"({"rounds": "many"})", "rounds");
    expect_error(R"({"rounds": 0})", "rounds");
    expect_error(R"({"params": {"alpha": -1}})", "params");
    expect_error(R"({"params": {"model": "flat"}})", "params.model");
    expect_error(R"({"experiment": "nope"})", "experiment");
    expect_error(R"([1, 2])", "config");
}

TEST(Run, ConvergenceFilesAndThreadInvariance)
{
    auto a = small_convergence();
    a.out = scratch("conv_a").string();
    a.threads = 1;
    auto b = a;
    b.out = scratch("conv_b").string();
    b.threads = 4;
    const auto ra = run_experiment(a);
    const auto rb = run_experiment(b);
    ASSERT_EQ(ra.files.size(), rb.files.size());
    for (std::size_t i = 0; i < ra.files.size(); ++i) {
        EXPECT_EQ(ra.files[i].filename(), rb.files[i].filename());
        EXPECT_EQ(slurp(ra.files[i]), slurp(rb.files[i])) << ra.files[i];
    }
    const auto conv = slurp(fs::path(a.out) / "convergence_game_rwm_uniform.csv");
    EXPECT_NE(conv.find("converged_at: "), std::string::npos);
    EXPECT_NE(conv.find("round,attempts,successes\n"), std::string::npos);
    EXPECT_EQ(data_lines(conv), 61u);
    EXPECT_TRUE(fs::exists(fs::path(a.out) / "runs" / "game_rwm_mean_rep2_links.csv"));
    EXPECT_TRUE(fs::exists(fs::path(a.out) / "single_hw_bsearch_linear.csv"));
    EXPECT_TRUE(fs::exists(fs::path(a.out) / "summary.csv"));
    fs::remove_all(a.out);
    fs::remove_all(b.out);
}

TEST(Run, SeedChangesOutput)
{
    auto a = small_convergence();
    a.out = scratch("seed_a").string();
    auto b = a;
    b.out = scratch("seed_b").string();
    b.seed = 2;
    run_experiment(a);
    run_experiment(b);
    EXPECT_NE(slurp(fs::path(a.out) / "runs/game_rwm_uniform_rep0.csv"),
              slurp(fs::path(b.out) / "runs/game_rwm_uniform_rep0.csv"));
    fs::remove_all(a.out);
    fs::remove_all(b.out);
}

TEST(Run, SweepN)
{
    ExperimentConfig c;
    c.kind = ExperimentKind::sweep_n;
    c.n_values = {5, 12};
    c.replicates = 2;
    c.rounds = 40;
    c.tail = 10;
    c.schemes = {PowerScheme::uniform, PowerScheme::mean};
    c.algorithms = {Algorithm::game_rwm, Algorithm::hw, Algorithm::hw_bsearch, Algorithm::brute};
    c.out = scratch("sweep_n").string();
    const auto r = run_experiment(c);
    const auto text = slurp(fs::path(c.out) / "sweep_n.csv");
    EXPECT_NE(text.find("n,d_max,instance,algorithm,scheme,c,active_count,feasible\n"), std::string::npos);
    EXPECT_EQ(data_lines(text), 1u + 2 * 2 * 2 * 4);
    // brute force bounds every centralized schedule on the same instance
    for (const auto& row : r.summary)
        if (row.algorithm == "hw_bsearch")
            for (const auto& opt : r.summary)
                if (opt.algorithm == "brute" && opt.scheme == row.scheme && opt.point == row.point) {
                    EXPECT_LE(row.mean, opt.mean);
                }
    fs::remove_all(c.out);
}

TEST(Run, SweepDmaxPoints)
{
    ExperimentConfig c;
    c.kind = ExperimentKind::sweep_dmax;
    c.gen.n = 10;
    c.dmax_values = {2, 20};
    c.replicates = 2;
    c.rounds = 30;
    c.schemes = {PowerScheme::uniform};
    c.algorithms = {Algorithm::hw_bsearch};
    c.out = scratch("sweep_dmax").string();
    const auto r = run_experiment(c);
    ASSERT_EQ(r.summary.size(), 2u);
    EXPECT_EQ(r.summary[0].point, "2");
    EXPECT_EQ(r.summary[1].point, "20");
    fs::remove_all(c.out);
}

TEST(Run, TightTable)
{
    ExperimentConfig c;
    c.kind = ExperimentKind::tight;
    c.params.alpha = 2.0;
    c.params.beta = 1.0;
    c.rounds = 50;
    c.out = scratch("tight").string();
    run_experiment(c);
    const auto text = slurp(fs::path(c.out) / "tight.csv");
    EXPECT_NE(text.find("short_links,9\n"), std::string::npos);
    EXPECT_NE(text.find("short_set_feasible,1\n"), std::string::npos);
    fs::remove_all(c.out);
}

TEST(Run, VerifySuitePasses)
{
    ExperimentConfig c;
    c.kind = ExperimentKind::verify_suite;
    c.gen = {14, 10, 30, 1};
    c.replicates = 4;
    c.rounds = 250;
    c.out = scratch("verify").string();
    const auto r = run_experiment(c);
    EXPECT_FALSE(r.verify_failed) << slurp(fs::path(c.out) / "verify_log.csv");
    const auto text = slurp(fs::path(c.out) / "verify_log.csv");
    for (const char* check : {"half_set,", "separation,", "sandwich,", "failure_fraction,", "oracle_bound,"})
        EXPECT_NE(text.find(check), std::string::npos) << check;
    fs::remove_all(c.out);
}

TEST(Run, InstanceFileUsedWhenGiven)
{
    const auto dir = scratch("inst");
    fs::create_directories(dir);
    save(gen_linear_tight(9.0, 2.0), dir / "tight.json");
    ExperimentConfig c;
    c.instance_path = (dir / "tight.json").string();
    c.rounds = 20;
    c.replicates = 1;
    c.schemes = {PowerScheme::uniform};
    c.algorithms = {Algorithm::brute};
    c.out = (dir / "out").string();
    const auto r = run_experiment(c);
    ASSERT_EQ(r.summary.size(), 1u);
    EXPECT_GE(r.summary[0].mean, 9.0);
    fs::remove_all(dir);
}

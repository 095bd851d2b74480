#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "sinrcap/instances.hpp"
#include "sinrcap/sinr.hpp"

using namespace sinrcap;

namespace {

// Links laid out on a line; each entry is (sender x, receiver x).
Instance on_line(const std::vector<std::pair<double, double>>& links)
{
    std::vector<Point> pts;
    std::vector<LinkEnds> ends;
    for (const auto& [s, r] : links) {
        pts.push_back({s, 0});
        pts.push_back({r, 0});
        ends.push_back({pts.size() - 2, pts.size() - 1});
    }
    return Instance(MetricSpace::euclidean(pts), ends);
}

SinrParams params(double alpha, double beta, double noise = 0.0)
{
    SinrParams p;
    p.alpha = alpha;
    p.beta = beta;
    p.noise = noise;
    return p;
}

// Two unit links with both cross distances equal to 10.
Instance two_far_links() { return on_line({{0, 1}, {11, 10}}); }

} // namespace

TEST(AssignPower, Uniform)
{
    const auto inst = on_line({{0, 1}, {5, 7}, {20, 24}});
    const auto pa = assign_power(PowerScheme::uniform, inst, params(2, 1));
    for (double p : pa.powers)
        EXPECT_EQ(p, 1.0);
}

TEST(AssignPower, LinearNormalizedToLongest)
{
    const auto inst = on_line({{0, 1}, {5, 7}, {20, 24}});
    const auto pa = assign_power(PowerScheme::linear, inst, params(2, 1));
    EXPECT_DOUBLE_EQ(pa[0], 0.25);
    EXPECT_DOUBLE_EQ(pa[1], 0.5);
    EXPECT_DOUBLE_EQ(pa[2], 1.0);
}

TEST(AssignPower, MeanIsSquareRoot)
{
    const auto inst = on_line({{0, 1}, {20, 24}});
    const auto pa = assign_power(PowerScheme::mean, inst, params(2, 1));
    EXPECT_DOUBLE_EQ(pa[0], 0.5);
    EXPECT_DOUBLE_EQ(pa[1], 1.0);
}

TEST(AssignPower, ExplicitRangeChecked)
{
    const auto inst = on_line({{0, 1}, {20, 24}});
    const std::vector<double> ok{0.5, 1.0}, zero{0.0, 1.0}, big{0.5, 1.5}, short_list{1.0};
    EXPECT_NO_THROW(assign_power(PowerScheme::explicit_powers, inst, params(2, 1), ok));
    EXPECT_THROW(assign_power(PowerScheme::explicit_powers, inst, params(2, 1), zero), std::invalid_argument);
    EXPECT_THROW(assign_power(PowerScheme::explicit_powers, inst, params(2, 1), big), std::invalid_argument);
    EXPECT_THROW(assign_power(PowerScheme::explicit_powers, inst, params(2, 1), short_list), std::invalid_argument);
}

TEST(Params, Validation)
{
    EXPECT_THROW(params(0, 1).validate(), std::invalid_argument);
    EXPECT_THROW(params(2, 0).validate(), std::invalid_argument);
    EXPECT_THROW(params(2, 1, -1).validate(), std::invalid_argument);
    EXPECT_NO_THROW(params(2, 0.5).validate());  // beta < 1 is allowed
}

TEST(CFactor, ZeroNoiseIsBeta)
{
    const auto inst = on_line({{0, 1}, {5, 9}});
    const auto p = params(2, 1.7);
    const auto pa = assign_power(PowerScheme::uniform, inst, p);
    EXPECT_EQ(c_factor(0, inst, pa, p), 1.7);
    EXPECT_EQ(c_factor(1, inst, pa, p), 1.7);
}

TEST(CFactor, NoiseExample)
{
    const auto inst = on_line({{0, 1}});
    const auto p = params(2, 1, 0.5);
    const auto pa = assign_power(PowerScheme::uniform, inst, p);
    EXPECT_DOUBLE_EQ(c_factor(0, inst, pa, p), 2.0);
}

TEST(CFactor, DenominatorZeroIsInfeasible)
{
    const auto inst = on_line({{0, 1}});
    const auto p = params(2, 1, 1.0);
    const auto pa = assign_power(PowerScheme::uniform, inst, p);
    EXPECT_THROW(c_factor(0, inst, pa, p), LinkInfeasible);
}

TEST(CFactor, StrictNoiseMargin)
{
    const auto inst = on_line({{0, 1}});
    auto p = params(2, 1, 0.5);
    p.strict_noise_margin = true;
    const auto pa = assign_power(PowerScheme::uniform, inst, p);
    EXPECT_DOUBLE_EQ(c_factor(0, inst, pa, p), 2.0);  // exactly 2*beta is allowed
    p.noise = 0.6;
    EXPECT_THROW(c_factor(0, inst, pa, p), std::domain_error);
}

TEST(Affectance, SelfIsZero)
{
    const auto inst = two_far_links();
    const auto p = params(2, 1);
    const auto pa = assign_power(PowerScheme::uniform, inst, p);
    EXPECT_EQ(affectance(0, 0, inst, pa, p), 0.0);
    EXPECT_EQ(affectance(1, 1, inst, pa, p), 0.0);
}

TEST(Affectance, DirectFormula)
{
    // v = link 0 of length 1, s_w two units from r_v.
    const auto inst = on_line({{0, 1}, {3, 4}});
    const auto p = params(2, 1);
    const auto pa = assign_power(PowerScheme::uniform, inst, p);
    EXPECT_DOUBLE_EQ(affectance(1, 0, inst, pa, p), 0.25);
}

TEST(Affectance, ClippedAtOne)
{
    const auto inst = on_line({{0, 1}, {2, 3}});
    const auto p = params(2, 2);
    const auto pa = assign_power(PowerScheme::uniform, inst, p);
    EXPECT_DOUBLE_EQ(raw_affectance(1, 0, inst, pa, p), 2.0);
    EXPECT_EQ(affectance(1, 0, inst, pa, p), 1.0);
}

TEST(Affectance, BoundedModelClipsReceivedPower)
{
    // Link of length 0.5 under unit power: received power 4 is clipped to 1.
    const auto inst = on_line({{0, 0.5}, {2.5, 3}});
    auto p = params(2, 1);
    p.model = SignalModel::bounded;
    const auto pa = assign_power(PowerScheme::uniform, inst, p);
    // interference at r_0 from s_1 is 1/2^2 = 0.25, signal clipped to 1
    EXPECT_DOUBLE_EQ(affectance(1, 0, inst, pa, p), 0.25);
    p.model = SignalModel::unbounded;
    EXPECT_DOUBLE_EQ(affectance(1, 0, inst, pa, p), 0.0625);
}

TEST(Sinr, SingletonNoNoiseIsInfinite)
{
    const auto inst = two_far_links();
    const auto p = params(2, 1);
    const auto pa = assign_power(PowerScheme::uniform, inst, p);
    const std::vector<std::size_t> s{0};
    EXPECT_TRUE(std::isinf(sinr_ratio(0, s, inst, pa, p)));
}

TEST(Sinr, TwoFarLinks)
{
    const auto inst = two_far_links();
    const auto p = params(2, 1);
    const auto pa = assign_power(PowerScheme::uniform, inst, p);
    const std::vector<std::size_t> s{0, 1};
    EXPECT_NEAR(sinr_ratio(0, s, inst, pa, p), 100.0, 1e-9);
    EXPECT_NEAR(sinr_ratio(1, s, inst, pa, p), 100.0, 1e-9);
}

TEST(Sinr, NoiseEqualToSignalGivesOne)
{
    const auto inst = on_line({{0, 2}});
    const auto p = params(2, 1, 0.25);
    const auto pa = assign_power(PowerScheme::uniform, inst, p);
    const std::vector<std::size_t> s{0};
    EXPECT_DOUBLE_EQ(sinr_ratio(0, s, inst, pa, p), 1.0);
    EXPECT_TRUE(is_feasible(s, inst, pa, p));  // SINR == beta counts as success
}

TEST(Feasible, Singleton)
{
    const auto inst = two_far_links();
    for (double beta : {0.5, 1.0, 10.0, 1e6}) {
        const auto p = params(2, beta);
        const auto pa = assign_power(PowerScheme::uniform, inst, p);
        const std::vector<std::size_t> s{1};
        EXPECT_TRUE(is_feasible(s, inst, pa, p));
    }
}

TEST(Feasible, TwoFarLinksAndTheirLoad)
{
    const auto inst = two_far_links();
    const auto p = params(2, 1);
    const auto pa = assign_power(PowerScheme::uniform, inst, p);
    const std::vector<std::size_t> s{0, 1};
    EXPECT_TRUE(is_feasible(s, inst, pa, p));
    EXPECT_NEAR(affectance_load(0, s, inst, pa, p), 0.01, 1e-15);
    const std::vector<std::size_t> single{0};
    EXPECT_EQ(affectance_load(0, single, inst, pa, p), 0.0);
}

TEST(Load, MonotoneInSet)
{
    const auto inst = gen_random({12, 10, 30, 5});
    const Channel ch(inst, PowerScheme::uniform, params(2.1, 0.5));
    std::vector<std::size_t> set;
    std::vector<double> prev(inst.size(), 0.0);
    for (std::size_t add = 0; add < inst.size(); ++add) {
        set.push_back(add);
        for (std::size_t v = 0; v < inst.size(); ++v) {
            const double l = ch.load(v, set);
            EXPECT_GE(l, prev[v]);
            prev[v] = l;
        }
    }
}

TEST(Strengthen, TrivialCases)
{
    const auto inst = two_far_links();
    const auto p = params(2, 1);
    const auto pa = assign_power(PowerScheme::uniform, inst, p);
    const std::vector<std::size_t> single{0};
    EXPECT_EQ(strengthen(single, 9.0, inst, pa, p).groups.size(), 1u);

    // Far enough apart that mutual affectance underflows to zero.
    const Instance apart(MetricSpace::euclidean({{0, 0}, {1, 0}, {1e200, 0}, {1e200, 1}}), {{0, 1}, {2, 3}});
    const auto pa2 = assign_power(PowerScheme::uniform, apart, p);
    const std::vector<std::size_t> both{0, 1};
    EXPECT_EQ(affectance(0, 1, apart, pa2, p), 0.0);
    for (double t : {1.0, 9.0, 1e9})
        EXPECT_EQ(strengthen(both, t, apart, pa2, p).groups.size(), 1u);
}

TEST(Strengthen, RejectsInfeasibleInput)
{
    const auto inst = on_line({{0, 1}, {2, 3}});
    const auto p = params(2, 2);
    const auto pa = assign_power(PowerScheme::uniform, inst, p);
    const std::vector<std::size_t> both{0, 1};
    EXPECT_THROW(strengthen(both, 2.0, inst, pa, p), std::invalid_argument);
}

// Random feasible 20-link sets split into 3^alpha-signal groups.
TEST(Strengthen, GroupsAreDisjointCoveringSignalSets)
{
    const auto p = params(2.1, 0.5);
    const double t = std::pow(3.0, p.alpha);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto inst = gen_random({20, 10, 200, seed});
        const Channel ch(inst, PowerScheme::uniform, p);
        // grow a feasible set greedily in id order
        std::vector<std::size_t> set;
        for (std::size_t v = 0; v < inst.size(); ++v) {
            set.push_back(v);
            if (!ch.is_feasible(set))
                set.pop_back();
        }
        const auto part = ch.strengthen(set, t);
        std::vector<int> seen(inst.size(), 0);
        std::size_t total = 0;
        for (const auto& g : part.groups) {
            EXPECT_TRUE(ch.is_signal_set(g, t));
            EXPECT_LE(ch.max_load(g), 1.0 / t);
            for (std::size_t v : g)
                ++seen[v];
            total += g.size();
        }
        EXPECT_EQ(total, set.size());
        for (std::size_t v : set)
            EXPECT_EQ(seen[v], 1);
        EXPECT_EQ(part.target_count, static_cast<std::size_t>(std::ceil(2 * t / p.beta)));
    }
}

TEST(Properties, AffectanceBoundedAndSelfZero)
{
    std::mt19937_64 rng(3);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto inst = gen_random({15, 8, 25, seed});
        for (auto scheme : {PowerScheme::uniform, PowerScheme::linear, PowerScheme::mean}) {
            const Channel ch(inst, scheme, params(2.1, 0.5));
            for (std::size_t w = 0; w < inst.size(); ++w)
                for (std::size_t v = 0; v < inst.size(); ++v) {
                    const double a = ch.affectance(w, v);
                    EXPECT_GE(a, 0.0);
                    EXPECT_LE(a, 1.0);
                    if (w == v) {
                        EXPECT_EQ(a, 0.0);
                    }
                }
        }
    }
}

// SINR-form and load-form feasibility agree whenever no term is clipped.
TEST(Properties, FeasibilityDuality)
{
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int unclipped_cases = 0, clipped_cases = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 2 + trial % 6;
        const auto inst = gen_random({n, 6, 15, static_cast<std::uint64_t>(trial)});
        SinrParams p = params(1.5 + 2.0 * unit(rng), trial % 3 == 0 ? 0.5 : (trial % 3 == 1 ? 1.0 : 2.0));
        p.noise = trial % 2 ? 0.0 : 1e-4;
        std::vector<double> powers(n);
        for (auto& x : powers)
            x = 0.05 + 0.95 * unit(rng);
        const Channel ch(inst, assign_power(PowerScheme::explicit_powers, inst, p, powers), p);
        std::vector<std::size_t> set;
        for (std::size_t v = 0; v < n; ++v)
            if (ch.viable(v) && unit(rng) < 0.6)
                set.push_back(v);
        if (set.empty())
            continue;
        bool any_clipped = false;
        for (std::size_t v : set)
            for (std::size_t w : set)
                any_clipped |= ch.clipped(w, v);
        if (!any_clipped) {
            ++unclipped_cases;
            EXPECT_EQ(ch.is_feasible(set), ch.is_feasible_by_load(set)) << "trial " << trial;
        } else {
            ++clipped_cases;
            EXPECT_FALSE(ch.is_feasible(set)) << "trial " << trial;
            if (set.size() >= 3) {
                EXPECT_FALSE(ch.is_feasible_by_load(set)) << "trial " << trial;
            }
        }
    }
    EXPECT_GT(unclipped_cases, 100);
    EXPECT_GT(clipped_cases, 100);
}

TEST(Properties, AffectanceMonotoneInDistanceAndPower)
{
    const auto p = params(2.1, 1.0);
    double prev = 2.0;
    for (double gap : {1.5, 2.0, 4.0, 8.0, 16.0}) {
        const auto inst = on_line({{0, 1}, {1 + gap, 2 + gap}});
        const auto pa = assign_power(PowerScheme::uniform, inst, p);
        const double a = affectance(1, 0, inst, pa, p);
        EXPECT_LE(a, prev);
        prev = a;
    }
    const auto inst = on_line({{0, 1}, {4, 5}});
    prev = -1.0;
    for (double pw : {0.1, 0.2, 0.5, 1.0}) {
        const std::vector<double> powers{1.0, pw};
        const auto pa = assign_power(PowerScheme::explicit_powers, inst, p, powers);
        const double a = affectance(1, 0, inst, pa, p);
        EXPECT_GE(a, prev);
        prev = a;
    }
}

TEST(Properties, UniformAffectanceScaleInvariantWithoutNoise)
{
    const auto p = params(2.7, 0.8);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto inst = gen_random({10, 10, 40, seed});
        std::vector<Point> scaled;
        for (const auto& pt : inst.space().points())
            scaled.push_back({pt.x * 13.0, pt.y * 13.0});
        const Instance big(MetricSpace::euclidean(scaled), {inst.links().begin(), inst.links().end()});
        const Channel a(inst, PowerScheme::uniform, p), b(big, PowerScheme::uniform, p);
        for (std::size_t w = 0; w < inst.size(); ++w)
            for (std::size_t v = 0; v < inst.size(); ++v)
                EXPECT_NEAR(a.affectance(w, v), b.affectance(w, v), 1e-12);
    }
}

TEST(ChannelTest, MatchesIndependentSinr)
{
    const auto p = params(2.1, 0.5);
    const auto inst = gen_random({10, 10, 30, 99});
    const Channel ch(inst, PowerScheme::mean, p);
    const oracle::Physics ph{p.alpha, p.beta, p.noise};
    std::vector<std::size_t> all(inst.size());
    for (std::size_t i = 0; i < all.size(); ++i)
        all[i] = i;
    for (std::size_t v = 0; v < inst.size(); ++v)
        EXPECT_NEAR(ch.sinr(v, all) / oracle::sinr(inst, ch.power().powers, ph, v, all), 1.0, 1e-12);
}

TEST(ChannelTest, InfeasibleLinkNotViable)
{
    const auto inst = on_line({{0, 1}, {10, 12}});
    const auto p = params(2, 1, 0.5);  // link 1: signal 0.25 < beta*N
    const Channel ch(inst, PowerScheme::uniform, p);
    EXPECT_TRUE(ch.viable(0));
    EXPECT_FALSE(ch.viable(1));
    const std::vector<std::size_t> s{1};
    EXPECT_THROW(ch.load(1, s), LinkInfeasible);
    EXPECT_FALSE(ch.is_feasible(s));
}

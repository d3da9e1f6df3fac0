#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "trifree/analysis.hpp"
#include "trifree/cluster.hpp"
#include "trifree/params.hpp"
#include "trifree/samplers.hpp"

using namespace trifree;
using nlohmann::json;

namespace {
Graph cycle(int n)
{
    Graph g(n);
    for (int i = 0; i < n; ++i)
        g.add_edge(i, (i + 1) % n);
    return g;
}
Partition alternating(int n)
{
    std::vector<int> a;
    for (int v = 0; v < n; v += 2)
        a.push_back(v);
    return Partition::from_sets(n, a);
}
}  // namespace

TEST_CASE("window limit")
{
    CHECK(bipartite_window_limit(0) == doctest::Approx(std::exp(-std::sqrt(3.0) / 4)));
    CHECK(bipartite_window_limit(-40) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(bipartite_window_limit(10) < 1e-10);
}

TEST_CASE("bipartite distance certificate")
{
    auto d = bipartite_distance_certificate(cycle(6), alternating(6));
    CHECK(d.certified());
    CHECK(d.upper == 0);
    auto e = bipartite_distance_certificate(cycle(5), alternating(5));
    CHECK(e.certified());
    CHECK(e.upper == 1);
    // bounds bracket the exact value on random small graphs
    RngStream rng(81, 0, Stage::test);
    for (int i = 0; i < 200; ++i) {
        Graph g = random_triangle_free(12, 5, 0.7, rng);
        Partition p = Partition::from_mask(12, rng() & 0xfff);
        auto b = bipartite_distance_certificate(g, p);
        long long x = distance_to_bipartiteness(g);
        REQUIRE(b.lower <= x);
        REQUIRE(x <= b.upper);
    }
}

TEST_CASE("chromatic certificate")
{
    auto two = chromatic_certificate(cycle(8), alternating(8));
    CHECK(two.decided());
    CHECK(two.lower == 2);
    auto three = chromatic_certificate(cycle(7), alternating(7));
    CHECK(three.decided());
    CHECK(three.lower == 3);
    CHECK(chromatic_certificate(Graph(3), alternating(3)).lower == 1);
    RngStream rng(82, 0, Stage::test);
    for (int i = 0; i < 100; ++i) {
        Graph g = random_triangle_free(11, 6, 0.8, rng);
        Partition p = Partition::from_mask(11, rng() & 0x7ff);
        auto c = chromatic_certificate(g, p, 0);  // constructive bounds only
        int chi = chromatic_number(g).value;
        REQUIRE(c.lower <= chi);
        REQUIRE(chi <= c.upper);
    }
}

TEST_CASE("green colouring")
{
    // a bipartite graph with its bipartition is trivially green colourable
    CHECK(green_coloring_exists(cycle(6), alternating(6)));
    // C5 with a defect edge inside A: colour the defect endpoints red/green
    Partition p = Partition::from_sets(5, {0, 1, 3});
    CHECK(green_coloring_exists(cycle(5), p));
    // every valid green colouring is a proper 3-colouring, so none exists for
    // graphs with chromatic number 4
    Graph m(11);
    for (int i = 0; i < 5; ++i) {
        m.add_edge(i, (i + 1) % 5);
        m.add_edge(5 + i, (i + 1) % 5);
        m.add_edge(5 + i, (i + 4) % 5);
        m.add_edge(5 + i, 10);
    }
    for (std::uint64_t mask = 0; mask < (1u << 11); mask += 37)
        CHECK_FALSE(green_coloring_exists(m, Partition::from_mask(11, mask)));
}

TEST_CASE("max cut counting")
{
    auto c = count_max_cuts(cycle(6));
    CHECK(c.cut == 6);
    CHECK(c.count == 1);
    auto d = count_max_cuts(cycle(5));
    CHECK(d.cut == 4);
    CHECK(d.count == 5);
    Graph k(8);
    for (int u = 0; u < 4; ++u)
        for (int v = 4; v < 8; ++v)
            k.add_edge(u, v);
    auto e = count_max_cuts(k);
    CHECK(e.count == 1);
    CHECK(e.a_mask == 0x0f);
}

TEST_CASE("random regular bipartite graphs")
{
    RngStream rng(83);
    Graph g = random_regular_bipartite(40, 5, rng);
    for (int v = 0; v < 40; ++v)
        CHECK(g.degree(v) == 5);
    CHECK(is_bipartite(g));
    CHECK_THROWS(random_regular_bipartite(41, 2, rng));
}

// Fails at this size: isolated vertices tie max cuts and defect edges often
// let a single vertex move beat the planted cut (observed about 0.39).
TEST_CASE("capture uniqueness at n = 20" * doctest::should_fail())
{
    auto r = capture_uniqueness_experiment(20, 0.6, 500, 5);
    CHECK(r.replicas.size() == 500);
    CHECK(r.aggregate["planted_unique_max"]["frequency"].get<double>() >= 0.95);
    // empty crossing graph is never an expander
    Partition p = alternating(20);
    CHECK_FALSE(is_expander(Graph(20), p, 0.6).value());
}

TEST_CASE("bipartite distance in the vanishing-defect regime")
{
    int n = 400;
    std::uint64_t m = std::uint64_t(m_at_c(n, 2.5));
    auto r = bipartite_distance_experiment(n, m, 200, 9);
    CHECK(r.replicas.size() == 200);
    double mean = r.aggregate["binomial_mean"].get<double>();
    CHECK(mean < 0.05);
    CHECK(r.aggregate["p_bipartite"]["frequency"].get<double>() >= 0.9);
}

TEST_CASE("bipartite distance report is reproducible")
{
    int n = 300;
    std::uint64_t m = std::uint64_t(m_at_c(n, 1.4));
    auto a = bipartite_distance_experiment(n, m, 30, 4);
    auto b = bipartite_distance_experiment(n, m, 30, 4);
    CHECK(a.aggregate == b.aggregate);
    CHECK(a.replicas == b.replicas);
    for (auto& o : a.replicas)
        CHECK(o["seed"] == 4);
}

TEST_CASE("chromatic experiment classifies every replica or counts it undecided")
{
    int n = 300;
    auto r = chromatic_experiment(n, std::uint64_t(m_at_c(n, 1.6)), 20, 3);
    std::uint64_t total = r.aggregate["chi2"]["count"].get<std::uint64_t>() +
                          r.aggregate["chi3"]["count"].get<std::uint64_t>() +
                          r.aggregate["chi4"]["count"].get<std::uint64_t>() +
                          r.aggregate["chi_other"].get<std::uint64_t>() +
                          r.aggregate["undecided"].get<std::uint64_t>();
    CHECK(total == 20);
    CHECK(r.aggregate["band"] == "chi3");
}

TEST_CASE("giant component targets")
{
    GiantOptions o;
    o.which = GiantCase::critical;
    CHECK(giant_target_q0(o, 1000) == doctest::Approx(2.0 / 1000 + 1.0 / std::pow(1000.0, 4.0 / 3)));
    o.which = GiantCase::linear;
    o.c = 3;
    CHECK(giant_target_q0(o, 1000) == doctest::Approx(0.003));
    o.which = GiantCase::connectivity;
    o.above_threshold = false;
    CHECK(giant_target_q0(o, 1000) == doctest::Approx(0.7 * 2 * std::log(1000.0) / 1000));
}

TEST_CASE("linear giant component")
{
    GiantOptions o;
    o.which = GiantCase::linear;
    o.c = 4;
    o.ns = {400};
    auto r = giant_component_experiment(o, 5, 2);
    CHECK(r.aggregate["per_n"][0]["largest_over_side"].get<double>() > 0.3);
}

TEST_CASE("crossing LCLT bookkeeping")
{
    int n = 2000;
    std::uint64_t m = std::uint64_t(std::llround(double(m_at_c(n, 1.2))));
    auto r = crossing_lclt_experiment(n, m, 3, 20000, 1);
    CHECK(r.replicas.size() == 3);
    CHECK(r.aggregate["hit_frequency"]["trials"].get<std::uint64_t>() <= 60000);
    int checked = 0;
    for (auto& o : r.replicas)
        if (!o.contains("skipped")) {
            ++checked;
            CHECK(std::abs(o["mean_dev_sd"].get<double>()) < 3);
            CHECK(o["var_over_ab_lambda"].get<double>() == doctest::Approx(1.0).epsilon(0.2));
            CHECK(o["variance"].get<double>() ==
                  doctest::Approx(o["predicted_variance"].get<double>()).epsilon(0.05));
        }
    CHECK(checked > 0);
}

TEST_CASE("config validation")
{
    CHECK_THROWS_AS(run_experiment(json::array()), ConfigError);
    CHECK_THROWS_AS(run_experiment(json{{"experiment", "nope"}, {"seed", 1}}), ConfigError);
    CHECK_THROWS_AS(run_experiment(json{{"experiment", "chromatic"}, {"n", 100}}), ConfigError);
    CHECK_THROWS_AS(run_experiment(json{{"experiment", "chromatic"}, {"seed", 1}, {"n", 100},
                                        {"m", 500}, {"replicas", 1}, {"bogus", 1}}),
                    ConfigError);
    CHECK_THROWS_AS(run_experiment(json{{"experiment", "chromatic"}, {"seed", -1}, {"n", 100},
                                        {"m", 500}, {"replicas", 1}}),
                    ConfigError);
    // below the subcritical floor
    CHECK_THROWS_AS(run_experiment(json{{"experiment", "bipartite_distance"}, {"seed", 1},
                                        {"n", 100}, {"m", 100}, {"replicas", 1}}),
                    RegimeError);
    auto r = run_experiment(json{{"experiment", "bipartite_distance"}, {"seed", 1}, {"n", 100},
                                 {"m", 100}, {"replicas", 2}, {"force", true}});
    CHECK(r.replicas.size() == 2);
}

TEST_CASE("report files")
{
    auto r = run_experiment(json{{"experiment", "hardcore_lclt"}, {"seed", 1}, {"n", 200},
                                 {"degree", 3}, {"lambda", 0.01}, {"draws", 1000},
                                 {"replicas", 1}});
    auto dir = std::filesystem::temp_directory_path() / "trifree_report_test";
    std::filesystem::remove_all(dir);
    write_report(r, dir.string());
    std::ifstream csv(dir / "aggregate.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "key,value,log10_value");
    std::ifstream js(dir / "report.json");
    json j = json::parse(js);
    CHECK(j["aggregate"] == r.aggregate);
    std::ifstream jl(dir / "replicas.jsonl");
    std::string line;
    int lines = 0;
    while (std::getline(jl, line))
        ++lines;
    CHECK(lines == 1);
    std::filesystem::remove_all(dir);
}

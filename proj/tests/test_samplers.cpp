#include <algorithm>
#include <cmath>
#include <map>

#include "doctest.h"
#include "trifree/oracle.hpp"
#include "trifree/samplers.hpp"

using namespace trifree;

namespace {
void check_outcome(const SampleOutcome& s, int n)
{
    REQUIRE(s.graph.n() == n);
    REQUIRE(s.partition.n() == n);
    if (s.fallback_used)
        return;
    REQUIRE(is_triangle_free(s.graph));
    // graph = S u T u E_cr
    REQUIRE(s.graph.num_edges() == s.s.num_edges() + s.t.num_edges() + s.crossing.size());
    const auto& av = s.partition.a_vertices();
    const auto& bv = s.partition.b_vertices();
    for (auto [u, v] : s.s.edges())
        REQUIRE(s.graph.has_edge(av[u], av[v]));
    for (auto [u, v] : s.t.edges())
        REQUIRE(s.graph.has_edge(bv[u], bv[v]));
    // crossing pairs form an independent set of S x T
    std::vector<std::int64_t> ids;
    for (auto [x, y] : s.crossing) {
        REQUIRE(s.partition.in_a(x));
        REQUIRE_FALSE(s.partition.in_a(y));
        REQUIRE(s.graph.has_edge(x, y));
        ids.push_back(std::int64_t(s.partition.local_index(x)) * s.partition.b() +
                      s.partition.local_index(y));
    }
    std::sort(ids.begin(), ids.end());
    for (auto [u, v] : s.s.edges())
        for (int j = 0; j < s.partition.b(); ++j)
            REQUIRE_FALSE((std::binary_search(ids.begin(), ids.end(), std::int64_t(u) * s.partition.b() + j) &&
                           std::binary_search(ids.begin(), ids.end(), std::int64_t(v) * s.partition.b() + j)));
    for (auto [u, v] : s.t.edges())
        for (int i = 0; i < s.partition.a(); ++i)
            REQUIRE_FALSE((std::binary_search(ids.begin(), ids.end(), std::int64_t(i) * s.partition.b() + u) &&
                           std::binary_search(ids.begin(), ids.end(), std::int64_t(i) * s.partition.b() + v)));
}
}  // namespace

TEST_CASE("theta partitions")
{
    RngStream rng(51);
    std::map<int, int> hist;
    for (int i = 0; i < 20000; ++i) {
        Partition p = sample_theta_lambda(200, 0.05L, rng);
        REQUIRE(p.a() + p.b() == 200);
        ++hist[p.t()];
    }
    int mode = std::max_element(hist.begin(), hist.end(), [](auto& a, auto& b) {
                   return a.second < b.second;
               })->first;
    CHECK(mode == 0);
    double asym = 0;
    for (auto [t, c] : hist)
        asym += std::abs(c - (hist.count(-t) ? hist[-t] : 0));
    CHECK(asym / 2 / 20000 < 0.03);
}

TEST_CASE("xi sampler matches the truncated law at lambda = 0.02")
{
    long double l = 0.02L;
    auto pmf = xi_pmf(l);
    int T = xi_truncation(l);
    REQUIRE(int(pmf.size()) == 2 * T + 1);
    long double tot = 0;
    for (auto p : pmf)
        tot += p;
    CHECK(double(tot) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(T == int(std::ceil(std::sqrt(64 * std::log(2.0L) / std::log1p(l)))));
    CHECK(std::pow(1 + l, -(long double)(T - 1) * (T - 1)) >= std::pow(2.0L, -64));
    RngStream rng(52);
    std::vector<long long> counts(pmf.size(), 0);
    const int reps = 1000000;
    for (int i = 0; i < reps; ++i) {
        int t = sample_xi(l, rng);
        REQUIRE(std::abs(t) <= T);
        ++counts[t + T];
    }
    double tv = 0;
    for (std::size_t k = 0; k < pmf.size(); ++k)
        tv += std::abs(double(counts[k]) / reps - double(pmf[k]));
    CHECK(tv / 2 <= 0.005);
}

TEST_CASE("theta offsets are clamped for small n")
{
    auto law = theta_offset_pmf(4, 0.01L);
    long double tot = 0;
    for (auto [t, p] : law) {
        CHECK(t >= -2);
        CHECK(t <= 2);
        tot += p;
    }
    CHECK(double(tot) == doctest::Approx(1.0));
}

TEST_CASE("Erdos-Renyi defects")
{
    RngStream rng(53);
    CHECK(sample_er(7, 0.0, rng).num_edges() == 0);
    CHECK(sample_er(7, 1.0, rng).num_edges() == 21);
    std::vector<int> hits(10, 0);
    const int reps = 100000;
    for (int i = 0; i < reps; ++i)
        for (auto [u, v] : sample_er(5, 0.5, rng).edges())
            ++hits[pair_index(5, u, v)];
    for (int h : hits) {
        CHECK(double(h) / reps >= 0.49);
        CHECK(double(h) / reps <= 0.51);
    }
}

TEST_CASE("conditioned ERG respects its state space")
{
    RngStream rng(54);
    ChainStats st;
    Graph g = sample_cond_erg(30, 0.3, 0.1, rng, 20000, 0, &st);
    CHECK(is_triangle_free(g));
    CHECK(g.max_degree() <= erg_degree_cap(0.3, 30));
    CHECK(st.proposals == 20000);
    CHECK(st.accepted > 0);
    CHECK(default_sweeps(10) == 5000);
}

TEST_CASE("ERG without tilt is the conditioned Erdos-Renyi law")
{
    // psi = 0: weight (q/(1-q))^|G| on triangle-free graphs; degree cap is slack
    double q = 0.3;
    auto law = exact_cerg_pmf(4, q, 0.0, 0);
    long double z = 0;
    std::map<std::uint64_t, long double> want;
    for (std::uint64_t m = 0; m < 64; ++m) {
        Graph g = graph_from_edge_mask(4, m);
        if (!is_triangle_free(g))
            continue;
        want[m] = std::pow((long double)q / (1 - q), (long double)g.num_edges());
        z += want[m];
    }
    for (auto& [k, v] : want)
        v /= z;
    MaskPmf w(want.begin(), want.end());
    CHECK(double(tv_distance(law, w)) < 1e-15);

    RngStream rng(55);
    std::map<std::uint64_t, long double> emp;
    const int reps = 20000;
    for (int i = 0; i < reps; ++i)
        emp[edge_mask(sample_cond_erg(4, q, 0.0, rng, default_sweeps(4)))] += 1.0L / reps;
    MaskPmf e(emp.begin(), emp.end());
    CHECK(double(tv_distance(e, law)) < 0.05);
}

TEST_CASE("fallback graph")
{
    Graph g = fallback_graph(8, 10);
    CHECK(g.num_edges() == 10);
    CHECK(is_triangle_free(g));
    CHECK(is_bipartite(g));
    CHECK(fallback_graph(8, 16).num_edges() == 16);
}

TEST_CASE("mu_m1 outcomes have exactly m edges")
{
    for (auto [n, m] : {std::pair<int, std::uint64_t>{8, 10}, {60, 500}, {200, 4000}}) {
        for (std::uint64_t r = 0; r < 20; ++r) {
            RngStream rng(56, r);
            auto s = sample_mu_m1(n, m, rng);
            check_outcome(s, n);
            REQUIRE(s.graph.num_edges() == m);
            if (s.fallback_used)
                REQUIRE(s.graph == fallback_graph(n, m));
        }
    }
}

TEST_CASE("mu_m2 outcomes")
{
    for (std::uint64_t r = 0; r < 10; ++r) {
        RngStream rng(57, r);
        SamplerOptions o;
        o.sweeps = 20000;
        auto s = sample_mu_m2(60, 500, rng, o);
        check_outcome(s, 60);
        if (!s.fallback_used)
            REQUIRE(s.graph.num_edges() == 500);
    }
}

TEST_CASE("mu_lambda1 at zero activity is empty")
{
    RngStream rng(58);
    for (int i = 0; i < 5; ++i) {
        auto s = sample_mu_lambda1(30, 0, rng);
        CHECK(s.graph.num_edges() == 0);
        auto t = sample_mu_lambda2(30, 0, rng);
        CHECK(t.graph.num_edges() == 0);
    }
}

TEST_CASE("mu_lambda1 edge count concentrates")
{
    int n = 2000;
    // 1.2 x the critical activity keeps the defect graphs subcritical
    long double l = 1.2L * std::sqrt(std::log((long double)n) / n);
    double target = double(l) * n * n / 4;
    int runs = 100, near = 0;
    double s1 = 0, s2 = 0;
    for (int r = 0; r < runs; ++r) {
        RngStream rng(59, r);
        auto s = sample_mu_lambda1(n, l, rng);
        REQUIRE(is_triangle_free(s.graph));
        double e = double(s.graph.num_edges());
        near += std::abs(e / target - 1) <= 0.15;
        s1 += e;
        s2 += e * e;
    }
    double mean = s1 / runs, sd = std::sqrt(s2 / runs - mean * mean);
    CHECK(near == runs);
    // fluctuations on the binomial scale, far below the mean
    CHECK(sd <= 3 * std::sqrt(target));
}

TEST_CASE("positive tilt raises the defect P2 count")
{
    // mild tilt at the mu_m2 edge scale for n = 2000; at the full psi of that
    // n the chain runs away to the degree cap
    int n = 2000, a = 1000;
    std::uint64_t m = std::uint64_t(std::ceil(double(m_at_c(n, 1.0))));
    double q = double(global_params_m(n, m).q2), psi = 0.05;
    double excess = 0;
    int runs = 6;
    for (int r = 0; r < runs; ++r) {
        RngStream rng(60, r);
        Graph s = sample_cond_erg(a, q, psi, rng, default_sweeps(a), n);
        REQUIRE(is_triangle_free(s));
        // E[P2] for G(a, e): a (a-1)(a-2)/2 * e(e-1) / (N(N-1))
        double e = double(s.num_edges()), pairs = double(a) * (a - 1) / 2;
        double er = double(a) * (a - 1) * (a - 2) / 2 * e * (e - 1) / (pairs * (pairs - 1));
        excess += double(subgraph_counts(s).p2) - er;
    }
    CHECK(excess > 0);
}

TEST_CASE("sampling is deterministic")
{
    for (Model m : {Model::mu_m1, Model::mu_lambda1}) {
        auto run = [&](std::uint64_t seed) {
            RngStream rng(seed, 3);
            auto s = m == Model::mu_m1 ? sample_mu_m1(40, 200, rng) : sample_mu_lambda1(40, 0.2L, rng);
            return outcome_to_json(s).dump();
        };
        CHECK(run(7) == run(7));
        CHECK(run(7) != run(8));
    }
}

TEST_CASE("model names round trip")
{
    for (Model m : {Model::mu_m1, Model::mu_m2, Model::mu_lambda1, Model::mu_lambda2, Model::cerg,
                    Model::sandwich})
        CHECK(parse_model(model_name(m)) == m);
    CHECK_THROWS(parse_model("nope"));
}

TEST_CASE("sandwich rates and marginals")
{
    double n = 1000;
    double m = std::ceil(13.0 / 56 * std::pow(n, 1.5) * std::sqrt(std::log(n)));
    auto gp = global_params_m(n, m);
    auto rates = sandwich_rates(gp);
    CHECK(rates.q_lower <= rates.q_middle);
    CHECK(rates.q_middle <= rates.q_upper);
    CHECK(rates.q_lower == doctest::Approx(double(gp.q2) * (1 - std::pow(n, -0.4))));
    CHECK(sandwich_middle_prob(rates, rates.degree_cap, 0) == 0);
    CHECK(sandwich_middle_prob(rates, 0, 0) == doctest::Approx(rates.q_middle));

    int side = 500, runs = 10;
    double edges = 0;
    for (int r = 0; r < runs; ++r) {
        RngStream rng(61, r, Stage::sandwich);
        auto t = sandwich_sample(side, gp, rng);
        REQUIRE(is_triangle_free(t.lower));
        REQUIRE(is_triangle_free(t.middle));
        REQUIRE(is_triangle_free(t.upper));
        REQUIRE(t.middle.max_degree() <= t.degree_cap);
        edges += double(t.lower.num_edges());
    }
    double pairs = double(side) * (side - 1) / 2 * runs;
    double ql = rates.q_lower;
    double density = edges / pairs;
    double sigma = std::sqrt(ql / pairs);
    CHECK(density <= ql + 3 * sigma);
    CHECK(density >= ql * (1 - 2 * side * ql * ql) - 3 * sigma);
}

#include <algorithm>
#include <cmath>
#include <map>

#include "doctest.h"
#include "trifree/cluster.hpp"
#include "trifree/hardcore.hpp"
#include "trifree/oracle.hpp"

using namespace trifree;

namespace {
Graph cycle(int n)
{
    Graph g(n);
    for (int i = 0; i < n; ++i)
        g.add_edge(i, (i + 1) % n);
    return g;
}
Graph cube()
{
    Graph g(8);
    for (int v = 0; v < 8; ++v)
        for (int b = 0; b < 3; ++b)
            if (v < (v ^ (1 << b)))
                g.add_edge(v, v ^ (1 << b));
    return g;
}
template <class Set>
bool independent(const Graph& g, const Set& s)
{
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j)
            if (g.has_edge(int(s[i]), int(s[j])))
                return false;
    return true;
}
}  // namespace

TEST_CASE("zero activity gives the empty set")
{
    RngStream rng(41);
    CHECK(sample_hardcore(cycle(5), 0, rng).empty());
    CHECK(sample_hardcore_rejection(cycle(5), 0, rng).empty());
    CHECK(HardcorePlan::for_graph(cycle(6)).sample(0, rng).empty());
}

TEST_CASE("empty graph gives product Bernoulli")
{
    RngStream rng(42);
    Graph g(10);
    long double l = 0.25L;
    std::vector<int> hits(10, 0);
    int reps = 40000;
    for (int i = 0; i < reps; ++i)
        for (int v : sample_hardcore(g, l, rng))
            ++hits[v];
    double p = double(l / (1 + l));
    double sd = std::sqrt(p * (1 - p) / reps);
    for (int h : hits)
        CHECK(std::abs(double(h) / reps - p) < 5 * sd);
}

TEST_CASE("hard-core samples match the exact Gibbs law on the cube")
{
    Graph g = cube();
    long double l = 0.1L;
    auto exact = exact_hardcore_pmf(g, l);
    for (int mode = 0; mode < 2; ++mode) {
        RngStream rng(43, mode);
        std::map<std::uint64_t, long double> emp;
        int reps = 100000;
        for (int i = 0; i < reps; ++i) {
            auto s = mode == 0 ? sample_hardcore(g, l, rng) : sample_hardcore_rejection(g, l, rng);
            REQUIRE(independent(g, s));
            std::uint64_t mask = 0;
            for (int v : s)
                mask |= 1ull << v;
            emp[mask] += 1.0L / reps;
        }
        MaskPmf e(emp.begin(), emp.end());
        CHECK(double(tv_distance(e, exact)) <= 0.02);
    }
}

TEST_CASE("rejection cap raises instead of biasing")
{
    RngStream rng(44);
    Graph k(30);
    for (int u = 0; u < 30; ++u)
        for (int v = u + 1; v < 30; ++v)
            k.add_edge(u, v);
    CHECK_THROWS_AS(sample_hardcore_rejection(k, 5.0L, rng, 10), RejectionCapError);
}

TEST_CASE("fixed-size sampling")
{
    RngStream rng(45);
    auto z = sample_hardcore_fixed_size(cycle(5), 0.1L, 0, rng);
    REQUIRE(z.has_value());
    CHECK(z->empty());
    auto all = sample_hardcore_fixed_size(Graph(6), 0.5L, 6, rng);
    REQUIRE(all.has_value());
    CHECK(all->size() == 6);

    int diag02 = 0, reps = 10000;
    for (int i = 0; i < reps; ++i) {
        auto s = sample_hardcore_fixed_size(cycle(4), 0.3L, 2, rng);
        REQUIRE(s.has_value());
        REQUIRE(s->size() == 2);
        REQUIRE(independent(cycle(4), *s));
        diag02 += (*s)[0] == 0;
    }
    double f = double(diag02) / reps;
    CHECK(f >= 0.47);
    CHECK(f <= 0.53);
    // infeasible size: the cap runs out
    CHECK_FALSE(sample_hardcore_fixed_size(cycle(4), 0.3L, 3, rng, 1.0).has_value());
}

TEST_CASE("uniform independent set of a given size")
{
    RngStream rng(46);
    BitGraph c6 = to_bits(cycle(6));
    std::map<std::vector<int>, int> seen;
    for (int i = 0; i < 20000; ++i) {
        auto s = uniform_independent_set(c6, 3, rng);
        REQUIRE(s.size() == 3);
        ++seen[s];
    }
    CHECK(seen.size() == 2);
    for (auto& [s, c] : seen)
        CHECK(std::abs(c - 10000) < 400);
}

TEST_CASE("product plans stay inside the product graph")
{
    RngStream rng(47, 0, Stage::test);
    for (int i = 0; i < 30; ++i) {
        Graph s = random_triangle_free(5, 3, 0.6, rng);
        Graph t = random_triangle_free(6, 3, 0.6, rng);
        Graph p = cartesian_product(s, t);
        auto plan = HardcorePlan::for_product(s, t);
        CHECK(plan.vertex_count() == 30);
        for (int j = 0; j < 20; ++j) {
            auto set = plan.sample(0.4L, rng);
            REQUIRE(independent(p, set));
            REQUIRE(std::is_sorted(set.begin(), set.end()));
        }
        // exact size law equals the one from the product's polynomial
        auto pmf = plan.size_pmf(0.4L);
        IndPoly poly = independence_polynomial(p);
        long double z = eval_poly(poly, 0.4L), pw = 1;
        for (std::size_t k = 0; k < poly.size(); ++k, pw *= 0.4L) {
            long double want = poly[k] * pw / z;
            long double got = k < pmf.size() ? pmf[k] : 0;
            REQUIRE(double(std::abs(got - want)) < 1e-12);
        }
    }
}

TEST_CASE("acceptance rate matches the cluster-expansion ratio")
{
    // P(product Bernoulli set is independent) = Z_G / (1+lambda)^n
    Graph g = cube();
    long double l = 1.0L / (4 * std::exp(1.0L) * 3);
    RngStream rng(48);
    HardcoreStats st;
    int reps = 20000;
    for (int i = 0; i < reps; ++i)
        sample_hardcore_rejection(g, l, rng, kDefaultRejectionCap, &st);
    double rate = double(reps) / double(st.attempts);
    auto tl = truncated_log_Z(g, l, 3);
    double lower = std::exp(double(third_order_log_Z_ratio(g, l) - tl.certified_tail));
    double sd = std::sqrt(rate * (1 - rate) / double(st.attempts));
    CHECK(rate >= lower - 4 * sd);
    CHECK(rate == doctest::Approx(std::exp(double(exact_log_Z_ratio(g, l)))).epsilon(0.02));
}

TEST_CASE("quasirandomness of hard-core samples on products")
{
    RngStream rng(49, 0, Stage::test);
    Graph s = random_triangle_free(64, 3, 0.5, rng);
    Graph t = random_triangle_free(64, 3, 0.5, rng);
    int delta = s.max_degree() + t.max_degree();
    long double l = 1.0L / (16 * std::exp(2.0L) * std::max(delta, 1));
    auto plan = HardcorePlan::for_product(s, t);
    std::uint64_t N = plan.vertex_count();
    std::uint64_t u_size = std::uint64_t(std::ceil(5 / l));
    REQUIRE(u_size <= N);
    int reps = 400;
    for (int k = 0; k < 20; ++k) {
        auto u = sample_distinct(rng, N, u_size);
        std::vector<char> in_u(N, 0);
        for (auto x : u)
            in_u[x] = 1;
        int big = 0;
        for (int r = 0; r < reps; ++r) {
            std::size_t hit = 0;
            for (auto v : plan.sample(l, rng))
                hit += in_u[v];
            big += double(hit) >= 5 * double(l) * double(u_size);
        }
        CHECK(double(big) / reps <= 2 * std::exp(-double(l) * double(u_size)));
    }
}

TEST_CASE("attempt cap scales with the graph")
{
    CHECK(fixed_size_attempt_cap(100, 0.1L, 1000) < fixed_size_attempt_cap(10000, 0.1L, 1000));
    CHECK(fixed_size_attempt_cap(100, 0.1L, 10) < fixed_size_attempt_cap(100, 0.1L, 1000));
}

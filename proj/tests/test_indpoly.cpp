#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "trifree/canon.hpp"
#include "trifree/indpoly.hpp"
#include "trifree/rng.hpp"

using namespace trifree;

namespace {
// independent sets by brute force over vertex subsets
IndPoly brute_indpoly(const Graph& g)
{
    int n = g.n();
    IndPoly p(n + 1, 0);
    for (std::uint64_t s = 0; s < (1ull << n); ++s) {
        bool ok = true;
        for (auto [u, v] : g.edges())
            if (((s >> u) & 1) && ((s >> v) & 1)) {
                ok = false;
                break;
            }
        if (ok)
            ++p[__builtin_popcountll(s)];
    }
    while (p.size() > 1 && p.back() == 0)
        p.pop_back();
    return p;
}
IndPoly trimmed(IndPoly p)
{
    while (p.size() > 1 && p.back() == 0)
        p.pop_back();
    return p;
}
}  // namespace

TEST_CASE("independence polynomial of small graphs")
{
    CHECK(trimmed(independence_polynomial(Graph(3))) == IndPoly{1, 3, 3, 1});
    Graph e(2);
    e.add_edge(0, 1);
    CHECK(trimmed(independence_polynomial(e)) == IndPoly{1, 2});
    Graph c4(4);
    for (int i = 0; i < 4; ++i)
        c4.add_edge(i, (i + 1) % 4);
    IndPoly p = independence_polynomial(c4);
    CHECK(trimmed(p) == IndPoly{1, 4, 2});
    CHECK(eval_poly(p, Rational(1)) == 7);
}

TEST_CASE("independence polynomial matches brute force")
{
    RngStream rng(21, 0, Stage::test);
    for (int i = 0; i < 200; ++i) {
        int n = 1 + int(rng.below(14));
        Graph g(n);
        double p = rng.uniform();
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (rng.bernoulli(p))
                    g.add_edge(u, v);
        REQUIRE(trimmed(independence_polynomial(g)) == brute_indpoly(g));
        REQUIRE(trimmed(independence_polynomial(to_bits(g))) == brute_indpoly(g));
    }
}

TEST_CASE("sub-mask cache agrees with induced subgraphs")
{
    RngStream rng(22, 0, Stage::test);
    Graph g = random_triangle_free(12, 5, 0.7, rng);
    IndPolyCache cache(to_bits(g));
    for (int i = 0; i < 50; ++i) {
        std::uint64_t mask = rng() & ((1ull << 12) - 1);
        std::vector<int> vs;
        for (int v = 0; v < 12; ++v)
            if ((mask >> v) & 1)
                vs.push_back(v);
        REQUIRE(trimmed(cache(mask)) == brute_indpoly(induced_subgraph(g, vs)));
    }
}

TEST_CASE("polynomial helpers")
{
    IndPoly a{1, 2}, b{1, 3, 1};
    CHECK(poly_mul(a, b) == IndPoly{1, 5, 7, 2});
    // disjoint union multiplies polynomials
    Graph e(2);
    e.add_edge(0, 1);
    Graph two(4);
    two.add_edge(0, 1);
    two.add_edge(2, 3);
    CHECK(trimmed(independence_polynomial(two)) ==
          trimmed(poly_mul(independence_polynomial(e), independence_polynomial(e))));
    CHECK(eval_poly(b, 0.5L) == doctest::Approx(2.75));
    CHECK(double(log_eval_poly(b, std::log(0.5L))) == doctest::Approx(std::log(2.75)));
    // large argument stays finite
    CHECK(std::isfinite(double(log_eval_poly(b, 2000.0L))));
    CHECK(double(log_eval_poly(b, 2000.0L)) == doctest::Approx(4000.0).epsilon(1e-9));
}

TEST_CASE("canonical masks on whole class")
{
    // C5 has 12 labellings; all map to one key
    std::vector<int> perm{0, 1, 2, 3, 4};
    std::set<std::uint64_t> keys, labelled;
    do {
        Graph g(5);
        for (int i = 0; i < 5; ++i)
            g.add_edge(perm[i], perm[(i + 1) % 5]);
        labelled.insert(edge_mask(g));
        keys.insert(canonical_edge_mask(5, edge_mask(g)));
    } while (std::next_permutation(perm.begin(), perm.end()));
    CHECK(labelled.size() == 12);
    CHECK(keys.size() == 1);
}

#include <algorithm>
#include <sstream>

#include "doctest.h"
#include "trifree/canon.hpp"
#include "trifree/graph.hpp"
#include "trifree/graph_io.hpp"
#include "trifree/rng.hpp"

using namespace trifree;

namespace {
Graph cycle(int n)
{
    Graph g(n);
    for (int i = 0; i < n; ++i)
        g.add_edge(i, (i + 1) % n);
    return g;
}
Graph complete(int n)
{
    Graph g(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            g.add_edge(u, v);
    return g;
}
Graph path(int n)
{
    Graph g(n);
    for (int i = 0; i + 1 < n; ++i)
        g.add_edge(i, i + 1);
    return g;
}
Graph star(int leaves)
{
    Graph g(leaves + 1);
    for (int i = 1; i <= leaves; ++i)
        g.add_edge(0, i);
    return g;
}
Graph disjoint(const Graph& a, const Graph& b)
{
    Graph g(a.n() + b.n());
    for (auto [u, v] : a.edges())
        g.add_edge(u, v);
    for (auto [u, v] : b.edges())
        g.add_edge(a.n() + u, a.n() + v);
    return g;
}
}  // namespace

TEST_CASE("graph invariants")
{
    Graph g(5);
    CHECK(g.add_edge(0, 1));
    CHECK_FALSE(g.add_edge(1, 0));
    CHECK_THROWS(g.add_edge(2, 2));
    CHECK_THROWS(g.add_edge(0, 5));
    g.add_edge(1, 2);
    CHECK(g.num_edges() == 2);
    CHECK(g.max_degree() == 2);
    CHECK(g.has_edge(2, 1));
    CHECK(g.remove_edge(0, 1));
    CHECK_FALSE(g.has_edge(0, 1));
    CHECK(g.degree(0) == 0);
    // adjacency and edge views agree
    std::size_t deg_sum = 0;
    for (int v = 0; v < g.n(); ++v)
        deg_sum += g.degree(v);
    CHECK(deg_sum == 2 * g.num_edges());
}

TEST_CASE("triangle detection")
{
    CHECK_FALSE(is_triangle_free(complete(3)));
    CHECK(is_triangle_free(cycle(5)));
    Graph k2 = path(2);
    CHECK(is_triangle_free(cartesian_product(k2, k2)));
    CHECK_FALSE(is_triangle_free(to_bits(complete(4))));
}

TEST_CASE("subgraph counts on small graphs")
{
    CHECK(subgraph_counts(path(3)) == SubgraphCounts{2, 1, 0, 0, 0});
    CHECK(subgraph_counts(star(3)) == SubgraphCounts{3, 3, 0, 1, 0});
    CHECK(subgraph_counts(cycle(4)) == SubgraphCounts{4, 4, 4, 0, 1});
}

TEST_CASE("subgraph counts agree with brute force")
{
    RngStream rng(11, 0, Stage::test);
    for (int i = 0; i < 200; ++i) {
        int n = 2 + int(rng.below(7));
        Graph g(n);
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (rng.bernoulli(0.5))
                    g.add_edge(u, v);
        REQUIRE(subgraph_counts(g) == subgraph_counts_naive(g));
    }
}

TEST_CASE("induced 3-edge paths on triangle-free graphs")
{
    // P3 = P3_induced + 4 C4 on triangle-free graphs
    RngStream rng(12, 0, Stage::test);
    for (int i = 0; i < 100; ++i) {
        Graph g = random_triangle_free(7, 6, 0.6, rng);
        auto c = subgraph_counts(g);
        std::uint64_t induced = 0;
        int n = g.n();
        // ordered walks a-b-c-d on distinct vertices with a !~ d, halved
        for (int a = 0; a < n; ++a)
            for (int b : g.neighbors(a))
                for (int cc : g.neighbors(b))
                    for (int d : g.neighbors(cc))
                        if (cc != a && d != b && d != a && !g.has_edge(a, d) &&
                            !g.has_edge(a, cc) && !g.has_edge(b, d))
                            ++induced;
        REQUIRE(c.p3 == induced / 2 + 4 * c.c4);
    }
}

TEST_CASE("cartesian product")
{
    Graph k2 = path(2);
    Graph c4 = cartesian_product(k2, k2);
    CHECK(c4.n() == 4);
    CHECK(c4.num_edges() == 4);
    CHECK(subgraph_counts(c4) == subgraph_counts(cycle(4)));
    CHECK(cartesian_product(Graph(3), Graph(4)).num_edges() == 0);
    Graph s(3), t(2);
    s.add_edge(0, 1);
    t.add_edge(0, 1);
    CHECK(cartesian_product(s, t).num_edges() == 5);
    CHECK_THROWS_AS(cartesian_product(Graph(100), Graph(100), 5000), CapError);
}

TEST_CASE("product edge counts and degrees for every pair up to 6 vertices")
{
    RngStream rng(13, 0, Stage::test);
    for (int i = 0; i < 300; ++i) {
        int a = 1 + int(rng.below(6)), b = 1 + int(rng.below(6));
        Graph s = random_triangle_free(a, a, rng.uniform(), rng);
        Graph t = random_triangle_free(b, b, rng.uniform(), rng);
        Graph p = cartesian_product(s, t);
        REQUIRE(p.num_edges() == std::size_t(b) * s.num_edges() + std::size_t(a) * t.num_edges());
        int maxdeg = 0;
        for (int u = 0; u < a; ++u)
            for (int v = 0; v < b; ++v) {
                REQUIRE(p.degree(u * b + v) == s.degree(u) + t.degree(v));
                maxdeg = std::max(maxdeg, p.degree(u * b + v));
            }
        REQUIRE(maxdeg == s.max_degree() + t.max_degree());
        REQUIRE(subgraph_counts(p) ==
                product_subgraph_counts(a, b, subgraph_counts(s), subgraph_counts(t)));
    }
}

TEST_CASE("max cut and distance to bipartiteness")
{
    CHECK(max_cut_exact(cycle(4)).cut == 4);
    CHECK(max_cut_exact(cycle(5)).cut == 4);
    CHECK(max_cut_exact(complete(3)).cut == 2);
    CHECK(distance_to_bipartiteness(cycle(6)) == 0);
    CHECK(distance_to_bipartiteness(cycle(5)) == 1);
    CHECK(distance_to_bipartiteness(disjoint(cycle(5), cycle(5))) == 2);
    CHECK_THROWS_AS(max_cut_exact(Graph(31)), CapError);
    // ties: vertex 0 on side A, lexicographically smallest side
    CutResult r = max_cut_exact(cycle(4));
    CHECK(r.partition.in_a(0));
}

TEST_CASE("bipartite iff distance zero")
{
    RngStream rng(14, 0, Stage::test);
    for (int i = 0; i < 200; ++i) {
        Graph g = random_triangle_free(9, 8, rng.uniform(), rng);
        REQUIRE(is_bipartite(g) == (distance_to_bipartiteness(g) == 0));
        auto col = two_coloring(g);
        REQUIRE(col.has_value() == is_bipartite(g));
        if (col)
            for (auto [u, v] : g.edges())
                REQUIRE((*col)[u] != (*col)[v]);
    }
}

TEST_CASE("chromatic number")
{
    CHECK(chromatic_number(cycle(4)).value == 2);
    CHECK(chromatic_number(cycle(5)).value == 3);
    CHECK(chromatic_number(Graph(4)).value == 1);
    CHECK(chromatic_number(complete(5)).value == 5);
    // Groetzsch graph: triangle-free, chromatic number 4
    Graph m(11);
    for (int i = 0; i < 5; ++i) {
        m.add_edge(i, (i + 1) % 5);
        m.add_edge(5 + i, (i + 1) % 5);
        m.add_edge(5 + i, (i + 4) % 5);
        m.add_edge(5 + i, 10);
    }
    CHECK(is_triangle_free(m));
    CHECK(chromatic_number(m).value == 4);
    CHECK(is_k_colorable(m, 3, 1000000) == std::optional<bool>(false));
    CHECK(is_k_colorable(m, 4, 1000000) == std::optional<bool>(true));
}

TEST_CASE("components")
{
    CHECK(largest_component(Graph(6)) == 1);
    CHECK(largest_component(disjoint(cycle(5), path(2))) == 5);
    CHECK(largest_component(cycle(7)) == 7);
    CHECK(is_connected(cycle(7)));
    CHECK_FALSE(is_connected(Graph(2)));
}

TEST_CASE("dominating cuts")
{
    Graph c6 = cycle(6);
    CHECK(is_dominating_cut(c6, Partition::from_sets(6, {0, 2, 4})));
    // K3 split {0 | 1,2}: vertices 1 and 2 see one neighbour on each side, which
    // still satisfies d(v, other) >= d(v, own)
    CHECK(is_dominating_cut(complete(3), Partition::from_sets(3, {0})));
    // a path kept on one side is not dominating
    Graph p3 = path(3);
    CHECK_FALSE(is_dominating_cut(p3, Partition::from_sets(3, {0, 1, 2})));
    CHECK_FALSE(is_dominating_cut(star(3), Partition::from_sets(4, {0, 1})));
    CHECK(is_dominating_cut(Graph(5), Partition::from_sets(5, {0, 1})));
}

TEST_CASE("expander predicate")
{
    Partition p = Partition::from_sets(12, {0, 1, 2, 3, 4, 5});
    CHECK_FALSE(is_expander(Graph(12), p, 0.1).value());
    Graph k(12);
    for (int u = 0; u < 6; ++u)
        for (int v = 6; v < 12; ++v)
            k.add_edge(u, v);
    CHECK(is_expander(k, p, 0.1).value());
    Graph iso = k;
    for (int v = 6; v < 12; ++v)
        iso.remove_edge(0, v);
    CHECK_FALSE(is_expander(iso, p, 0.1).value());
}

TEST_CASE("partition balance classes")
{
    Partition p = Partition::from_sets(100, std::vector<int>{});
    CHECK(p.a() == 0);
    CHECK(p.b() == 100);
    CHECK(p.t() == -50);
    CHECK_FALSE(p.weakly_balanced());
    std::vector<int> half;
    for (int i = 0; i < 54; ++i)
        half.push_back(i);
    Partition q = Partition::from_sets(100, half);
    CHECK(q.weakly_balanced());  // |a - b| = 8 <= 10
    CHECK(q.strongly_balanced());
    CHECK(q.swapped().a() == 46);
    CHECK(Partition::from_mask(100 > 64 ? 10 : 10, 0b11111).a() == 5);
}

TEST_CASE("json and edge-list round trips")
{
    RngStream rng(15, 0, Stage::test);
    for (int i = 0; i < 20; ++i) {
        Graph g = random_triangle_free(20, 5, 0.5, rng);
        CHECK(graph_from_json(graph_to_json(g)) == g);
        std::stringstream ss;
        write_edge_list(ss, g);
        CHECK(read_edge_list(ss) == g);
    }
    auto j = graph_to_json(path(3));
    CHECK(j.dump() == R"({"edges":[[0,1],[1,2]],"n":3})");
    Partition p = Partition::from_sets(6, {1, 3});
    CHECK(partition_from_json(partition_to_json(p), 6) == p);
}

TEST_CASE("edge masks")
{
    Graph g = cycle(5);
    CHECK(graph_from_edge_mask(5, edge_mask(g)) == g);
    CHECK(pair_index(5, 0, 1) == 0);
    CHECK(pair_index(5, 3, 4) == 9);
    CHECK(pair_list(5).size() == 10);
}

TEST_CASE("canonical keys identify isomorphic graphs")
{
    RngStream rng(16, 0, Stage::test);
    for (int i = 0; i < 100; ++i) {
        int n = 3 + int(rng.below(8));
        Graph g = random_triangle_free(n, n, rng.uniform(), rng);
        std::vector<int> perm(n);
        for (int v = 0; v < n; ++v)
            perm[v] = v;
        for (int v = n - 1; v > 0; --v)
            std::swap(perm[v], perm[rng.below(v + 1)]);
        Graph h(n);
        for (auto [u, v] : g.edges())
            h.add_edge(perm[u], perm[v]);
        REQUIRE(canonical_edge_mask(to_bits(g)) == canonical_edge_mask(to_bits(h)));
    }
    CHECK(canonical_edge_mask(to_bits(path(4))) != canonical_edge_mask(to_bits(star(3))));
}

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <queue>

#include "trifree/graph.hpp"
#include "trifree/rng.hpp"

namespace trifree {

bool is_triangle_free(const Graph& g)
{
    for (int u = 0; u < g.n(); ++u) {
        const auto& nu = g.neighbors(u);
        for (int v : nu) {
            if (v < u)
                continue;
            const auto& small = g.degree(u) <= g.degree(v) ? nu : g.neighbors(v);
            int other = g.degree(u) <= g.degree(v) ? v : u;
            for (int w : small)
                if (w != other && g.has_edge(other, w))
                    return false;
        }
    }
    return true;
}

bool is_triangle_free(const BitGraph& g)
{
    for (int u = 0; u < g.n; ++u) {
        std::uint64_t r = g.adj[u] & ~((2ull << u) - 1);
        while (r) {
            int v = __builtin_ctzll(r);
            r &= r - 1;
            if (g.adj[u] & g.adj[v])
                return false;
        }
    }
    return true;
}

std::uint64_t triangle_count(const Graph& g)
{
    std::uint64_t t = 0;
    for (int u = 0; u < g.n(); ++u)
        for (int v : g.neighbors(u))
            if (v > u)
                for (int w : g.neighbors(v))
                    if (w > v && g.has_edge(u, w))
                        ++t;
    return t;
}

SubgraphCounts subgraph_counts(const Graph& g)
{
    SubgraphCounts c;
    c.edges = g.num_edges();
    for (int v = 0; v < g.n(); ++v) {
        std::uint64_t d = g.degree(v);
        c.p2 += d ? d * (d - 1) / 2 : 0;
        if (d >= 3)
            c.s3 += d * (d - 1) * (d - 2) / 6;
    }
    std::uint64_t p3raw = 0;
    for (auto [u, v] : g.edges())
        p3raw += std::uint64_t(g.degree(u) - 1) * std::uint64_t(g.degree(v) - 1);
    c.p3 = p3raw - 3 * triangle_count(g);

    // two-paths between each ordered pair (u, w), u < w; each 4-cycle is seen
    // once from each of its two diagonals
    std::vector<std::uint32_t> cnt(g.n(), 0);
    std::vector<int> touched;
    std::uint64_t twice = 0;
    for (int u = 0; u < g.n(); ++u) {
        for (int v : g.neighbors(u))
            for (int w : g.neighbors(v))
                if (w > u) {
                    if (cnt[w]++ == 0)
                        touched.push_back(w);
                }
        for (int w : touched) {
            std::uint64_t k = cnt[w];
            twice += k * (k - 1) / 2;
            cnt[w] = 0;
        }
        touched.clear();
    }
    c.c4 = twice / 2;
    return c;
}

SubgraphCounts subgraph_counts_naive(const Graph& g)
{
    if (g.n() > 8)
        throw CapError("naive subgraph counts need n <= 8");
    auto e = g.edges();
    int m = int(e.size());
    SubgraphCounts c;
    c.edges = m;
    auto shape = [&](const std::vector<int>& idx, int& verts, std::array<int, 4>& degs) {
        std::array<int, 8> d{};
        for (int i : idx) {
            d[e[i].first]++;
            d[e[i].second]++;
        }
        verts = 0;
        degs = {0, 0, 0, 0};
        for (int x : d)
            if (x) {
                if (verts < 4)
                    degs[verts] = x;
                ++verts;
            }
        std::sort(degs.begin(), degs.end());
    };
    std::vector<int> idx;
    std::function<void(int, int)> rec = [&](int start, int left) {
        if (left == 0) {
            int verts;
            std::array<int, 4> d;
            shape(idx, verts, d);
            if (idx.size() == 2 && verts == 3)
                c.p2++;
            if (idx.size() == 3 && verts == 4) {
                if (d == std::array<int, 4>{1, 1, 1, 3})
                    c.s3++;
                else if (d == std::array<int, 4>{1, 1, 2, 2})
                    c.p3++;
            }
            if (idx.size() == 4 && verts == 4 && d == std::array<int, 4>{2, 2, 2, 2})
                c.c4++;
            return;
        }
        for (int i = start; i < m; ++i) {
            idx.push_back(i);
            rec(i + 1, left - 1);
            idx.pop_back();
        }
    };
    for (int k = 2; k <= 4; ++k)
        rec(0, k);
    return c;
}

SubgraphCounts product_subgraph_counts(int a, int b, const SubgraphCounts& s,
                                       const SubgraphCounts& t)
{
    std::uint64_t A = a, B = b;
    SubgraphCounts c;
    c.edges = B * s.edges + A * t.edges;
    c.p2 = B * s.p2 + A * t.p2 + 4 * s.edges * t.edges;
    // K2 x K2 is a 4-cycle holding four 3-edge paths
    c.p3 = B * s.p3 + A * t.p3 + 6 * s.p2 * t.edges + 6 * s.edges * t.p2 + 4 * s.edges * t.edges;
    c.s3 = B * s.s3 + A * t.s3 + 2 * s.p2 * t.edges + 2 * s.edges * t.p2;
    c.c4 = B * s.c4 + A * t.c4 + s.edges * t.edges;
    return c;
}

Graph cartesian_product(const Graph& s, const Graph& t, std::size_t cap)
{
    std::size_t a = s.n(), b = t.n();
    if (a * b > cap)
        throw CapError("product has " + std::to_string(a * b) + " vertices, cap " +
                       std::to_string(cap));
    Graph p(int(a * b));
    for (auto [u, v] : s.edges())
        for (std::size_t j = 0; j < b; ++j)
            p.add_edge(int(u * b + j), int(v * b + j));
    for (auto [u, v] : t.edges())
        for (std::size_t i = 0; i < a; ++i)
            p.add_edge(int(i * b + u), int(i * b + v));
    return p;
}

Graph random_triangle_free(int n, int max_degree, double keep, RngStream& rng)
{
    if (n > 64)
        throw CapError("random triangle-free graphs limited to 64 vertices");
    auto pairs = pair_list(n);
    for (std::size_t i = pairs.size(); i > 1; --i)
        std::swap(pairs[i - 1], pairs[rng.below(i)]);
    Graph g(n);
    BitGraph b(n);
    for (auto [u, v] : pairs) {
        if (g.degree(u) >= max_degree || g.degree(v) >= max_degree || (b.adj[u] & b.adj[v]))
            continue;
        if (!rng.bernoulli(keep))
            continue;
        g.add_edge(u, v);
        b.add_edge(u, v);
    }
    return g;
}

Graph induced_subgraph(const Graph& g, const std::vector<int>& vertices)
{
    std::vector<int> pos(g.n(), -1);
    for (int i = 0; i < int(vertices.size()); ++i)
        pos[vertices[i]] = i;
    Graph h(int(vertices.size()));
    for (int i = 0; i < int(vertices.size()); ++i)
        for (int w : g.neighbors(vertices[i]))
            if (pos[w] > i)
                h.add_edge(i, pos[w]);
    return h;
}

//---------------------------------------------------------------------------//
// cuts
//---------------------------------------------------------------------------//

long long cut_size(const Graph& g, const Partition& p)
{
    long long c = 0;
    for (auto [u, v] : g.edges())
        c += p.side(u) != p.side(v);
    return c;
}

namespace {
// lexicographic comparison of the sorted vertex lists of two sets
bool lex_less(std::uint64_t x, std::uint64_t y)
{
    std::uint64_t diff = x ^ y;
    if (!diff)
        return false;
    int d = __builtin_ctzll(diff);
    std::uint64_t above = d >= 63 ? 0 : ~((2ull << d) - 1);
    if ((x >> d) & 1u)
        return (y & above) != 0;
    return (x & above) == 0;
}
}  // namespace

CutResult max_cut_exact(const Graph& g)
{
    int n = g.n();
    if (n > kMaxCutExactCap)
        throw CapError("exact max cut limited to n <= 30");
    if (n == 0)
        return {0, Partition(std::vector<std::uint8_t>{}), true};
    BitGraph bg = to_bits(g);
    std::uint64_t all = bg.all();
    std::uint64_t x = 1;  // A-side mask, vertex 0 pinned to A
    long long cut = bg.degree(0);
    long long best = cut;
    std::uint64_t best_x = x;
    std::uint64_t steps = n > 1 ? (1ull << (n - 1)) : 1;
    for (std::uint64_t i = 1; i < steps; ++i) {
        int v = __builtin_ctzll(i) + 1;
        bool in_a = (x >> v) & 1u;
        std::uint64_t own = in_a ? x : (~x & all);
        long long same = __builtin_popcountll(bg.adj[v] & own);
        long long cross = bg.degree(v) - same;
        cut += same - cross;
        x ^= 1ull << v;
        if (cut > best || (cut == best && lex_less(x, best_x))) {
            best = cut;
            best_x = x;
        }
    }
    return {best, Partition::from_mask(n, best_x), true};
}

CutResult max_cut_local(const Graph& g, const Partition& start)
{
    int n = g.n();
    std::vector<std::uint8_t> side(n);
    for (int v = 0; v < n; ++v)
        side[v] = start.side(v);
    bool moved = true;
    while (moved) {
        moved = false;
        for (int v = 0; v < n; ++v) {
            int same = 0;
            for (int w : g.neighbors(v))
                same += side[w] == side[v];
            if (2 * same > g.degree(v)) {
                side[v] ^= 1u;
                moved = true;
            }
        }
    }
    Partition p(side);
    return {cut_size(g, p), p, false};
}

CutResult max_cut(const Graph& g, const Partition* planted)
{
    if (g.n() <= kMaxCutExactCap)
        return max_cut_exact(g);
    if (!planted)
        throw CapError("max cut above n = 30 needs a planted partition for local search");
    return max_cut_local(g, *planted);
}

long long distance_to_bipartiteness(const Graph& g)
{
    return (long long)g.num_edges() - max_cut_exact(g).cut;
}

std::optional<std::vector<std::uint8_t>> two_coloring(const Graph& g)
{
    std::vector<int> col(g.n(), -1);
    std::vector<int> queue;
    for (int s = 0; s < g.n(); ++s) {
        if (col[s] >= 0)
            continue;
        col[s] = 0;
        queue.assign(1, s);
        for (std::size_t h = 0; h < queue.size(); ++h) {
            int v = queue[h];
            for (int w : g.neighbors(v)) {
                if (col[w] < 0) {
                    col[w] = 1 - col[v];
                    queue.push_back(w);
                } else if (col[w] == col[v]) {
                    return std::nullopt;
                }
            }
        }
    }
    return std::vector<std::uint8_t>(col.begin(), col.end());
}

bool is_bipartite(const Graph& g)
{
    return two_coloring(g).has_value();
}

//---------------------------------------------------------------------------//
// colouring
//---------------------------------------------------------------------------//

namespace {

struct Dsatur {
    const Graph& g;
    int k;
    std::uint64_t budget;
    std::uint64_t nodes = 0;
    bool out_of_budget = false;
    std::vector<int> color;
    std::vector<std::vector<int>> seen;  // seen[v][c] = #neighbours coloured c
    std::vector<int> sat;

    Dsatur(const Graph& g_, int k_, std::uint64_t b)
        : g(g_), k(k_), budget(b), color(g_.n(), -1), seen(g_.n(), std::vector<int>(k_, 0)),
          sat(g_.n(), 0)
    {
    }

    void assign(int v, int c, int delta)
    {
        for (int w : g.neighbors(v)) {
            int before = seen[w][c];
            seen[w][c] += delta;
            if (before == 0 && delta > 0)
                ++sat[w];
            if (seen[w][c] == 0 && delta < 0)
                --sat[w];
        }
    }

    int pick() const
    {
        int best = -1;
        for (int v = 0; v < g.n(); ++v) {
            if (color[v] >= 0)
                continue;
            if (best < 0 || sat[v] > sat[best] ||
                (sat[v] == sat[best] && g.degree(v) > g.degree(best)))
                best = v;
        }
        return best;
    }

    bool search(int colored, int used)
    {
        if (colored == g.n())
            return true;
        if (++nodes > budget) {
            out_of_budget = true;
            return false;
        }
        int v = pick();
        if (sat[v] >= k)
            return false;
        int limit = std::min(k, used + 1);
        for (int c = 0; c < limit; ++c) {
            if (seen[v][c])
                continue;
            color[v] = c;
            assign(v, c, +1);
            if (search(colored + 1, std::max(used, c + 1)))
                return true;
            assign(v, c, -1);
            color[v] = -1;
            if (out_of_budget)
                return false;
        }
        return false;
    }
};

int greedy_dsatur(const Graph& g)
{
    int n = g.n();
    std::vector<int> color(n, -1);
    std::vector<std::vector<char>> seen(n);
    std::vector<int> sat(n, 0);
    int used = 0;
    for (int step = 0; step < n; ++step) {
        int v = -1;
        for (int u = 0; u < n; ++u)
            if (color[u] < 0 &&
                (v < 0 || sat[u] > sat[v] || (sat[u] == sat[v] && g.degree(u) > g.degree(v))))
                v = u;
        int c = 0;
        while (c < int(seen[v].size()) && seen[v][c])
            ++c;
        color[v] = c;
        used = std::max(used, c + 1);
        for (int w : g.neighbors(v)) {
            if (int(seen[w].size()) <= c)
                seen[w].resize(c + 1, 0);
            if (!seen[w][c]) {
                seen[w][c] = 1;
                ++sat[w];
            }
        }
    }
    return used;
}

}  // namespace

std::optional<bool> is_k_colorable(const Graph& g, int k, std::uint64_t node_budget)
{
    if (k <= 0)
        return g.n() == 0;
    Dsatur d(g, k, node_budget);
    bool ok = d.search(0, 0);
    if (ok)
        return true;
    if (d.out_of_budget)
        return std::nullopt;
    return false;
}

ChromaticResult chromatic_number(const Graph& g)
{
    if (g.n() == 0)
        return {0, true};
    if (g.num_edges() == 0)
        return {1, true};
    if (is_bipartite(g))
        return {2, true};
    int upper = greedy_dsatur(g);
    if (upper == 3)
        return {3, true};
    if (g.n() > kChromaticExactCap)
        return {upper, false};
    for (int k = 3; k < upper; ++k) {
        auto r = is_k_colorable(g, k, ~0ull);
        if (*r)
            return {k, true};
    }
    return {upper, true};
}

//---------------------------------------------------------------------------//
// components
//---------------------------------------------------------------------------//

std::vector<int> component_labels(const Graph& g, int* count)
{
    std::vector<int> lab(g.n(), -1);
    int c = 0;
    std::vector<int> stack;
    for (int s = 0; s < g.n(); ++s) {
        if (lab[s] >= 0)
            continue;
        lab[s] = c;
        stack.assign(1, s);
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w : g.neighbors(v))
                if (lab[w] < 0) {
                    lab[w] = c;
                    stack.push_back(w);
                }
        }
        ++c;
    }
    if (count)
        *count = c;
    return lab;
}

int largest_component(const Graph& g)
{
    int c = 0;
    auto lab = component_labels(g, &c);
    std::vector<int> size(c, 0);
    for (int x : lab)
        size[x]++;
    return size.empty() ? 0 : *std::max_element(size.begin(), size.end());
}

bool is_connected(const Graph& g)
{
    int c = 0;
    component_labels(g, &c);
    return c <= 1;
}

bool is_dominating_cut(const Graph& g, const Partition& p)
{
    for (int v = 0; v < g.n(); ++v) {
        int same = 0;
        for (int w : g.neighbors(v))
            same += p.side(w) == p.side(v);
        if (2 * same > g.degree(v))
            return false;
    }
    return true;
}

//---------------------------------------------------------------------------//
// expander predicate
//---------------------------------------------------------------------------//

namespace {

// For fixed X, min over |Y| >= ymin of |E(X,Y)| - lambda|X||Y|/10 is attained
// by the ymin cheapest y plus every further y with negative cost.
bool set_condition_holds(const Graph& g, const std::vector<int>& X, const std::vector<int>& side_y,
                         const std::vector<char>& in_x, double lambda, int ymin,
                         std::vector<double>& cost)
{
    if (int(side_y.size()) < ymin)
        return true;
    double per = lambda * double(X.size()) / 10.0;
    cost.clear();
    for (int y : side_y) {
        int d = 0;
        for (int w : g.neighbors(y))
            d += in_x[w];
        cost.push_back(d - per);
    }
    std::sort(cost.begin(), cost.end());
    double total = 0;
    for (int i = 0; i < int(cost.size()); ++i) {
        if (i < ymin || cost[i] < 0)
            total += cost[i];
        else
            break;
    }
    return total >= -1e-9;
}

bool check_direction(const Graph& g, const std::vector<int>& side_x, const std::vector<int>& side_y,
                     double lambda, int xmin, int ymin, bool exhaustive, RngStream* rng,
                     int spot_checks)
{
    int nx = int(side_x.size());
    if (nx < xmin || int(side_y.size()) < ymin)
        return true;
    std::vector<char> in_x(g.n(), 0);
    std::vector<int> X;
    std::vector<double> cost;
    if (exhaustive) {
        for (std::uint64_t s = 1; s < (1ull << nx); ++s) {
            if (__builtin_popcountll(s) < xmin)
                continue;
            X.clear();
            for (int i = 0; i < nx; ++i)
                if ((s >> i) & 1u)
                    X.push_back(side_x[i]);
            for (int x : X)
                in_x[x] = 1;
            bool ok = set_condition_holds(g, X, side_y, in_x, lambda, ymin, cost);
            for (int x : X)
                in_x[x] = 0;
            if (!ok)
                return false;
        }
        return true;
    }
    std::vector<int> pool(side_x);
    for (int trial = 0; trial < spot_checks; ++trial) {
        // half the probes sit at the minimum size, where the condition bites
        int size = xmin;
        if (trial % 2 == 1)
            size = xmin + int(rng->below(std::uint64_t(nx - xmin + 1)));
        for (int i = 0; i < size; ++i) {
            int j = i + int(rng->below(std::uint64_t(nx - i)));
            std::swap(pool[i], pool[j]);
        }
        X.assign(pool.begin(), pool.begin() + size);
        for (int x : X)
            in_x[x] = 1;
        bool ok = set_condition_holds(g, X, side_y, in_x, lambda, ymin, cost);
        for (int x : X)
            in_x[x] = 0;
        if (!ok)
            return false;
    }
    return true;
}

}  // namespace

ExpanderReport is_expander(const Graph& g, const Partition& p, double lambda, RngStream* rng,
                           int spot_checks)
{
    ExpanderReport r;
    int n = g.n();
    double dmin = lambda * n / 30.0;
    r.degree_ok = true;
    for (int v = 0; v < n && r.degree_ok; ++v) {
        int cross = 0;
        for (int w : g.neighbors(v))
            cross += p.side(w) != p.side(v);
        if (cross < dmin)
            r.degree_ok = false;
    }
    r.exhaustive = n <= kExpanderExactCap;
    if (!r.exhaustive && !rng)
        throw std::invalid_argument("expander spot checks need an rng");

    int x1 = std::max(1, int(std::ceil(lambda * n / 100.0 - 1e-12)));
    int y1 = int(std::ceil(n / 6.0 - 1e-12));
    const auto& A = p.a_vertices();
    const auto& B = p.b_vertices();
    r.expansion_ok = check_direction(g, A, B, lambda, x1, y1, r.exhaustive, rng, spot_checks) &&
                     check_direction(g, B, A, lambda, x1, y1, r.exhaustive, rng, spot_checks);
    if (lambda >= std::sqrt(std::log(double(n)) / n)) {
        int s2 = std::max(1, int(std::ceil(10 * lambda * n - 1e-12)));
        r.expansion2_ok =
            check_direction(g, A, B, lambda, s2, s2, r.exhaustive, rng, spot_checks) &&
            check_direction(g, B, A, lambda, s2, s2, r.exhaustive, rng, spot_checks);
    }
    return r;
}

}  // namespace trifree

#include "trifree/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <numbers>
#include <set>
#include <sstream>
#include <unordered_set>

#include "trifree/cluster.hpp"
#include "trifree/graph_io.hpp"
#include "trifree/hardcore.hpp"
#include "trifree/parallel.hpp"
#include "trifree/params.hpp"
#include "trifree/samplers.hpp"
#include "trifree/stats.hpp"

namespace trifree {

using nlohmann::json;

//---------------------------------------------------------------------------//
// certificates
//---------------------------------------------------------------------------//

namespace {
std::uint64_t edge_key(int u, int v)
{
    if (u > v)
        std::swap(u, v);
    return (std::uint64_t(std::uint32_t(u)) << 32) | std::uint32_t(v);
}
}  // namespace

BipartiteDistance bipartite_distance_certificate(const Graph& g, const Partition& planted)
{
    BipartiteDistance out;
    CutResult local = max_cut_local(g, planted);
    out.upper = (long long)g.num_edges() - local.cut;
    if (out.upper == 0)
        return out;

    // one odd cycle per defect edge: the edge plus an even path of unused
    // crossing edges between its endpoints
    const Partition& p = local.partition;
    std::unordered_set<std::uint64_t> used;
    int n = g.n();
    std::vector<int> parent(n, -1), seen(n, -1);
    int stamp = 0;
    for (auto [u, v] : g.edges()) {
        if (p.side(u) != p.side(v))
            continue;
        ++stamp;
        std::vector<int> queue{v};
        seen[v] = stamp;
        parent[v] = -1;
        bool found = false;
        for (std::size_t h = 0; h < queue.size() && !found; ++h) {
            int x = queue[h];
            for (int y : g.neighbors(x)) {
                if (p.side(x) == p.side(y) || seen[y] == stamp || used.count(edge_key(x, y)))
                    continue;
                seen[y] = stamp;
                parent[y] = x;
                if (y == u) {
                    found = true;
                    break;
                }
                queue.push_back(y);
            }
        }
        if (!found)
            continue;
        for (int x = u; parent[x] != -1; x = parent[x])
            used.insert(edge_key(x, parent[x]));
        ++out.lower;
    }
    return out;
}

bool green_coloring_exists(const Graph& g, const Partition& p)
{
    // variables: defect-incident vertices; true means green. Everything else
    // takes the side's own colour, which never conflicts.
    std::vector<int> var(g.n(), -1);
    std::vector<int> verts;
    std::vector<EdgePair> defects;
    for (auto [u, v] : g.edges())
        if (p.side(u) == p.side(v)) {
            defects.emplace_back(u, v);
            for (int x : {u, v})
                if (var[x] < 0) {
                    var[x] = int(verts.size());
                    verts.push_back(x);
                }
        }
    int k = int(verts.size());
    if (k == 0)
        return true;
    // literal 2i = x_i, 2i+1 = not x_i
    std::vector<std::vector<int>> imp(2 * k);
    auto clause = [&](int a, int b) {  // a or b
        imp[a ^ 1].push_back(b);
        imp[b ^ 1].push_back(a);
    };
    for (auto [u, v] : defects) {
        clause(2 * var[u], 2 * var[v]);
        clause(2 * var[u] + 1, 2 * var[v] + 1);
    }
    for (int x : verts)
        for (int y : g.neighbors(x))
            if (x < y && var[y] >= 0 && p.side(x) != p.side(y))
                clause(2 * var[x] + 1, 2 * var[y] + 1);
    // Tarjan SCC, iterative
    int N = 2 * k, index = 0, comps = 0;
    std::vector<int> idx(N, -1), low(N, 0), comp(N, -1), stack;
    std::vector<char> on(N, 0);
    std::vector<std::pair<int, std::size_t>> call;
    for (int s = 0; s < N; ++s) {
        if (idx[s] >= 0)
            continue;
        call.emplace_back(s, 0);
        idx[s] = low[s] = index++;
        stack.push_back(s);
        on[s] = 1;
        while (!call.empty()) {
            auto& [x, i] = call.back();
            if (i < imp[x].size()) {
                int y = imp[x][i++];
                if (idx[y] < 0) {
                    idx[y] = low[y] = index++;
                    stack.push_back(y);
                    on[y] = 1;
                    call.emplace_back(y, 0);
                } else if (on[y]) {
                    low[x] = std::min(low[x], idx[y]);
                }
            } else {
                int done = x;
                if (low[done] == idx[done]) {
                    for (;;) {
                        int w = stack.back();
                        stack.pop_back();
                        on[w] = 0;
                        comp[w] = comps;
                        if (w == done)
                            break;
                    }
                    ++comps;
                }
                call.pop_back();
                if (!call.empty())
                    low[call.back().first] = std::min(low[call.back().first], low[done]);
            }
        }
    }
    for (int i = 0; i < k; ++i)
        if (comp[2 * i] == comp[2 * i + 1])
            return false;
    return true;
}

namespace {
int greedy_colors(const Graph& g)
{
    std::vector<int> col(g.n(), -1);
    int used = 0;
    for (int v = 0; v < g.n(); ++v) {
        std::vector<char> taken(used + 1, 0);
        for (int w : g.neighbors(v))
            if (col[w] >= 0)
                taken[col[w]] = 1;
        int c = 0;
        while (taken[c])
            ++c;
        col[v] = c;
        used = std::max(used, c + 1);
    }
    return used;
}

Graph side_graph(const Graph& g, const Partition& p, bool a_side)
{
    const auto& verts = a_side ? p.a_vertices() : p.b_vertices();
    return induced_subgraph(g, verts);
}
}  // namespace

ChromaticCertificate chromatic_certificate(const Graph& g, const Partition& planted,
                                           int exact_cap, std::uint64_t node_budget)
{
    ChromaticCertificate c;
    if (g.n() == 0)
        return {0, 0, "empty"};
    if (g.num_edges() == 0)
        return {1, 1, "edgeless"};
    if (two_coloring(g))
        return {2, 2, "bipartite"};
    c.lower = 3;
    if (g.n() <= exact_cap) {
        auto r = chromatic_number(g);
        return {r.value, r.value, "exact"};
    }
    if (green_coloring_exists(g, planted))
        return {3, 3, "green-colouring"};
    Graph sa = side_graph(g, planted, true), sb = side_graph(g, planted, false);
    int ua = two_coloring(sa) ? 2 : greedy_colors(sa);
    int ub = two_coloring(sb) ? 2 : greedy_colors(sb);
    c.upper = ua + ub;
    c.method = "side-colourings";
    if (c.upper == 4) {
        auto r = is_k_colorable(g, 3, node_budget);
        if (r) {
            c.lower = c.upper = *r ? 3 : 4;
            c.method = "search";
        }
    }
    return c;
}

MaxCutCount count_max_cuts(const Graph& g)
{
    int n = g.n();
    if (n > kMaxCutExactCap)
        throw CapError("max-cut counting limited to n <= 30");
    MaxCutCount out;
    if (n <= 1) {
        out.count = 1;
        out.a_mask = n;
        return out;
    }
    BitGraph b = to_bits(g);
    std::uint64_t amask = 1;  // vertex 0 fixed in A
    long long cut = 0;
    for (int v = 1; v < n; ++v)
        if (b.has_edge(0, v))
            ++cut;
    out.cut = cut;
    out.count = 1;
    out.a_mask = amask;
    std::uint64_t all = b.all();
    std::uint64_t steps = 1ull << (n - 1);
    for (std::uint64_t i = 1; i < steps; ++i) {
        int v = 1 + __builtin_ctzll(i);  // Gray-code flip
        std::uint64_t same = ((amask >> v) & 1) ? amask : (all & ~amask);
        std::uint64_t other = all & ~same;
        cut += __builtin_popcountll(b.adj[v] & same) - __builtin_popcountll(b.adj[v] & other);
        amask ^= 1ull << v;
        if (cut > out.cut) {
            out.cut = cut;
            out.count = 1;
            out.a_mask = amask;
        } else if (cut == out.cut) {
            ++out.count;
        }
    }
    return out;
}

//---------------------------------------------------------------------------//
// experiments
//---------------------------------------------------------------------------//

double bipartite_window_limit(double t)
{
    return std::exp(-std::sqrt(3.0) / 4 * std::exp(t / 2));
}

namespace {

// m = sqrt(3 + loglog n / log n - t / log n) / 4 * n^{3/2} sqrt(log n), solved for t
double window_t(double n, double m)
{
    double L = std::log(n);
    double s = 4 * m / (std::pow(n, 1.5) * std::sqrt(L));
    return 3 * L + std::log(L) - L * s * s;
}

double c_of_m(double n, double m) { return 4 * m / (std::pow(n, 1.5) * std::sqrt(std::log(n))); }

json freq_json(std::uint64_t hits, std::uint64_t trials)
{
    double p = trials ? double(hits) / double(trials) : 0.0;
    return {{"count", hits},
            {"trials", trials},
            {"frequency", p},
            {"ci95_halfwidth", binomial_ci_halfwidth(p, trials)}};
}

}  // namespace

ExperimentReport bipartite_distance_experiment(int n, std::uint64_t m, std::uint64_t replicas,
                                               std::uint64_t seed, bool lazy)
{
    ExperimentReport rep;
    GlobalParams gp = global_params_m(n, m);
    double t = window_t(n, double(m));
    rep.config = {{"experiment", "bipartite_distance"}, {"n", n},   {"m", m},
                  {"replicas", replicas},               {"seed", seed}, {"lazy", lazy}};
    rep.replicas.resize(replicas);
    std::vector<int> bip(replicas, 0), certified(replicas, 0), fallback(replicas, 0);
    std::vector<int> no_defects(replicas, 0);
    std::vector<long long> xval(replicas, 0);
    parallel_for(replicas, [&](std::size_t r) {
        RngStream rng(seed, r);
        SamplerOptions o;
        o.lazy_bipartite = lazy;
        SampleOutcome s = sample_mu_m1(n, m, rng, o);
        json obs{{"replica", r}, {"seed", seed}, {"fallback_used", s.fallback_used},
                 {"defects", s.s.num_edges() + s.t.num_edges()}};
        fallback[r] = s.fallback_used;
        // every fallback path starts from a nonempty defect draw
        no_defects[r] = !s.fallback_used && s.s.num_edges() + s.t.num_edges() == 0;
        if (s.diag.crossing_skipped) {
            bip[r] = 1;
            certified[r] = 1;
            xval[r] = 0;
            obs["X"] = 0;
            obs["X_certified"] = true;
        } else {
            bip[r] = two_coloring(s.graph).has_value();
            BipartiteDistance d = bipartite_distance_certificate(s.graph, s.partition);
            certified[r] = d.certified();
            xval[r] = d.upper;
            obs["X_lower"] = d.lower;
            obs["X_upper"] = d.upper;
            obs["X_certified"] = d.certified();
            if (d.certified())
                obs["X"] = d.upper;
        }
        obs["bipartite"] = bool(bip[r]);
        rep.replicas[r] = std::move(obs);
    });
    std::uint64_t nb = 0, nc = 0, nf = 0, nd = 0;
    std::vector<long long> xs;
    for (std::size_t r = 0; r < replicas; ++r) {
        nb += bip[r];
        nf += fallback[r];
        nd += no_defects[r];
        if (certified[r]) {
            ++nc;
            xs.push_back(xval[r]);
        }
    }
    // reference X-hat ~ Bin(floor(n^2/4), q0)
    std::uint64_t N = std::uint64_t(n) * n / 4;
    double q0 = double(gp.q0);
    double mean = N * q0, sd = std::sqrt(N * q0 * (1 - q0));
    long long top = (long long)std::ceil(mean + 20 * sd + 10);
    for (auto x : xs)
        top = std::max(top, x);
    std::vector<double> ref;
    for (long long k = 0; k <= top; ++k)
        ref.push_back(double(binomial_pmf(N, k, q0)));
    double tv = xs.empty() ? 1.0 : tv_to_reference(empirical_pmf(xs), 0, ref);
    rep.aggregate = {{"window_t", t},
                     {"c", c_of_m(n, double(m))},
                     {"lambda", double(gp.lambda)},
                     {"q0", q0},
                     {"binomial_mean", mean},
                     {"p_bipartite", freq_json(nb, replicas)},
                     {"p_bipartite_limit", bipartite_window_limit(t)},
                     {"p_bipartite_binomial", double(binomial_pmf(N, 0, q0))},
                     {"tv_X_vs_binomial", tv},
                     {"certified", nc},
                     {"uncertified", replicas - nc},
                     {"fallbacks", nf},
                     {"p_no_defects", freq_json(nd, replicas)},
                     {"subcritical_valid", subcritical_valid(n, m)}};
    return rep;
}

ExperimentReport chromatic_experiment(int n, std::uint64_t m, std::uint64_t replicas,
                                      std::uint64_t seed)
{
    ExperimentReport rep;
    double c = c_of_m(n, double(m));
    std::string band = (c > std::sqrt(2.0) && c < std::sqrt(3.0)) ? "chi3"
                       : (c > 1 && c < std::sqrt(2.0))             ? "chi4"
                                                                   : "outside";
    rep.config = {{"experiment", "chromatic"}, {"n", n}, {"m", m}, {"replicas", replicas},
                  {"seed", seed}};
    rep.replicas.resize(replicas);
    std::vector<int> value(replicas, -1);
    parallel_for(replicas, [&](std::size_t r) {
        RngStream rng(seed, r);
        SampleOutcome s = sample_mu_m1(n, m, rng);
        ChromaticCertificate cc = chromatic_certificate(s.graph, s.partition);
        if (cc.decided())
            value[r] = cc.lower;
        rep.replicas[r] = {{"replica", r},          {"seed", seed},
                           {"chi_lower", cc.lower}, {"chi_upper", cc.upper},
                           {"decided", cc.decided()}, {"method", cc.method},
                           {"defects", s.s.num_edges() + s.t.num_edges()},
                           {"fallback_used", s.fallback_used}};
    });
    std::uint64_t c2 = 0, c3 = 0, c4 = 0, other = 0, undecided = 0;
    for (int v : value) {
        if (v < 0)
            ++undecided;
        else if (v == 2)
            ++c2;
        else if (v == 3)
            ++c3;
        else if (v == 4)
            ++c4;
        else
            ++other;
    }
    rep.aggregate = {{"c", c},
                     {"band", band},
                     {"chi2", freq_json(c2, replicas)},
                     {"chi3", freq_json(c3, replicas)},
                     {"chi4", freq_json(c4, replicas)},
                     {"chi_other", other},
                     {"undecided", undecided}};
    return rep;
}

double giant_target_q0(const GiantOptions& o, int n)
{
    double dn = n;
    double grow = std::pow(dn, 1.0 / 6);  // omega(n) between 1 and n^{1/3}
    switch (o.which) {
    case GiantCase::below: return 2 / dn - o.omega * grow / std::pow(dn, 4.0 / 3);
    case GiantCase::critical: return 2 / dn + o.omega / std::pow(dn, 4.0 / 3);
    case GiantCase::above: return 2 / dn + o.omega * grow / std::pow(dn, 4.0 / 3);
    case GiantCase::linear: return o.c / dn;
    case GiantCase::connectivity:
        return (o.above_threshold ? 1 + o.eps : 1 - o.eps) * 2 * std::log(dn) / dn;
    }
    return 0;
}

ExperimentReport giant_component_experiment(const GiantOptions& o, std::uint64_t replicas,
                                            std::uint64_t seed)
{
    ExperimentReport rep;
    rep.config = {{"experiment", "giant_component"}, {"case", int(o.which)}, {"ns", o.ns},
                  {"omega", o.omega}, {"c", o.c}, {"eps", o.eps},
                  {"above_threshold", o.above_threshold}, {"sweeps", o.sweeps},
                  {"replicas", replicas}, {"seed", seed}};
    std::vector<double> xs, ys;
    json per_n = json::array();
    for (std::size_t ni = 0; ni < o.ns.size(); ++ni) {
        int n = o.ns[ni];
        double q0 = giant_target_q0(o, n);
        long double lambda = lambda_for_q0(n, q0);
        GlobalParams gp = global_params_lambda(n, lambda);
        std::vector<int> largest(replicas), connected(replicas), side(replicas);
        std::vector<json> obs(replicas);
        parallel_for(replicas, [&](std::size_t r) {
            RngStream rng(seed, r, Stage::experiment, std::uint32_t(ni));
            RngStream rp = rng.derive(Stage::partition), rd = rng.derive(Stage::defects_a);
            Partition p = sample_theta_lambda(n, lambda, rp);
            ChainStats cs;
            int a = p.a();
            Graph s = sample_cond_erg(a, double(gp.q2), double(gp.psi), rd,
                                      o.sweeps ? o.sweeps : default_sweeps(a), double(n), &cs);
            largest[r] = largest_component(s);
            connected[r] = is_connected(s);
            side[r] = a;
            obs[r] = {{"replica", r},
                      {"seed", seed},
                      {"n", n},
                      {"side", a},
                      {"edges", s.num_edges()},
                      {"max_degree", s.max_degree()},
                      {"largest_component", largest[r]},
                      {"connected", bool(connected[r])},
                      {"chain_accepted", cs.accepted},
                      {"chain_proposals", cs.proposals}};
        });
        for (auto& j : obs)
            rep.replicas.push_back(std::move(j));
        std::vector<double> lv(largest.begin(), largest.end());
        Moments mm = moments(lv);
        std::uint64_t conn = 0;
        for (int c : connected)
            conn += c;
        double half = n / 2.0;
        double grow = std::pow(double(n), 1.0 / 6);
        per_n.push_back({{"n", n},
                         {"q0_target", q0},
                         {"lambda", double(lambda)},
                         {"q2", double(gp.q2)},
                         {"psi", double(gp.psi)},
                         {"degree_cap", erg_degree_cap(double(gp.q2), n)},
                         {"mean_largest", mm.mean},
                         {"sd_largest", std::sqrt(mm.variance)},
                         {"largest_over_n23", mm.mean / std::pow(double(n), 2.0 / 3)},
                         {"largest_over_side", mm.mean / half},
                         {"case3_ratio", mm.mean / (2 * o.omega * grow * std::pow(half, 2.0 / 3))},
                         {"connected", freq_json(conn, replicas)}});
        xs.push_back(n);
        ys.push_back(std::max(mm.mean, 1.0));
    }
    rep.aggregate = {{"per_n", per_n}};
    if (xs.size() >= 2) {
        Fit f = loglog_fit(xs, ys);
        rep.aggregate["exponent"] = f.slope;
        rep.aggregate["exponent_r2"] = f.r2;
    }
    return rep;
}

ExperimentReport capture_uniqueness_experiment(int n, double lambda, std::uint64_t replicas,
                                               std::uint64_t seed)
{
    ExperimentReport rep;
    rep.config = {{"experiment", "capture_uniqueness"}, {"n", n}, {"lambda", lambda},
                  {"replicas", replicas}, {"seed", seed}};
    rep.replicas.resize(replicas);
    std::vector<int> unique(replicas, 0), expander(replicas, 0), checked(replicas, 0);
    parallel_for(replicas, [&](std::size_t r) {
        RngStream rng(seed, r);
        SampleOutcome s = sample_mu_lambda1(n, lambda, rng);
        RngStream spot = rng.derive(Stage::experiment);
        ExpanderReport ex = is_expander(s.graph, s.partition, lambda, &spot);
        expander[r] = ex.value();
        json obs{{"replica", r},
                 {"seed", seed},
                 {"edges", s.graph.num_edges()},
                 {"defects", s.s.num_edges() + s.t.num_edges()},
                 {"expander", ex.value()},
                 {"expander_exhaustive", ex.exhaustive}};
        if (n <= 24) {
            checked[r] = 1;
            MaxCutCount mc = count_max_cuts(s.graph);
            std::uint64_t pm = s.partition.a_mask();
            std::uint64_t all = n == 64 ? ~0ull : ((1ull << n) - 1);
            if (!(pm & 1))
                pm = all & ~pm;  // orient so vertex 0 is on the A side
            long long planted_cut = cut_size(s.graph, s.partition);
            bool u = mc.count == 1 && planted_cut == mc.cut && mc.a_mask == pm;
            unique[r] = u;
            obs["max_cut"] = mc.cut;
            obs["max_cut_count"] = mc.count;
            obs["planted_cut"] = planted_cut;
            obs["planted_unique_max"] = u;
        }
        rep.replicas[r] = std::move(obs);
    });
    std::uint64_t nu = 0, ne = 0, nc = 0;
    for (std::size_t r = 0; r < replicas; ++r) {
        nu += unique[r];
        ne += expander[r];
        nc += checked[r];
    }
    rep.aggregate = {{"planted_unique_max", freq_json(nu, nc)},
                     {"expander", freq_json(ne, replicas)}};
    return rep;
}

ExperimentReport crossing_lclt_experiment(int n, std::uint64_t m, std::uint64_t replicas,
                                          std::uint64_t draws, std::uint64_t seed)
{
    ExperimentReport rep;
    GlobalParams gp = global_params_m(n, m);
    long double lambda = gp.lambda;
    rep.config = {{"experiment", "crossing_lclt"}, {"n", n}, {"m", m}, {"replicas", replicas},
                  {"draws", draws}, {"seed", seed}};
    rep.replicas.resize(replicas);
    std::vector<std::uint64_t> hits(replicas, 0), used(replicas, 0);
    parallel_for(replicas, [&](std::size_t r) {
        RngStream rng(seed, r);
        RngStream rp = rng.derive(Stage::partition), ra = rng.derive(Stage::defects_a),
                  rb = rng.derive(Stage::defects_b), rc = rng.derive(Stage::crossing);
        Partition p = sample_theta_lambda(n, lambda, rp);
        Graph s = sample_er(p.a(), double(gp.q0), ra);
        Graph t = sample_er(p.b(), double(gp.q0), rb);
        json obs{{"replica", r}, {"seed", seed}, {"a", p.a()}, {"b", p.b()},
                 {"S", s.num_edges()}, {"T", t.num_edges()}};
        std::uint64_t defects = s.num_edges() + t.num_edges();
        if (!is_triangle_free(s) || !is_triangle_free(t) || defects > m) {
            obs["skipped"] = true;
            rep.replicas[r] = std::move(obs);
            return;
        }
        std::uint64_t k = m - defects;
        HardcorePlan plan = HardcorePlan::for_product(s, t);
        std::uint64_t h = 0;
        long double sum = 0, sum2 = 0;
        for (std::uint64_t d = 0; d < draws; ++d) {
            std::uint64_t z = plan.sample_size(lambda, rc);
            h += z == k;
            sum += z;
            sum2 += (long double)z * z;
        }
        long double mean = sum / draws, var = sum2 / draws - mean * mean;
        auto cs = subgraph_counts(s), ct = subgraph_counts(t);
        long double a = p.a(), b = p.b();
        long double edges = b * cs.edges + a * ct.edges;
        long double p2 = b * cs.p2 + a * ct.p2 + 4.0L * cs.edges * ct.edges;
        MeanVar pred = hardcore_mean_var_counts(a * b, edges, p2, lambda);
        hits[r] = h;
        used[r] = draws;
        obs["target"] = k;
        obs["hits"] = h;
        obs["mean"] = double(mean);
        obs["variance"] = double(var);
        obs["predicted_mean"] = double(pred.mean);
        obs["predicted_variance"] = double(pred.variance);
        obs["mean_z"] = double((mean - pred.mean) / std::sqrt(var / draws));
        // distance in single-draw standard deviations
        obs["mean_dev_sd"] = double((mean - pred.mean) / std::sqrt(var));
        obs["var_over_ab_lambda"] = double(var / (a * b * lambda));
        rep.replicas[r] = std::move(obs);
    });
    std::uint64_t H = 0, D = 0;
    for (std::size_t r = 0; r < replicas; ++r) {
        H += hits[r];
        D += used[r];
    }
    double freq = D ? double(H) / double(D) : 0.0;
    double scale = n * std::sqrt(std::numbers::pi * double(lambda) / 2);
    rep.aggregate = {{"lambda", double(lambda)},
                     {"hit_frequency", freq_json(H, D)},
                     {"scaled_hit_frequency", freq * scale},
                     {"scaled_ci95_halfwidth", binomial_ci_halfwidth(freq, D) * scale},
                     {"supercritical_valid", supercritical_valid(n, m)}};
    return rep;
}

Graph random_regular_bipartite(int n, int d, RngStream& rng)
{
    if (n % 2 || d > n / 2)
        throw std::invalid_argument("regular bipartite graph needs even n and d <= n/2");
    int h = n / 2;
    Graph g(n);
    for (int round = 0; round < d; ++round) {
        for (int tries = 0;; ++tries) {
            if (tries > 10000)
                throw CapError("could not place a fresh perfect matching");
            std::vector<int> perm(h);
            for (int i = 0; i < h; ++i)
                perm[i] = i;
            for (int i = h - 1; i > 0; --i)
                std::swap(perm[i], perm[rng.below(i + 1)]);
            bool ok = true;
            for (int i = 0; i < h && ok; ++i)
                ok = !g.has_edge(i, h + perm[i]);
            if (!ok)
                continue;
            for (int i = 0; i < h; ++i)
                g.add_edge(i, h + perm[i]);
            break;
        }
    }
    return g;
}

ExperimentReport hardcore_lclt_experiment(int n, int degree, double lambda, std::uint64_t draws,
                                          std::uint64_t seed)
{
    ExperimentReport rep;
    rep.config = {{"experiment", "hardcore_lclt"}, {"n", n}, {"degree", degree},
                  {"lambda", lambda}, {"draws", draws}, {"seed", seed}};
    RngStream rng(seed, 0, Stage::experiment);
    Graph g = random_regular_bipartite(n, degree, rng);
    HardcorePlan plan = HardcorePlan::for_graph(g);
    RngStream rs = rng.derive(Stage::crossing);
    std::vector<long long> sizes(draws);
    std::vector<double> dv(draws);
    for (std::uint64_t i = 0; i < draws; ++i) {
        sizes[i] = (long long)plan.sample_size(lambda, rs);
        dv[i] = double(sizes[i]);
    }
    Moments mm = moments(dv);
    auto pmf = empirical_pmf(sizes);
    double sup = 0;
    long long lo = pmf.begin()->first, hi = pmf.rbegin()->first;
    for (long long k = std::min(lo, (long long)std::floor(mm.mean - 8 * std::sqrt(mm.variance)));
         k <= std::max(hi, (long long)std::ceil(mm.mean + 8 * std::sqrt(mm.variance))); ++k) {
        double gauss = std::exp(-(k - mm.mean) * (k - mm.mean) / (2 * mm.variance)) /
                       std::sqrt(2 * std::numbers::pi * mm.variance);
        auto it = pmf.find(k);
        double e = it == pmf.end() ? 0.0 : it->second;
        sup = std::max(sup, std::abs(e - gauss));
    }
    auto c = subgraph_counts(g);
    MeanVar pred = hardcore_mean_var_counts(n, c.edges, c.p2, lambda);
    double bound = 0.3 / std::sqrt(lambda * n);
    rep.aggregate = {{"mean", mm.mean},
                     {"variance", mm.variance},
                     {"predicted_mean", double(pred.mean)},
                     {"predicted_variance", double(pred.variance)},
                     {"sup_deviation", sup},
                     {"bound", bound}};
    json hist = json::object();
    for (auto [k, v] : pmf)
        hist[std::to_string(k)] = v;
    rep.replicas.push_back({{"replica", 0}, {"seed", seed}, {"pmf", hist}});
    return rep;
}

//---------------------------------------------------------------------------//
// config-driven runs
//---------------------------------------------------------------------------//

namespace {

const json& need(const json& c, const char* key)
{
    if (!c.contains(key))
        throw ConfigError(std::string("missing key: ") + key);
    return c.at(key);
}

std::uint64_t need_uint(const json& c, const char* key)
{
    const json& v = need(c, key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
        throw ConfigError(std::string("key must be a nonnegative integer: ") + key);
    return v.get<std::uint64_t>();
}

double need_number(const json& c, const char* key)
{
    const json& v = need(c, key);
    if (!v.is_number())
        throw ConfigError(std::string("key must be a number: ") + key);
    return v.get<double>();
}

template <class T>
T get_or(const json& c, const char* key, T fallback)
{
    if (!c.contains(key))
        return fallback;
    try {
        return c.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("bad type for key: ") + key);
    }
}

void check_keys(const json& c, std::set<std::string> allowed)
{
    for (const char* k : {"experiment", "seed", "replicas", "force", "out", "threads"})
        allowed.insert(k);
    for (auto it = c.begin(); it != c.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("unknown key: " + it.key());
}

void regime(bool ok, bool force, const std::string& what)
{
    if (!ok && !force)
        throw RegimeError(what + " (set \"force\": true to run anyway)");
}

}  // namespace

ExperimentReport run_experiment(const json& c)
{
    if (!c.is_object())
        throw ConfigError("config must be a JSON object");
    std::string name = need(c, "experiment").is_string() ? c.at("experiment").get<std::string>()
                                                          : throw ConfigError("experiment must be a string");
    std::uint64_t seed = need_uint(c, "seed");
    bool force = get_or(c, "force", false);
    ExperimentReport r;
    if (name == "bipartite_distance") {
        check_keys(c, {"n", "m", "lazy"});
        int n = int(need_uint(c, "n"));
        std::uint64_t m = need_uint(c, "m");
        regime(subcritical_valid(n, m), force, "m below the subcritical floor");
        r = bipartite_distance_experiment(n, m, need_uint(c, "replicas"), seed,
                                          get_or(c, "lazy", true));
    } else if (name == "chromatic") {
        check_keys(c, {"n", "m"});
        int n = int(need_uint(c, "n"));
        std::uint64_t m = need_uint(c, "m");
        regime(subcritical_valid(n, m), force, "m below the subcritical floor");
        r = chromatic_experiment(n, m, need_uint(c, "replicas"), seed);
    } else if (name == "giant_component") {
        check_keys(c, {"case", "ns", "omega", "c", "eps", "above_threshold", "sweeps"});
        GiantOptions o;
        int k = int(need_uint(c, "case"));
        if (k < 1 || k > 5)
            throw ConfigError("case must be 1..5");
        o.which = GiantCase(k);
        o.ns = get_or(c, "ns", o.ns);
        o.omega = get_or(c, "omega", o.omega);
        o.c = get_or(c, "c", o.c);
        o.eps = get_or(c, "eps", o.eps);
        o.above_threshold = get_or(c, "above_threshold", o.above_threshold);
        o.sweeps = get_or(c, "sweeps", o.sweeps);
        r = giant_component_experiment(o, need_uint(c, "replicas"), seed);
    } else if (name == "capture_uniqueness") {
        check_keys(c, {"n", "lambda"});
        int n = int(need_uint(c, "n"));
        double lambda = need_number(c, "lambda");
        regime(lambda * std::sqrt(double(n)) >= 1, force, "lambda below 1/sqrt(n)");
        r = capture_uniqueness_experiment(n, lambda, need_uint(c, "replicas"), seed);
    } else if (name == "crossing_lclt") {
        check_keys(c, {"n", "m", "draws"});
        int n = int(need_uint(c, "n"));
        std::uint64_t m = need_uint(c, "m");
        regime(supercritical_valid(n, m), force, "m below the 13/56 floor");
        r = crossing_lclt_experiment(n, m, need_uint(c, "replicas"), need_uint(c, "draws"), seed);
    } else if (name == "hardcore_lclt") {
        check_keys(c, {"n", "degree", "lambda", "draws"});
        int n = int(need_uint(c, "n"));
        int d = int(need_uint(c, "degree"));
        double lambda = need_number(c, "lambda");
        regime(lambda <= double(convergence_threshold(d)), force,
               "lambda above the cluster-expansion threshold");
        r = hardcore_lclt_experiment(n, d, lambda, need_uint(c, "draws"), seed);
    } else {
        throw ConfigError("unknown experiment: " + name);
    }
    r.config["input"] = c;
    return r;
}

namespace {

std::string fmt_number(const json& v)
{
    std::ostringstream os;
    if (v.is_number_integer() || v.is_number_unsigned())
        os << v.dump();
    else
        os << std::scientific << std::setprecision(17) << v.get<double>();
    return os.str();
}

void flatten(const json& j, const std::string& prefix, std::ostringstream& os)
{
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), os);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i)
            flatten(j[i], prefix + "." + std::to_string(i), os);
    } else if (j.is_number()) {
        double x = j.get<double>();
        os << prefix << "," << fmt_number(j) << ",";
        if (x > 0) {
            std::ostringstream l;
            l << std::scientific << std::setprecision(17) << std::log10(x);
            os << l.str();
        }
        os << "\n";
    } else if (j.is_boolean()) {
        os << prefix << "," << (j.get<bool>() ? 1 : 0) << ",\n";
    } else if (j.is_string()) {
        os << prefix << "," << j.get<std::string>() << ",\n";
    }
}

}  // namespace

void write_report(const ExperimentReport& r, const std::string& dir)
{
    std::filesystem::create_directories(dir);
    std::ostringstream csv;
    csv << "key,value,log10_value\n";
    flatten(r.aggregate, "", csv);
    write_file_atomic(dir + "/aggregate.csv", csv.str());
    std::ostringstream jl;
    for (const auto& rep : r.replicas)
        jl << rep.dump() << "\n";
    write_file_atomic(dir + "/replicas.jsonl", jl.str());
    json summary{{"config", r.config}, {"aggregate", r.aggregate}};
    write_file_atomic(dir + "/report.json", summary.dump(2) + "\n");
}

}  // namespace trifree

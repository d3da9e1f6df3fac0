#include "trifree/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "trifree/cluster.hpp"
#include "trifree/graph_io.hpp"

namespace trifree {

//---------------------------------------------------------------------------//
// partitions
//---------------------------------------------------------------------------//

int xi_truncation(long double lambda)
{
    if (!(lambda > 0))
        throw std::invalid_argument("xi needs lambda > 0");
    long double t = std::ceil(std::sqrt(64 * std::log(2.0L) / std::log1p(lambda)));
    if (t > 1e8L)
        throw CapError("xi truncation too wide; lambda too small");
    return int(t);
}

std::vector<long double> xi_pmf(long double lambda)
{
    int T = xi_truncation(lambda);
    long double l1 = std::log1p(lambda);
    std::vector<long double> p(2 * T + 1);
    long double z = 0;
    for (int t = -T; t <= T; ++t) {
        p[t + T] = std::exp(-(long double)t * t * l1);
        z += p[t + T];
    }
    for (auto& x : p)
        x /= z;
    return p;
}

std::vector<std::pair<int, long double>> theta_offset_pmf(int n, long double lambda)
{
    std::vector<std::pair<int, long double>> out;
    if (lambda == 0) {
        out.emplace_back(0, 1.0L);
        return out;
    }
    auto p = xi_pmf(lambda);
    int T = (int(p.size()) - 1) / 2;
    int lo = -(n / 2), hi = (n + 1) / 2;
    std::vector<long double> acc(hi - lo + 1, 0);
    for (int t = -T; t <= T; ++t)
        acc[std::clamp(t, lo, hi) - lo] += p[t + T];
    for (int i = 0; i < int(acc.size()); ++i)
        if (acc[i] > 0)
            out.emplace_back(lo + i, acc[i]);
    return out;
}

int sample_xi(long double lambda, RngStream& rng)
{
    auto p = xi_pmf(lambda);
    int T = (int(p.size()) - 1) / 2;
    long double u = rng.uniform(), c = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        c += p[i];
        if (u < c)
            return int(i) - T;
    }
    return T;
}

Partition sample_theta_lambda(int n, long double lambda, RngStream& rng)
{
    int t = lambda == 0 ? 0 : sample_xi(lambda, rng);
    // upper clamp as defined; the lower clamp keeps |A| >= 0
    t = std::clamp(t, -(n / 2), (n + 1) / 2);
    int a = n / 2 + t;
    auto picks = sample_distinct(rng, n, a);
    std::vector<int> av(picks.begin(), picks.end());
    return Partition::from_sets(n, av);
}

//---------------------------------------------------------------------------//
// defect graphs
//---------------------------------------------------------------------------//

Graph sample_er(int vertices, double q, RngStream& rng)
{
    Graph g(vertices);
    if (q <= 0 || vertices < 2)
        return g;
    std::uint64_t pairs = std::uint64_t(vertices) * (vertices - 1) / 2;
    if (q >= 1) {
        for (int u = 0; u < vertices; ++u)
            for (int v = u + 1; v < vertices; ++v)
                g.add_edge(u, v);
        return g;
    }
    // geometric skips over the lexicographic pair list
    double log1mq = std::log1p(-q);
    std::uint64_t idx = 0;
    int u = 0, v = 0;
    std::uint64_t row_start = 0, row_len = vertices - 1;
    int cur_u = 0;
    while (true) {
        double r = rng.uniform();
        double skip = std::floor(std::log1p(-r) / log1mq);
        if (skip >= double(pairs - idx))
            break;
        idx += std::uint64_t(skip);
        if (idx >= pairs)
            break;
        // advance the row pointer monotonically
        while (idx >= row_start + row_len) {
            row_start += row_len;
            --row_len;
            ++cur_u;
        }
        u = cur_u;
        v = u + 1 + int(idx - row_start);
        g.add_edge(u, v);
        ++idx;
    }
    return g;
}

std::uint64_t default_sweeps(int vertices) { return 50ull * vertices * vertices; }

int erg_degree_cap(double q, double cap_n)
{
    return int(std::floor(50.0 * std::max(q * cap_n, std::log(cap_n))));
}

Graph sample_cond_erg(int k, double q, double psi, RngStream& rng, std::uint64_t sweeps,
                      double cap_n, ChainStats* stats)
{
    Graph out(k);
    if (k < 2 || q <= 0)
        return out;
    if (cap_n <= 0)
        cap_n = k;
    int cap = erg_degree_cap(q, cap_n);
    int words = (k + 63) / 64;
    std::vector<std::uint64_t> rows(std::size_t(k) * words, 0);
    std::vector<int> deg(k, 0);
    double r = q / (1 - q);
    auto has = [&](int u, int v) { return (rows[std::size_t(u) * words + (v >> 6)] >> (v & 63)) & 1; };
    auto flip = [&](int u, int v) {
        rows[std::size_t(u) * words + (v >> 6)] ^= 1ull << (v & 63);
        rows[std::size_t(v) * words + (u >> 6)] ^= 1ull << (u & 63);
    };
    auto common = [&](int u, int v) {
        const std::uint64_t* a = &rows[std::size_t(u) * words];
        const std::uint64_t* b = &rows[std::size_t(v) * words];
        for (int w = 0; w < words; ++w)
            if (a[w] & b[w])
                return true;
        return false;
    };
    ChainStats local;
    for (std::uint64_t it = 0; it < sweeps; ++it) {
        ++local.proposals;
        int u = int(rng.below(k));
        int v = int(rng.below(k - 1));
        if (v >= u)
            ++v;
        if (has(u, v)) {
            // removal: P2 drops by (d_u - 1) + (d_v - 1)
            double ratio = std::exp(-psi * double(deg[u] - 1 + deg[v] - 1)) / r;
            if (ratio >= 1 || rng.uniform() < ratio) {
                flip(u, v);
                --deg[u];
                --deg[v];
                ++local.accepted;
            }
        } else {
            if (deg[u] + 1 > cap || deg[v] + 1 > cap || common(u, v)) {
                ++local.blocked;
                continue;
            }
            double ratio = r * std::exp(psi * double(deg[u] + deg[v]));
            if (ratio >= 1 || rng.uniform() < ratio) {
                flip(u, v);
                ++deg[u];
                ++deg[v];
                ++local.accepted;
            }
        }
    }
    for (int u = 0; u < k; ++u)
        for (int w = 0; w < words; ++w) {
            std::uint64_t x = rows[std::size_t(u) * words + w];
            while (x) {
                int v = w * 64 + __builtin_ctzll(x);
                x &= x - 1;
                if (u < v)
                    out.add_edge(u, v);
            }
        }
    if (stats) {
        stats->proposals += local.proposals;
        stats->accepted += local.accepted;
        stats->blocked += local.blocked;
    }
    return out;
}

//---------------------------------------------------------------------------//
// composite models
//---------------------------------------------------------------------------//

const char* model_name(Model m)
{
    switch (m) {
    case Model::mu_m1: return "mu_m1";
    case Model::mu_m2: return "mu_m2";
    case Model::mu_lambda1: return "mu_lambda1";
    case Model::mu_lambda2: return "mu_lambda2";
    case Model::cerg: return "cerg";
    case Model::sandwich: return "sandwich";
    }
    return "?";
}

Model parse_model(const std::string& s)
{
    for (Model m : {Model::mu_m1, Model::mu_m2, Model::mu_lambda1, Model::mu_lambda2, Model::cerg,
                    Model::sandwich})
        if (s == model_name(m))
            return m;
    throw std::invalid_argument("unknown model: " + s);
}

Graph fallback_graph(int n, std::uint64_t m)
{
    int a = n / 2;
    if (m > std::uint64_t(a) * std::uint64_t(n - a))
        throw std::invalid_argument("no triangle-free graph with that many edges");
    Graph g(n);
    std::uint64_t left = m;
    for (int u = 0; u < a && left; ++u)
        for (int v = a; v < n && left; ++v, --left)
            g.add_edge(u, v);
    return g;
}

std::vector<EdgePair> crossing_from_ids(const Partition& p, const std::vector<std::int64_t>& ids)
{
    std::vector<EdgePair> out;
    out.reserve(ids.size());
    std::int64_t b = p.b();
    for (auto id : ids)
        out.emplace_back(p.a_vertices()[id / b], p.b_vertices()[id % b]);
    return out;
}

std::pair<Graph, Graph> defect_graphs(const Graph& g, const Partition& p)
{
    Graph s(p.a()), t(p.b());
    for (auto [u, v] : g.edges()) {
        if (p.side(u) != p.side(v)) {
            continue;
        }
        if (p.in_a(u))
            s.add_edge(p.local_index(u), p.local_index(v));
        else
            t.add_edge(p.local_index(u), p.local_index(v));
    }
    return {s, t};
}

namespace {

Graph assemble(int n, const Partition& p, const Graph& s, const Graph& t,
               const std::vector<EdgePair>& crossing)
{
    Graph g(n);
    for (auto [u, v] : s.edges())
        g.add_edge(p.a_vertices()[u], p.a_vertices()[v]);
    for (auto [u, v] : t.edges())
        g.add_edge(p.b_vertices()[u], p.b_vertices()[v]);
    for (auto [u, v] : crossing)
        g.add_edge(u, v);
    return g;
}

void use_fallback(SampleOutcome& out, int n, std::uint64_t m)
{
    out.fallback_used = true;
    out.graph = fallback_graph(n, m);
    std::vector<int> a0;
    for (int v = 0; v < n / 2; ++v)
        a0.push_back(v);
    out.partition = Partition::from_sets(n, a0);
    out.s = Graph(out.partition.a());
    out.t = Graph(out.partition.b());
    out.crossing = out.graph.edges();
}

Graph sample_defect_er(int k, double q, RngStream& rng) { return sample_er(k, q, rng); }

void fixed_m_crossing(SampleOutcome& out, int n, std::uint64_t m, long double lambda,
                      RngStream& rng, const SamplerOptions& o)
{
    std::uint64_t defects = out.s.num_edges() + out.t.num_edges();
    if (defects > m) {
        out.diag.too_many_defects = true;
        use_fallback(out, n, m);
        return;
    }
    std::uint64_t k = m - defects;
    if (o.lazy_bipartite && defects == 0) {
        out.diag.crossing_skipped = true;
        out.graph = Graph(n);
        return;
    }
    auto plan = HardcorePlan::for_product(out.s, out.t);
    auto top = plan.max_size();
    if (top && k > *top) {
        out.diag.infeasible_size = true;
        use_fallback(out, n, m);
        return;
    }
    RngStream cr = rng.derive(Stage::crossing);
    HardcoreStats hs;
    std::uint64_t cap = fixed_size_attempt_cap(plan.vertex_count(), lambda, o.fixed_size_safety);
    auto ids = plan.sample_fixed_size(lambda, k, cr, cap, &hs, o.rejection_cap);
    out.diag.crossing_attempts = hs.attempts;
    out.diag.opaque_rejections = hs.opaque_rejections;
    if (!ids) {
        out.diag.cap_hit = true;
        use_fallback(out, n, m);
        return;
    }
    out.crossing = crossing_from_ids(out.partition, *ids);
    out.graph = assemble(n, out.partition, out.s, out.t, out.crossing);
}

void lambda_crossing(SampleOutcome& out, int n, long double lambda, RngStream& rng,
                     const SamplerOptions& o)
{
    if (o.lazy_bipartite && out.s.num_edges() + out.t.num_edges() == 0) {
        out.diag.crossing_skipped = true;
        out.graph = Graph(n);
        return;
    }
    auto plan = HardcorePlan::for_product(out.s, out.t);
    RngStream cr = rng.derive(Stage::crossing);
    HardcoreStats hs;
    auto ids = plan.sample(lambda, cr, o.rejection_cap, &hs);
    out.diag.crossing_attempts = hs.attempts;
    out.diag.opaque_rejections = hs.opaque_rejections;
    out.crossing = crossing_from_ids(out.partition, ids);
    out.graph = assemble(n, out.partition, out.s, out.t, out.crossing);
}

bool union_has_triangle(const Graph& s, const Graph& t)
{
    return !is_triangle_free(s) || !is_triangle_free(t);
}

void erg_defects(SampleOutcome& out, const GlobalParams& gp, RngStream& rng,
                 const SamplerOptions& o)
{
    ChainStats cs;
    int a = out.partition.a(), b = out.partition.b();
    RngStream ra = rng.derive(Stage::defects_a), rb = rng.derive(Stage::defects_b);
    out.s = sample_cond_erg(a, double(gp.q2), double(gp.psi), ra,
                            o.sweeps ? o.sweeps : default_sweeps(a), double(gp.n), &cs);
    out.t = sample_cond_erg(b, double(gp.q2), double(gp.psi), rb,
                            o.sweeps ? o.sweeps : default_sweeps(b), double(gp.n), &cs);
    out.diag.chain_proposals = cs.proposals;
    out.diag.chain_accepted = cs.accepted;
}

}  // namespace

SampleOutcome sample_mu_m1(int n, std::uint64_t m, RngStream& rng, const SamplerOptions& o)
{
    GlobalParams gp = global_params_m(n, m);
    SampleOutcome out;
    out.model = Model::mu_m1;
    RngStream rp = rng.derive(Stage::partition);
    out.partition = sample_theta_lambda(n, gp.lambda, rp);
    RngStream ra = rng.derive(Stage::defects_a), rb = rng.derive(Stage::defects_b);
    out.s = sample_defect_er(out.partition.a(), double(gp.q0), ra);
    out.t = sample_defect_er(out.partition.b(), double(gp.q0), rb);
    if (union_has_triangle(out.s, out.t)) {
        out.diag.defect_triangle = true;
        use_fallback(out, n, m);
        return out;
    }
    fixed_m_crossing(out, n, m, gp.lambda, rng, o);
    return out;
}

SampleOutcome sample_mu_m2(int n, std::uint64_t m, RngStream& rng, const SamplerOptions& o)
{
    GlobalParams gp = global_params_m(n, m);
    SampleOutcome out;
    out.model = Model::mu_m2;
    RngStream rp = rng.derive(Stage::partition);
    out.partition = sample_theta_lambda(n, gp.lambda, rp);
    erg_defects(out, gp, rng, o);
    fixed_m_crossing(out, n, m, gp.lambda, rng, o);
    return out;
}

SampleOutcome sample_mu_lambda1(int n, long double lambda, RngStream& rng, const SamplerOptions& o)
{
    SampleOutcome out;
    out.model = Model::mu_lambda1;
    RngStream rp = rng.derive(Stage::partition);
    out.partition = sample_theta_lambda(n, lambda, rp);
    double q0 = lambda > 0 ? double(global_params_lambda(n, lambda).q0) : 0.0;
    RngStream ra = rng.derive(Stage::defects_a), rb = rng.derive(Stage::defects_b);
    out.s = sample_defect_er(out.partition.a(), q0, ra);
    out.t = sample_defect_er(out.partition.b(), q0, rb);
    if (union_has_triangle(out.s, out.t)) {
        // the algorithm outputs the empty graph here
        out.diag.defect_triangle = true;
        out.fallback_used = true;
        out.graph = Graph(n);
        out.s = Graph(out.partition.a());
        out.t = Graph(out.partition.b());
        return out;
    }
    lambda_crossing(out, n, lambda, rng, o);
    return out;
}

SampleOutcome sample_mu_lambda2(int n, long double lambda, RngStream& rng, const SamplerOptions& o)
{
    SampleOutcome out;
    out.model = Model::mu_lambda2;
    RngStream rp = rng.derive(Stage::partition);
    out.partition = sample_theta_lambda(n, lambda, rp);
    if (lambda == 0) {
        out.s = Graph(out.partition.a());
        out.t = Graph(out.partition.b());
        out.graph = Graph(n);
        return out;
    }
    GlobalParams gp = global_params_lambda(n, lambda);
    erg_defects(out, gp, rng, o);
    lambda_crossing(out, n, lambda, rng, o);
    return out;
}

namespace {
nlohmann::json edges_json(const std::vector<EdgePair>& e)
{
    nlohmann::json j = nlohmann::json::array();
    for (auto [u, v] : e)
        j.push_back({u, v});
    return j;
}

std::vector<EdgePair> global_edges(const Graph& local, const std::vector<int>& labels)
{
    std::vector<EdgePair> out;
    for (auto [u, v] : local.edges()) {
        int x = labels[u], y = labels[v];
        out.emplace_back(std::min(x, y), std::max(x, y));
    }
    std::sort(out.begin(), out.end());
    return out;
}
}  // namespace

nlohmann::json outcome_to_json(const SampleOutcome& s)
{
    nlohmann::json j;
    j["model"] = model_name(s.model);
    j["graph"] = graph_to_json(s.graph);
    j["partition"] = partition_to_json(s.partition);
    j["S"] = edges_json(global_edges(s.s, s.partition.a_vertices()));
    j["T"] = edges_json(global_edges(s.t, s.partition.b_vertices()));
    auto cr = s.crossing;
    std::sort(cr.begin(), cr.end());
    j["crossing"] = edges_json(cr);
    j["fallback_used"] = s.fallback_used;
    j["diagnostics"] = {
        {"crossing_attempts", s.diag.crossing_attempts},
        {"opaque_rejections", s.diag.opaque_rejections},
        {"chain_proposals", s.diag.chain_proposals},
        {"chain_accepted", s.diag.chain_accepted},
        {"defect_triangle", s.diag.defect_triangle},
        {"too_many_defects", s.diag.too_many_defects},
        {"infeasible_size", s.diag.infeasible_size},
        {"cap_hit", s.diag.cap_hit},
        {"crossing_skipped", s.diag.crossing_skipped},
    };
    return j;
}

//---------------------------------------------------------------------------//
// sandwich coupling
//---------------------------------------------------------------------------//

SandwichRates sandwich_rates(const GlobalParams& gp)
{
    SandwichRates r;
    double n = double(gp.n);
    double q2 = double(gp.q2);
    double shift = std::pow(n, -0.4);
    r.q_middle = q2;
    r.q_lower = q2 * (1 - shift);
    r.q_upper = q2 * (1 + shift);
    r.psi = double(gp.psi);
    r.degree_cap = erg_degree_cap(q2, n);
    if (r.q_lower <= 0)
        throw RegimeError("sandwich needs q_lower > 0");
    return r;
}

double sandwich_middle_prob(const SandwichRates& r, int deg_u, int deg_v)
{
    if (deg_u >= r.degree_cap || deg_v >= r.degree_cap)
        return 0;
    double odds = r.q_middle / (1 - r.q_middle) * std::exp(r.psi * double(deg_u + deg_v));
    return odds / (1 + odds);
}

SandwichTriple sandwich_sample(int side, const GlobalParams& gp, RngStream& rng)
{
    SandwichTriple out;
    SandwichRates rates = sandwich_rates(gp);
    out.q_middle = rates.q_middle;
    out.q_lower = rates.q_lower;
    out.q_upper = rates.q_upper;
    out.psi = rates.psi;
    out.degree_cap = rates.degree_cap;

    int k = side, words = (k + 63) / 64;
    struct Proc {
        std::vector<std::uint64_t> rows;
        std::vector<int> deg;
        Graph g;
    };
    auto make = [&] { return Proc{std::vector<std::uint64_t>(std::size_t(k) * words, 0),
                                  std::vector<int>(k, 0), Graph(k)}; };
    Proc lo = make(), mid = make(), up = make();
    auto blocked = [&](const Proc& p, int u, int v) {
        const std::uint64_t* a = &p.rows[std::size_t(u) * words];
        const std::uint64_t* b = &p.rows[std::size_t(v) * words];
        for (int w = 0; w < words; ++w)
            if (a[w] & b[w])
                return true;
        return false;
    };
    auto add = [&](Proc& p, int u, int v) {
        p.rows[std::size_t(u) * words + (v >> 6)] |= 1ull << (v & 63);
        p.rows[std::size_t(v) * words + (u >> 6)] |= 1ull << (u & 63);
        ++p.deg[u];
        ++p.deg[v];
        p.g.add_edge(u, v);
    };
    for (int u = 0; u < k; ++u)
        for (int v = u + 1; v < k; ++v) {
            double x = rng.uniform();
            double pl = blocked(lo, u, v) ? 0.0 : out.q_lower;
            double pu = blocked(up, u, v) ? 0.0 : out.q_upper;
            double pm = blocked(mid, u, v) ? 0.0 : sandwich_middle_prob(rates, mid.deg[u], mid.deg[v]);
            if (x < pl)
                add(lo, u, v);
            if (x < pm)
                add(mid, u, v);
            if (x < pu)
                add(up, u, v);
        }
    out.lower = std::move(lo.g);
    out.middle = std::move(mid.g);
    out.upper = std::move(up.g);
    auto subset = [](const Graph& a, const Graph& b) {
        for (auto [u, v] : a.edges())
            if (!b.has_edge(u, v))
                return false;
        return true;
    };
    out.lower_in_middle = subset(out.lower, out.middle);
    out.middle_in_upper = subset(out.middle, out.upper);
    out.containment_ok = out.lower_in_middle && out.middle_in_upper;
    return out;
}

nlohmann::json sandwich_to_json(const SandwichTriple& s)
{
    return {{"lower", graph_to_json(s.lower)},
            {"middle", graph_to_json(s.middle)},
            {"upper", graph_to_json(s.upper)},
            {"q_lower", s.q_lower},
            {"q_middle", s.q_middle},
            {"q_upper", s.q_upper},
            {"psi", s.psi},
            {"degree_cap", s.degree_cap},
            {"lower_in_middle", s.lower_in_middle},
            {"middle_in_upper", s.middle_in_upper},
            {"containment_ok", s.containment_ok}};
}

}  // namespace trifree

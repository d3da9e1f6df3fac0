#include "trifree/hardcore.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "trifree/canon.hpp"

namespace trifree {

struct HardcorePlan::Draw {
    std::vector<std::vector<std::uint64_t>> counts;              // per group, index = size
    std::vector<std::vector<std::vector<int>>> opaque_sets;      // per group, per unit
    std::uint64_t pool = 0;
    std::uint64_t total = 0;
};

namespace {

// key for small component classes; larger components stay distinct
struct ClassKey {
    int size;
    std::uint64_t mask;
    bool operator<(const ClassKey& o) const
    {
        return size != o.size ? size < o.size : mask < o.mask;
    }
};

ClassKey class_of(const Graph& comp, std::uint64_t unique_id)
{
    if (comp.n() <= 11)
        return {comp.n(), canonical_edge_mask(to_bits(comp))};
    return {1000 + comp.n(), unique_id};
}

// nontrivial components (sorted vertex lists) and isolated vertices
void split_components(const Graph& g, std::vector<std::vector<int>>& comps,
                      std::vector<int>& isolated)
{
    int count = 0;
    auto label = component_labels(g, &count);
    std::vector<std::vector<int>> byc(count);
    for (int v = 0; v < g.n(); ++v)
        byc[label[v]].push_back(v);
    for (auto& c : byc) {
        if (c.size() == 1)
            isolated.push_back(c[0]);
        else
            comps.push_back(std::move(c));
    }
}

std::vector<int> rejection_on(const Graph& g, long double lambda, RngStream& rng, std::uint64_t cap,
                              std::uint64_t* rounds)
{
    double p = double(lambda / (1 + lambda));
    std::vector<int> chosen;
    std::vector<char> in(g.n(), 0);
    for (std::uint64_t it = 0; it < cap; ++it) {
        if (rounds)
            ++*rounds;
        chosen.clear();
        for (int v = 0; v < g.n(); ++v) {
            in[v] = rng.bernoulli(p);
            if (in[v])
                chosen.push_back(v);
        }
        bool ok = true;
        for (int v : chosen) {
            for (int u : g.neighbors(v))
                if (in[u]) {
                    ok = false;
                    break;
                }
            if (!ok)
                break;
        }
        for (int v : chosen)
            in[v] = 0;
        if (ok)
            return chosen;
    }
    throw RejectionCapError("hard-core rejection cap exceeded");
}

}  // namespace

HardcorePlan HardcorePlan::for_graph(const Graph& g)
{
    HardcorePlan plan;
    plan.vertex_count_ = g.n();
    plan.g_ = std::make_shared<const Graph>(g);
    split_components(g, plan.comps_, plan.pool_);
    plan.pool_size_ = plan.pool_.size();
    std::map<IndPoly, std::size_t> by_poly;
    for (std::size_t u = 0; u < plan.comps_.size(); ++u) {
        if (int(plan.comps_[u].size()) > kUnitPolyCap) {
            plan.groups_.push_back({{}, {u}});
            continue;
        }
        IndPoly p = independence_polynomial(induced_subgraph(g, plan.comps_[u]));
        auto [it, fresh] = by_poly.emplace(p, plan.groups_.size());
        if (fresh)
            plan.groups_.push_back({p, {}});
        plan.groups_[it->second].units.push_back(u);
    }
    return plan;
}

HardcorePlan HardcorePlan::for_product(const Graph& s, const Graph& t)
{
    HardcorePlan plan;
    plan.product_ = true;
    plan.b_ = t.n();
    plan.vertex_count_ = std::uint64_t(s.n()) * std::uint64_t(t.n());
    split_components(s, plan.comp_s_, plan.iso_s_);
    split_components(t, plan.comp_t_, plan.iso_t_);
    for (auto& c : plan.comp_s_)
        plan.graph_s_.push_back(induced_subgraph(s, c));
    for (auto& c : plan.comp_t_)
        plan.graph_t_.push_back(induced_subgraph(t, c));
    plan.pool_size_ = std::uint64_t(plan.iso_s_.size()) * plan.iso_t_.size();

    std::uint64_t ns = plan.comp_s_.size(), nt = plan.comp_t_.size();
    std::uint64_t is = plan.iso_s_.size(), it = plan.iso_t_.size();
    std::vector<ClassKey> cls_s, cls_t;
    for (std::uint64_t i = 0; i < ns; ++i)
        cls_s.push_back(class_of(plan.graph_s_[i], i));
    for (std::uint64_t i = 0; i < nt; ++i)
        cls_t.push_back(class_of(plan.graph_t_[i], (1ull << 40) + i));

    // (kind, class, class) -> group; kind 0: C_S x C_T, kind 1: single side
    using Key = std::tuple<int, ClassKey, ClassKey>;
    std::map<Key, std::size_t> index;
    auto group_for = [&](const Key& key, std::uint64_t unit) -> std::vector<std::uint64_t>& {
        auto [pos, fresh] = index.emplace(key, plan.groups_.size());
        if (fresh) {
            Graph ug = plan.unit_graph(unit);
            IndPoly p;
            if (ug.n() <= kUnitPolyCap)
                p = independence_polynomial(ug);
            plan.groups_.push_back({std::move(p), {}});
        }
        return plan.groups_[pos->second].units;
    };
    ClassKey none{0, 0};
    for (std::uint64_t a = 0; a < ns; ++a)
        for (std::uint64_t b = 0; b < nt; ++b)
            group_for({0, cls_s[a], cls_t[b]}, a * nt + b).push_back(a * nt + b);
    std::uint64_t base = ns * nt;
    for (std::uint64_t a = 0; a < ns && it; ++a) {
        auto& units = group_for({1, cls_s[a], none}, base + a * it);
        for (std::uint64_t j = 0; j < it; ++j)
            units.push_back(base + a * it + j);
    }
    base += ns * it;
    for (std::uint64_t b = 0; b < nt && is; ++b) {
        auto& units = group_for({1, cls_t[b], none}, base + b);
        for (std::uint64_t i = 0; i < is; ++i)
            units.push_back(base + i * nt + b);
    }
    // opaque groups hold one unit each so rejection runs per component
    std::vector<Group> split;
    for (auto& grp : plan.groups_) {
        if (!grp.poly.empty() || grp.units.size() == 1) {
            split.push_back(std::move(grp));
            continue;
        }
        for (auto u : grp.units)
            split.push_back({{}, {u}});
    }
    plan.groups_ = std::move(split);
    return plan;
}

Graph HardcorePlan::unit_graph(std::uint64_t unit) const
{
    if (!product_)
        return induced_subgraph(*g_, comps_[unit]);
    std::uint64_t ns = comp_s_.size(), nt = comp_t_.size(), it = iso_t_.size();
    if (unit < ns * nt)
        return cartesian_product(graph_s_[unit / nt], graph_t_[unit % nt]);
    unit -= ns * nt;
    if (unit < ns * it)
        return graph_s_[unit / it];
    unit -= ns * it;
    return graph_t_[unit % nt];
}

std::int64_t HardcorePlan::unit_vertex(std::uint64_t unit, int local) const
{
    if (!product_)
        return comps_[unit][local];
    std::int64_t b = b_;
    std::uint64_t ns = comp_s_.size(), nt = comp_t_.size(), it = iso_t_.size();
    if (unit < ns * nt) {
        const auto& U = comp_s_[unit / nt];
        const auto& W = comp_t_[unit % nt];
        int w = int(W.size());
        return std::int64_t(U[local / w]) * b + W[local % w];
    }
    unit -= ns * nt;
    if (unit < ns * it)
        return std::int64_t(comp_s_[unit / it][local]) * b + iso_t_[unit % it];
    unit -= ns * it;
    return std::int64_t(iso_s_[unit / nt]) * b + comp_t_[unit % nt][local];
}

std::int64_t HardcorePlan::pool_vertex(std::uint64_t index) const
{
    if (!product_)
        return pool_[index];
    std::uint64_t it = iso_t_.size();
    return std::int64_t(iso_s_[index / it]) * b_ + iso_t_[index % it];
}

std::optional<std::uint64_t> HardcorePlan::max_size() const
{
    std::uint64_t total = pool_size_;
    for (auto& grp : groups_) {
        if (grp.poly.empty())
            return std::nullopt;
        total += (grp.poly.size() - 1) * grp.units.size();
    }
    return total;
}

void HardcorePlan::draw_sizes(long double lambda, RngStream& rng, std::uint64_t rejection_cap,
                              Draw& d, HardcoreStats* stats) const
{
    d.counts.assign(groups_.size(), {});
    d.opaque_sets.assign(groups_.size(), {});
    d.total = 0;
    for (std::size_t gi = 0; gi < groups_.size(); ++gi) {
        const Group& grp = groups_[gi];
        if (grp.poly.empty()) {
            for (auto u : grp.units) {
                Graph ug = unit_graph(u);
                std::uint64_t rounds = 0;
                auto set = rejection_on(ug, lambda, rng, rejection_cap, &rounds);
                if (stats)
                    stats->opaque_rejections += rounds - 1;
                d.total += set.size();
                d.opaque_sets[gi].push_back(std::move(set));
            }
            continue;
        }
        // sizes deg..1 first, size 0 last
        std::size_t deg = grp.poly.size() - 1;
        std::vector<long double> w(deg + 1);
        long double pw = 1;
        std::vector<long double> by_size(deg + 1);
        for (std::size_t j = 0; j <= deg; ++j) {
            by_size[j] = (long double)grp.poly[j] * pw;
            pw *= lambda;
        }
        for (std::size_t j = 0; j <= deg; ++j)
            w[j] = by_size[deg - j];
        auto c = sample_multinomial(rng, grp.units.size(), w);
        d.counts[gi].assign(deg + 1, 0);
        for (std::size_t j = 0; j <= deg; ++j) {
            d.counts[gi][deg - j] = c[j];
            d.total += (deg - j) * c[j];
        }
    }
    d.pool = sample_binomial(rng, pool_size_, double(lambda / (1 + lambda)));
    d.total += d.pool;
}

std::vector<std::int64_t> HardcorePlan::materialise(const Draw& d, RngStream& rng) const
{
    std::vector<std::int64_t> out;
    out.reserve(d.total);
    for (std::size_t gi = 0; gi < groups_.size(); ++gi) {
        const Group& grp = groups_[gi];
        if (grp.poly.empty()) {
            for (std::size_t k = 0; k < grp.units.size(); ++k)
                for (int v : d.opaque_sets[gi][k])
                    out.push_back(unit_vertex(grp.units[k], v));
            continue;
        }
        std::uint64_t nonempty = 0;
        for (std::size_t j = 1; j < d.counts[gi].size(); ++j)
            nonempty += d.counts[gi][j];
        if (!nonempty)
            continue;
        auto picks = sample_distinct(rng, grp.units.size(), nonempty);
        std::size_t pos = 0;
        for (std::size_t j = 1; j < d.counts[gi].size(); ++j)
            for (std::uint64_t c = 0; c < d.counts[gi][j]; ++c) {
                std::uint64_t unit = grp.units[picks[pos++]];
                BitGraph bits = to_bits(unit_graph(unit));
                for (int v : uniform_independent_set(bits, int(j), rng))
                    out.push_back(unit_vertex(unit, v));
            }
    }
    for (auto idx : sample_distinct(rng, pool_size_, d.pool))
        out.push_back(pool_vertex(idx));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::int64_t> HardcorePlan::sample(long double lambda, RngStream& rng,
                                               std::uint64_t rejection_cap,
                                               HardcoreStats* stats) const
{
    Draw d;
    draw_sizes(lambda, rng, rejection_cap, d, stats);
    if (stats)
        ++stats->attempts;
    return materialise(d, rng);
}

std::uint64_t HardcorePlan::sample_size(long double lambda, RngStream& rng,
                                        std::uint64_t rejection_cap) const
{
    Draw d;
    draw_sizes(lambda, rng, rejection_cap, d, nullptr);
    return d.total;
}

std::optional<std::vector<std::int64_t>> HardcorePlan::sample_fixed_size(
    long double lambda, std::uint64_t k, RngStream& rng, std::uint64_t attempt_cap,
    HardcoreStats* stats, std::uint64_t rejection_cap) const
{
    auto top = max_size();
    if (top && k > *top)
        return std::nullopt;
    if (k == 0)
        return std::vector<std::int64_t>{};
    Draw d;
    for (std::uint64_t a = 0; a < attempt_cap; ++a) {
        if (stats)
            ++stats->attempts;
        draw_sizes(lambda, rng, rejection_cap, d, stats);
        if (d.total == k)
            return materialise(d, rng);
    }
    return std::nullopt;
}

std::vector<long double> HardcorePlan::size_pmf(long double lambda) const
{
    auto top = max_size();
    if (!top)
        throw CapError("size pmf needs every component below the polynomial cap");
    if (*top > 20000)
        throw CapError("size pmf limited to 20000 sizes");
    std::vector<long double> pmf{1.0L};
    auto convolve = [&](const std::vector<long double>& law) {
        std::vector<long double> next(pmf.size() + law.size() - 1, 0);
        for (std::size_t i = 0; i < pmf.size(); ++i)
            for (std::size_t j = 0; j < law.size(); ++j)
                next[i + j] += pmf[i] * law[j];
        pmf = std::move(next);
    };
    for (auto& grp : groups_) {
        std::vector<long double> law(grp.poly.size());
        long double z = 0, pw = 1;
        for (std::size_t j = 0; j < law.size(); ++j) {
            law[j] = grp.poly[j] * pw;
            z += law[j];
            pw *= lambda;
        }
        for (auto& x : law)
            x /= z;
        for (std::size_t c = 0; c < grp.units.size(); ++c)
            convolve(law);
    }
    long double p = lambda / (1 + lambda);
    for (std::uint64_t c = 0; c < pool_size_; ++c)
        convolve({1 - p, p});
    return pmf;
}

std::vector<int> sample_hardcore_rejection(const Graph& g, long double lambda, RngStream& rng,
                                           std::uint64_t cap, HardcoreStats* stats)
{
    std::uint64_t rounds = 0;
    auto out = rejection_on(g, lambda, rng, cap, &rounds);
    if (stats)
        stats->attempts += rounds;
    return out;
}

std::vector<int> sample_hardcore(const Graph& g, long double lambda, RngStream& rng,
                                 std::uint64_t cap)
{
    auto plan = HardcorePlan::for_graph(g);
    auto s = plan.sample(lambda, rng, cap);
    return std::vector<int>(s.begin(), s.end());
}

std::uint64_t fixed_size_attempt_cap(std::uint64_t vertices, long double lambda, double safety)
{
    long double c = safety * (1 + std::sqrt((long double)vertices * lambda));
    return std::uint64_t(std::ceil(c));
}

std::optional<std::vector<int>> sample_hardcore_fixed_size(const Graph& g, long double lambda,
                                                           std::uint64_t k, RngStream& rng,
                                                           double safety, HardcoreStats* stats)
{
    auto plan = HardcorePlan::for_graph(g);
    auto s = plan.sample_fixed_size(lambda, k, rng, fixed_size_attempt_cap(g.n(), lambda, safety),
                                    stats);
    if (!s)
        return std::nullopt;
    return std::vector<int>(s->begin(), s->end());
}

std::vector<int> uniform_independent_set(const BitGraph& g, int k, RngStream& rng)
{
    IndPolyCache cache(g);
    std::uint64_t mask = g.all();
    auto count = [&](std::uint64_t m, int j) -> std::uint64_t {
        const IndPoly& p = cache(m);
        return j < int(p.size()) ? p[j] : 0;
    };
    if (count(mask, k) == 0)
        throw std::invalid_argument("no independent set of the requested size");
    std::vector<int> out;
    for (int v = 0; v < g.n && k > 0; ++v) {
        if (!((mask >> v) & 1))
            continue;
        std::uint64_t total = count(mask, k);
        std::uint64_t with_v = count(mask & ~(1ull << v) & ~g.adj[v], k - 1);
        if (rng.below(total) < with_v) {
            out.push_back(v);
            mask &= ~(1ull << v) & ~g.adj[v];
            --k;
        } else {
            mask &= ~(1ull << v);
        }
    }
    return out;
}

}  // namespace trifree

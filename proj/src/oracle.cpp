#include "trifree/oracle.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "trifree/canon.hpp"
#include "trifree/cluster.hpp"
#include "trifree/indpoly.hpp"

namespace trifree {

namespace {

BitGraph bits_from_mask(int n, std::uint64_t mask)
{
    BitGraph g(n);
    for (int u = 0, i = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v, ++i)
            if ((mask >> i) & 1)
                g.add_edge(u, v);
    return g;
}

std::uint64_t mask_of_bits(const BitGraph& g)
{
    std::uint64_t m = 0;
    for (int u = 0, i = 0; u < g.n; ++u)
        for (int v = u + 1; v < g.n; ++v, ++i)
            if (g.has_edge(u, v))
                m |= 1ull << i;
    return m;
}

// calls f(I) for every independent set I of g restricted to `cand`
template <class F>
void for_each_indset(const BitGraph& g, std::uint64_t chosen, std::uint64_t cand, F& f)
{
    f(chosen);
    while (cand) {
        int u = __builtin_ctzll(cand);
        cand &= cand - 1;
        for_each_indset(g, chosen | (1ull << u), cand & ~g.adj[u], f);
    }
}

// independent sets of size exactly k
template <class F>
void for_each_indset_k(const BitGraph& g, std::uint64_t chosen, int size, std::uint64_t cand,
                       int k, F& f)
{
    if (size == k) {
        f(chosen);
        return;
    }
    while (cand && size + __builtin_popcountll(cand) >= k) {
        int u = __builtin_ctzll(cand);
        cand &= cand - 1;
        for_each_indset_k(g, chosen | (1ull << u), size + 1, cand & ~g.adj[u], k, f);
    }
}

struct Walker {
    int n;
    BitGraph g;
    const std::function<void(const BitGraph&)>& visit;

    void grow(int v)
    {
        if (v == n) {
            visit(g);
            return;
        }
        auto place = [&](std::uint64_t I) {
            g.adj[v] = I;
            for (std::uint64_t x = I; x; x &= x - 1)
                g.adj[__builtin_ctzll(x)] |= 1ull << v;
            grow(v + 1);
            for (std::uint64_t x = I; x; x &= x - 1)
                g.adj[__builtin_ctzll(x)] &= ~(1ull << v);
            g.adj[v] = 0;
        };
        std::uint64_t all = v == 0 ? 0 : ((1ull << v) - 1);
        for_each_indset(g, 0, all, place);
    }
};

}  // namespace

BigInt CountTable::total() const
{
    BigInt s = 0;
    for (const auto& c : counts)
        s += c;
    return s;
}

void for_each_tfree(int n, const std::function<void(const BitGraph&)>& visit)
{
    if (n < 0 || n > kLabeledWalkCap)
        throw CapError("labelled walk limited to n <= 9");
    Walker w{n, BitGraph(n), visit};
    w.grow(0);
}

const ClassTable& tfree_classes(int n)
{
    static std::mutex mu;
    static std::array<std::unique_ptr<ClassTable>, kLabeledWalkCap + 1> cache;
    if (n < 0 || n > kLabeledWalkCap)
        throw CapError("class tables limited to n <= 9");
    std::lock_guard<std::mutex> lock(mu);
    if (!cache[0])
        cache[0] = std::make_unique<ClassTable>(ClassTable{{0, 1}});
    for (int k = 1; k <= n; ++k) {
        if (cache[k])
            continue;
        auto next = std::make_unique<ClassTable>();
        for (const auto& [cmask, mult] : *cache[k - 1]) {
            BitGraph base = bits_from_mask(k - 1, cmask);
            BitGraph g(k);
            for (int u = 0; u < k - 1; ++u)
                g.adj[u] = base.adj[u];
            auto add = [&](std::uint64_t I) {
                BitGraph h = g;
                h.adj[k - 1] = I;
                for (std::uint64_t x = I; x; x &= x - 1)
                    h.adj[__builtin_ctzll(x)] |= 1ull << (k - 1);
                (*next)[canonical_edge_mask(h)] += mult;
            };
            std::uint64_t all = k == 1 ? 0 : ((1ull << (k - 1)) - 1);
            for_each_indset(base, 0, all, add);
        }
        cache[k] = std::move(next);
    }
    return *cache[n];
}

CountTable enumerate_tfree_walk(int n)
{
    if (n < 1 || n > kLabeledWalkCap)
        throw CapError("labelled walk limited to 1 <= n <= 9");
    CountTable t{n, std::vector<BigInt>(std::size_t(n) * (n - 1) / 2 + 1, 0)};
    std::vector<std::uint64_t> acc(t.counts.size(), 0);
    // walk n-1 vertices, then the last vertex contributes the independence
    // polynomial of the graph it attaches to
    for_each_tfree(n - 1, [&](const BitGraph& g) {
        int e = g.num_edges();
        IndPoly p = independence_polynomial(g);
        for (std::size_t k = 0; k < p.size(); ++k)
            acc[e + k] += p[k];
    });
    for (std::size_t m = 0; m < acc.size(); ++m)
        t.counts[m] = acc[m];
    return t;
}

CountTable enumerate_tfree_filter(int n)
{
    if (n < 1 || n > kFilterAllCap)
        throw CapError("filter-all enumeration limited to 1 <= n <= 7");
    int pairs = n * (n - 1) / 2;
    CountTable t{n, std::vector<BigInt>(pairs + 1, 0)};
    std::vector<std::uint64_t> acc(pairs + 1, 0);
    for (std::uint64_t mask = 0; mask < (1ull << pairs); ++mask)
        if (is_triangle_free(bits_from_mask(n, mask)))
            ++acc[__builtin_popcountll(mask)];
    for (int m = 0; m <= pairs; ++m)
        t.counts[m] = acc[m];
    return t;
}

CountTable enumerate_tfree(int n)
{
    if (n < 1 || n > kEnumerateCap)
        throw CapError("exact counting limited to 1 <= n <= 10");
    if (n <= 8)
        return enumerate_tfree_walk(n);
    CountTable t{n, std::vector<BigInt>(std::size_t(n) * (n - 1) / 2 + 1, 0)};
    for (const auto& [cmask, mult] : tfree_classes(n - 1)) {
        BitGraph g = bits_from_mask(n - 1, cmask);
        int e = __builtin_popcountll(cmask);
        IndPoly p = independence_polynomial(g);
        for (std::size_t k = 0; k < p.size(); ++k)
            t.counts[e + k] += BigInt(mult) * BigInt(p[k]);
    }
    return t;
}

Rational exact_Z(int n, const Rational& lambda)
{
    CountTable t = enumerate_tfree(n);
    Rational z = 0, pw = 1;
    for (const auto& c : t.counts) {
        z += Rational(c) * pw;
        pw *= lambda;
    }
    return z;
}

//---------------------------------------------------------------------------//
// restricted partition functions
//---------------------------------------------------------------------------//

DefectCaps defect_caps(const Partition& p, long double lambda, Restriction r)
{
    DefectCaps c;
    if (r == Restriction::weak_degree_cap) {
        long double alpha = 1 / (96 * std::pow(std::numbers::e_v<long double>, 3));
        c.max_degree = double(alpha / lambda);
        c.max_side_edges = std::numeric_limits<double>::infinity();
    } else {
        PartitionParams pp = partition_params(p, lambda, Variant::supercritical);
        c.max_degree = double(pp.delta_cap);
        c.max_side_edges = double(pp.k_cap);
    }
    return c;
}

Rational exact_restricted_Z(const Partition& p, const Rational& lambda, const DefectCaps& caps)
{
    int n = p.n();
    if (n > kRestrictedCap)
        throw CapError("restricted partition functions limited to n <= 8");
    std::uint64_t amask = p.a_mask();
    std::uint64_t all = n == 64 ? ~0ull : ((1ull << n) - 1);
    std::uint64_t bmask = all & ~amask;
    std::vector<std::uint64_t> acc(std::size_t(n) * (n - 1) / 2 + 1, 0);
    for_each_tfree(n, [&](const BitGraph& g) {
        int s = 0, t = 0, edges = 0;
        for (int v = 0; v < n; ++v) {
            std::uint64_t same = g.adj[v] & (((amask >> v) & 1) ? amask : bmask);
            int d = __builtin_popcountll(same);
            if (d > caps.max_degree)
                return;
            ((amask >> v) & 1 ? s : t) += d;
            edges += g.degree(v);
        }
        if (s / 2 > caps.max_side_edges || t / 2 > caps.max_side_edges)
            return;
        ++acc[edges / 2];
    });
    Rational z = 0, pw = 1;
    for (auto c : acc) {
        z += Rational(c) * pw;
        pw *= lambda;
    }
    return z;
}

Rational exact_restricted_Z(const Partition& p, const Rational& lambda, Restriction r)
{
    return exact_restricted_Z(p, lambda, defect_caps(p, lambda.convert_to<long double>(), r));
}

namespace {

std::vector<std::uint64_t> tfree_masks(int k)
{
    std::vector<std::uint64_t> out;
    for_each_tfree(k, [&](const BitGraph& g) { out.push_back(mask_of_bits(g)); });
    return out;
}

// S x T on ids i*b + j
BitGraph product_bits(const BitGraph& s, const BitGraph& t)
{
    int a = s.n, b = t.n;
    if (a * b > 64)
        throw CapError("product too large for a bit graph");
    BitGraph g(a * b);
    for (int i = 0; i < a; ++i)
        for (int j = 0; j < b; ++j) {
            int id = i * b + j;
            for (int i2 = i + 1; i2 < a; ++i2)
                if (s.has_edge(i, i2))
                    g.add_edge(id, i2 * b + j);
            for (int j2 = j + 1; j2 < b; ++j2)
                if (t.has_edge(j, j2))
                    g.add_edge(id, i * b + j2);
        }
    return g;
}

}  // namespace

DefectPmf exact_defect_pmf(const Partition& p, const Rational& lambda)
{
    int a = p.a(), b = p.b();
    if (a > 4 || b > 4)
        throw CapError("exact defect law limited to a, b <= 4");
    DefectCaps caps =
        defect_caps(p, lambda.convert_to<long double>(), Restriction::lambda_sparse);
    DefectPmf out;
    Rational z = 0;
    for (auto sm : tfree_masks(a))
        for (auto tm : tfree_masks(b)) {
            BitGraph s = bits_from_mask(a, sm), t = bits_from_mask(b, tm);
            int es = __builtin_popcountll(sm), et = __builtin_popcountll(tm);
            int d = 0;
            for (int v = 0; v < a; ++v)
                d = std::max(d, s.degree(v));
            for (int v = 0; v < b; ++v)
                d = std::max(d, t.degree(v));
            if (d > caps.max_degree || std::max(es, et) > caps.max_side_edges)
                continue;
            Rational w = eval_poly(independence_polynomial(product_bits(s, t)), lambda);
            for (int i = 0; i < es + et; ++i)
                w *= lambda;
            out[{sm, tm}] = w;
            z += w;
        }
    for (auto& [k, v] : out)
        v /= z;
    return out;
}

ProductIdentityReport check_defect_product_identity(int a, int b,
                                                    const std::vector<Rational>& lambdas)
{
    if (a < 0 || b < 0 || a * b > 20)
        throw CapError("product identity check limited to ab <= 20");
    ProductIdentityReport rep;
    int n = a + b;
    int cross = a * b;
    int max_e = n * (n - 1) / 2;
    for (auto sm : tfree_masks(a))
        for (auto tm : tfree_masks(b)) {
            ++rep.pairs;
            BitGraph s = bits_from_mask(a, sm), t = bits_from_mask(b, tm);
            int base = __builtin_popcountll(sm) + __builtin_popcountll(tm);
            BitGraph g(n);
            for (int u = 0; u < a; ++u)
                for (int v = u + 1; v < a; ++v)
                    if (s.has_edge(u, v))
                        g.add_edge(u, v);
            for (int u = 0; u < b; ++u)
                for (int v = u + 1; v < b; ++v)
                    if (t.has_edge(u, v))
                        g.add_edge(a + u, a + v);
            // direct side: every crossing-edge subset, kept when triangle-free
            std::vector<std::uint64_t> direct(max_e + 1, 0);
            for (std::uint64_t e = 0; e < (1ull << cross); ++e) {
                BitGraph h = g;
                for (std::uint64_t x = e; x; x &= x - 1) {
                    int id = __builtin_ctzll(x);
                    h.add_edge(id / b, a + id % b);
                }
                if (is_triangle_free(h))
                    ++direct[base + __builtin_popcountll(e)];
            }
            // product side
            IndPoly ip = independence_polynomial(product_bits(s, t));
            std::vector<std::uint64_t> prod(max_e + 1, 0);
            for (std::size_t k = 0; k < ip.size(); ++k)
                prod[base + k] += ip[k];
            if (direct != prod)
                ++rep.mismatches;
            for (const auto& lam : lambdas) {
                Rational x = 0, y = 0, pw = 1;
                for (int m = 0; m <= max_e; ++m) {
                    x += Rational(direct[m]) * pw;
                    y += Rational(prod[m]) * pw;
                    pw *= lam;
                }
                if (x != y)
                    ++rep.value_mismatches;
            }
        }
    return rep;
}

//---------------------------------------------------------------------------//
// model laws
//---------------------------------------------------------------------------//

long double ModelPmf::labeled_prob(std::uint64_t mask) const
{
    long double p = mask == fallback_mask ? fallback_mass : 0;
    std::uint64_t c = canonical_edge_mask(n, mask);
    auto it = classes.find(c);
    if (it != classes.end()) {
        const auto& tab = tfree_classes(n);
        auto m = tab.find(c);
        if (m == tab.end())
            throw std::logic_error("class outside T(n)");
        p += it->second / (long double)m->second;
    }
    return p;
}

std::unordered_map<std::uint64_t, long double> ModelPmf::class_law() const
{
    auto out = classes;
    if (fallback_mass > 0)
        out[canonical_edge_mask(n, fallback_mask)] += fallback_mass;
    return out;
}

long double ModelPmf::total() const
{
    long double s = fallback_mass;
    for (const auto& [k, v] : classes)
        s += v;
    return s;
}

namespace {

struct DefectEntry {
    std::uint64_t mask;
    int edges;
    long double prob;
};

// triangle-free graphs on k vertices with their probabilities; mass of the
// remaining (non-triangle-free) graphs is 1 - sum
std::vector<DefectEntry> er_law(int k, long double q)
{
    std::vector<DefectEntry> out;
    int pairs = k * (k - 1) / 2;
    for_each_tfree(k, [&](const BitGraph& g) {
        int e = g.num_edges();
        long double p = std::pow(q, (long double)e) * std::pow(1 - q, (long double)(pairs - e));
        out.push_back({mask_of_bits(g), e, p});
    });
    return out;
}

std::vector<DefectEntry> erg_law(int k, long double q, long double psi, double cap_n)
{
    std::vector<DefectEntry> out;
    int cap = erg_degree_cap(double(q), cap_n);
    long double r = q / (1 - q), z = 0;
    for_each_tfree(k, [&](const BitGraph& g) {
        long double p2 = 0;
        for (int v = 0; v < k; ++v) {
            int d = g.degree(v);
            if (d > cap)
                return;
            p2 += (long double)d * (d - 1) / 2;
        }
        int e = g.num_edges();
        long double w = std::pow(r, (long double)e) * std::exp(psi * p2);
        out.push_back({mask_of_bits(g), e, w});
        z += w;
    });
    for (auto& d : out)
        d.prob /= z;
    return out;
}

}  // namespace

MaskPmf exact_cerg_pmf(int vertices, double q, double psi, double cap_n)
{
    if (vertices > kModelPmfCap)
        throw CapError("exact ERG law limited to 8 vertices");
    if (cap_n <= 0)
        cap_n = vertices;
    MaskPmf out;
    for (const auto& d : erg_law(vertices, q, psi, cap_n))
        out[d.mask] += d.prob;
    return out;
}

MaskPmf exact_hardcore_pmf(const Graph& g, long double lambda)
{
    if (g.n() > 30)
        throw CapError("exact hard-core law limited to 30 vertices");
    BitGraph b = to_bits(g);
    MaskPmf out;
    long double z = 0;
    auto f = [&](std::uint64_t I) {
        long double w = std::pow(lambda, (long double)__builtin_popcountll(I));
        out[I] = w;
        z += w;
    };
    for_each_indset(b, 0, b.all(), f);
    for (auto& [k, v] : out)
        v /= z;
    return out;
}

ModelPmf exact_model_pmf(Model model, const ModelArgs& args)
{
    int n = args.n;
    if (n < 1 || n > kModelPmfCap)
        throw CapError("exact model laws limited to 1 <= n <= 8");
    ModelPmf out;
    out.n = n;
    if (model == Model::cerg) {
        for (const auto& [mask, p] : exact_cerg_pmf(n, args.q, args.psi, args.cap_n))
            out.classes[canonical_edge_mask(n, mask)] += p;
        return out;
    }
    if (model == Model::sandwich)
        throw std::invalid_argument("no exact law for the sandwich triple");

    bool fixed_m = model == Model::mu_m1 || model == Model::mu_m2;
    bool erg = model == Model::mu_m2 || model == Model::mu_lambda2;
    long double lambda;
    GlobalParams gp;
    if (fixed_m) {
        gp = global_params_m(n, args.m);
        lambda = gp.lambda;
        out.fallback_mask = edge_mask(fallback_graph(n, args.m));
    } else {
        lambda = args.lambda;
        if (lambda > 0)
            gp = global_params_lambda(n, lambda);
    }
    if (!fixed_m && lambda == 0) {
        out.classes[0] = 1;
        return out;
    }

    // the sampler draws defects with double-precision parameters
    long double q0 = double(gp.q0), q2 = double(gp.q2), psi = double(gp.psi);

    for (auto [t, pa] : theta_offset_pmf(n, lambda)) {
        int a = n / 2 + t, b = n - a;
        auto law_a = erg ? erg_law(a, q2, psi, double(n)) : er_law(a, q0);
        auto law_b = erg ? erg_law(b, q2, psi, double(n)) : er_law(b, q0);
        // local pair bits inside the global mask
        std::vector<std::uint64_t> sbit(a * (a - 1) / 2 + 1), tbit(b * (b - 1) / 2 + 1);
        for (int u = 0, i = 0; u < a; ++u)
            for (int v = u + 1; v < a; ++v, ++i)
                sbit[i] = 1ull << pair_index(n, u, v);
        for (int u = 0, i = 0; u < b; ++u)
            for (int v = u + 1; v < b; ++v, ++i)
                tbit[i] = 1ull << pair_index(n, a + u, a + v);
        std::vector<std::uint64_t> xbit(a * b);
        for (int i = 0; i < a; ++i)
            for (int j = 0; j < b; ++j)
                xbit[i * b + j] = 1ull << pair_index(n, i, a + j);
        auto lift = [](std::uint64_t local, const std::vector<std::uint64_t>& bits) {
            std::uint64_t g = 0;
            for (; local; local &= local - 1)
                g |= bits[__builtin_ctzll(local)];
            return g;
        };
        auto cross_mask = [&](std::uint64_t I) { return lift(I, xbit); };

        std::unordered_map<std::uint64_t, long double> cond;
        long double placed = 0;
        for (const auto& S : law_a)
            for (const auto& T : law_b) {
                long double p = S.prob * T.prob;
                if (p == 0)
                    continue;
                std::uint64_t base = lift(S.mask, sbit) | lift(T.mask, tbit);
                BitGraph prod = product_bits(bits_from_mask(a, S.mask), bits_from_mask(b, T.mask));
                std::uint64_t all = prod.all();
                if (fixed_m) {
                    std::uint64_t defects = S.edges + T.edges;
                    if (defects > args.m)
                        continue;
                    int k = int(args.m - defects);
                    IndPoly ip = independence_polynomial(prod);
                    if (k >= int(ip.size()) || ip[k] == 0)
                        continue;
                    long double each = p / (long double)ip[k];
                    auto f = [&](std::uint64_t I) { cond[base | cross_mask(I)] += each; };
                    for_each_indset_k(prod, 0, 0, all, k, f);
                } else {
                    IndPoly ip = independence_polynomial(prod);
                    long double z = eval_poly(ip, lambda);
                    auto f = [&](std::uint64_t I) {
                        cond[base | cross_mask(I)] +=
                            p * std::pow(lambda, (long double)__builtin_popcountll(I)) / z;
                    };
                    for_each_indset(prod, 0, all, f);
                }
                placed += p;
            }
        for (const auto& [mask, p] : cond)
            out.classes[canonical_edge_mask(n, mask)] += pa * p;
        long double rest = pa * std::max(0.0L, 1 - placed);
        if (fixed_m)
            out.fallback_mass += rest;
        else
            out.classes[0] += rest;  // the empty graph
    }
    return out;
}

SandwichLaws exact_sandwich_laws(int side, const GlobalParams& params)
{
    if (side < 1 || side > 6)
        throw CapError("exact sandwich laws limited to 6 vertices");
    SandwichRates r = sandwich_rates(params);
    auto pairs = pair_list(side);
    SandwichLaws out;
    // which: 0 lower, 1 middle, 2 upper
    auto run = [&](int which, MaskPmf& law) {
        BitGraph g(side);
        std::function<void(std::size_t, std::uint64_t, long double)> rec =
            [&](std::size_t i, std::uint64_t mask, long double p) {
                if (p == 0)
                    return;
                if (i == pairs.size()) {
                    law[mask] += p;
                    return;
                }
                auto [u, v] = pairs[i];
                bool blocked = (g.adj[u] & g.adj[v]) != 0;
                double pe = 0;
                if (!blocked) {
                    if (which == 0)
                        pe = r.q_lower;
                    else if (which == 2)
                        pe = r.q_upper;
                    else
                        pe = sandwich_middle_prob(r, g.degree(u), g.degree(v));
                }
                rec(i + 1, mask, p * (1 - pe));
                if (pe > 0) {
                    g.add_edge(u, v);
                    rec(i + 1, mask | (1ull << i), p * pe);
                    g.remove_edge(u, v);
                }
            };
        rec(0, 0, 1);
    };
    run(0, out.lower);
    run(1, out.middle);
    run(2, out.upper);
    return out;
}

//---------------------------------------------------------------------------//
// distances
//---------------------------------------------------------------------------//

long double kl_divergence(const MaskPmf& p, const MaskPmf& q)
{
    long double s = 0;
    for (const auto& [k, v] : p) {
        if (v <= 0)
            continue;
        auto it = q.find(k);
        if (it == q.end() || it->second <= 0)
            return std::numeric_limits<long double>::infinity();
        s += v * std::log(v / it->second);
    }
    return s;
}

long double labeled_tv(const std::unordered_map<std::uint64_t, std::uint64_t>& counts,
                       std::uint64_t draws, const ModelPmf& law)
{
    long double s = 0, seen = 0;
    for (const auto& [mask, c] : counts) {
        long double mu = law.labeled_prob(mask);
        s += std::abs((long double)c / draws - mu);
        seen += mu;
    }
    s += std::max(0.0L, law.total() - seen);
    return s / 2;
}

long double class_tv(const std::unordered_map<std::uint64_t, std::uint64_t>& counts,
                     std::uint64_t draws, const ModelPmf& law)
{
    std::unordered_map<std::uint64_t, long double> emp;
    for (const auto& [mask, c] : counts)
        emp[canonical_edge_mask(law.n, mask)] += (long double)c / draws;
    return tv_distance(emp, law.class_law());
}

std::string mask_key(int n, std::uint64_t mask)
{
    std::ostringstream os;
    bool first = true;
    for (int u = 0, i = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v, ++i)
            if ((mask >> i) & 1) {
                os << (first ? "" : ",") << u << "-" << v;
                first = false;
            }
    return os.str();
}

}  // namespace trifree

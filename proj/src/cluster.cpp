#include "trifree/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <unordered_map>

namespace trifree {

namespace {

constexpr long double kE = std::numbers::e_v<long double>;

long double log_of(const BigInt& x)
{
    long e = 0;
    double m = mpz_get_d_2exp(&e, x.backend().data());
    return std::log((long double)m) + (long double)e * std::numbers::ln2_v<long double>;
}

long double log_of(const Rational& q)
{
    return log_of(boost::multiprecision::numerator(q)) -
           log_of(boost::multiprecision::denominator(q));
}

long double to_ld(const Rational& q)
{
    // ratio of 2^-scaled doubles keeps long double range safe
    long double ln = log_of(boost::multiprecision::abs(q));
    long double s = q < 0 ? -1.0L : 1.0L;
    return q == 0 ? 0.0L : s * std::exp(ln);
}

Rational exact_rational(long double x)
{
    if (x == 0)
        return Rational(0);
    int e = 0;
    long double f = std::frexp(std::fabs(x), &e);
    // 64-bit significand
    std::uint64_t mant = std::uint64_t(std::ldexp(f, 64));
    Rational r{BigInt(mant)};
    int shift = e - 64;
    BigInt p = 1;
    p <<= std::abs(shift);
    if (shift >= 0)
        r *= Rational(p);
    else
        r /= Rational(p);
    return x < 0 ? Rational(-r) : r;
}

}  // namespace

long double convergence_threshold(int max_degree)
{
    if (max_degree <= 0)
        return std::numeric_limits<long double>::infinity();
    return 1.0L / (4.0L * kE * max_degree);
}

//---------------------------------------------------------------------------//
// exact partition functions
//---------------------------------------------------------------------------//

ExactZ exact_log_Z(const Graph& g, const Rational& lambda)
{
    if (g.n() > kExactZCap)
        throw CapError("exact Z limited to n <= 40");
    ExactZ r;
    r.poly = independence_polynomial(g);
    r.value = eval_poly(r.poly, lambda);
    r.log_value = log_of(r.value);
    return r;
}

long double exact_log_Z_ratio(const Graph& g, long double lambda)
{
    if (g.n() > kExactZCap)
        throw CapError("exact Z limited to n <= 40");
    IndPoly p = independence_polynomial(g);
    Rational lam = exact_rational(lambda);
    Rational z = eval_poly(p, lam);
    Rational base = 1;
    Rational one_plus = 1 + lam;
    for (int i = 0; i < g.n(); ++i)
        base *= one_plus;
    // ratio - 1 is tiny at small activity: form it exactly, then log1p
    Rational dev = z / base - 1;
    return std::log1p(to_ld(dev));
}

//---------------------------------------------------------------------------//
// clusters
//---------------------------------------------------------------------------//

BitGraph incompatibility_graph(const Graph& g, const Cluster& c)
{
    int k = c.size();
    if (k > 64)
        throw CapError("cluster too large");
    BitGraph h(k);
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
            int u = c.vertices[i], v = c.vertices[j];
            if (u == v || g.has_edge(u, v))
                h.add_edge(i, j);
        }
    return h;
}

namespace {

bool set_connected(const Graph& g, const std::vector<int>& verts)
{
    std::vector<int> uniq(verts);
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    std::vector<char> seen(uniq.size(), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        int i = stack.back();
        stack.pop_back();
        for (std::size_t j = 0; j < uniq.size(); ++j)
            if (!seen[j] && g.has_edge(uniq[i], uniq[j])) {
                seen[j] = 1;
                ++count;
                stack.push_back(int(j));
            }
    }
    return count == int(uniq.size());
}

}  // namespace

void enumerate_clusters(const Graph& g, int k_max, const std::vector<int>& pin,
                        const std::function<void(const Cluster&)>& visit)
{
    if (k_max > kClusterCap)
        throw CapError("cluster enumeration limited to k_max <= 7");
    Cluster c;
    std::function<void(int)> rec = [&](int left) {
        if (left == 0) {
            for (int p : pin)
                if (std::find(c.vertices.begin(), c.vertices.end(), p) == c.vertices.end())
                    return;
            if (set_connected(g, c.vertices))
                visit(c);
            return;
        }
        for (int v = 0; v < g.n(); ++v) {
            c.vertices.push_back(v);
            // the pinned vertices still missing must fit in the remaining slots
            int missing = 0;
            for (int p : pin)
                missing += std::find(c.vertices.begin(), c.vertices.end(), p) == c.vertices.end();
            if (missing <= left - 1)
                rec(left - 1);
            c.vertices.pop_back();
        }
    };
    for (int k = 1; k <= k_max; ++k)
        rec(k);
}

std::vector<Cluster> list_clusters(const Graph& g, int k_max, const std::vector<int>& pin)
{
    std::vector<Cluster> out;
    enumerate_clusters(g, k_max, pin, [&](const Cluster& c) { out.push_back(c); });
    return out;
}

std::int64_t signed_connected_sum(const BitGraph& h)
{
    int k = h.n;
    if (k == 0)
        return 0;
    if (k > 20)
        throw CapError("signed connected sum limited to 20 vertices");
    std::uint32_t full = (1u << k) - 1;
    std::vector<std::int64_t> conn(full + 1, 0);
    auto edgeless = [&](std::uint32_t s) {
        for (std::uint32_t r = s; r; r &= r - 1) {
            int v = __builtin_ctz(r);
            if (h.adj[v] & s)
                return false;
        }
        return true;
    };
    std::vector<char> empty_e(full + 1);
    for (std::uint32_t s = 0; s <= full; ++s)
        empty_e[s] = edgeless(s);
    // conn(S) = [E(S) empty] - sum over proper T containing min(S) of
    //           conn(T) [E(S\T) empty]
    for (std::uint32_t s = 1; s <= full; ++s) {
        std::uint32_t low = s & (~s + 1);
        std::int64_t v = empty_e[s];
        std::uint32_t rest = s ^ low;
        for (std::uint32_t sub = (rest - 1) & rest;; sub = (sub - 1) & rest) {
            std::uint32_t t = sub | low;
            if (empty_e[s ^ t])
                v -= conn[t];
            if (sub == 0)
                break;
        }
        conn[s] = v;
    }
    return conn[full];
}

Rational ursell_of(const BitGraph& h)
{
    BigInt fact = 1;
    for (int i = 2; i <= h.n; ++i)
        fact *= i;
    return Rational(BigInt(signed_connected_sum(h)), fact);
}

Rational ursell(const Graph& g, const Cluster& c)
{
    if (c.size() > kClusterCap)
        throw CapError("ursell limited to clusters of size <= 7");
    return ursell_of(incompatibility_graph(g, c));
}

std::uint64_t penrose_tree_bound(const BitGraph& h)
{
    int n = h.n;
    if (n > 20)
        throw CapError("tree count limited to 20 vertices");
    {
        Graph g = from_bits(h);
        if (!is_connected(g))
            throw std::invalid_argument("penrose bound needs a connected graph");
    }
    if (n <= 1)
        return 1;
    int m = n - 1;
    std::vector<std::vector<__int128>> a(m, std::vector<__int128>(m, 0));
    for (int i = 1; i < n; ++i)
        for (int j = 1; j < n; ++j)
            a[i - 1][j - 1] = i == j ? h.degree(i) : -__int128(h.has_edge(i, j));
    // Bareiss fraction-free elimination
    __int128 prev = 1;
    int sign = 1;
    for (int k = 0; k < m - 1; ++k) {
        if (a[k][k] == 0) {
            int swap_row = -1;
            for (int r = k + 1; r < m; ++r)
                if (a[r][k] != 0) {
                    swap_row = r;
                    break;
                }
            if (swap_row < 0)
                return 0;
            std::swap(a[k], a[swap_row]);
            sign = -sign;
        }
        for (int i = k + 1; i < m; ++i)
            for (int j = k + 1; j < m; ++j)
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    __int128 det = a[m - 1][m - 1] * sign;
    return std::uint64_t(det < 0 ? -det : det);
}

//---------------------------------------------------------------------------//
// truncated expansion
//---------------------------------------------------------------------------//

namespace {

std::int64_t cached_signed_sum(const BitGraph& h)
{
    static std::mutex mu;
    static std::unordered_map<std::uint64_t, std::int64_t> memo;
    std::uint64_t key = std::uint64_t(h.n) << 58;
    for (int i = 0; i < h.n; ++i)
        for (int j = i + 1; j < h.n; ++j)
            if (h.has_edge(i, j))
                key |= 1ull << pair_index(h.n, i, j);
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = memo.find(key);
        if (it != memo.end())
            return it->second;
    }
    std::int64_t v = signed_connected_sum(h);
    std::lock_guard<std::mutex> lock(mu);
    memo.emplace(key, v);
    return v;
}

// connected vertex sets of size <= k_max, each once (exclusive-neighbourhood
// extension rooted at the minimum vertex)
void connected_sets(const Graph& g, int k_max, const std::function<void(const std::vector<int>&)>& f)
{
    int n = g.n();
    std::vector<int> sub;
    std::vector<char> in_sub(n, 0), in_nbhd(n, 0);
    std::function<void(std::vector<int>, int)> extend = [&](std::vector<int> ext, int root) {
        f(sub);
        if (int(sub.size()) == k_max)
            return;
        while (!ext.empty()) {
            int w = ext.back();
            ext.pop_back();
            std::vector<int> next(ext);
            std::vector<int> added;
            for (int u : g.neighbors(w))
                if (u > root && !in_sub[u] && !in_nbhd[u]) {
                    next.push_back(u);
                    added.push_back(u);
                }
            sub.push_back(w);
            in_sub[w] = 1;
            for (int u : added)
                in_nbhd[u] = 1;
            extend(next, root);
            for (int u : added)
                in_nbhd[u] = 0;
            in_sub[w] = 0;
            sub.pop_back();
        }
    };
    for (int v = 0; v < n; ++v) {
        sub.assign(1, v);
        in_sub[v] = 1;
        in_nbhd[v] = 1;
        std::vector<int> ext;
        for (int u : g.neighbors(v))
            if (u > v) {
                ext.push_back(u);
                in_nbhd[u] = 1;
            }
        extend(ext, v);
        for (int u : ext)
            in_nbhd[u] = 0;
        in_nbhd[v] = 0;
        in_sub[v] = 0;
    }
}

}  // namespace

// coefficient of lambda^k, k = 0..k_max, of the (pinned) cluster sum
std::vector<Rational> cluster_series(const Graph& g, int k_max, const std::vector<int>& pin)
{
    if (k_max > kClusterCap + 3)
        throw CapError("cluster series limited to order 10");
    std::vector<Rational> coef(k_max + 1, Rational(0));
    std::vector<BigInt> fact(k_max + 1, BigInt(1));
    for (int i = 1; i <= k_max; ++i)
        fact[i] = fact[i - 1] * i;
    connected_sets(g, k_max, [&](const std::vector<int>& U) {
        int s = int(U.size());
        if (pin.empty() && s < 2)
            return;  // constant clusters are handled in closed form
        for (int p : pin)
            if (std::find(U.begin(), U.end(), p) == U.end())
                return;
        // every multiplicity vector m >= 1 with total <= k_max
        std::vector<int> mult(s, 1);
        std::function<void(int, int)> rec = [&](int i, int total) {
            if (i == s) {
                BitGraph h(total);
                std::vector<int> start(s);
                int pos = 0;
                for (int a = 0; a < s; ++a) {
                    start[a] = pos;
                    pos += mult[a];
                }
                for (int a = 0; a < s; ++a)
                    for (int b = a; b < s; ++b) {
                        bool joined = a == b || g.has_edge(U[a], U[b]);
                        if (!joined)
                            continue;
                        for (int x = 0; x < mult[a]; ++x)
                            for (int y = 0; y < mult[b]; ++y) {
                                int p1 = start[a] + x, p2 = start[b] + y;
                                if (p1 != p2)
                                    h.add_edge(p1, p2);
                            }
                    }
                BigInt denom = 1;
                for (int a = 0; a < s; ++a)
                    denom *= fact[mult[a]];
                coef[total] += Rational(BigInt(cached_signed_sum(h)), denom);
                return;
            }
            for (int m = 1; total + m + (s - i - 1) <= k_max; ++m) {
                mult[i] = m;
                rec(i + 1, total + m);
            }
        };
        rec(0, 0);
    });
    return coef;
}

long double unpinned_tail_bound(int max_degree, long double lambda, int k)
{
    if (max_degree == 0)
        return 0;
    long double denom = 1 - 2 * kE * (max_degree + 1) * lambda;
    if (denom <= 0)
        return std::numeric_limits<long double>::infinity();
    return kE * std::pow(2 * kE * max_degree * lambda, (long double)k) / denom;
}

long double pinned_tail_bound(int max_degree, long double lambda, int k, int pin_size)
{
    // the explicit bound needs at least one edge to be meaningful
    long double d = std::max(max_degree, 1);
    if (pin_size <= 2)
        return std::pow(2 * kE * lambda, (long double)k) * std::pow(d, (long double)(k - pin_size));
    long double rho0 = kE * (d + 1) * lambda;
    if (rho0 >= 1)
        return std::numeric_limits<long double>::infinity();
    long double sum = 0;
    int s = pin_size;
    for (int j = std::max(k, s); j < std::max(k, s) + 4000; ++j) {
        long double term = std::pow(kE * lambda, (long double)j) * std::pow((long double)j, s - 2) *
                           std::pow(d + 1, (long double)(j - s));
        sum += term;
        long double ratio = rho0 * std::pow((j + 1.0L) / j, s - 2);
        if (ratio < 1 && term < 1e-30L * sum)
            return sum + term * ratio / (1 - ratio);
    }
    return sum;
}

LogZResult truncated_log_Z(const Graph& g, long double lambda, int k_max,
                           const std::vector<int>& pin, bool include_constant)
{
    if (k_max > kClusterCap)
        throw CapError("truncation order limited to 7");
    LogZResult r;
    r.truncation_order = k_max;
    int delta = g.max_degree();
    if (lambda > convergence_threshold(delta)) {
        r.value = std::numeric_limits<long double>::quiet_NaN();
        return r;
    }
    auto coef = cluster_series(g, k_max, pin);
    long double v = 0, pw = 1;
    for (int k = 1; k <= k_max; ++k) {
        pw *= lambda;
        v += to_ld(coef[k]) * pw;
    }
    if (pin.empty()) {
        int nonisolated = 0;
        for (int x = 0; x < g.n(); ++x)
            nonisolated += g.degree(x) > 0;
        r.certified_tail = nonisolated * unpinned_tail_bound(delta, lambda, k_max + 1);
        if (include_constant)
            v += g.n() * std::log1p(lambda);
    } else {
        r.certified_tail = pinned_tail_bound(delta, lambda, k_max + 1, int(pin.size()));
    }
    r.value = v;
    return r;
}

namespace {
void require_small_triangle_free(const Graph& g, long double lambda)
{
    if (!is_triangle_free(g))
        throw RegimeError("truncated formulas need a triangle-free graph");
    if (lambda > convergence_threshold(g.max_degree()))
        throw RegimeError("activity above 1/(4 e Delta)");
}
}  // namespace

long double third_order_log_Z_ratio(const Graph& g, long double lambda)
{
    require_small_triangle_free(g, lambda);
    auto c = subgraph_counts(g);
    long double l2 = lambda * lambda;
    return -(long double)c.edges * l2 + ((long double)c.p2 + 2.0L * c.edges) * l2 * lambda;
}

long double fourth_order_log_Z_ratio(const Graph& g, long double lambda)
{
    long double third = third_order_log_Z_ratio(g, lambda);
    auto c = subgraph_counts(g);
    long double k4 = (long double)c.p3 + c.s3 - (long double)c.c4 + 4.0L * c.p2 + 3.5L * c.edges;
    return third - k4 * std::pow(lambda, 4.0L);
}

MeanVar hardcore_mean_var_counts(long double n, long double edges, long double p2, long double lambda)
{
    MeanVar r;
    long double l2 = lambda * lambda;
    r.mean = lambda / (1 + lambda) * n - 2 * edges * l2 + 3 * (p2 + 2 * edges) * l2 * lambda;
    r.variance = lambda / ((1 + lambda) * (1 + lambda)) * n - 4 * edges * l2;
    return r;
}

MeanVar hardcore_mean_var(const Graph& g, long double lambda)
{
    require_small_triangle_free(g, lambda);
    auto c = subgraph_counts(g);
    return hardcore_mean_var_counts(g.n(), c.edges, c.p2, lambda);
}

MeanVar exact_hardcore_mean_var(const IndPoly& p, long double lambda)
{
    long double z = 0, s1 = 0, s2 = 0, pw = 1;
    for (std::size_t k = 0; k < p.size(); ++k) {
        long double w = (long double)p[k] * pw;
        z += w;
        s1 += k * w;
        s2 += (long double)k * k * w;
        pw *= lambda;
    }
    MeanVar r;
    r.mean = s1 / z;
    r.variance = s2 / z - r.mean * r.mean;
    return r;
}

}  // namespace trifree

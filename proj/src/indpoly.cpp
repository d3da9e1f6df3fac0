#include "trifree/indpoly.hpp"

#include <cmath>
#include <limits>

namespace trifree {

IndPoly poly_mul(const IndPoly& a, const IndPoly& b)
{
    IndPoly c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i])
            for (std::size_t j = 0; j < b.size(); ++j)
                c[i + j] += a[i] * b[j];
    return c;
}

namespace {
IndPoly poly_add_shift(const IndPoly& a, const IndPoly& b)
{
    // a + x*b
    IndPoly c(std::max(a.size(), b.size() + 1), 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        c[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i)
        c[i + 1] += b[i];
    return c;
}

IndPoly binomial_row(int k)
{
    IndPoly r(k + 1, 0);
    r[0] = 1;
    for (int i = 1; i <= k; ++i)
        for (int j = i; j > 0; --j)
            r[j] += r[j - 1];
    return r;
}
}  // namespace

IndPolyCache::IndPolyCache(const BitGraph& g) : g_(g)
{
    if (g.n > kIndPolyCap)
        throw CapError("independence polynomial limited to 62 vertices");
}

const IndPoly& IndPolyCache::operator()(std::uint64_t mask)
{
    auto it = memo_.find(mask);
    if (it != memo_.end())
        return it->second;
    IndPoly p = compute(mask);
    return memo_.emplace(mask, std::move(p)).first->second;
}

IndPoly IndPolyCache::compute(std::uint64_t mask)
{
    if (mask == 0)
        return {1};
    // component of the lowest vertex
    std::uint64_t comp = mask & (~mask + 1);
    std::uint64_t frontier = comp;
    while (frontier) {
        int v = __builtin_ctzll(frontier);
        frontier &= frontier - 1;
        std::uint64_t nb = g_.adj[v] & mask & ~comp;
        comp |= nb;
        frontier |= nb;
    }
    if (comp != mask) {
        IndPoly left = (*this)(comp);
        return poly_mul(left, (*this)(mask & ~comp));
    }
    int best = -1, best_deg = -1;
    for (std::uint64_t r = mask; r; r &= r - 1) {
        int v = __builtin_ctzll(r);
        int d = __builtin_popcountll(g_.adj[v] & mask);
        if (d > best_deg) {
            best_deg = d;
            best = v;
        }
    }
    if (best_deg == 0)
        return binomial_row(__builtin_popcountll(mask));
    std::uint64_t without = mask & ~(1ull << best);
    std::uint64_t closed = without & ~g_.adj[best];
    IndPoly a = (*this)(without);
    return poly_add_shift(a, (*this)(closed));
}

IndPoly independence_polynomial(const BitGraph& g)
{
    IndPolyCache c(g);
    return c(g.all());
}

IndPoly independence_polynomial(const Graph& g)
{
    return independence_polynomial(to_bits(g));
}

Rational eval_poly(const IndPoly& p, const Rational& x)
{
    Rational acc = 0;
    for (std::size_t i = p.size(); i-- > 0;)
        acc = acc * x + Rational(BigInt(p[i]));
    return acc;
}

long double eval_poly(const IndPoly& p, long double x)
{
    long double acc = 0;
    for (std::size_t i = p.size(); i-- > 0;)
        acc = acc * x + (long double)p[i];
    return acc;
}

long double log_eval_poly(const IndPoly& p, long double log_x)
{
    long double m = -std::numeric_limits<long double>::infinity();
    for (std::size_t k = 0; k < p.size(); ++k)
        if (p[k])
            m = std::max(m, std::log((long double)p[k]) + k * log_x);
    long double s = 0;
    for (std::size_t k = 0; k < p.size(); ++k)
        if (p[k])
            s += std::exp(std::log((long double)p[k]) + k * log_x - m);
    return m + std::log(s);
}

}  // namespace trifree

#include "trifree/params.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "trifree/cluster.hpp"

namespace trifree {

namespace {
constexpr real kE = std::numbers::e_v<real>;
constexpr real kPi = std::numbers::pi_v<real>;
}  // namespace

real lambda_of_m(real n, real m)
{
    if (!(m >= 0) || m > n * (n - 1) / 2)
        throw std::invalid_argument("m out of range");
    real l0 = 4 * m / (n * n);
    return l0 + l0 * l0 + (l0 * l0 * n - 1) * l0 * std::exp(-l0 * l0 * n / 2);
}

real m_of_lambda(real n, real lambda)
{
    real lo = 0, hi = n * (n - 1) / 2;
    if (lambda_of_m(n, hi) < lambda)
        throw std::invalid_argument("lambda beyond the range of lambda_of_m");
    for (int it = 0; it < 200; ++it) {
        real mid = (lo + hi) / 2;
        (lambda_of_m(n, mid) < lambda ? lo : hi) = mid;
    }
    return (lo + hi) / 2;
}

GlobalParams global_params_lambda(real n, real lambda)
{
    // the balanced-partition sheet is the global family
    PartitionParams pp = partition_params(n, n / 2, lambda, Variant::supercritical);
    GlobalParams g;
    g.n = n;
    g.lambda = lambda;
    g.q0 = pp.qA;
    g.q1 = pp.qpA;
    g.mu = pp.muA;
    g.q2 = pp.qppA;
    g.psi = lambda * lambda * lambda * n / 2;
    g.alpha = 1 / (96 * kE * kE * kE);
    g.in_regime = lambda > 0 && lambda <= 2 * std::sqrt(std::log(n) / n);
    return g;
}

GlobalParams global_params_m(real n, real m)
{
    GlobalParams g = global_params_lambda(n, lambda_of_m(n, m));
    g.m = m;
    g.lambda0 = 4 * m / (n * n);
    return g;
}

const char* variant_name(Variant v)
{
    return v == Variant::subcritical ? "subcritical" : "supercritical";
}

Variant parse_variant(const std::string& s)
{
    if (s == "subcritical" || s == "sub")
        return Variant::subcritical;
    if (s == "supercritical" || s == "super")
        return Variant::supercritical;
    throw std::invalid_argument("unknown variant: " + s);
}

real degree_cap(real q, real n) { return 50 * std::max(q * n, std::log(n)); }

PartitionParams partition_params(real n, real a, real lambda, Variant v)
{
    PartitionParams p;
    p.variant = v;
    p.n = n;
    p.a = a;
    p.b = n - a;
    p.lambda = lambda;
    real b = p.b;
    real l2 = lambda * lambda, l3 = l2 * lambda, l4 = l3 * lambda;
    p.qA = prob_from_odds(lambda * std::exp(-l2 * b));
    p.qB = prob_from_odds(lambda * std::exp(-l2 * a));
    p.q = std::max(p.qA, p.qB);
    real oA, oB;
    if (v == Variant::subcritical) {
        oA = lambda * std::exp(-l2 * b + 2 * l3 * b);
        oB = lambda * std::exp(-l2 * a + 2 * l3 * a);
    } else {
        // q'_B uses a in every term (the mirrored form of q'_A)
        oA = lambda * std::exp(-l2 * b + 2 * l3 * b - 7 * l4 * b / 2);
        oB = lambda * std::exp(-l2 * a + 2 * l3 * a - 7 * l4 * a / 2);
    }
    p.qpA = prob_from_odds(oA);
    p.qpB = prob_from_odds(oB);
    real mix = a * p.qA + b * p.qB;
    p.muA = a * (a - 1) / 2 * p.qpA * std::exp(2 * l3 * b * mix);
    p.muB = b * (b - 1) / 2 * p.qpB * std::exp(2 * l3 * a * mix);
    p.qppA = prob_from_odds(oA * std::exp(4 * p.muB * l3));
    p.qppB = prob_from_odds(oB * std::exp(4 * p.muA * l3));
    p.delta_cap = 50 * std::max(p.q * n, std::log(n));
    p.k_cap = 50 * std::max(p.q * n * n, std::log(n));
    real ln = std::log(n);
    p.M_lambda = std::max(n * std::exp(-l2 * n / 2), std::sqrt(n)) * ln * ln;
    real gap = std::fabs(a - b);
    p.weak = gap <= n / 10;
    p.moderate = gap <= p.M_lambda;
    p.strong = gap <= 10 * std::pow(n * ln, 0.25L);
    return p;
}

PartitionParams partition_params(const Partition& p, real lambda, Variant v)
{
    return partition_params(p.n(), p.a(), lambda, v);
}

real log_binomial(real n, real k)
{
    return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
}

real m_at_c(real n, real c) { return c / 4 * std::pow(n, 1.5L) * std::sqrt(std::log(n)); }

bool subcritical_valid(real n, real m) { return m > m_at_c(n, 1); }

bool supercritical_valid(real n, real m)
{
    return m >= 13.0L / 56 * std::pow(n, 1.5L) * std::sqrt(std::log(n));
}

namespace {

real sub_exponent(real n, real lambda)
{
    real l2n = lambda * lambda * n;
    return lambda * std::exp(-l2n / 2 + lambda * l2n) * n * n / 4 +
           std::pow(lambda, 5) * std::exp(-l2n) * std::pow(n, 4) / 8;
}

real super_exponent(real n, const GlobalParams& g)
{
    real l = g.lambda, q = g.q0;
    real l4 = std::pow(l, 4), l6 = std::pow(l, 6);
    real n3 = n * n * n, n4 = n3 * n, n5 = n4 * n, n6 = n5 * n;
    real q2 = q * q, q3 = q2 * q;
    return l6 * n5 * q2 / 64 - l6 * n6 * q3 / 64 - n3 * q3 / 24 + l4 * n4 * q2 / 64 -
           l4 * n5 * q3 / 6 - l4 * n4 * q2 / 2;
}

}  // namespace

real log_count_subcritical(real n, real m)
{
    real lambda = lambda_of_m(n, m);
    return -std::log(std::sqrt(2.0L)) - (m + 1) * std::log(lambda) - std::log(n) +
           log_binomial(n, std::floor(n / 2)) + n * n / 4 * std::log1p(lambda) +
           sub_exponent(n, lambda);
}

real log_count_supercritical(real n, real m)
{
    GlobalParams g = global_params_m(n, m);
    real lambda = g.lambda;
    return -std::log(std::sqrt(2.0L)) - (m + 1) * std::log(lambda) - std::log(n) +
           log_binomial(n, std::floor(n / 2)) + n * n / 4 * std::log1p(lambda) +
           (-n * n / 4 + n / 2) * std::log1p(-g.q2) + super_exponent(n, g);
}

real log_Z_asymptotic(real n, real lambda, Variant v)
{
    // Z(lambda) = P_{n,p}(T) (1+lambda)^{C(n,2)}
    real pref = std::log(0.5L * std::sqrt(kPi / lambda)) + log_binomial(n, std::floor(n / 2)) +
                n * n / 4 * std::log1p(lambda);
    if (v == Variant::subcritical)
        return pref + sub_exponent(n, lambda);
    GlobalParams g = global_params_lambda(n, lambda);
    return pref + (-n * n / 4 + n / 2) * std::log1p(-g.q2) + super_exponent(n, g);
}

real log_prob_triangle_free_gnp(real n, real p, Variant v)
{
    if (!(p > 0 && p < 1))
        throw std::invalid_argument("p must lie in (0,1)");
    // lambda = p/(1-p) without cancellation; log(1+lambda) = -log(1-p)
    real lambda = std::exp(std::log(p) - std::log1p(-p));
    real log1p_lambda = -std::log1p(-p);
    real pref = std::log(0.5L * std::sqrt(kPi / lambda)) + log_binomial(n, std::floor(n / 2));
    real e = -n * n / 4 + n / 2;
    if (v == Variant::subcritical)
        return pref + e * log1p_lambda + sub_exponent(n, lambda);
    GlobalParams g = global_params_lambda(n, lambda);
    return pref + e * (log1p_lambda + std::log1p(-g.q2)) + super_exponent(n, g);
}

real lambda_for_q0(real n, real q0)
{
    auto f = [&](real l) { return global_params_lambda(n, l).q0; };
    real lo = 1 / std::sqrt(n);
    real hi = lo;
    while (f(hi) > q0 && hi < 1e6L)
        hi *= 2;
    if (f(lo) < q0 || f(hi) > q0)
        throw RegimeError("q0 target not attained on the decreasing branch");
    for (int it = 0; it < 300; ++it) {
        real mid = (lo + hi) / 2;
        real fm = f(mid);
        if (f(lo) < fm || fm < f(hi))
            throw RegimeError("q0(lambda) not monotone on the bisection bracket");
        (fm > q0 ? lo : hi) = mid;
        if ((hi - lo) <= 1e-15L * hi)
            break;
    }
    return (lo + hi) / 2;
}

real m_window(real n, real t)
{
    real ln = std::log(n);
    return std::sqrt(3 + std::log(ln) / ln - t / ln) / 4 * std::pow(n, 1.5L) * std::sqrt(ln);
}

}  // namespace trifree

#include "trifree/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace trifree {

long double log_binomial_pmf(std::uint64_t n, std::uint64_t k, long double p)
{
    if (k > n)
        return -INFINITY;
    long double lc = std::lgamma((long double)n + 1) - std::lgamma((long double)k + 1) -
                     std::lgamma((long double)(n - k) + 1);
    if (p <= 0)
        return k == 0 ? 0 : -INFINITY;
    if (p >= 1)
        return k == n ? 0 : -INFINITY;
    return lc + k * std::log(p) + (n - k) * std::log1p(-p);
}

long double binomial_pmf(std::uint64_t n, std::uint64_t k, long double p)
{
    return std::exp(log_binomial_pmf(n, k, p));
}

long double binomial_upper_tail(std::uint64_t n, long double p, long double x)
{
    long double s = 0;
    std::uint64_t k0 = x < 0 ? 0 : std::uint64_t(std::floor(x)) + 1;
    for (std::uint64_t k = k0; k <= n; ++k)
        s += binomial_pmf(n, k, p);
    return std::min(1.0L, s);
}

long double chernoff_bound(long double mu, long double delta)
{
    if (!(delta > 0))
        throw std::invalid_argument("chernoff needs delta > 0");
    return std::exp(mu * (delta - (1 + delta) * std::log1p(delta)));
}

long double pinsker_bound(long double kl) { return std::sqrt(kl / 2); }

double binomial_ci_halfwidth(double p, std::uint64_t trials)
{
    if (trials == 0)
        return INFINITY;
    return 1.96 * std::sqrt(std::max(p * (1 - p), 0.0) / double(trials));
}

Fit least_squares(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("least squares needs two or more points");
    double n = double(x.size()), sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    double mx = sx / n, my = sy / n, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    Fit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = syy == 0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return f;
}

Fit loglog_fit(const std::vector<double>& x, const std::vector<double>& y)
{
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
    }
    return least_squares(lx, ly);
}

Moments moments(const std::vector<double>& xs)
{
    Moments m;
    if (xs.empty())
        return m;
    for (double x : xs)
        m.mean += x;
    m.mean /= double(xs.size());
    for (double x : xs)
        m.variance += (x - m.mean) * (x - m.mean);
    if (xs.size() > 1)
        m.variance /= double(xs.size() - 1);
    return m;
}

std::map<long long, double> empirical_pmf(const std::vector<long long>& xs)
{
    std::map<long long, double> out;
    for (auto x : xs)
        out[x] += 1;
    for (auto& [k, v] : out)
        v /= double(xs.size());
    return out;
}

double tv_to_reference(const std::map<long long, double>& emp, long long lo,
                       const std::vector<double>& ref)
{
    double s = 0, covered = 0;
    for (auto [k, v] : emp) {
        long long i = k - lo;
        double r = (i >= 0 && i < (long long)ref.size()) ? ref[i] : 0.0;
        s += std::abs(v - r);
        covered += r;
    }
    double total = 0;
    for (double r : ref)
        total += r;
    s += std::max(0.0, total - covered);
    return s / 2;
}

}  // namespace trifree

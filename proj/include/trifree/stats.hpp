#pragma once

#include <cstdint>
#include <map>
#include <vector>

namespace trifree {

// log C(n,k) p^k (1-p)^(n-k)
long double log_binomial_pmf(std::uint64_t n, std::uint64_t k, long double p);
long double binomial_pmf(std::uint64_t n, std::uint64_t k, long double p);
// P(Bin(n,p) > x), summed exactly term by term
long double binomial_upper_tail(std::uint64_t n, long double p, long double x);
// (e^d / (1+d)^(1+d))^mu, a bound on P(X > (1+d) mu)
long double chernoff_bound(long double mu, long double delta);
// sqrt(KL / 2)
long double pinsker_bound(long double kl);

// half-width of the 95% normal interval for a frequency
double binomial_ci_halfwidth(double p, std::uint64_t trials);

struct Fit {
    double slope = 0, intercept = 0, r2 = 0;
};
Fit least_squares(const std::vector<double>& x, const std::vector<double>& y);
// slope of log y against log x
Fit loglog_fit(const std::vector<double>& x, const std::vector<double>& y);

struct Moments {
    double mean = 0, variance = 0;
};
Moments moments(const std::vector<double>& xs);

// empirical pmf of integer observations
std::map<long long, double> empirical_pmf(const std::vector<long long>& xs);
// TV between an integer empirical pmf and a reference pmf given on [lo, lo+ref.size())
double tv_to_reference(const std::map<long long, double>& emp, long long lo,
                       const std::vector<double>& ref);

}  // namespace trifree

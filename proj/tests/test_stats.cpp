#include <cmath>

#include "doctest.h"
#include "trifree/stats.hpp"

using namespace trifree;

TEST_CASE("binomial pmf")
{
    CHECK(double(binomial_pmf(4, 2, 0.5L)) == doctest::Approx(0.375));
    long double s = 0;
    for (std::uint64_t k = 0; k <= 30; ++k)
        s += binomial_pmf(30, k, 0.3L);
    CHECK(double(s) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(double(binomial_upper_tail(4, 0.5L, 2)) == doctest::Approx(5.0 / 16));
    CHECK(double(binomial_upper_tail(4, 0.5L, 4)) == 0);
}

TEST_CASE("Chernoff bound dominates the exact tail")
{
    for (std::uint64_t n : {10u, 100u, 1000u, 10000u})
        for (long double p : {0.001L, 0.01L, 0.1L, 0.5L})
            for (long double d : {0.1L, 0.5L, 1.0L, 3.0L}) {
                long double mu = n * p;
                long double exact = binomial_upper_tail(n, p, (1 + d) * mu);
                REQUIRE(chernoff_bound(mu, d) >= exact);
            }
}

TEST_CASE("Pinsker helper")
{
    CHECK(double(pinsker_bound(0.5L)) == doctest::Approx(0.5));
    CHECK(pinsker_bound(0) == 0);
}

TEST_CASE("confidence half-width")
{
    CHECK(binomial_ci_halfwidth(0.5, 10000) == doctest::Approx(1.96 * 0.005));
    CHECK(binomial_ci_halfwidth(0.0, 100) == 0);
}

TEST_CASE("least squares")
{
    auto f = least_squares({0, 1, 2, 3}, {1, 3, 5, 7});
    CHECK(f.slope == doctest::Approx(2));
    CHECK(f.intercept == doctest::Approx(1));
    CHECK(f.r2 == doctest::Approx(1));
    std::vector<double> x{500, 1000, 2000, 4000}, y;
    for (double v : x)
        y.push_back(3 * std::pow(v, 2.0 / 3));
    auto g = loglog_fit(x, y);
    CHECK(g.slope == doctest::Approx(2.0 / 3));
    CHECK(std::exp(g.intercept) == doctest::Approx(3));
}

TEST_CASE("moments and empirical pmfs")
{
    auto m = moments({1, 2, 3, 4});
    CHECK(m.mean == doctest::Approx(2.5));
    CHECK(m.variance == doctest::Approx(5.0 / 3));  // unbiased
    auto e = empirical_pmf({0, 0, 1, 3});
    CHECK(e[0] == doctest::Approx(0.5));
    CHECK(e[3] == doctest::Approx(0.25));
    CHECK(tv_to_reference(e, 0, {0.5, 0.25, 0.0, 0.25}) == doctest::Approx(0));
    CHECK(tv_to_reference(e, 1, {1.0}) == doctest::Approx(0.75));
}

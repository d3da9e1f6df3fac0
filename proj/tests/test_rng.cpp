#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "trifree/parallel.hpp"
#include "trifree/rng.hpp"

using namespace trifree;

TEST_CASE("philox4x32-10 known answer")
{
    auto out = philox4x32_10({0, 0, 0, 0}, {0, 0});
    CHECK(out[0] == 0x6627e8d5u);
    CHECK(out[1] == 0xe169c58du);
    CHECK(out[2] == 0xbc57ac4cu);
    CHECK(out[3] == 0x9b00dbd8u);
}

TEST_CASE("same lineage gives the same sequence")
{
    RngStream a(42, 3, Stage::crossing), b(42, 3, Stage::crossing);
    for (int i = 0; i < 1000; ++i)
        REQUIRE(a() == b());
}

TEST_CASE("different lineages diverge")
{
    RngStream base(42, 3, Stage::crossing);
    RngStream other_stage = base.derive(Stage::partition);
    RngStream other_replica = base.replica(4, Stage::crossing);
    RngStream other_seed(43, 3, Stage::crossing);
    int same1 = 0, same2 = 0, same3 = 0;
    for (int i = 0; i < 100; ++i) {
        auto x = base();
        same1 += x == other_stage();
        same2 += x == other_replica();
        same3 += x == other_seed();
    }
    CHECK(same1 == 0);
    CHECK(same2 == 0);
    CHECK(same3 == 0);
}

TEST_CASE("uniform and below stay in range with sane means")
{
    RngStream r(1);
    double sum = 0;
    for (int i = 0; i < 100000; ++i) {
        double u = r.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    CHECK(sum / 100000 == doctest::Approx(0.5).epsilon(0.01));
    std::vector<int> hist(7, 0);
    for (int i = 0; i < 70000; ++i) {
        auto k = r.below(7);
        REQUIRE(k < 7);
        ++hist[k];
    }
    for (int h : hist)
        CHECK(std::abs(h - 10000) < 500);
}

TEST_CASE("binomial sampler mean and variance")
{
    RngStream r(9, 0, Stage::test);
    for (auto [n, p] : {std::pair<std::uint64_t, double>{10, 0.3}, {1000, 0.01}, {100000, 0.2}}) {
        double s = 0, s2 = 0;
        int reps = 20000;
        for (int i = 0; i < reps; ++i) {
            double x = double(sample_binomial(r, n, p));
            REQUIRE(x <= double(n));
            s += x;
            s2 += x * x;
        }
        double mean = s / reps, var = s2 / reps - mean * mean;
        double sd_mean = std::sqrt(n * p * (1 - p) / reps);
        CHECK(std::abs(mean - n * p) < 5 * sd_mean);
        CHECK(var == doctest::Approx(n * p * (1 - p)).epsilon(0.1));
    }
    CHECK(sample_binomial(r, 50, 0.0) == 0);
    CHECK(sample_binomial(r, 50, 1.0) == 50);
}

TEST_CASE("distinct sampling returns k distinct values in range")
{
    RngStream r(5);
    for (std::uint64_t k : {0, 1, 10, 500, 1000}) {
        auto v = sample_distinct(r, 1000, k);
        std::set<std::uint64_t> s(v.begin(), v.end());
        CHECK(s.size() == k);
        CHECK((v.empty() || *std::max_element(v.begin(), v.end()) < 1000));
    }
}

TEST_CASE("multinomial counts sum to the trial count")
{
    RngStream r(6);
    auto c = sample_multinomial(r, 1000, {0.2, 0.3, 0.5});
    CHECK(c.size() == 3);
    CHECK(c[0] + c[1] + c[2] == 1000);
}

TEST_CASE("parallel_for fills every slot independent of thread count")
{
    std::vector<std::uint64_t> a(257), b(257);
    set_thread_count(1);
    parallel_for(a.size(), [&](std::size_t i) { a[i] = RngStream(7, i)(); });
    set_thread_count(4);
    parallel_for(b.size(), [&](std::size_t i) { b[i] = RngStream(7, i)(); });
    set_thread_count(0);
    CHECK(a == b);
}

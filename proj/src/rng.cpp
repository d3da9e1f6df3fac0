#include "trifree/rng.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <unordered_set>

namespace trifree {

namespace {
constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
}  // namespace

std::uint64_t splitmix64(std::uint64_t x)
{
    std::uint64_t z = x + 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> c,
                                           std::array<std::uint32_t, 2> k)
{
    for (int round = 0; round < 10; ++round) {
        std::uint64_t p0 = std::uint64_t(kMul0) * c[0];
        std::uint64_t p1 = std::uint64_t(kMul1) * c[2];
        std::uint32_t hi0 = std::uint32_t(p0 >> 32), lo0 = std::uint32_t(p0);
        std::uint32_t hi1 = std::uint32_t(p1 >> 32), lo1 = std::uint32_t(p1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
        k[0] += kWeyl0;
        k[1] += kWeyl1;
    }
    return c;
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t replica, Stage stage, std::uint32_t sub)
    : seed_(seed), replica_(replica), stage_(stage), sub_(sub)
{
    // replica and sub-tag go into the key so that the 64-bit block counter
    // stays free; the seed is whitened first so nearby seeds decorrelate
    std::uint64_t k = splitmix64(seed ^ splitmix64(replica ^ (std::uint64_t(sub) << 40)));
    key_ = {std::uint32_t(k), std::uint32_t(k >> 32)};
}

RngStream RngStream::derive(Stage stage, std::uint32_t sub) const
{
    return RngStream(seed_, replica_, stage, sub);
}

RngStream RngStream::replica(std::uint64_t r, Stage stage) const
{
    return RngStream(seed_, r, stage, 0);
}

void RngStream::refill()
{
    std::array<std::uint32_t, 4> ctr = {std::uint32_t(block_), std::uint32_t(block_ >> 32),
                                        static_cast<std::uint32_t>(stage_), 0x7f4a7c15u};
    out_ = philox4x32_10(ctr, key_);
    ++block_;
    pos_ = 0;
}

RngStream::result_type RngStream::operator()()
{
    if (pos_ > 2)
        refill();
    std::uint64_t v = (std::uint64_t(out_[pos_]) << 32) | out_[pos_ + 1];
    pos_ += 2;
    return v;
}

double RngStream::uniform()
{
    return double((*this)() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::below(std::uint64_t n)
{
    // Lemire's nearly divisionless method
    std::uint64_t x = (*this)();
    __uint128_t m = __uint128_t(x) * n;
    std::uint64_t l = std::uint64_t(m);
    if (l < n) {
        std::uint64_t t = (0 - n) % n;
        while (l < t) {
            x = (*this)();
            m = __uint128_t(x) * n;
            l = std::uint64_t(m);
        }
    }
    return std::uint64_t(m >> 64);
}

std::uint64_t sample_binomial(RngStream& rng, std::uint64_t n, double p)
{
    if (n == 0 || p <= 0)
        return 0;
    if (p >= 1)
        return n;
    // the library sampler is fastest for p <= 1/2
    if (p > 0.5)
        return n - sample_binomial(rng, n, 1 - p);
    std::binomial_distribution<std::int64_t> d(std::int64_t(n), p);
    return std::uint64_t(d(rng));
}

std::vector<std::uint64_t> sample_distinct(RngStream& rng, std::uint64_t n, std::uint64_t k)
{
    std::vector<std::uint64_t> out;
    if (k > n)
        throw std::invalid_argument("sample_distinct: k > n");
    out.reserve(k);
    if (k * 4 <= n) {
        // Floyd's algorithm
        std::unordered_set<std::uint64_t> seen;
        seen.reserve(k * 2);
        for (std::uint64_t j = n - k; j < n; ++j) {
            std::uint64_t t = rng.below(j + 1);
            if (!seen.insert(t).second) {
                seen.insert(j);
                out.push_back(j);
            } else {
                out.push_back(t);
            }
        }
    } else {
        // selection sampling
        std::uint64_t need = k;
        for (std::uint64_t i = 0; i < n && need; ++i)
            if (rng.below(n - i) < need) {
                out.push_back(i);
                --need;
            }
    }
    // random order
    for (std::size_t i = out.size(); i > 1; --i)
        std::swap(out[i - 1], out[rng.below(i)]);
    return out;
}

std::vector<std::uint64_t> sample_multinomial(RngStream& rng, std::uint64_t trials,
                                              const std::vector<long double>& weights)
{
    std::size_t d = weights.size();
    std::vector<std::uint64_t> counts(d, 0);
    if (d == 0)
        return counts;
    // suffix sums keep tiny categories accurate
    std::vector<long double> tail(d + 1, 0);
    for (std::size_t j = d; j-- > 0;)
        tail[j] = tail[j + 1] + weights[j];
    std::uint64_t left = trials;
    for (std::size_t j = 0; j + 1 < d && left; ++j) {
        if (tail[j] <= 0)
            break;
        double p = double(weights[j] / tail[j]);
        counts[j] = sample_binomial(rng, left, p);
        left -= counts[j];
    }
    std::size_t last = d - 1;
    while (last > 0 && weights[last] <= 0)
        --last;
    counts[last] += left;
    return counts;
}

}  // namespace trifree

#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <vector>

namespace trifree {

// Stage tags keep the substreams of one replica apart.
enum class Stage : std::uint32_t {
    generic = 0,
    partition = 1,
    defects_a = 2,
    defects_b = 3,
    crossing = 4,
    chain = 5,
    sandwich = 6,
    experiment = 7,
    test = 99,
};

//---------------------------------------------------------------------------//
// Philox4x32-10 keyed by the seed, with (replica, stage) folded into the
// counter. Identical lineage gives an identical sequence; no state is shared
// between lineages, so replicas can run in any order on any thread.
//---------------------------------------------------------------------------//
class RngStream {
  public:
    using result_type = std::uint64_t;

    explicit RngStream(std::uint64_t seed, std::uint64_t replica = 0,
                       Stage stage = Stage::generic, std::uint32_t sub = 0);

    // same seed and replica, another stage
    RngStream derive(Stage stage, std::uint32_t sub = 0) const;
    // another replica under the same seed
    RngStream replica(std::uint64_t r, Stage stage = Stage::generic) const;

    result_type operator()();
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    // uniform on [0,1) with 53 random bits
    double uniform();
    // uniform on {0,...,n-1}
    std::uint64_t below(std::uint64_t n);
    bool bernoulli(double p) { return uniform() < p; }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t replica_id() const { return replica_; }
    Stage stage() const { return stage_; }
    std::uint32_t sub() const { return sub_; }

  private:
    void refill();

    std::uint64_t seed_;
    std::uint64_t replica_;
    Stage stage_;
    std::uint32_t sub_;
    std::array<std::uint32_t, 2> key_{};
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> out_{};
    int pos_ = 4;
};

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key);

std::uint64_t splitmix64(std::uint64_t x);

// Binomial(n, p) via the standard library algorithm driven by `rng`
std::uint64_t sample_binomial(RngStream& rng, std::uint64_t n, double p);
// k distinct values from {0..n-1}, in random order
std::vector<std::uint64_t> sample_distinct(RngStream& rng, std::uint64_t n, std::uint64_t k);
// multinomial counts for `trials` draws from the (unnormalised) weights
std::vector<std::uint64_t> sample_multinomial(RngStream& rng, std::uint64_t trials,
                                              const std::vector<long double>& weights);

}  // namespace trifree

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "trifree/graph.hpp"
#include "trifree/indpoly.hpp"
#include "trifree/rng.hpp"

namespace trifree {

class RejectionCapError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct HardcoreStats {
    std::uint64_t attempts = 0;  // size-rejection or product-Bernoulli rounds
    std::uint64_t opaque_rejections = 0;
};

constexpr std::uint64_t kDefaultRejectionCap = 1000000;
constexpr double kDefaultFixedSizeSafety = 1000.0;

//---------------------------------------------------------------------------//
// Exact hard-core sampling organised by connected components.
//
// Components with at most kUnitPolyCap vertices get their independence
// polynomial; components sharing a polynomial form one group whose size
// profile is a single multinomial draw. Larger components are sampled by
// product-Bernoulli rejection. Isolated vertices form a Bernoulli pool.
// Sizes are drawn first and sets materialised afterwards, so conditioning on
// the total size is a cheap rejection on integers.
//
// A plan over S□T never builds the product: components of S□T are
// C_S x C_T for components C_S of S and C_T of T, and vertex (i,j) has id
// i*b + j.
//---------------------------------------------------------------------------//
class HardcorePlan {
  public:
    static constexpr int kUnitPolyCap = 40;

    static HardcorePlan for_graph(const Graph& g);
    static HardcorePlan for_product(const Graph& s, const Graph& t);

    std::uint64_t vertex_count() const { return vertex_count_; }
    // maximum independent set size, when every component has a polynomial
    std::optional<std::uint64_t> max_size() const;

    // a hard-core draw at activity lambda; sorted vertex ids
    std::vector<std::int64_t> sample(long double lambda, RngStream& rng,
                                     std::uint64_t rejection_cap = kDefaultRejectionCap,
                                     HardcoreStats* stats = nullptr) const;
    // |I| only (sets are not materialised)
    std::uint64_t sample_size(long double lambda, RngStream& rng,
                              std::uint64_t rejection_cap = kDefaultRejectionCap) const;
    // uniform over independent sets of size k, by rejecting hard-core draws
    // on |I| != k; nullopt when `attempt_cap` rounds fail
    std::optional<std::vector<std::int64_t>> sample_fixed_size(
        long double lambda, std::uint64_t k, RngStream& rng, std::uint64_t attempt_cap,
        HardcoreStats* stats = nullptr, std::uint64_t rejection_cap = kDefaultRejectionCap) const;

    // exact pmf of |I| when max_size() is known (convolution of groups)
    std::vector<long double> size_pmf(long double lambda) const;

  private:
    struct Group {
        IndPoly poly;                    // empty: opaque (rejection) units
        std::vector<std::uint64_t> units;
    };
    struct Draw;

    HardcorePlan() = default;
    Graph unit_graph(std::uint64_t unit) const;
    std::int64_t unit_vertex(std::uint64_t unit, int local) const;
    std::int64_t pool_vertex(std::uint64_t index) const;
    void draw_sizes(long double lambda, RngStream& rng, std::uint64_t rejection_cap, Draw& d,
                    HardcoreStats* stats) const;
    std::vector<std::int64_t> materialise(const Draw& d, RngStream& rng) const;

    std::uint64_t vertex_count_ = 0;
    std::vector<Group> groups_;
    std::uint64_t pool_size_ = 0;

    // graph mode
    bool product_ = false;
    std::vector<std::vector<int>> comps_;  // unit -> vertices (graph mode)
    std::vector<int> pool_;                // isolated vertices (graph mode)
    std::shared_ptr<const Graph> g_;

    // product mode
    std::vector<std::vector<int>> comp_s_, comp_t_;
    std::vector<Graph> graph_s_, graph_t_;  // induced components
    std::vector<int> iso_s_, iso_t_;
    int b_ = 0;
};

// literal rejection from product Bernoulli(lambda/(1+lambda)); throws after cap
std::vector<int> sample_hardcore_rejection(const Graph& g, long double lambda, RngStream& rng,
                                           std::uint64_t cap = kDefaultRejectionCap,
                                           HardcoreStats* stats = nullptr);
std::vector<int> sample_hardcore(const Graph& g, long double lambda, RngStream& rng,
                                 std::uint64_t cap = kDefaultRejectionCap);
// attempt cap = safety * (1 + sqrt(n lambda)) * sqrt(n)
std::optional<std::vector<int>> sample_hardcore_fixed_size(
    const Graph& g, long double lambda, std::uint64_t k, RngStream& rng,
    double safety = kDefaultFixedSizeSafety, HardcoreStats* stats = nullptr);
std::uint64_t fixed_size_attempt_cap(std::uint64_t vertices, long double lambda, double safety);

// uniform independent set of size k inside a small graph (n <= 62)
std::vector<int> uniform_independent_set(const BitGraph& g, int k, RngStream& rng);

}  // namespace trifree

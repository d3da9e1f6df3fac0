#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <unordered_set>
#include <utility>
#include <vector>

namespace trifree {

class RngStream;

using EdgePair = std::pair<int, int>;

class CapError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

//---------------------------------------------------------------------------//
// Labeled simple graph on {0..n-1}: adjacency lists plus a hashed edge set.
// Built incrementally, then treated as a value.
//---------------------------------------------------------------------------//
class Graph {
  public:
    Graph() = default;
    explicit Graph(int n);
    Graph(int n, const std::vector<EdgePair>& edges);

    int n() const { return n_; }
    std::size_t num_edges() const { return eset_.size(); }

    // false if the edge was already present; throws on loops / bad labels
    bool add_edge(int u, int v);
    bool remove_edge(int u, int v);
    bool has_edge(int u, int v) const;

    const std::vector<int>& neighbors(int v) const { return adj_[v]; }
    int degree(int v) const { return int(adj_[v].size()); }
    int max_degree() const;

    // u < v, lexicographic
    std::vector<EdgePair> edges() const;

    bool operator==(const Graph& o) const;

  private:
    static std::uint64_t key(int u, int v)
    {
        if (u > v)
            std::swap(u, v);
        return (std::uint64_t(std::uint32_t(u)) << 32) | std::uint32_t(v);
    }

    int n_ = 0;
    std::vector<std::vector<int>> adj_;
    std::unordered_set<std::uint64_t> eset_;
};

// Packed adjacency for n <= 64. Conversions are explicit.
struct BitGraph {
    int n = 0;
    std::array<std::uint64_t, 64> adj{};

    explicit BitGraph(int n_ = 0);
    bool has_edge(int u, int v) const { return (adj[u] >> v) & 1u; }
    void add_edge(int u, int v);
    void remove_edge(int u, int v);
    int num_edges() const;
    int degree(int v) const { return __builtin_popcountll(adj[v]); }
    std::uint64_t all() const { return n == 64 ? ~0ull : ((1ull << n) - 1); }
};

BitGraph to_bits(const Graph& g);
Graph from_bits(const BitGraph& g);

// Edge-index masks over the C(n,2) pairs in lexicographic order (n <= 11).
int pair_index(int n, int u, int v);
std::vector<EdgePair> pair_list(int n);
std::uint64_t edge_mask(const Graph& g);
Graph graph_from_edge_mask(int n, std::uint64_t mask);

//---------------------------------------------------------------------------//
// (A,B) split. side[v] == 0 means v in A.
//---------------------------------------------------------------------------//
class Partition {
  public:
    Partition() = default;
    explicit Partition(std::vector<std::uint8_t> side);
    static Partition from_mask(int n, std::uint64_t a_mask);
    static Partition from_sets(int n, const std::vector<int>& a_vertices);

    int n() const { return int(side_.size()); }
    int a() const { return int(a_list_.size()); }
    int b() const { return int(b_list_.size()); }
    // imbalance a - floor(n/2)
    int t() const { return a() - n() / 2; }

    bool in_a(int v) const { return side_[v] == 0; }
    std::uint8_t side(int v) const { return side_[v]; }
    const std::vector<int>& a_vertices() const { return a_list_; }
    const std::vector<int>& b_vertices() const { return b_list_; }
    // position of v inside its own side's list
    int local_index(int v) const { return local_[v]; }

    bool weakly_balanced() const;
    bool moderately_balanced(double lambda) const;
    bool strongly_balanced() const;

    std::uint64_t a_mask() const;
    Partition swapped() const;
    bool operator==(const Partition& o) const { return side_ == o.side_; }

  private:
    std::vector<std::uint8_t> side_;
    std::vector<int> a_list_, b_list_, local_;
};

double moderate_balance_bound(int n, double lambda);

struct SubgraphCounts {
    std::uint64_t edges = 0;
    std::uint64_t p2 = 0;
    std::uint64_t p3 = 0;
    std::uint64_t s3 = 0;
    std::uint64_t c4 = 0;
    bool operator==(const SubgraphCounts&) const = default;
};

bool is_triangle_free(const Graph& g);
bool is_triangle_free(const BitGraph& g);
SubgraphCounts subgraph_counts(const Graph& g);
// brute force over edge subsets, n <= 8
SubgraphCounts subgraph_counts_naive(const Graph& g);
std::uint64_t triangle_count(const Graph& g);

// counts of S x T from the counts of S (on a vertices) and T (on b vertices)
SubgraphCounts product_subgraph_counts(int a, int b, const SubgraphCounts& s,
                                       const SubgraphCounts& t);

// S on {0..a-1}, T on {0..b-1}; vertex (i,j) of the product is i*b + j
Graph cartesian_product(const Graph& s, const Graph& t, std::size_t cap = std::size_t(1) << 26);

// random triangle-free graph: pairs visited in random order, each kept with
// probability `keep` when it closes no triangle and respects the degree cap
Graph random_triangle_free(int n, int max_degree, double keep, RngStream& rng);

// induced subgraph on `vertices`, relabeled 0..k-1 in the given order
Graph induced_subgraph(const Graph& g, const std::vector<int>& vertices);

struct CutResult {
    long long cut = 0;
    Partition partition;
    bool exact = false;
};

constexpr int kMaxCutExactCap = 30;
constexpr int kChromaticExactCap = 30;

CutResult max_cut_exact(const Graph& g);
// single-vertex-move local search started from `start`
CutResult max_cut_local(const Graph& g, const Partition& start);
// exact when n <= 30, local search from `planted` otherwise (throws without one)
CutResult max_cut(const Graph& g, const Partition* planted = nullptr);
long long distance_to_bipartiteness(const Graph& g);
long long cut_size(const Graph& g, const Partition& p);

bool is_bipartite(const Graph& g);
// 0/1 colouring if bipartite
std::optional<std::vector<std::uint8_t>> two_coloring(const Graph& g);

struct ChromaticResult {
    int value = 0;
    bool exact = false;
};
ChromaticResult chromatic_number(const Graph& g);
// DSATUR backtracking: is g k-colourable? nullopt when the node budget runs out
std::optional<bool> is_k_colorable(const Graph& g, int k, std::uint64_t node_budget);

std::vector<int> component_labels(const Graph& g, int* count = nullptr);
int largest_component(const Graph& g);
bool is_connected(const Graph& g);

bool is_dominating_cut(const Graph& g, const Partition& p);

struct ExpanderReport {
    bool degree_ok = false;
    bool expansion_ok = false;
    bool expansion2_ok = true;  // only tested when lambda >= sqrt(log n / n)
    bool exhaustive = false;    // false: random spot checks only
    bool value() const { return degree_ok && expansion_ok && expansion2_ok; }
};
constexpr int kExpanderExactCap = 24;
ExpanderReport is_expander(const Graph& g, const Partition& p, double lambda,
                           RngStream* rng = nullptr, int spot_checks = 2000);

}  // namespace trifree

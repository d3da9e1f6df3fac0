#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "trifree/bignum.hpp"
#include "trifree/graph.hpp"
#include "trifree/indpoly.hpp"

namespace trifree {

class RegimeError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct ExactZ {
    Rational value;        // Z_G(lambda)
    IndPoly poly;          // independence polynomial behind it
    long double log_value; // log Z_G(lambda)
    bool exact = true;
};

constexpr int kExactZCap = 40;

// exact Z_G at a rational activity, via the independence polynomial
ExactZ exact_log_Z(const Graph& g, const Rational& lambda);
// log(Z_G(lambda) / (1+lambda)^n) evaluated in extended precision
long double exact_log_Z_ratio(const Graph& g, long double lambda);

struct Cluster {
    std::vector<int> vertices;
    int size() const { return int(vertices.size()); }
};

// H_Gamma on tuple positions
BitGraph incompatibility_graph(const Graph& g, const Cluster& c);

constexpr int kClusterCap = 7;

// Every cluster of size <= k_max containing all of `pin`, in lexicographic
// tuple order. Throws above the cap.
void enumerate_clusters(const Graph& g, int k_max, const std::vector<int>& pin,
                        const std::function<void(const Cluster&)>& visit);
std::vector<Cluster> list_clusters(const Graph& g, int k_max, const std::vector<int>& pin);

// sum over spanning connected edge subsets A of h of (-1)^|A|
std::int64_t signed_connected_sum(const BitGraph& h);
Rational ursell(const Graph& g, const Cluster& c);
Rational ursell_of(const BitGraph& h);

// number of spanning trees (matrix-tree theorem, exact Bareiss elimination)
std::uint64_t penrose_tree_bound(const BitGraph& h);

struct LogZResult {
    long double value = 0;
    int truncation_order = 0;
    long double certified_tail = std::numeric_limits<long double>::infinity();
    bool converged() const { return certified_tail < std::numeric_limits<long double>::infinity(); }
};

// exact coefficients c_0..c_{k_max} of the truncated series in lambda
// (non-constant clusters when unpinned)
std::vector<Rational> cluster_series(const Graph& g, int k_max, const std::vector<int>& pin = {});

// Pinned or unpinned truncated cluster expansion. With an empty pin the sum
// runs over non-constant clusters (log of Z/(1+lambda)^n); include_constant
// adds n log(1+lambda) back in closed form. With a pin the sum is over all
// clusters containing the pinned vertices.
LogZResult truncated_log_Z(const Graph& g, long double lambda, int k_max,
                           const std::vector<int>& pin = {}, bool include_constant = false);

// unpinned tail majorant per starting vertex
long double unpinned_tail_bound(int max_degree, long double lambda, int k);
// |S| in {1,2}: (2e)^k D^{k-|S|} lambda^k; larger pins sum the general bound
long double pinned_tail_bound(int max_degree, long double lambda, int k, int pin_size);

long double third_order_log_Z_ratio(const Graph& g, long double lambda);
long double fourth_order_log_Z_ratio(const Graph& g, long double lambda);

struct MeanVar {
    long double mean = 0;
    long double variance = 0;
};
MeanVar hardcore_mean_var(const Graph& g, long double lambda);
// from counts alone (n vertices, |G|, P2), for graphs too large to build
MeanVar hardcore_mean_var_counts(long double n, long double edges, long double p2,
                                 long double lambda);
// exact mean and variance of |I| from the independence polynomial
MeanVar exact_hardcore_mean_var(const IndPoly& p, long double lambda);

long double convergence_threshold(int max_degree);

}  // namespace trifree

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <unordered_map>
#include <utility>
#include <vector>

#include "trifree/bignum.hpp"
#include "trifree/graph.hpp"
#include "trifree/params.hpp"
#include "trifree/samplers.hpp"

namespace trifree {

//---------------------------------------------------------------------------//
// counting
//---------------------------------------------------------------------------//

struct CountTable {
    int n = 0;
    std::vector<BigInt> counts;  // index m
    BigInt total() const;
};

constexpr int kEnumerateCap = 10;
constexpr int kLabeledWalkCap = 9;
constexpr int kFilterAllCap = 7;

// every labelled triangle-free graph on n vertices, grown one vertex at a time
// (the new vertex's neighbourhood is an independent set of the old graph)
void for_each_tfree(int n, const std::function<void(const BitGraph&)>& visit);

// isomorphism classes of T(n): canonical edge mask -> number of labellings
using ClassTable = std::unordered_map<std::uint64_t, std::uint64_t>;
const ClassTable& tfree_classes(int n);  // n <= 9, cached

// n <= 10. Labelled counts; n <= 8 walks labelled graphs, larger n propagate
// labelled multiplicities of isomorphism classes one vertex at a time.
CountTable enumerate_tfree(int n);
// independent methods for cross-checks
CountTable enumerate_tfree_walk(int n);    // n <= 9
CountTable enumerate_tfree_filter(int n);  // n <= 7, every graph tested

Rational exact_Z(int n, const Rational& lambda);

//---------------------------------------------------------------------------//
// restricted partition functions and defect laws
//---------------------------------------------------------------------------//

enum class Restriction { weak_degree_cap, lambda_sparse };

struct DefectCaps {
    double max_degree = 0;
    double max_side_edges = 0;  // max(|S|, |T|); infinity for the weak family
};
DefectCaps defect_caps(const Partition& p, long double lambda, Restriction r);

constexpr int kRestrictedCap = 8;
Rational exact_restricted_Z(const Partition& p, const Rational& lambda, const DefectCaps& caps);
Rational exact_restricted_Z(const Partition& p, const Rational& lambda, Restriction r);

// key (mask of S on A-local pairs, mask of T on B-local pairs)
using DefectKey = std::pair<std::uint64_t, std::uint64_t>;
using DefectPmf = std::map<DefectKey, Rational>;
// nu(S,T) over lambda-sparse pairs, a,b <= 4
DefectPmf exact_defect_pmf(const Partition& p, const Rational& lambda);

// Both sides of the product identity as polynomials in lambda, for every
// triangle-free (S,T) on a and b vertices: the direct sum over graphs with
// those defects, and lambda^{|S|+|T|} times the independence polynomial of
// S x T. Returns the number of pairs whose polynomials differ.
struct ProductIdentityReport {
    std::uint64_t pairs = 0;
    std::uint64_t mismatches = 0;
    std::uint64_t value_mismatches = 0;  // at the supplied activities
};
ProductIdentityReport check_defect_product_identity(int a, int b,
                                                    const std::vector<Rational>& lambdas);

//---------------------------------------------------------------------------//
// exact model laws
//---------------------------------------------------------------------------//

// A law on labelled graphs that is invariant under relabelling except for a
// point mass on one fixed fallback graph.
struct ModelPmf {
    int n = 0;
    std::unordered_map<std::uint64_t, long double> classes;  // canonical mask -> mass
    long double fallback_mass = 0;
    std::uint64_t fallback_mask = 0;  // labelled edge mask of the fallback graph

    long double labeled_prob(std::uint64_t mask) const;
    // class law with the fallback mass folded into its class
    std::unordered_map<std::uint64_t, long double> class_law() const;
    long double total() const;
};

struct ModelArgs {
    int n = 0;
    std::uint64_t m = 0;     // fixed-m models
    long double lambda = 0;  // fixed-lambda models
    // cerg only
    double q = 0, psi = 0, cap_n = 0;
};

constexpr int kModelPmfCap = 8;
ModelPmf exact_model_pmf(Model model, const ModelArgs& args);

// labelled laws keyed by edge masks (graphs) or vertex masks (sets)
using MaskPmf = std::unordered_map<std::uint64_t, long double>;
MaskPmf exact_cerg_pmf(int vertices, double q, double psi, double cap_n);
MaskPmf exact_hardcore_pmf(const Graph& g, long double lambda);

// laws of the three sequential sandwich processes on `side` <= 6 vertices
struct SandwichLaws {
    MaskPmf lower, middle, upper;
};
SandwichLaws exact_sandwich_laws(int side, const GlobalParams& params);

//---------------------------------------------------------------------------//
// distances
//---------------------------------------------------------------------------//

template <class Map>
long double tv_distance(const Map& p, const Map& q)
{
    long double s = 0;
    for (const auto& [k, v] : p) {
        auto it = q.find(k);
        s += std::abs(v - (it == q.end() ? 0 : it->second));
    }
    for (const auto& [k, v] : q)
        if (p.find(k) == p.end())
            s += std::abs(v);
    return s / 2;
}

// D_KL(p || q); infinity when p charges a point q does not
long double kl_divergence(const MaskPmf& p, const MaskPmf& q);

// TV between empirical counts of labelled graphs and a model law, without
// enumerating unobserved labelled graphs
long double labeled_tv(const std::unordered_map<std::uint64_t, std::uint64_t>& counts,
                       std::uint64_t draws, const ModelPmf& law);
// TV between the class law of the empirical counts and the model class law
long double class_tv(const std::unordered_map<std::uint64_t, std::uint64_t>& counts,
                     std::uint64_t draws, const ModelPmf& law);

// "0-1,2-3" for an edge mask over the lexicographic pairs of n vertices
std::string mask_key(int n, std::uint64_t mask);

}  // namespace trifree

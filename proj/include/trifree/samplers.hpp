#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "trifree/graph.hpp"
#include "trifree/hardcore.hpp"
#include "trifree/params.hpp"
#include "trifree/rng.hpp"

namespace trifree {

//---------------------------------------------------------------------------//
// partitions
//---------------------------------------------------------------------------//

// |t| <= ceil(sqrt(64 ln 2 / ln(1+lambda)))
int xi_truncation(long double lambda);
// truncated, renormalised xi_lambda on [-T, T] (index t + T)
std::vector<long double> xi_pmf(long double lambda);
// law of |A| - floor(n/2) after clamping t into [-floor(n/2), ceil(n/2)]
std::vector<std::pair<int, long double>> theta_offset_pmf(int n, long double lambda);
int sample_xi(long double lambda, RngStream& rng);
Partition sample_theta_lambda(int n, long double lambda, RngStream& rng);

//---------------------------------------------------------------------------//
// defect graphs
//---------------------------------------------------------------------------//

Graph sample_er(int vertices, double q, RngStream& rng);

struct ChainStats {
    std::uint64_t proposals = 0;
    std::uint64_t accepted = 0;
    std::uint64_t blocked = 0;  // triangle or degree-cap rejections
};

// 50 |V|^2 proposals
std::uint64_t default_sweeps(int vertices);

// Metropolis single-edge flips from the empty graph on the triangle-free,
// degree-capped space. cap_n is the n inside 50 max(q n, log n); pass 0 to
// use |V|.
Graph sample_cond_erg(int vertices, double q, double psi, RngStream& rng, std::uint64_t sweeps,
                      double cap_n = 0, ChainStats* stats = nullptr);
int erg_degree_cap(double q, double cap_n);

//---------------------------------------------------------------------------//
// composite models
//---------------------------------------------------------------------------//

enum class Model { mu_m1, mu_m2, mu_lambda1, mu_lambda2, cerg, sandwich };
const char* model_name(Model m);
Model parse_model(const std::string& s);

struct SampleDiagnostics {
    std::uint64_t crossing_attempts = 0;
    std::uint64_t opaque_rejections = 0;
    std::uint64_t chain_proposals = 0;
    std::uint64_t chain_accepted = 0;
    bool defect_triangle = false;
    bool too_many_defects = false;
    bool infeasible_size = false;
    bool cap_hit = false;
    bool crossing_skipped = false;  // lazy mode with empty defects
};

struct SampleOutcome {
    Model model = Model::mu_m1;
    Graph graph;
    Partition partition;
    Graph s, t;                       // on A-local / B-local labels
    std::vector<EdgePair> crossing;   // global labels, (A vertex, B vertex)
    bool fallback_used = false;
    SampleDiagnostics diag;
};

struct SamplerOptions {
    double fixed_size_safety = kDefaultFixedSizeSafety;
    std::uint64_t rejection_cap = kDefaultRejectionCap;
    std::uint64_t sweeps = 0;  // 0: default_sweeps per side
    // skip building E_cr and the full graph when S and T are empty
    bool lazy_bipartite = false;
};

// balanced complete-bipartite prefix with m edges
Graph fallback_graph(int n, std::uint64_t m);

SampleOutcome sample_mu_m1(int n, std::uint64_t m, RngStream& rng, const SamplerOptions& o = {});
SampleOutcome sample_mu_m2(int n, std::uint64_t m, RngStream& rng, const SamplerOptions& o = {});
SampleOutcome sample_mu_lambda1(int n, long double lambda, RngStream& rng,
                                const SamplerOptions& o = {});
SampleOutcome sample_mu_lambda2(int n, long double lambda, RngStream& rng,
                                const SamplerOptions& o = {});

// crossing edges as product vertex ids -> global (A vertex, B vertex) pairs
std::vector<EdgePair> crossing_from_ids(const Partition& p, const std::vector<std::int64_t>& ids);
// defect graphs of g w.r.t. p, on local labels
std::pair<Graph, Graph> defect_graphs(const Graph& g, const Partition& p);

nlohmann::json outcome_to_json(const SampleOutcome& s);

//---------------------------------------------------------------------------//
// sandwich coupling
//---------------------------------------------------------------------------//

struct SandwichTriple {
    Graph lower, middle, upper;
    double q_lower = 0, q_upper = 0, q_middle = 0, psi = 0;
    int degree_cap = 0;
    bool containment_ok = false;
    bool lower_in_middle = false, middle_in_upper = false;
};

struct SandwichRates {
    double q_lower = 0, q_middle = 0, q_upper = 0, psi = 0;
    int degree_cap = 0;
};
SandwichRates sandwich_rates(const GlobalParams& params);
// conditional probability of an unblocked edge in the middle process
double sandwich_middle_prob(const SandwichRates& r, int deg_u, int deg_v);

// shared uniforms over the pairs of `side` vertices in lexicographic order;
// `params` supplies q2, psi and the global n
SandwichTriple sandwich_sample(int side, const GlobalParams& params, RngStream& rng);

nlohmann::json sandwich_to_json(const SandwichTriple& s);

}  // namespace trifree

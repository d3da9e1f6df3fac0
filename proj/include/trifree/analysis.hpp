#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "trifree/graph.hpp"
#include "trifree/rng.hpp"

namespace trifree {

//---------------------------------------------------------------------------//
// per-graph certificates
//---------------------------------------------------------------------------//

// X(G) = |G| - MaxCut(G). `upper` comes from the planted cut improved by
// single-vertex moves; `lower` is the size of an edge-disjoint family of odd
// cycles, each using one defect edge and an even crossing path. Equal bounds
// certify the value.
struct BipartiteDistance {
    long long lower = 0, upper = 0;
    bool certified() const { return lower == upper; }
};
BipartiteDistance bipartite_distance_certificate(const Graph& g, const Partition& planted);

// Chromatic class from constructive certificates:
//   2 when bipartite; >= 3 otherwise;
//   <= 3 when a green colouring exists (A uses {red, green}, B uses
//   {blue, green}; a 2-SAT problem);
//   <= 4 when both defect graphs are bipartite;
//   exact search on graphs up to `exact_cap` vertices.
struct ChromaticCertificate {
    int lower = 1, upper = 0;
    bool decided() const { return lower == upper; }
    std::string method;
};
ChromaticCertificate chromatic_certificate(const Graph& g, const Partition& planted,
                                           int exact_cap = 30,
                                           std::uint64_t node_budget = 2000000);
bool green_coloring_exists(const Graph& g, const Partition& p);

// number of maximum cuts (unordered bipartitions), n <= 30
struct MaxCutCount {
    long long cut = 0;
    std::uint64_t count = 0;
    std::uint64_t a_mask = 0;  // one maximiser, side of vertex 0 is A
};
MaxCutCount count_max_cuts(const Graph& g);

//---------------------------------------------------------------------------//
// experiments
//---------------------------------------------------------------------------//

struct ExperimentReport {
    nlohmann::json config;
    std::vector<nlohmann::json> replicas;  // raw observables, one per replica
    nlohmann::json aggregate;              // summary statistics
};

// limit of P(bipartite) in the scaling window: exp(-sqrt(3)/4 e^{t/2})
double bipartite_window_limit(double t);

ExperimentReport bipartite_distance_experiment(int n, std::uint64_t m, std::uint64_t replicas,
                                               std::uint64_t seed, bool lazy = true);
ExperimentReport chromatic_experiment(int n, std::uint64_t m, std::uint64_t replicas,
                                      std::uint64_t seed);

// giant-component cases, numbered as in the structural result
enum class GiantCase { below = 1, critical = 2, above = 3, linear = 4, connectivity = 5 };
struct GiantOptions {
    GiantCase which = GiantCase::critical;
    std::vector<int> ns{500, 1000, 2000, 4000};
    double omega = 1.0;       // cases 1-3 (case 1 and 3 scale it as n^{1/6})
    double c = 3.0;           // case 4
    double eps = 0.3;         // case 5
    bool above_threshold = true;  // case 5 side
    std::uint64_t sweeps = 0;     // 0: chain default
};
// q0 targeted by a case at size n
double giant_target_q0(const GiantOptions& o, int n);
ExperimentReport giant_component_experiment(const GiantOptions& o, std::uint64_t replicas,
                                            std::uint64_t seed);

ExperimentReport capture_uniqueness_experiment(int n, double lambda, std::uint64_t replicas,
                                               std::uint64_t seed);

// replicas = number of (A,B,S,T) draws; each gets `draws` crossing-size draws
ExperimentReport crossing_lclt_experiment(int n, std::uint64_t m, std::uint64_t replicas,
                                          std::uint64_t draws, std::uint64_t seed);

// |I| on a random Delta-regular bipartite graph against the matched Gaussian
ExperimentReport hardcore_lclt_experiment(int n, int degree, double lambda, std::uint64_t draws,
                                          std::uint64_t seed);

// random d-regular bipartite (triangle-free) graph on n vertices (n even)
Graph random_regular_bipartite(int n, int d, RngStream& rng);

//---------------------------------------------------------------------------//
// config-driven runs
//---------------------------------------------------------------------------//

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// validates keys and types, then runs; RegimeError when outside the
// supported regime and "force" is not set
ExperimentReport run_experiment(const nlohmann::json& config);
// aggregate.csv and replicas.jsonl under `dir`, written atomically
void write_report(const ExperimentReport& r, const std::string& dir);

}  // namespace trifree

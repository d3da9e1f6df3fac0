#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace trifree {

// One named check: pass flag plus the numbers behind it.
struct Check {
    Check() = default;
    explicit Check(std::string n) : name(std::move(n)) {}
    std::string name;
    bool passed = false;
    nlohmann::json detail;
    double seconds = 0;
};

struct SuiteReport {
    std::string suite;
    std::vector<Check> checks;
    bool passed() const;
    nlohmann::json to_json() const;
};

struct VerifyOptions {
    std::uint64_t seed = 1;
    // multiplies every Monte Carlo sample count (1 = full size)
    double scale = 1.0;
};

// exact counts at n = 3, 4 and agreement of two enumeration methods for n <= 7
Check check_exact_counts();
// sum over graphs with defect pair (S,T) against lambda^{|S|+|T|} Z_{SxT},
// all triangle-free pairs with a, b <= 4, lambda in {1/3, 1/2, 1}
Check check_defect_identity();
// Ursell values for the small incompatibility graph types
Check check_ursell_values();
// tree-graph bound on every connected graph with <= 6 vertices; k^{k-2} trees of K_k
Check check_penrose_cayley();
// certified tail on random triangle-free graphs; order of the 3rd/4th-order errors
std::vector<Check> check_truncation(const VerifyOptions& o);
// subgraph counts of S x T for every (S,T) with a, b <= 5 and random pairs at a = b = 8
Check check_product_counts(const VerifyOptions& o);
// empirical laws of the samplers against exact laws
std::vector<Check> check_samplers_vs_oracle(const VerifyOptions& o);
// subcritical and supercritical formulas agree where both apply
std::vector<Check> check_formula_overlap();
// lower <= middle <= upper at side 500, and the coupling inequality at side 5
std::vector<Check> check_sandwich(const VerifyOptions& o);

// suites: cluster-expansion, product-identities, oracle-vs-sampler, sandwich, formulas
const std::vector<std::string>& suite_names();
// throws std::invalid_argument on an unknown name
SuiteReport run_suite(const std::string& name, const VerifyOptions& o);

}  // namespace trifree

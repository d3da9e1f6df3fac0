#pragma once

#include <optional>

#include "trifree/graph.hpp"

namespace trifree {

using real = long double;

// odds x = q/(1-q)  ->  q
inline real prob_from_odds(real x) { return x / (1 + x); }

struct GlobalParams {
    real n = 0;
    std::optional<real> m;
    real lambda0 = 0;  // 4m/n^2, zero when built from lambda
    real lambda = 0;
    real q0 = 0, q1 = 0, q2 = 0;
    real mu = 0;
    real psi = 0;
    real alpha = 0;
    // lambda in (0, 2 sqrt(log n / n)]
    bool in_regime = false;
};

real lambda_of_m(real n, real m);
// inverse of lambda_of_m in m (bisection on lambda0), real-valued
real m_of_lambda(real n, real lambda);

GlobalParams global_params_lambda(real n, real lambda);
GlobalParams global_params_m(real n, real m);

enum class Variant { subcritical, supercritical };
const char* variant_name(Variant v);
Variant parse_variant(const std::string& s);

struct PartitionParams {
    Variant variant = Variant::supercritical;
    real n = 0, a = 0, b = 0, lambda = 0;
    real qA = 0, qB = 0, q = 0;
    real qpA = 0, qpB = 0;    // q'
    real qppA = 0, qppB = 0;  // q''
    real muA = 0, muB = 0;
    real delta_cap = 0;
    real k_cap = 0;
    real M_lambda = 0;
    bool weak = false, moderate = false, strong = false;
};

PartitionParams partition_params(real n, real a, real lambda, Variant v);
PartitionParams partition_params(const Partition& p, real lambda, Variant v);

// degree cap 50 max(q n, log n) for an ERG on an arbitrary vertex count
real degree_cap(real q, real n);

// log C(n, k) via lgamma
real log_binomial(real n, real k);

// regime thresholds, m = c/4 n^{3/2} sqrt(log n)
real m_at_c(real n, real c);
bool subcritical_valid(real n, real m);    // c > 1
bool supercritical_valid(real n, real m);  // m >= 13/56 n^{3/2} sqrt(log n)

// log |T(n,m)| asymptotics
real log_count_subcritical(real n, real m);
real log_count_supercritical(real n, real m);

// log Z(lambda) asymptotics (no m involved)
real log_Z_asymptotic(real n, real lambda, Variant v);

// log P_{n,p}(triangle-free)
real log_prob_triangle_free_gnp(real n, real p, Variant v);

// Bisection on lambda -> q0(lambda) over the decreasing branch
// lambda >= 1/sqrt(n); throws RegimeError when the target is not attained.
real lambda_for_q0(real n, real q0);

// m for the scaling-window parametrisation at window position t
real m_window(real n, real t);

}  // namespace trifree

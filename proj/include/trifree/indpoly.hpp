#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "trifree/bignum.hpp"
#include "trifree/graph.hpp"

namespace trifree {

// coefficient k = number of independent sets of size k
using IndPoly = std::vector<std::uint64_t>;

constexpr int kIndPolyCap = 62;

// Vertex elimination with component splitting, memoised on vertex masks.
// One cache per graph; reuse it for many sub-mask queries.
class IndPolyCache {
  public:
    explicit IndPolyCache(const BitGraph& g);
    const IndPoly& operator()(std::uint64_t mask);
    const BitGraph& graph() const { return g_; }

  private:
    IndPoly compute(std::uint64_t mask);
    BitGraph g_;
    std::unordered_map<std::uint64_t, IndPoly> memo_;
};

IndPoly independence_polynomial(const Graph& g);
IndPoly independence_polynomial(const BitGraph& g);

Rational eval_poly(const IndPoly& p, const Rational& x);
long double eval_poly(const IndPoly& p, long double x);
// log of sum_k p[k] x^k, stable for large x
long double log_eval_poly(const IndPoly& p, long double log_x);

IndPoly poly_mul(const IndPoly& a, const IndPoly& b);

}  // namespace trifree

#pragma once

#include <boost/multiprecision/gmp.hpp>

namespace trifree {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

}  // namespace trifree

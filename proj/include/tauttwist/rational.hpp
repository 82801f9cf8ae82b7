#pragma once

#include <gmpxx.h>

#include <string>

namespace tauttwist {

// All arithmetic in this library is exact. No floating point anywhere.
using Int = mpz_class;
using Rat = mpq_class;

// Renders as "p/q" in lowest terms with q > 0, including "1/1".
std::string rat_str(const Rat& q);

// Accepts "p" or "p/q"; throws std::invalid_argument on malformed input.
Rat rat_parse(const std::string& s);

Rat make_frac(Int num, Int den);

Int factorial(int n);
Int int_pow(const Int& base, int exp);
Int binomial(int n, int k);

}  // namespace tauttwist

#include "tauttwist/rational.hpp"

#include <stdexcept>

namespace tauttwist {

std::string rat_str(const Rat& q) {
  Rat c = q;
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

Rat rat_parse(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational string");
  Rat q;
  if (q.set_str(s, 10) != 0)
    throw std::invalid_argument("malformed rational: " + s);
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
  q.canonicalize();
  return q;
}

Rat make_frac(Int num, Int den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  Rat q(num, den);
  q.canonicalize();
  return q;
}

Int factorial(int n) {
  if (n < 0) throw std::invalid_argument("factorial of negative");
  Int f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
  return f;
}

Int int_pow(const Int& base, int exp) {
  if (exp < 0) throw std::invalid_argument("negative integer exponent");
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(exp));
  return r;
}

Int binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  Int r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n),
               static_cast<unsigned long>(k));
  return r;
}

}  // namespace tauttwist

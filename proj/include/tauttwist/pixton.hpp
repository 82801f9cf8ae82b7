#pragma once

#include <vector>

#include "tauttwist/rational.hpp"
#include "tauttwist/stable_graph.hpp"
#include "tauttwist/taut_class.hpp"

namespace tauttwist {

inline constexpr int kMaxPixtonDegree = 2;

struct PixtonInput {
  int g = 0;
  int n = 0;
  int k = 1;
  std::vector<int> mu;  // sum k(2g-2)
  int degree = 0;       // default g
  int r = 0;            // modulus for the per-r operations

  std::vector<int> shifted() const;  // mu_i + k, sums to k(2g-2+n)
  void validate() const;
};

PixtonInput make_pixton_input(int g, int k, std::vector<int> mu, int degree);

// Half-edge weights in {0..r-1}; the two ends of each edge sum to 0 mod r.
struct Weighting {
  std::vector<std::array<int, 2>> w;  // per edge end
};

// Exactly the admissible weightings for input.r: legs carry the shifted
// values mod r and every vertex sum is k(2g(v)-2+n(v)) mod r. The count
// is r^{h1} whenever the congruences are consistent.
std::vector<Weighting> enumerate_weightings(const StableGraph& gamma,
                                            const PixtonInput& in);

// One modulus: sum over stable graphs with #edges <= degree and admissible
// weightings of
//   r^{-h1}/|Aut| * xi_* [ prod_v exp(-k^2 kappa_1)
//                          * prod_i exp(mtilde_i^2 psi_i)
//                          * prod_e (1 - exp(-w w' (psi+psi')))/(psi+psi') ],
// truncated to total degree `degree`. Homogeneous output.
TautClass pixton_class_at_r(const PixtonInput& in);

struct RSamplePlan {
  std::vector<int> samples;
  std::vector<int> guards;
  // 2*degree+2 consecutive moduli starting at 2*degree*(max|mtilde|+k)+3,
  // then two guard points beyond.
  static RSamplePlan defaults(const PixtonInput& in);
};

struct InterpolationReport {
  int degree_bound = 0;
  std::vector<int> samples;
  std::vector<int> guards;
  struct Coefficient {
    TautClass::Term term;
    std::vector<Rat> polynomial;  // ascending powers of r
    std::vector<Rat> sample_values;
    std::vector<Rat> guard_residuals;
  };
  std::vector<Coefficient> coefficients;
};

// Coefficient-wise polynomial interpolation over the sample moduli with
// constant-term extraction; every guard modulus must lie on the fitted
// polynomials or "interpolation inconsistent" is thrown.
TautClass pixton_class(const PixtonInput& in, const RSamplePlan& plan,
                       InterpolationReport* report = nullptr);
TautClass pixton_class(const PixtonInput& in,
                       InterpolationReport* report = nullptr);

}  // namespace tauttwist

#pragma once

#include <vector>

#include "tauttwist/pixton.hpp"
#include "tauttwist/registry.hpp"
#include "tauttwist/taut_class.hpp"

namespace tauttwist {

struct Signature {
  int k = 1;
  std::vector<int> mu;

  int n() const { return static_cast<int>(mu.size()); }
  bool is_holomorphic() const;    // all entries nonnegative
  bool is_k_divisible() const;    // all entries divisible by k
  // mu = k*mu' with mu' nonnegative; the holomorphic divisible case
  bool is_k_times_nonnegative() const {
    return is_holomorphic() && is_k_divisible();
  }
  void validate(int g) const;  // sum k(2g-2), n >= 1, 2g-2+n > 0, k >= 1
};

// Stable graph with a distinguished center: every edge joins the center to
// an outlying vertex, outlying vertices have genus >= 1 and carry only
// markings with nonnegative weight divisible by k, no self-loops at the
// center.
struct StarGraph {
  StableGraph graph;
  int center = 0;

  std::vector<int> outlying() const;
  int num_outlying() const { return graph.num_vertices() - 1; }
  void validate(const Signature& sig) const;
};

// Twist values per edge, positive multiples of k satisfying the center and
// outlying vertex equations exactly.
struct Twist {
  std::vector<int> I;
};

// All isomorphism classes of star graphs admitting at least one twist,
// including the trivial one-vertex graph, ordered deterministically.
std::vector<StarGraph> star_graphs(int g, const Signature& sig);

// The finite, complete twist list for one star graph (may be empty).
std::vector<Twist> twists(const StarGraph& star, const Signature& sig);

// prod_e I(e) / (|Aut| * k^{#outlying})
Rat twisted_coefficient(const StarGraph& star, const Twist& tw,
                        const Signature& sig);

// One symbolic term of total codimension g: the center is labeled with the
// meromorphic k-class on its space, each outlying vertex with the
// holomorphic k=1 class of the twisted-down signature.
SymbolicClass contribution(const StarGraph& star, const Twist& tw,
                           const Signature& sig);

// Weighted fundamental class: sum of contributions over star graphs and
// twists, expanded through the built-in rules and the given registry. The
// trivial graph contributes the opaque Hbar(g, k, mu) with coefficient 1
// unless the registry marks the open locus empty.
SymbolicClass weighted_class_H(int g, const Signature& sig,
                               const ClassRegistry& reg = ClassRegistry{});

// Same sum restricted to nontrivial star graphs.
SymbolicClass nontrivial_contribution_sum(
    int g, const Signature& sig, const ClassRegistry& reg = ClassRegistry{});

// 2^{-g} P^{g,1}_g(mu') minus the nontrivial k=1 contributions; rejects
// g = 0 (no nonnegative partition of -2) and non-holomorphic mu'.
SymbolicClass virtual_class(int g, const std::vector<int>& mu_prime,
                            const ClassRegistry& reg = ClassRegistry{});

enum class ConjectureMode { A, APrime };

// Mode A:  2^{-g} P - H (mu must not be k times a nonnegative partition).
// Mode A': 2^{-g} P - [vir] - HbarPrime(g,k,mu) - nontrivial contributions
//          (mu must be k times a nonnegative partition).
SymbolicClass conjecture_gap(int g, const Signature& sig, ConjectureMode mode,
                             const ClassRegistry& reg = ClassRegistry{});

// Solves H = 2^{-g} P for the trivial-graph class: returns
// 2^{-g} P - (nontrivial contributions), recursively expanding the center
// classes of lower genus; holomorphic k=1 outlying classes resolve through
// the registry or stay opaque. depth = 0 returns the bare opaque symbol.
SymbolicClass recursion_expand(int g, const Signature& sig,
                               const ClassRegistry& reg, int depth);

}  // namespace tauttwist

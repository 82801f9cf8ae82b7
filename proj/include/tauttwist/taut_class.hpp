#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tauttwist/rational.hpp"
#include "tauttwist/stable_graph.hpp"

namespace tauttwist {

enum class OpaqueKind { Hbar, HbarPrime, HbarVir };

std::string opaque_kind_name(OpaqueKind k);
OpaqueKind opaque_kind_parse(const std::string& s);

// A named, unexpanded class symbol: ambient space (g, |sig|) plus the
// declared codimension it occupies there.
struct OpaqueGen {
  OpaqueKind kind = OpaqueKind::Hbar;
  int g = 0;
  int k = 1;
  std::vector<int> sig;

  // Hbar with k >= 1 has codim g-1 exactly when all entries are
  // nonnegative and divisible by k; HbarPrime/HbarVir always codim g.
  int codim() const;
  bool holomorphic_k_divisible() const;
  std::string key_string() const;
  bool operator==(const OpaqueGen&) const = default;
};

// kappa_1 exponents per vertex, psi exponents per leg and per half-edge.
struct Decoration {
  std::vector<int> kappa1;
  std::vector<int> leg_psi;
  std::vector<std::array<int, 2>> edge_psi;

  static Decoration trivial(const StableGraph& g);
  int total_exponent() const;
  void validate(const StableGraph& g) const;
  bool operator==(const Decoration&) const = default;
};

// Per-vertex labels. Opaque signature entries are stored on the legs and
// edge ends of the labeled vertex, so canonical relabeling carries them
// along; the signature vector is reassembled in slot order on demand.
struct VertexLabels {
  struct Vert {
    bool opaque = false;
    OpaqueKind kind = OpaqueKind::Hbar;
    int k = 1;
    bool operator==(const Vert&) const = default;
  };
  std::vector<Vert> vert;
  std::vector<int> leg_entry;
  std::vector<std::array<int, 2>> edge_entry;

  static VertexLabels fundamental(const StableGraph& g);
  bool all_fundamental() const;
  void validate(const StableGraph& g) const;
  bool operator==(const VertexLabels&) const = default;
};

struct LabeledTerm {
  StableGraph graph;
  Decoration dec;
  VertexLabels labels;

  OpaqueGen opaque_at(int v) const;  // signature assembled in slot order
  int codim() const;                 // edges + exponents + label codims
  void validate() const;
  bool operator==(const LabeledTerm&) const = default;
};

// Exact-rational linear combination of decorated boundary strata on a
// fixed ambient space; no zero coefficients stored, terms keyed by
// decorated canonical form.
class TautClass {
 public:
  struct Term {
    StableGraph graph;
    Decoration dec;
  };

  TautClass() = default;
  TautClass(int g, int n) : g_(g), n_(n) {}

  int genus() const { return g_; }
  int markings() const { return n_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const std::map<CanonicalKey, std::pair<Term, Rat>>& terms() const {
    return terms_;
  }

  void add_term(const StableGraph& graph, const Decoration& dec, Rat coeff);
  Rat coefficient(const StableGraph& graph, const Decoration& dec) const;

  TautClass& operator+=(const TautClass& o);
  TautClass& operator-=(const TautClass& o);
  TautClass& operator*=(const Rat& c);
  friend TautClass operator+(TautClass a, const TautClass& b) { return a += b; }
  friend TautClass operator-(TautClass a, const TautClass& b) { return a -= b; }
  friend TautClass operator*(const Rat& c, TautClass a) { return a *= c; }
  bool operator==(const TautClass& o) const;

  // Every stored term has the same total degree; returns it (0 for the
  // empty class) or throws if mixed.
  std::optional<int> homogeneous_degree() const;

 private:
  int g_ = 0, n_ = 0;
  std::map<CanonicalKey, std::pair<Term, Rat>> terms_;
};

// Like TautClass but vertices may carry opaque generators.
class SymbolicClass {
 public:
  SymbolicClass() = default;
  SymbolicClass(int g, int n) : g_(g), n_(n) {}

  int genus() const { return g_; }
  int markings() const { return n_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const std::map<CanonicalKey, std::pair<LabeledTerm, Rat>>& terms() const {
    return terms_;
  }

  void add_term(const LabeledTerm& term, Rat coeff);
  bool fully_fundamental() const;

  SymbolicClass& operator+=(const SymbolicClass& o);
  SymbolicClass& operator-=(const SymbolicClass& o);
  SymbolicClass& operator*=(const Rat& c);
  friend SymbolicClass operator+(SymbolicClass a, const SymbolicClass& b) {
    return a += b;
  }
  friend SymbolicClass operator-(SymbolicClass a, const SymbolicClass& b) {
    return a -= b;
  }
  friend SymbolicClass operator*(const Rat& c, SymbolicClass a) {
    return a *= c;
  }
  bool operator==(const SymbolicClass& o) const;

  std::optional<int> homogeneous_codim() const;

 private:
  int g_ = 0, n_ = 0;
  std::map<CanonicalKey, std::pair<LabeledTerm, Rat>> terms_;
};

TautClass fundamental_class(int g, int n);
TautClass kappa1_class(int g, int n);
TautClass psi_class(int g, int n, int marking);
// Coefficient-1 pushforward of the fundamental classes through the gluing
// map of `gamma`; no 1/|Aut| factor.
TautClass stratum_class(const StableGraph& gamma);

// Exact linear combination; throws on ambient mismatch.
TautClass linear_combine(const std::vector<std::pair<Rat, TautClass>>& parts);

SymbolicClass to_symbolic(const TautClass& t);
// Fails (nullopt) if any opaque label remains.
std::optional<TautClass> to_tautological(const SymbolicClass& s);

// Relabel markings: old marking i+1 becomes new_of_old[i]+1.
TautClass relabel_markings(const TautClass& t,
                           const std::vector<int>& new_of_old);

// Substitutes classes (on the matching vertex moduli spaces) at the given
// vertices of one ambient term; slot i of a substituted vertex is glued to
// marking i+1 of the substituted class. Pure pushforward composition; the
// caller owns any 1/|Aut| conventions.
SymbolicClass splice(const LabeledTerm& ambient, const Rat& coeff,
                     const std::map<int, SymbolicClass>& subs);

// Pushforward through the gluing map of gamma of an exterior product of
// per-vertex classes (class i lives on (g(v_i), n(v_i))).
TautClass push_forward(const StableGraph& gamma,
                       const std::vector<TautClass>& vertex_classes);

}  // namespace tauttwist

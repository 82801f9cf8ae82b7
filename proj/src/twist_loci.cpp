#include "tauttwist/twist_loci.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace tauttwist {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

bool Signature::is_holomorphic() const {
  return std::all_of(mu.begin(), mu.end(), [](int m) { return m >= 0; });
}

bool Signature::is_k_divisible() const {
  return std::all_of(mu.begin(), mu.end(),
                     [this](int m) { return m % k == 0; });
}

void Signature::validate(int g) const {
  require(k >= 1, "k must be >= 1");
  require(n() >= 1, "at least one marking required");
  require(g >= 0 && g <= kMaxGenus, "genus out of supported range");
  require(2 * g - 2 + n() > 0, "unstable (g,n)");
  int sum = 0;
  for (int m : mu) sum += m;
  require(sum == k * (2 * g - 2), "mu must sum to k(2g-2)");
}

std::vector<int> StarGraph::outlying() const {
  std::vector<int> out;
  for (int v = 0; v < graph.num_vertices(); ++v)
    if (v != center) out.push_back(v);
  return out;
}

void StarGraph::validate(const Signature& sig) const {
  graph.validate();
  require(center >= 0 && center < graph.num_vertices(),
          "center out of range");
  for (const auto& e : graph.edges) {
    require(e[0] != e[1] || e[0] != center, "self-loop at the center");
    require(e[0] == center || e[1] == center,
            "edge not incident to the center");
    require(e[0] != e[1], "self-loop at an outlying vertex");
  }
  for (int v : outlying())
    require(graph.genus[v] >= 1, "outlying vertex of genus 0");
  for (const auto& [m, v] : graph.legs) {
    if (v == center) continue;
    const int w = sig.mu[m - 1];
    require(w >= 0 && w % sig.k == 0,
            "outlying marking weight must be nonnegative and divisible by k");
  }
}

namespace {

// Required twist total at an outlying vertex: sum of I(e) over its edges.
int outlying_twist_sum(const StableGraph& g, int v, const Signature& sig) {
  int deg = 0;
  for (const auto& e : g.edges) deg += (e[0] == v) + (e[1] == v);
  int mu_sum = 0;
  for (const auto& [m, w] : g.legs)
    if (w == v) mu_sum += sig.mu[m - 1];
  return sig.k * (2 * g.genus[v] - 2 + deg) - mu_sum;
}

bool admits_twist(const StarGraph& star, const Signature& sig) {
  for (int v : star.outlying()) {
    int deg = 0;
    for (const auto& e : star.graph.edges)
      deg += (e[0] == v) + (e[1] == v);
    const int s = outlying_twist_sum(star.graph, v, sig);
    if (s % sig.k != 0 || s < sig.k * deg) return false;
  }
  return true;
}

StarGraph canonical_star(const StarGraph& star) {
  TermData data;
  data.vertex_stride = 1;
  data.vertex.assign(star.graph.num_vertices(), 0);
  data.vertex[star.center] = 1;
  const CanonResult c = canonicalize(star.graph, data);
  StarGraph out;
  out.graph = apply_canonical(star.graph, c);
  out.center = c.vertex_perm[star.center];
  return out;
}

CanonicalKey star_key(const StarGraph& star) {
  TermData data;
  data.vertex_stride = 1;
  data.vertex.assign(star.graph.num_vertices(), 0);
  data.vertex[star.center] = 1;
  return canonicalize(star.graph, data).key;
}

}  // namespace

std::vector<StarGraph> star_graphs(int g, const Signature& sig) {
  sig.validate(g);
  // each edge accounts for one unit of genus: E = h1 + #outlying <= g
  std::map<CanonicalKey, StarGraph> found;
  for (const StableGraph& G : enumerate_stable_graphs(g, sig.n(), g)) {
    for (int center = 0; center < G.num_vertices(); ++center) {
      StarGraph star{G, center};
      try {
        star.validate(sig);
      } catch (const std::invalid_argument&) {
        continue;
      }
      if (!admits_twist(star, sig)) continue;
      StarGraph canon = canonical_star(star);
      found.emplace(star_key(canon), std::move(canon));
    }
  }
  std::vector<StarGraph> out;
  out.reserve(found.size());
  for (auto& [key, star] : found) out.push_back(std::move(star));
  return out;
}

std::vector<Twist> twists(const StarGraph& star, const Signature& sig) {
  star.validate(sig);
  const StableGraph& G = star.graph;
  const int E = G.num_edges();

  // per outlying vertex: its edge indices and the forced twist total
  std::vector<Twist> result;
  std::vector<int> I(E, 0);
  std::vector<std::pair<std::vector<int>, int>> groups;  // (edges, total)
  for (int v : star.outlying()) {
    std::vector<int> edges;
    for (int e = 0; e < E; ++e)
      if (G.edges[e][0] == v || G.edges[e][1] == v) edges.push_back(e);
    const int s = outlying_twist_sum(G, v, sig);
    if (s % sig.k != 0 || s < sig.k * static_cast<int>(edges.size())) return {};
    groups.emplace_back(std::move(edges), s);
  }

  // compositions of each total into positive multiples of k, one per edge
  auto fill_group = [&](auto&& self, std::size_t gi, std::size_t ei,
                        int left) -> void {
    if (gi == groups.size()) {
      // the center equation is the sum of the outlying ones; check anyway
      int lhs = sig.k * (2 * G.genus[star.center] - 2);
      for (int e = 0; e < E; ++e) lhs += I[e] + sig.k;
      int rhs = 0;
      for (const auto& [m, v] : G.legs)
        if (v == star.center) rhs += sig.mu[m - 1];
      if (lhs != rhs) throw std::logic_error("center twist equation violated");
      result.push_back(Twist{I});
      return;
    }
    const auto& [edges, total] = groups[gi];
    if (ei + 1 == edges.size()) {
      if (left >= sig.k && left % sig.k == 0) {
        I[edges[ei]] = left;
        self(self, gi + 1, 0,
             gi + 1 < groups.size() ? groups[gi + 1].second : 0);
        I[edges[ei]] = 0;
      }
      return;
    }
    for (int val = sig.k;
         left - val >= sig.k * static_cast<int>(edges.size() - ei - 1);
         val += sig.k) {
      I[edges[ei]] = val;
      self(self, gi, ei + 1, left - val);
      I[edges[ei]] = 0;
    }
  };
  if (groups.empty()) {
    result.push_back(Twist{I});  // trivial graph: the empty twist
  } else {
    fill_group(fill_group, 0, 0, groups[0].second);
  }
  return result;
}

Rat twisted_coefficient(const StarGraph& star, const Twist& tw,
                        const Signature& sig) {
  require(static_cast<int>(tw.I.size()) == star.graph.num_edges(),
          "twist has wrong arity");
  Int num = 1;
  for (int i : tw.I) {
    require(i >= sig.k && i % sig.k == 0,
            "twists are positive multiples of k");
    num *= i;
  }
  const Int den = Int(static_cast<long>(automorphism_count(star.graph))) *
                  int_pow(Int(sig.k), star.num_outlying());
  return make_frac(num, den);
}

SymbolicClass contribution(const StarGraph& star, const Twist& tw,
                           const Signature& sig) {
  star.validate(sig);
  const StableGraph& G = star.graph;
  const int g = G.total_genus();

  LabeledTerm term{G, Decoration::trivial(G), VertexLabels::fundamental(G)};
  for (int v = 0; v < G.num_vertices(); ++v) {
    const bool is_center = v == star.center;
    term.labels.vert[v] = {true, OpaqueKind::Hbar, is_center ? sig.k : 1};
    for (const Slot& s : vertex_slots(G, v)) {
      int entry;
      if (s.is_leg) {
        const int m = sig.mu[G.legs[s.leg_index].first - 1];
        if (is_center) {
          entry = m;
        } else {
          require(m % sig.k == 0, "outlying weight not divisible by k");
          entry = m / sig.k;
        }
        term.labels.leg_entry[s.leg_index] = entry;
      } else {
        const int I = tw.I[s.edge_index];
        if (is_center) {
          entry = -I - sig.k;
        } else {
          require((I - sig.k) % sig.k == 0, "twist not divisible by k");
          entry = (I - sig.k) / sig.k;
        }
        term.labels.edge_entry[s.edge_index][s.end] = entry;
      }
    }
  }

  SymbolicClass out(g, sig.n());
  out.add_term(term, twisted_coefficient(star, tw, sig));
  // Total declared codimension is g, with one exception: the trivial graph
  // of a signature k*mu' with mu' nonnegative declares g-1 (the open locus
  // then has a component of dimension 2g-2+n).
  const int expect = (G.num_edges() == 0 && sig.is_k_times_nonnegative())
                         ? g - 1
                         : g;
  if (const auto codim = out.homogeneous_codim(); !codim || *codim != expect)
    throw std::logic_error("contribution has the wrong declared codimension");
  return out;
}

SymbolicClass weighted_class_H(int g, const Signature& sig,
                               const ClassRegistry& reg) {
  sig.validate(g);
  SymbolicClass sum(g, sig.n());
  for (const StarGraph& star : star_graphs(g, sig))
    for (const Twist& tw : twists(star, sig)) sum += contribution(star, tw, sig);
  return expand(sum, reg);
}

SymbolicClass nontrivial_contribution_sum(int g, const Signature& sig,
                                          const ClassRegistry& reg) {
  sig.validate(g);
  SymbolicClass sum(g, sig.n());
  for (const StarGraph& star : star_graphs(g, sig)) {
    if (star.graph.num_vertices() == 1) continue;
    for (const Twist& tw : twists(star, sig)) sum += contribution(star, tw, sig);
  }
  return expand(sum, reg);
}

namespace {

SymbolicClass half_pixton(int g, const Signature& sig) {
  const PixtonInput in = make_pixton_input(g, sig.k, sig.mu, g);
  TautClass p = pixton_class(in);
  p *= make_frac(1, int_pow(Int(2), g));
  return to_symbolic(p);
}

}  // namespace

SymbolicClass virtual_class(int g, const std::vector<int>& mu_prime,
                            const ClassRegistry& reg) {
  require(g >= 1, "no virtual class in genus 0");
  Signature s1{1, mu_prime};
  s1.validate(g);
  require(s1.is_holomorphic(), "mu' must be nonnegative");
  SymbolicClass out = half_pixton(g, s1);
  out -= nontrivial_contribution_sum(g, s1, reg);
  return out;
}

SymbolicClass conjecture_gap(int g, const Signature& sig, ConjectureMode mode,
                             const ClassRegistry& reg) {
  sig.validate(g);
  if (mode == ConjectureMode::A) {
    require(!sig.is_k_times_nonnegative(),
            "mode A needs mu not of the form k times a nonnegative partition");
    SymbolicClass gap = half_pixton(g, sig);
    gap -= weighted_class_H(g, sig, reg);
    return gap;
  }
  require(sig.is_k_times_nonnegative(),
          "mode A' needs mu = k mu' with mu' nonnegative");
  std::vector<int> mu_prime(sig.mu.size());
  for (std::size_t i = 0; i < sig.mu.size(); ++i)
    mu_prime[i] = sig.mu[i] / sig.k;

  SymbolicClass gap = half_pixton(g, sig);
  gap -= virtual_class(g, mu_prime, reg);
  {
    const StableGraph triv = trivial_graph(g, sig.n());
    LabeledTerm prime{triv, Decoration::trivial(triv),
                      VertexLabels::fundamental(triv)};
    prime.labels.vert[0] = {true, OpaqueKind::HbarPrime, sig.k};
    for (int i = 0; i < triv.num_legs(); ++i)
      prime.labels.leg_entry[i] = sig.mu[triv.legs[i].first - 1];
    SymbolicClass prime_cls(g, sig.n());
    prime_cls.add_term(prime, Rat(1));
    gap -= expand(prime_cls, reg);
  }
  gap -= nontrivial_contribution_sum(g, sig, reg);
  return gap;
}

namespace {

SymbolicClass opaque_h_term(int g, const Signature& sig) {
  const StableGraph triv = trivial_graph(g, sig.n());
  LabeledTerm term{triv, Decoration::trivial(triv),
                   VertexLabels::fundamental(triv)};
  term.labels.vert[0] = {true, OpaqueKind::Hbar, sig.k};
  for (int i = 0; i < triv.num_legs(); ++i)
    term.labels.leg_entry[i] = sig.mu[triv.legs[i].first - 1];
  SymbolicClass out(g, sig.n());
  out.add_term(term, Rat(1));
  return out;
}

// Recursively replaces center classes of lower genus inside one expanded
// contribution. Expansion through the registry happens afterwards so the
// recursion sees the constructed k, not the genus-1 normalized one.
SymbolicClass recurse_opaques(const SymbolicClass& cls,
                              const ClassRegistry& reg, int depth) {
  SymbolicClass out(cls.genus(), cls.markings());
  for (const auto& [key, tv] : cls.terms()) {
    LabeledTerm term = tv.first;
    std::map<int, SymbolicClass> subs;
    for (int v = 0; v < term.graph.num_vertices(); ++v) {
      if (!term.labels.vert[v].opaque) continue;
      if (term.labels.vert[v].kind != OpaqueKind::Hbar) continue;
      const OpaqueGen gen = term.opaque_at(v);
      if (gen.g < 1) continue;
      Signature inner{gen.k, gen.sig};
      if (inner.is_k_times_nonnegative()) continue;  // not mode-A admissible
      subs[v] = recursion_expand(gen.g, inner, reg, depth - 1);
      for (const Slot& s : vertex_slots(term.graph, v)) {
        if (s.is_leg)
          term.labels.leg_entry[s.leg_index] = 0;
        else
          term.labels.edge_entry[s.edge_index][s.end] = 0;
      }
      term.labels.vert[v] = VertexLabels::Vert{};
    }
    if (subs.empty())
      out.add_term(term, tv.second);
    else
      out += splice(term, tv.second, subs);
  }
  return out;
}

}  // namespace

SymbolicClass recursion_expand(int g, const Signature& sig,
                               const ClassRegistry& reg, int depth) {
  sig.validate(g);
  require(!sig.is_k_times_nonnegative(),
          "recursion applies to mu not of the form k times a nonnegative "
          "partition");
  if (depth <= 0) return opaque_h_term(g, sig);

  SymbolicClass out = half_pixton(g, sig);
  for (const StarGraph& star : star_graphs(g, sig)) {
    if (star.graph.num_vertices() == 1) continue;
    for (const Twist& tw : twists(star, sig)) {
      SymbolicClass c = contribution(star, tw, sig);
      c = recurse_opaques(c, reg, depth);
      out -= expand(c, reg);
    }
  }
  return out;
}

}  // namespace tauttwist

// Acceptance suite: runs every criterion at its stated tolerance (all
// checks are exact) and prints one pass/fail line per criterion.

#include <algorithm>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <vector>

#include "tauttwist/genus1_relations.hpp"
#include "tauttwist/json_io.hpp"
#include "tauttwist/pixton.hpp"
#include "tauttwist/registry.hpp"
#include "tauttwist/twist_loci.hpp"

using namespace tauttwist;

namespace {

struct Check {
  std::string name;
  std::function<void()> body;
};

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::runtime_error(msg);
}

const std::vector<std::vector<int>> kGenus1Battery{
    {1, -1}, {0, 0}, {2, -1, -1}, {3, -1, -2}};

// ---- criterion 1 -------------------------------------------------------

void criterion1() {
  for (const auto& mu : kGenus1Battery) {
    const int n = static_cast<int>(mu.size());
    for (int k : {1, 2, 3}) {
      const TautClass p = pixton_class(make_pixton_input(1, k, mu, 1));
      const StableGraph triv = trivial_graph(1, n);
      Decoration kap = Decoration::trivial(triv);
      kap.kappa1[0] = 1;
      require(p.coefficient(triv, kap) == Rat(-k) * k,
              "kappa_1 coefficient != -k^2");
      std::size_t nonzero = p.coefficient(triv, kap) != 0 ? 1 : 0;
      for (int i = 0; i < n; ++i) {
        Decoration psi = Decoration::trivial(triv);
        psi.leg_psi[i] = 1;
        const Rat expect = Rat(mu[i] + k) * (mu[i] + k);
        require(p.coefficient(triv, psi) == expect,
                "psi coefficient != (m_i+k)^2");
        if (expect != 0) ++nonzero;
      }
      const StableGraph irr = nonsep_stratum_graph(n);
      require(p.coefficient(irr, Decoration::trivial(irr)) ==
                  make_frac(-1, 12),
              "nonseparating stratum coefficient != -1/12");
      ++nonzero;
      for (const auto& I : genus1_subsets(n)) {
        int mI = 0;
        for (int i : I) mI += mu[i - 1];
        const StableGraph sep = sep_stratum_graph(n, I);
        const Rat expect = Rat(-(k - mI)) * (k - mI);
        require(p.coefficient(sep, Decoration::trivial(sep)) == expect,
                "separating coefficient != -(k - m_I)^2");
        if (expect != 0) ++nonzero;
      }
      require(p.size() == nonzero, "unexpected extra terms in P");
    }
  }
}

// ---- criterion 2 -------------------------------------------------------

void criterion2() {
  for (const auto& mu : kGenus1Battery) {
    const int n = static_cast<int>(mu.size());
    for (int k : {1, 2, 3}) {
      const PixtonInput in = make_pixton_input(1, k, mu, 1);
      const RSamplePlan plan = RSamplePlan::defaults(in);
      InterpolationReport rep;
      (void)pixton_class(in, plan, &rep);
      for (const auto& c : rep.coefficients) {
        require(c.polynomial.size() <= 3,
                "interpolated coefficient has degree > 2");
        for (const auto& res : c.guard_residuals)
          require(res == 0, "guard point off the fitted polynomial");
      }
      const StableGraph irr = nonsep_stratum_graph(n);
      for (int r : plan.samples) {
        PixtonInput at = in;
        at.r = r;
        const Rat got = pixton_class_at_r(at).coefficient(
            irr, Decoration::trivial(irr));
        require(got == make_frac(Int(r) * r - 1, 12),
                "per-r nonseparating coefficient != (r^2-1)/12");
      }
    }
  }
}

// ---- criterion 3 -------------------------------------------------------

void criterion3() {
  for (const auto& mu : kGenus1Battery) {
    const VerificationReport rep = verify_genus1(mu, {1, 2, 3});
    if (!rep.all_pass()) {
      std::ostringstream os;
      os << "verify_genus1 failed:\n" << report_to_text(rep);
      throw std::runtime_error(os.str());
    }
  }
}

// ---- criterion 4 -------------------------------------------------------

std::vector<std::pair<int, std::vector<int>>> random_genus0(int count) {
  std::mt19937 rng(424242);
  std::uniform_int_distribution<int> pick_n(3, 5), pick_k(1, 4),
      entry(-3, 2);
  std::vector<std::pair<int, std::vector<int>>> out;
  while (static_cast<int>(out.size()) < count) {
    const int n = pick_n(rng), k = pick_k(rng);
    std::vector<int> mu(n);
    int sum = 0;
    for (int i = 0; i + 1 < n; ++i) {
      mu[i] = entry(rng);
      sum += mu[i];
    }
    mu[n - 1] = -2 * k - sum;
    out.emplace_back(k, mu);
  }
  return out;
}

void criterion4() {
  for (const auto& [k, mu] : random_genus0(10)) {
    const SymbolicClass gap =
        conjecture_gap(0, Signature{k, mu}, ConjectureMode::A);
    require(gap.empty(), "genus-0 conjecture gap is not identically zero");
  }
}

// ---- criterion 5 -------------------------------------------------------

void criterion5() {
  for (int n : {1, 2, 3}) {
    for (int k : {2, 3}) {
      const std::vector<int> mu(n, 0);
      const SymbolicClass gap =
          conjecture_gap(1, Signature{k, mu}, ConjectureMode::APrime);
      const auto taut = to_tautological(gap);
      require(taut.has_value(), "A' gap kept opaque labels at genus 1");
      require(reduce_genus1(*taut).is_zero(),
              "A' gap does not reduce to the zero vector");
    }
  }
}

// ---- criterion 6 -------------------------------------------------------

void criterion6() {
  const Signature sig{2, {3, 1}};
  const auto stars = star_graphs(2, sig);
  require(stars.size() == 5, "expected the trivial graph plus four rows");

  struct Row {
    int center_genus;
    std::vector<int> outlying;  // sorted genera
    std::vector<int> twist;     // sorted
    Rat coeff;
  };
  const std::vector<Row> expected{
      {1, {1}, {2}, Rat(1)},
      {0, {2}, {6}, Rat(3)},
      {0, {1, 1}, {2, 2}, make_frac(1, 2)},
      {0, {1}, {2, 2}, Rat(1)},
  };
  int matched = 0;
  for (const auto& star : stars) {
    if (star.graph.num_vertices() == 1) {
      const auto tws = twists(star, sig);
      require(tws.size() == 1 && tws[0].I.empty(),
              "trivial graph must carry the empty twist");
      continue;
    }
    std::vector<int> outg;
    for (int v : star.outlying()) outg.push_back(star.graph.genus[v]);
    std::sort(outg.begin(), outg.end());
    const auto tws = twists(star, sig);
    require(tws.size() == 1, "each table row has a unique twist");
    std::vector<int> tw = tws[0].I;
    std::sort(tw.begin(), tw.end());
    const Rat coeff = twisted_coefficient(star, tws[0], sig);
    bool found = false;
    for (const auto& row : expected)
      if (row.center_genus == star.graph.genus[star.center] &&
          row.outlying == outg && row.twist == tw && row.coeff == coeff)
        found = true;
    require(found, "star graph does not match any table row");
    ++matched;
  }
  require(matched == 4, "wrong number of nontrivial rows");

  ClassRegistry reg;
  reg.add({OpaqueGen{OpaqueKind::Hbar, 2, 2, {3, 1}}, TautClass(2, 2),
           "declared empty"});
  const SymbolicClass h = weighted_class_H(2, sig, reg);
  require(h.size() == 4, "weighted class must have exactly the four terms");
  SymbolicClass sum(2, 2);
  for (const auto& star : stars) {
    if (star.graph.num_vertices() == 1) continue;
    for (const auto& tw : twists(star, sig)) sum += contribution(star, tw, sig);
  }
  require(h == expand(sum, reg),
          "weighted class differs from the expanded table contributions");
}

// ---- criterion 7 -------------------------------------------------------

void criterion7() {
  std::vector<std::pair<int, Signature>> cases;
  for (const auto& mu : kGenus1Battery)
    for (int k : {1, 2, 3}) cases.push_back({1, Signature{k, mu}});
  for (const auto& [k, mu] : random_genus0(10))
    cases.push_back({0, Signature{k, mu}});
  for (int n : {1, 2, 3})
    for (int k : {2, 3}) cases.push_back({1, Signature{k, std::vector<int>(n, 0)}});
  cases.push_back({2, Signature{2, {3, 1}}});
  {
    std::mt19937 rng(31337);
    std::uniform_int_distribution<int> pick_n(1, 4), pick_k(1, 3),
        entry(-3, 4);
    for (int i = 0; i < 20; ++i) {
      const int n = pick_n(rng), k = pick_k(rng);
      std::vector<int> mu(n);
      int sum = 0;
      for (int j = 0; j + 1 < n; ++j) {
        mu[j] = entry(rng);
        sum += mu[j];
      }
      mu[n - 1] = 2 * k - sum;
      cases.push_back({2, Signature{k, mu}});
    }
  }
  for (const auto& [g, sig] : cases) {
    const SymbolicClass h = weighted_class_H(g, sig);
    int exceptional = 0;
    for (const auto& [key, tv] : h.terms()) {
      const int c = tv.first.codim();
      if (c == g) continue;
      // for mu = k*mu' with mu' nonnegative the trivial-graph term is the
      // dimension theorem's codimension-(g-1) component
      const bool allowed = c == g - 1 && sig.is_k_times_nonnegative() &&
                           tv.first.graph.num_edges() == 0 && ++exceptional == 1;
      require(allowed, "weighted-class term with declared codimension != g");
    }
  }
}

// ---- criterion 8 -------------------------------------------------------

long long automorphisms_bruteforce(const StableGraph& g) {
  const int H = 2 * g.num_edges();
  std::vector<int> vertex_of(H);
  for (int e = 0; e < g.num_edges(); ++e) {
    vertex_of[2 * e] = g.edges[e][0];
    vertex_of[2 * e + 1] = g.edges[e][1];
  }
  std::vector<int> sigma(H);
  std::iota(sigma.begin(), sigma.end(), 0);
  long long count = 0;
  do {
    bool ok = true;
    for (int h = 0; h < H && ok; ++h)
      if (sigma[h ^ 1] != (sigma[h] ^ 1)) ok = false;
    if (!ok) continue;
    std::vector<int> pi(g.num_vertices(), -1);
    for (int h = 0; h < H && ok; ++h) {
      const int v = vertex_of[h], w = vertex_of[sigma[h]];
      if (pi[v] == -1)
        pi[v] = w;
      else if (pi[v] != w)
        ok = false;
    }
    if (!ok) continue;
    if (g.num_vertices() == 1) pi[0] = 0;
    std::vector<int> seen(g.num_vertices(), 0);
    for (int v = 0; v < g.num_vertices() && ok; ++v) {
      if (pi[v] == -1)
        ok = false;
      else if (seen[pi[v]]++)
        ok = false;
      else if (g.genus[pi[v]] != g.genus[v])
        ok = false;
    }
    for (const auto& [m, v] : g.legs)
      if (ok && pi[v] != v) ok = false;
    if (ok) ++count;
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return count;
}

void criterion8() {
  // canonicalization invariance under 10^3 random relabelings
  {
    std::mt19937 rng(90125);
    StableGraph base;
    base.genus = {0, 1, 1};
    base.legs = {{1, 0}, {2, 0}};
    base.edges = {{0, 1}, {0, 2}, {1, 1}};
    base.validate();
    const CanonicalKey key = canonical_form(base).first;
    for (int trial = 0; trial < 1000; ++trial) {
      std::vector<int> perm(base.num_vertices());
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      StableGraph shuffled;
      shuffled.genus.resize(base.num_vertices());
      for (int v = 0; v < base.num_vertices(); ++v)
        shuffled.genus[perm[v]] = base.genus[v];
      for (const auto& [m, v] : base.legs)
        shuffled.legs.emplace_back(m, perm[v]);
      std::sort(shuffled.legs.begin(), shuffled.legs.end());
      for (const auto& e : base.edges) {
        std::array<int, 2> ne{perm[e[0]], perm[e[1]]};
        if (rng() % 2) std::swap(ne[0], ne[1]);
        shuffled.edges.push_back(ne);
      }
      std::shuffle(shuffled.edges.begin(), shuffled.edges.end(), rng);
      require(canonical_form(shuffled).first == key,
              "canonical key changed under relabeling");
    }
  }
  // automorphism counts against brute force on all graphs with <= 4 vertices
  for (const auto& [g, n] :
       std::vector<std::pair<int, int>>{{1, 1}, {1, 2}, {2, 1}, {2, 2}, {0, 4}}) {
    for (const auto& graph : enumerate_stable_graphs(g, n, 2)) {
      if (graph.num_vertices() > 4) continue;
      require(automorphism_count(graph) == automorphisms_bruteforce(graph),
              "automorphism count disagrees with brute force");
    }
  }
  // weighting counts equal r^{h1}
  {
    PixtonInput in = make_pixton_input(2, 2, {3, 1}, 2);
    for (int r : {3, 5, 8}) {
      in.r = r;
      for (const auto& graph : enumerate_stable_graphs(2, 2, 2)) {
        long long expect = 1;
        for (int i = 0; i < graph.h1(); ++i) expect *= r;
        require(static_cast<long long>(
                    enumerate_weightings(graph, in).size()) == expect,
                "weighting count != r^{h1}");
      }
    }
  }
  // registry round trip identity
  {
    const ClassRegistry reg = ClassRegistry::load_file(
        std::string(TAUTTWIST_DATA_DIR) + "/registry_genus2.json");
    const std::string tmp = "acceptance_registry_roundtrip.json";
    reg.save_file(tmp);
    const ClassRegistry back = ClassRegistry::load_file(tmp);
    std::remove(tmp.c_str());
    require(dump(registry_to_json(back)) == dump(registry_to_json(reg)),
            "registry round trip is not the identity");
  }
}

// ---- criterion 9 -------------------------------------------------------

void criterion9() {
  Rat constant;
  bool first = true;
  for (const auto& mu : kGenus1Battery) {
    for (int k : {1, 2, 3}) {
      const DeltaIrrProbe probe = delta_irr_probe(mu, k);
      require(probe.internally_consistent,
              "pinned normal form and full reduction disagree");
      if (first) {
        constant = probe.pinned_form_delta_irr;
        first = false;
      }
      require(probe.pinned_form_delta_irr == constant,
              "pinned-form delta_irr constant depends on (mu, k)");
    }
  }
  std::cout << "    note: with delta_irr = (1/2) * (nonseparating stratum), "
               "the relations give delta_irr coefficient "
            << rat_str(constant) << " (the candidate constants were -1/12 "
            << "and -1/6); the stratum coefficient itself is "
            << rat_str(delta_irr_probe({1, -1}, 1).stratum_coefficient)
            << "\n";
}

}  // namespace

int main() {
  const std::vector<Check> checks{
      {"criterion 1: genus-1 Pixton anchor (exact closed form)", criterion1},
      {"criterion 2: interpolation soundness and (r^2-1)/12 oracle",
       criterion2},
      {"criterion 3: genus-1 k-independence battery", criterion3},
      {"criterion 4: genus-0 gap vanishes on 10 random signatures",
       criterion4},
      {"criterion 5: A' cancellation at genus 1", criterion5},
      {"criterion 6: genus-2 golden table for (2, (3,1))", criterion6},
      {"criterion 7: codimension invariant incl. 20 random genus-2 cases",
       criterion7},
      {"criterion 8: canonicalization/automorphism/weighting/registry "
       "properties",
       criterion8},
      {"criterion 9: delta_irr probe, internal consistency only", criterion9},
  };
  int failures = 0;
  for (const auto& check : checks) {
    try {
      check.body();
      std::cout << "PASS " << check.name << "\n";
    } catch (const std::exception& e) {
      ++failures;
      std::cout << "FAIL " << check.name << "\n     " << e.what() << "\n";
    }
  }
  if (failures) {
    std::cout << failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all acceptance criteria passed\n";
  return 0;
}

#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "tauttwist/genus1_relations.hpp"
#include "tauttwist/json_io.hpp"
#include "tauttwist/pixton.hpp"
#include "tauttwist/registry.hpp"
#include "tauttwist/taut_class.hpp"

using namespace tauttwist;

namespace {

SymbolicClass opaque_class(int g, OpaqueKind kind, int k,
                           const std::vector<int>& sig) {
  const int n = static_cast<int>(sig.size());
  const StableGraph triv = trivial_graph(g, n);
  LabeledTerm term{triv, Decoration::trivial(triv),
                   VertexLabels::fundamental(triv)};
  term.labels.vert[0] = {true, kind, k};
  for (int i = 0; i < n; ++i) term.labels.leg_entry[i] = sig[i];
  SymbolicClass out(g, n);
  out.add_term(term, Rat(1));
  return out;
}

}  // namespace

TEST_CASE("linear combinations cancel and merge exactly") {
  const TautClass x = psi_class(1, 2, 1);
  CHECK(linear_combine({{Rat(1), x}, {Rat(-1), x}}).empty());

  const TautClass d = stratum_class(nonsep_stratum_graph(2));
  const TautClass merged =
      linear_combine({{make_frac(1, 2), d}, {make_frac(1, 2), d}});
  CHECK(merged.size() == 1);
  CHECK(merged.coefficient(nonsep_stratum_graph(2),
                           Decoration::trivial(nonsep_stratum_graph(2))) ==
        Rat(1));
  CHECK_THROWS(linear_combine({{Rat(1), x}, {Rat(1), psi_class(1, 3, 1)}}));
}

TEST_CASE("half the k=1 class minus half the k=3 class") {
  // the nonseparating part is k-independent and cancels; the rest stays
  const std::vector<int> mu{1, -1};
  const TautClass p1 = pixton_class(make_pixton_input(1, 1, mu, 1));
  const TautClass p3 = pixton_class(make_pixton_input(1, 3, mu, 1));
  const TautClass diff =
      linear_combine({{make_frac(1, 2), p1}, {make_frac(-1, 2), p3}});
  CHECK_FALSE(diff.empty());
  for (const auto& [key, tv] : diff.terms()) {
    const bool trivial_graph_part = tv.first.graph.num_edges() == 0;
    const bool separating = tv.first.graph.num_edges() == 1 &&
                            tv.first.graph.num_vertices() == 2;
    CHECK((trivial_graph_part || separating));
  }
}

TEST_CASE("push_forward of fundamental classes is the bare stratum") {
  const StableGraph sep = sep_stratum_graph(2, {});
  const TautClass pf =
      push_forward(sep, {fundamental_class(1, 1), fundamental_class(0, 3)});
  CHECK(pf == stratum_class(sep));
}

TEST_CASE("push_forward through the trivial graph is the identity") {
  const TautClass x = kappa1_class(1, 2);
  CHECK(push_forward(trivial_graph(1, 2), {x}) == x);
}

TEST_CASE("push_forward transfers decorations to the right slots") {
  // psi at the node branch on the genus-1 side of the separating graph
  const StableGraph sep = sep_stratum_graph(2, {});
  const TautClass branch_psi = psi_class(1, 1, 1);  // slot 0 = the half-edge
  const TautClass pf = push_forward(sep, {branch_psi, fundamental_class(0, 3)});
  CHECK(pf.size() == 1);
  Decoration dec = Decoration::trivial(sep);
  dec.edge_psi[0] = {1, 0};  // end at the genus-1 vertex
  CHECK(pf.coefficient(sep, dec) == Rat(1));
  const auto deg = pf.homogeneous_degree();
  REQUIRE(deg.has_value());
  CHECK(*deg == 2);
}

TEST_CASE("push_forward composes boundary terms via insertion") {
  const StableGraph sep = sep_stratum_graph(2, {});
  const StableGraph loop = nonsep_stratum_graph(1);
  const TautClass pf =
      push_forward(sep, {stratum_class(loop), fundamental_class(0, 3)});
  const StableGraph direct = insert_graph_at_vertex(sep, 0, loop, {0});
  CHECK(pf == stratum_class(direct));
}

TEST_CASE("push_forward rejects classes on the wrong vertex space") {
  const StableGraph sep = sep_stratum_graph(2, {});
  CHECK_THROWS(
      push_forward(sep, {fundamental_class(1, 2), fundamental_class(0, 3)}));
  CHECK_THROWS(
      push_forward(sep, {fundamental_class(2, 1), fundamental_class(0, 3)}));
}

TEST_CASE("built-in expansions") {
  const ClassRegistry empty;
  SUBCASE("genus-0 center is the fundamental class") {
    const SymbolicClass e =
        expand(opaque_class(0, OpaqueKind::Hbar, 2, {3, 1, -8}), empty);
    CHECK(e == to_symbolic(fundamental_class(0, 3)));
  }
  SUBCASE("genus-1 classes are k-normalized") {
    const SymbolicClass e =
        expand(opaque_class(1, OpaqueKind::Hbar, 3, {1, -1}), empty);
    CHECK(e == expand(opaque_class(1, OpaqueKind::Hbar, 1, {1, -1}), empty));
    CHECK_FALSE(e.fully_fundamental());
  }
  SUBCASE("genus-1 zero signature is the fundamental class") {
    const SymbolicClass e =
        expand(opaque_class(1, OpaqueKind::Hbar, 2, {0, 0, 0}), empty);
    CHECK(e == to_symbolic(fundamental_class(1, 3)));
  }
  SUBCASE("genus-1 zero-signature prime locus is empty") {
    const SymbolicClass e =
        expand(opaque_class(1, OpaqueKind::HbarPrime, 2, {0, 0}), empty);
    CHECK(e.empty());
  }
  SUBCASE("expansion is idempotent") {
    const SymbolicClass once =
        expand(opaque_class(1, OpaqueKind::Hbar, 3, {2, -2}), empty);
    CHECK(expand(once, empty) == once);
  }
}

TEST_CASE("registry expansion splices into the ambient graph") {
  ClassRegistry reg;
  // a made-up degree-1 expansion for Hbar(2,1,(2)) with the right shape
  TautClass w(2, 1);
  w += Rat(3) * psi_class(2, 1, 1);
  w -= make_frac(1, 12) * kappa1_class(2, 1);
  reg.add({OpaqueGen{OpaqueKind::Hbar, 2, 1, {2}}, w, "test entry"});

  // graph: center g0 with both legs, one edge to a g2 vertex
  StableGraph g;
  g.genus = {0, 2};
  g.legs = {{1, 0}, {2, 0}};
  g.edges = {{0, 1}};
  g.validate();
  LabeledTerm term{g, Decoration::trivial(g), VertexLabels::fundamental(g)};
  term.labels.vert[1] = {true, OpaqueKind::Hbar, 1};
  term.labels.edge_entry[0][1] = 2;
  SymbolicClass cls(2, 2);
  cls.add_term(term, Rat(1));

  const SymbolicClass e = expand(cls, reg);
  CHECK(e.fully_fundamental());
  const auto t = to_tautological(e);
  REQUIRE(t.has_value());
  CHECK(t->size() == 2);
  // psi_1 on the vertex space lands on the half-edge end
  Decoration dec = Decoration::trivial(g);
  dec.edge_psi[0] = {0, 1};
  CHECK(t->coefficient(g, dec) == Rat(3));
  Decoration kap = Decoration::trivial(g);
  kap.kappa1[1] = 1;
  CHECK(t->coefficient(g, kap) == make_frac(-1, 12));
  // expansion through an empty-marked registry entry kills the term
  ClassRegistry empty_locus;
  empty_locus.add({OpaqueGen{OpaqueKind::Hbar, 2, 1, {2}}, TautClass(2, 1),
                   "declared empty"});
  CHECK(expand(cls, empty_locus).empty());
}

TEST_CASE("registry rejects malformed entries") {
  TautClass wrong_degree(2, 1);
  wrong_degree += psi_class(2, 1, 1);
  Decoration d2 = Decoration::trivial(trivial_graph(2, 1));
  d2.leg_psi[0] = 2;
  wrong_degree.add_term(trivial_graph(2, 1), d2, Rat(1));
  ClassRegistry reg;
  // mixed degrees are rejected outright
  CHECK_THROWS(reg.add(
      {OpaqueGen{OpaqueKind::Hbar, 2, 1, {2}}, wrong_degree, "bad"}));
  // declared codim of Hbar(2,1,(2)) is 1, a degree-2 expansion mismatches
  TautClass deg2(2, 1);
  deg2.add_term(trivial_graph(2, 1), d2, Rat(1));
  CHECK_THROWS(
      reg.add({OpaqueGen{OpaqueKind::Hbar, 2, 1, {2}}, deg2, "bad"}));
  // wrong ambient space
  CHECK_THROWS(reg.add(
      {OpaqueGen{OpaqueKind::Hbar, 2, 1, {2}}, psi_class(2, 2, 1), "bad"}));
}

TEST_CASE("registry lookup matches signatures up to marking permutation") {
  ClassRegistry reg;
  reg.add({OpaqueGen{OpaqueKind::Hbar, 2, 1, {2, 0}},
           Rat(5) * psi_class(2, 2, 1), "test"});
  const auto m = reg.lookup(OpaqueGen{OpaqueKind::Hbar, 2, 1, {0, 2}});
  REQUIRE(m.has_value());
  CHECK(m->perm == std::vector<int>{1, 0});
  CHECK_FALSE(reg.lookup(OpaqueGen{OpaqueKind::Hbar, 2, 1, {2, 2}}).has_value());
  CHECK_FALSE(
      reg.lookup(OpaqueGen{OpaqueKind::HbarPrime, 2, 1, {2, 0}}).has_value());
}

TEST_CASE("registry file round trip") {
  ClassRegistry reg;
  reg.add({OpaqueGen{OpaqueKind::Hbar, 2, 2, {3, 1}}, TautClass(2, 2),
           "declared empty"});
  TautClass w(2, 1);
  w += Rat(3) * psi_class(2, 1, 1);
  reg.add({OpaqueGen{OpaqueKind::Hbar, 2, 1, {2}}, w, "divisor data"});

  const std::string path = "registry_roundtrip_test.json";
  reg.save_file(path);
  const ClassRegistry loaded = ClassRegistry::load_file(path);
  CHECK(dump(registry_to_json(loaded)) == dump(registry_to_json(reg)));
  std::remove(path.c_str());
}

TEST_CASE("shipped registry file loads and validates") {
  const ClassRegistry reg =
      ClassRegistry::load_file(std::string(TAUTTWIST_DATA_DIR) +
                               "/registry_genus2.json");
  CHECK(reg.size() >= 2);
  CHECK(reg.lookup(OpaqueGen{OpaqueKind::Hbar, 2, 2, {3, 1}}).has_value());
  CHECK(reg.lookup(OpaqueGen{OpaqueKind::Hbar, 2, 1, {2}}).has_value());
}

TEST_CASE("class JSON round trip is the identity on canonical forms") {
  TautClass x(1, 2);
  x += Rat(4) * psi_class(1, 2, 1);
  x -= kappa1_class(1, 2);
  x += make_frac(-1, 12) * stratum_class(nonsep_stratum_graph(2));
  const Json j = class_to_json(x);
  CHECK(class_from_json(j) == x);
  CHECK(dump(class_to_json(class_from_json(j))) == dump(j));
}

TEST_CASE("symbolic class JSON keeps opaque labels") {
  const SymbolicClass s = opaque_class(1, OpaqueKind::Hbar, 2, {1, -1});
  const Json j = class_to_json(s);
  const SymbolicClass back = symbolic_class_from_json(j);
  CHECK(back == s);
  CHECK_THROWS(class_from_json(j));  // opaque labels are not tautological
}

TEST_CASE("graph JSON matches the wire schema") {
  const StableGraph sep = sep_stratum_graph(2, {});
  const Json j = graph_to_json(sep);
  CHECK(j.dump() ==
        R"({"vertices":[{"genus":1},{"genus":0}],"legs":[{"marking":1,"vertex":1},{"marking":2,"vertex":1}],"edges":[[{"vertex":0},{"vertex":1}]]})");
  CHECK(graph_from_json(j) == sep);
}

TEST_CASE("relabel_markings permutes legs with their decorations") {
  TautClass x(1, 2);
  x += Rat(7) * psi_class(1, 2, 1);
  const TautClass y = relabel_markings(x, {1, 0});
  CHECK(y == Rat(7) * psi_class(1, 2, 2));
}

TEST_CASE("homogeneity bookkeeping") {
  TautClass x(1, 2);
  x += psi_class(1, 2, 1);
  x += stratum_class(sep_stratum_graph(2, {}));
  const auto deg = x.homogeneous_degree();
  REQUIRE(deg.has_value());
  CHECK(*deg == 1);
  x += fundamental_class(1, 2);
  CHECK_FALSE(x.homogeneous_degree().has_value());
}

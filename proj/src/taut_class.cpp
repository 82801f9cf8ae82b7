#include "tauttwist/taut_class.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace tauttwist {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

std::string opaque_kind_name(OpaqueKind k) {
  switch (k) {
    case OpaqueKind::Hbar:
      return "Hbar";
    case OpaqueKind::HbarPrime:
      return "HbarPrime";
    case OpaqueKind::HbarVir:
      return "HbarVir";
  }
  throw std::logic_error("bad opaque kind");
}

OpaqueKind opaque_kind_parse(const std::string& s) {
  if (s == "Hbar") return OpaqueKind::Hbar;
  if (s == "HbarPrime") return OpaqueKind::HbarPrime;
  if (s == "HbarVir") return OpaqueKind::HbarVir;
  throw std::invalid_argument("unknown opaque kind: " + s);
}

bool OpaqueGen::holomorphic_k_divisible() const {
  for (int m : sig)
    if (m < 0 || m % k != 0) return false;
  return true;
}

int OpaqueGen::codim() const {
  if (k < 1) throw std::invalid_argument("opaque generator needs k >= 1");
  if (kind == OpaqueKind::Hbar) return holomorphic_k_divisible() ? g - 1 : g;
  return g;
}

std::string OpaqueGen::key_string() const {
  std::ostringstream os;
  os << opaque_kind_name(kind) << ":g" << g << ":k" << k << ":";
  for (size_t i = 0; i < sig.size(); ++i) {
    if (i) os << ",";
    os << sig[i];
  }
  return os.str();
}

Decoration Decoration::trivial(const StableGraph& g) {
  Decoration d;
  d.kappa1.assign(g.num_vertices(), 0);
  d.leg_psi.assign(g.num_legs(), 0);
  d.edge_psi.assign(g.num_edges(), {0, 0});
  return d;
}

int Decoration::total_exponent() const {
  int s = 0;
  for (int a : kappa1) s += a;
  for (int b : leg_psi) s += b;
  for (const auto& e : edge_psi) s += e[0] + e[1];
  return s;
}

void Decoration::validate(const StableGraph& g) const {
  require(static_cast<int>(kappa1.size()) == g.num_vertices() &&
              static_cast<int>(leg_psi.size()) == g.num_legs() &&
              static_cast<int>(edge_psi.size()) == g.num_edges(),
          "decoration shape mismatch");
  for (int a : kappa1) require(a >= 0, "negative kappa exponent");
  for (int b : leg_psi) require(b >= 0, "negative psi exponent");
  for (const auto& e : edge_psi)
    require(e[0] >= 0 && e[1] >= 0, "negative psi exponent");
}

VertexLabels VertexLabels::fundamental(const StableGraph& g) {
  VertexLabels l;
  l.vert.assign(g.num_vertices(), Vert{});
  l.leg_entry.assign(g.num_legs(), 0);
  l.edge_entry.assign(g.num_edges(), {0, 0});
  return l;
}

bool VertexLabels::all_fundamental() const {
  for (const auto& v : vert)
    if (v.opaque) return false;
  return true;
}

void VertexLabels::validate(const StableGraph& g) const {
  require(static_cast<int>(vert.size()) == g.num_vertices() &&
              static_cast<int>(leg_entry.size()) == g.num_legs() &&
              static_cast<int>(edge_entry.size()) == g.num_edges(),
          "label shape mismatch");
  for (const auto& v : vert)
    if (v.opaque) require(v.k >= 1, "opaque label needs k >= 1");
  // entries are only meaningful on slots of opaque vertices
  for (int i = 0; i < g.num_legs(); ++i)
    if (!vert[g.legs[i].second].opaque)
      require(leg_entry[i] == 0, "label entry on fundamental vertex");
  for (int e = 0; e < g.num_edges(); ++e)
    for (int end = 0; end < 2; ++end)
      if (!vert[g.edges[e][end]].opaque)
        require(edge_entry[e][end] == 0, "label entry on fundamental vertex");
}

OpaqueGen LabeledTerm::opaque_at(int v) const {
  require(labels.vert[v].opaque, "vertex is not opaque");
  OpaqueGen gen;
  gen.kind = labels.vert[v].kind;
  gen.g = graph.genus[v];
  gen.k = labels.vert[v].k;
  for (const Slot& s : vertex_slots(graph, v)) {
    gen.sig.push_back(s.is_leg ? labels.leg_entry[s.leg_index]
                               : labels.edge_entry[s.edge_index][s.end]);
  }
  return gen;
}

int LabeledTerm::codim() const {
  int c = graph.num_edges() + dec.total_exponent();
  for (int v = 0; v < graph.num_vertices(); ++v)
    if (labels.vert[v].opaque) c += opaque_at(v).codim();
  return c;
}

void LabeledTerm::validate() const {
  graph.validate();
  dec.validate(graph);
  labels.validate(graph);
}

namespace {

std::int64_t encode_vert_label(const VertexLabels::Vert& v) {
  if (!v.opaque) return 0;
  return 1 + static_cast<std::int64_t>(v.kind);
}

TermData term_data(const StableGraph& g, const Decoration& dec) {
  TermData d;
  d.vertex_stride = 1;
  d.leg_stride = 1;
  d.end_stride = 1;
  d.vertex.assign(dec.kappa1.begin(), dec.kappa1.end());
  d.leg.assign(dec.leg_psi.begin(), dec.leg_psi.end());
  d.end.resize(2 * g.num_edges());
  for (int e = 0; e < g.num_edges(); ++e) {
    d.end[2 * e + 0] = dec.edge_psi[e][0];
    d.end[2 * e + 1] = dec.edge_psi[e][1];
  }
  return d;
}

TermData term_data(const StableGraph& g, const Decoration& dec,
                   const VertexLabels& labels) {
  TermData d;
  d.vertex_stride = 3;
  d.leg_stride = 2;
  d.end_stride = 2;
  d.vertex.resize(3 * g.num_vertices());
  for (int v = 0; v < g.num_vertices(); ++v) {
    d.vertex[3 * v + 0] = dec.kappa1[v];
    d.vertex[3 * v + 1] = encode_vert_label(labels.vert[v]);
    d.vertex[3 * v + 2] = labels.vert[v].opaque ? labels.vert[v].k : 0;
  }
  d.leg.resize(2 * g.num_legs());
  for (int i = 0; i < g.num_legs(); ++i) {
    d.leg[2 * i + 0] = dec.leg_psi[i];
    d.leg[2 * i + 1] = labels.leg_entry[i];
  }
  d.end.resize(4 * g.num_edges());
  for (int e = 0; e < g.num_edges(); ++e)
    for (int end = 0; end < 2; ++end) {
      d.end[(2 * e + end) * 2 + 0] = dec.edge_psi[e][end];
      d.end[(2 * e + end) * 2 + 1] = labels.edge_entry[e][end];
    }
  return d;
}

Decoration apply_canonical(const StableGraph& g, const Decoration& dec,
                           const CanonResult& c) {
  Decoration out;
  out.kappa1.resize(g.num_vertices());
  for (int v = 0; v < g.num_vertices(); ++v)
    out.kappa1[c.vertex_perm[v]] = dec.kappa1[v];
  // legs keep their marking-sorted positions
  std::vector<std::pair<std::pair<int, int>, int>> legs;
  for (int i = 0; i < g.num_legs(); ++i)
    legs.push_back({{g.legs[i].first, c.vertex_perm[g.legs[i].second]},
                    dec.leg_psi[i]});
  std::sort(legs.begin(), legs.end());
  for (const auto& [lg, psi] : legs) out.leg_psi.push_back(psi);
  for (int p = 0; p < g.num_edges(); ++p) {
    const int e = c.edge_order[p];
    auto ends = dec.edge_psi[e];
    if (c.edge_flip[e]) std::swap(ends[0], ends[1]);
    out.edge_psi.push_back(ends);
  }
  return out;
}

VertexLabels apply_canonical(const StableGraph& g, const VertexLabels& labels,
                             const CanonResult& c) {
  VertexLabels out;
  out.vert.resize(g.num_vertices());
  for (int v = 0; v < g.num_vertices(); ++v)
    out.vert[c.vertex_perm[v]] = labels.vert[v];
  std::vector<std::pair<std::pair<int, int>, int>> legs;
  for (int i = 0; i < g.num_legs(); ++i)
    legs.push_back({{g.legs[i].first, c.vertex_perm[g.legs[i].second]},
                    labels.leg_entry[i]});
  std::sort(legs.begin(), legs.end());
  for (const auto& [lg, entry] : legs) out.leg_entry.push_back(entry);
  for (int p = 0; p < g.num_edges(); ++p) {
    const int e = c.edge_order[p];
    auto ends = labels.edge_entry[e];
    if (c.edge_flip[e]) std::swap(ends[0], ends[1]);
    out.edge_entry.push_back(ends);
  }
  return out;
}

}  // namespace

void TautClass::add_term(const StableGraph& graph, const Decoration& dec,
                         Rat coeff) {
  coeff.canonicalize();
  if (coeff == 0) return;
  graph.validate();
  dec.validate(graph);
  require(graph.total_genus() == g_ && graph.num_legs() == n_,
          "term does not live on the ambient space");
  const CanonResult c = canonicalize(graph, term_data(graph, dec));
  Term canon{tauttwist::apply_canonical(graph, c),
             apply_canonical(graph, dec, c)};
  auto it = terms_.find(c.key);
  if (it == terms_.end()) {
    terms_.emplace(c.key, std::make_pair(std::move(canon), std::move(coeff)));
  } else {
    it->second.second += coeff;
    it->second.second.canonicalize();
    if (it->second.second == 0) terms_.erase(it);
  }
}

Rat TautClass::coefficient(const StableGraph& graph,
                           const Decoration& dec) const {
  const CanonResult c = canonicalize(graph, term_data(graph, dec));
  auto it = terms_.find(c.key);
  return it == terms_.end() ? Rat(0) : it->second.second;
}

TautClass& TautClass::operator+=(const TautClass& o) {
  require(g_ == o.g_ && n_ == o.n_, "ambient space mismatch");
  for (const auto& [key, tv] : o.terms_) {
    auto it = terms_.find(key);
    if (it == terms_.end()) {
      terms_.emplace(key, tv);
    } else {
      it->second.second += tv.second;
      it->second.second.canonicalize();
      if (it->second.second == 0) terms_.erase(it);
    }
  }
  return *this;
}

TautClass& TautClass::operator-=(const TautClass& o) {
  TautClass neg = o;
  neg *= Rat(-1);
  return *this += neg;
}

TautClass& TautClass::operator*=(const Rat& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [key, tv] : terms_) {
    tv.second *= c;
    tv.second.canonicalize();
  }
  return *this;
}

bool TautClass::operator==(const TautClass& o) const {
  if (g_ != o.g_ || n_ != o.n_ || terms_.size() != o.terms_.size())
    return false;
  auto it = terms_.begin();
  auto jt = o.terms_.begin();
  for (; it != terms_.end(); ++it, ++jt)
    if (it->first != jt->first || it->second.second != jt->second.second)
      return false;
  return true;
}

std::optional<int> TautClass::homogeneous_degree() const {
  std::optional<int> deg;
  for (const auto& [key, tv] : terms_) {
    const int d = tv.first.graph.num_edges() + tv.first.dec.total_exponent();
    if (!deg)
      deg = d;
    else if (*deg != d)
      return std::nullopt;
  }
  return deg ? deg : std::optional<int>(0);
}

void SymbolicClass::add_term(const LabeledTerm& term, Rat coeff) {
  coeff.canonicalize();
  if (coeff == 0) return;
  term.validate();
  require(term.graph.total_genus() == g_ && term.graph.num_legs() == n_,
          "term does not live on the ambient space");
  const CanonResult c =
      canonicalize(term.graph, term_data(term.graph, term.dec, term.labels));
  LabeledTerm canon{tauttwist::apply_canonical(term.graph, c),
                    apply_canonical(term.graph, term.dec, c),
                    apply_canonical(term.graph, term.labels, c)};
  auto it = terms_.find(c.key);
  if (it == terms_.end()) {
    terms_.emplace(c.key, std::make_pair(std::move(canon), std::move(coeff)));
  } else {
    it->second.second += coeff;
    it->second.second.canonicalize();
    if (it->second.second == 0) terms_.erase(it);
  }
}

bool SymbolicClass::fully_fundamental() const {
  for (const auto& [key, tv] : terms_)
    if (!tv.first.labels.all_fundamental()) return false;
  return true;
}

SymbolicClass& SymbolicClass::operator+=(const SymbolicClass& o) {
  require(g_ == o.g_ && n_ == o.n_, "ambient space mismatch");
  for (const auto& [key, tv] : o.terms_) {
    auto it = terms_.find(key);
    if (it == terms_.end()) {
      terms_.emplace(key, tv);
    } else {
      it->second.second += tv.second;
      it->second.second.canonicalize();
      if (it->second.second == 0) terms_.erase(it);
    }
  }
  return *this;
}

SymbolicClass& SymbolicClass::operator-=(const SymbolicClass& o) {
  SymbolicClass neg = o;
  neg *= Rat(-1);
  return *this += neg;
}

SymbolicClass& SymbolicClass::operator*=(const Rat& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [key, tv] : terms_) {
    tv.second *= c;
    tv.second.canonicalize();
  }
  return *this;
}

bool SymbolicClass::operator==(const SymbolicClass& o) const {
  if (g_ != o.g_ || n_ != o.n_ || terms_.size() != o.terms_.size())
    return false;
  auto it = terms_.begin();
  auto jt = o.terms_.begin();
  for (; it != terms_.end(); ++it, ++jt)
    if (it->first != jt->first || it->second.second != jt->second.second)
      return false;
  return true;
}

std::optional<int> SymbolicClass::homogeneous_codim() const {
  std::optional<int> deg;
  for (const auto& [key, tv] : terms_) {
    const int d = tv.first.codim();
    if (!deg)
      deg = d;
    else if (*deg != d)
      return std::nullopt;
  }
  return deg ? deg : std::optional<int>(0);
}

TautClass fundamental_class(int g, int n) {
  TautClass out(g, n);
  const StableGraph triv = trivial_graph(g, n);
  out.add_term(triv, Decoration::trivial(triv), Rat(1));
  return out;
}

TautClass kappa1_class(int g, int n) {
  TautClass out(g, n);
  const StableGraph triv = trivial_graph(g, n);
  Decoration dec = Decoration::trivial(triv);
  dec.kappa1[0] = 1;
  out.add_term(triv, dec, Rat(1));
  return out;
}

TautClass psi_class(int g, int n, int marking) {
  require(marking >= 1 && marking <= n, "marking out of range");
  TautClass out(g, n);
  const StableGraph triv = trivial_graph(g, n);
  Decoration dec = Decoration::trivial(triv);
  dec.leg_psi[marking - 1] = 1;
  out.add_term(triv, dec, Rat(1));
  return out;
}

TautClass stratum_class(const StableGraph& gamma) {
  gamma.validate();
  TautClass out(gamma.total_genus(), gamma.num_legs());
  out.add_term(gamma, Decoration::trivial(gamma), Rat(1));
  return out;
}

TautClass linear_combine(const std::vector<std::pair<Rat, TautClass>>& parts) {
  require(!parts.empty(), "empty linear combination");
  TautClass out(parts.front().second.genus(), parts.front().second.markings());
  for (const auto& [c, cls] : parts) {
    require(cls.genus() == out.genus() && cls.markings() == out.markings(),
            "ambient space mismatch in linear combination");
    TautClass scaled = cls;
    scaled *= c;
    out += scaled;
  }
  return out;
}

SymbolicClass to_symbolic(const TautClass& t) {
  SymbolicClass out(t.genus(), t.markings());
  for (const auto& [key, tv] : t.terms()) {
    LabeledTerm term{tv.first.graph, tv.first.dec,
                     VertexLabels::fundamental(tv.first.graph)};
    out.add_term(term, tv.second);
  }
  return out;
}

std::optional<TautClass> to_tautological(const SymbolicClass& s) {
  if (!s.fully_fundamental()) return std::nullopt;
  TautClass out(s.genus(), s.markings());
  for (const auto& [key, tv] : s.terms())
    out.add_term(tv.first.graph, tv.first.dec, tv.second);
  return out;
}

TautClass relabel_markings(const TautClass& t,
                           const std::vector<int>& new_of_old) {
  require(static_cast<int>(new_of_old.size()) == t.markings(),
          "marking relabeling has wrong size");
  TautClass out(t.genus(), t.markings());
  for (const auto& [key, tv] : t.terms()) {
    StableGraph g = tv.first.graph;
    std::vector<std::pair<std::pair<int, int>, int>> legs;
    for (int i = 0; i < g.num_legs(); ++i)
      legs.push_back({{new_of_old[g.legs[i].first - 1] + 1,
                       g.legs[i].second},
                      tv.first.dec.leg_psi[i]});
    std::sort(legs.begin(), legs.end());
    Decoration dec = tv.first.dec;
    g.legs.clear();
    dec.leg_psi.clear();
    for (const auto& [lg, psi] : legs) {
      g.legs.push_back(lg);
      dec.leg_psi.push_back(psi);
    }
    out.add_term(g, dec, tv.second);
  }
  return out;
}

SymbolicClass splice(const LabeledTerm& ambient, const Rat& coeff,
                     const std::map<int, SymbolicClass>& subs) {
  ambient.validate();
  const StableGraph& G = ambient.graph;
  const int ag = G.total_genus();
  const int an = G.num_legs();
  SymbolicClass out(ag, an);
  if (coeff == 0) return out;

  for (const auto& [v, cls] : subs) {
    require(v >= 0 && v < G.num_vertices(), "splice vertex out of range");
    require(cls.genus() == G.genus[v] && cls.markings() == G.valence(v),
            "spliced class does not live on the vertex moduli space");
    require(ambient.dec.kappa1[v] == 0,
            "decorated vertex cannot be substituted");
  }
  if (subs.empty()) {
    out.add_term(ambient, coeff);
    return out;
  }

  // slot index (per substituted vertex) used by ambient legs/edges
  std::map<int, std::vector<Slot>> slots;
  for (const auto& [v, cls] : subs) slots[v] = vertex_slots(G, v);

  std::vector<int> sub_vertices;
  std::vector<std::vector<const std::pair<LabeledTerm, Rat>*>> choices;
  for (const auto& [v, cls] : subs) {
    sub_vertices.push_back(v);
    std::vector<const std::pair<LabeledTerm, Rat>*> list;
    for (const auto& [key, tv] : cls.terms()) list.push_back(&tv);
    if (list.empty()) return out;  // zero factor
    choices.push_back(std::move(list));
  }

  std::vector<std::size_t> pick(sub_vertices.size(), 0);
  const int V = G.num_vertices();
  while (true) {
    // assemble one composite term
    std::vector<int> base(V, -1);
    int next = 0;
    for (int w = 0; w < V; ++w)
      if (!subs.count(w)) base[w] = next++;
    std::map<int, int> inner_base;
    std::map<int, const LabeledTerm*> inner;
    Rat c = coeff;
    for (std::size_t i = 0; i < sub_vertices.size(); ++i) {
      const auto* tv = choices[i][pick[i]];
      inner[sub_vertices[i]] = &tv->first;
      c *= tv->second;
      inner_base[sub_vertices[i]] = next;
      next += tv->first.graph.num_vertices();
    }

    LabeledTerm comp;
    comp.graph.genus.resize(next);
    comp.dec.kappa1.resize(next);
    comp.labels.vert.resize(next);
    for (int w = 0; w < V; ++w) {
      if (subs.count(w)) continue;
      comp.graph.genus[base[w]] = G.genus[w];
      comp.dec.kappa1[base[w]] = ambient.dec.kappa1[w];
      comp.labels.vert[base[w]] = ambient.labels.vert[w];
    }
    for (const auto& [v, t] : inner) {
      for (int u = 0; u < t->graph.num_vertices(); ++u) {
        comp.graph.genus[inner_base[v] + u] = t->graph.genus[u];
        comp.dec.kappa1[inner_base[v] + u] = t->dec.kappa1[u];
        comp.labels.vert[inner_base[v] + u] = t->labels.vert[u];
      }
    }

    // slot s of substituted v attaches to inner marking s+1
    struct Attach {
      int vertex;
      int psi;
      int entry;
    };
    std::map<int, std::vector<Attach>> attach;
    for (const auto& [v, t] : inner) {
      const int nslots = G.valence(v);
      require(t->graph.num_legs() == nslots, "inner arity mismatch");
      std::vector<Attach> a(nslots);
      for (int j = 0; j < nslots; ++j) {
        require(t->graph.legs[j].first == j + 1, "inner markings not 1..n");
        a[j] = {inner_base[v] + t->graph.legs[j].second, t->dec.leg_psi[j],
                t->labels.leg_entry[j]};
      }
      attach[v] = std::move(a);
    }

    struct PendingLeg {
      std::pair<int, int> leg;
      int psi;
      int entry;
    };
    std::vector<PendingLeg> legs;
    for (int i = 0; i < G.num_legs(); ++i) {
      const auto& [m, w] = G.legs[i];
      if (!subs.count(w)) {
        legs.push_back({{m, base[w]}, ambient.dec.leg_psi[i],
                        ambient.labels.leg_entry[i]});
      } else {
        require(ambient.dec.leg_psi[i] == 0 &&
                    ambient.labels.leg_entry[i] == 0,
                "decorated slot cannot be substituted");
        const int s = slot_index_of_leg(G, i);
        const Attach& a = attach[w][s];
        legs.push_back({{m, a.vertex}, a.psi, a.entry});
      }
    }
    std::sort(legs.begin(), legs.end(),
              [](const PendingLeg& x, const PendingLeg& y) {
                return x.leg < y.leg;
              });
    for (const auto& l : legs) {
      comp.graph.legs.push_back(l.leg);
      comp.dec.leg_psi.push_back(l.psi);
      comp.labels.leg_entry.push_back(l.entry);
    }

    for (int e = 0; e < G.num_edges(); ++e) {
      std::array<int, 2> ends{};
      std::array<int, 2> psi{};
      std::array<int, 2> entry{};
      for (int end = 0; end < 2; ++end) {
        const int w = G.edges[e][end];
        if (!subs.count(w)) {
          ends[end] = base[w];
          psi[end] = ambient.dec.edge_psi[e][end];
          entry[end] = ambient.labels.edge_entry[e][end];
        } else {
          require(ambient.dec.edge_psi[e][end] == 0 &&
                      ambient.labels.edge_entry[e][end] == 0,
                  "decorated slot cannot be substituted");
          const int s = slot_index_of_end(G, e, end);
          const Attach& a = attach[w][s];
          ends[end] = a.vertex;
          psi[end] = a.psi;
          entry[end] = a.entry;
        }
      }
      comp.graph.edges.push_back(ends);
      comp.dec.edge_psi.push_back(psi);
      comp.labels.edge_entry.push_back(entry);
    }
    for (const auto& [v, t] : inner) {
      for (int e = 0; e < t->graph.num_edges(); ++e) {
        comp.graph.edges.push_back({inner_base[v] + t->graph.edges[e][0],
                                    inner_base[v] + t->graph.edges[e][1]});
        comp.dec.edge_psi.push_back(t->dec.edge_psi[e]);
        comp.labels.edge_entry.push_back(t->labels.edge_entry[e]);
      }
    }

    out.add_term(comp, c);

    // odometer
    std::size_t i = 0;
    for (; i < pick.size(); ++i) {
      if (++pick[i] < choices[i].size()) break;
      pick[i] = 0;
    }
    if (i == pick.size()) break;
  }
  return out;
}

TautClass push_forward(const StableGraph& gamma,
                       const std::vector<TautClass>& vertex_classes) {
  gamma.validate();
  require(static_cast<int>(vertex_classes.size()) == gamma.num_vertices(),
          "one class per vertex required");
  LabeledTerm ambient{gamma, Decoration::trivial(gamma),
                      VertexLabels::fundamental(gamma)};
  std::map<int, SymbolicClass> subs;
  for (int v = 0; v < gamma.num_vertices(); ++v)
    subs[v] = to_symbolic(vertex_classes[v]);
  const SymbolicClass s = splice(ambient, Rat(1), subs);
  auto t = to_tautological(s);
  if (!t) throw std::logic_error("push_forward produced opaque labels");
  return *t;
}

}  // namespace tauttwist

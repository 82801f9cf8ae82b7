#include "tauttwist/json_io.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace tauttwist {

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json graph_to_json(const StableGraph& g) {
  Json j;
  j["vertices"] = Json::array();
  for (int gv : g.genus) j["vertices"].push_back(Json{{"genus", gv}});
  j["legs"] = Json::array();
  for (const auto& [m, v] : g.legs)
    j["legs"].push_back(Json{{"marking", m}, {"vertex", v}});
  j["edges"] = Json::array();
  for (const auto& e : g.edges)
    j["edges"].push_back(
        Json::array({Json{{"vertex", e[0]}}, Json{{"vertex", e[1]}}}));
  return j;
}

StableGraph graph_from_json(const Json& j) {
  StableGraph g;
  for (const auto& v : j.at("vertices"))
    g.genus.push_back(v.at("genus").get<int>());
  for (const auto& l : j.at("legs"))
    g.legs.emplace_back(l.at("marking").get<int>(), l.at("vertex").get<int>());
  std::sort(g.legs.begin(), g.legs.end());
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2)
      throw std::invalid_argument("edge must list two half-edges");
    g.edges.push_back(
        {e[0].at("vertex").get<int>(), e[1].at("vertex").get<int>()});
  }
  g.validate();
  return g;
}

namespace {

Json label_to_json(const LabeledTerm& term, int v) {
  if (!term.labels.vert[v].opaque) return Json("fundamental");
  const OpaqueGen gen = term.opaque_at(v);
  Json j;
  j["kind"] = opaque_kind_name(gen.kind);
  j["g"] = gen.g;
  j["k"] = gen.k;
  j["sig"] = gen.sig;
  j["codim"] = gen.codim();
  return j;
}

Json decoration_to_json(const Decoration& dec) {
  Json j;
  j["kappa1"] = dec.kappa1;
  j["leg_psi"] = dec.leg_psi;
  j["halfedge_psi"] = Json::array();
  for (const auto& e : dec.edge_psi)
    j["halfedge_psi"].push_back(Json::array({e[0], e[1]}));
  return j;
}

Decoration decoration_from_json(const Json& j, const StableGraph& g) {
  Decoration dec;
  dec.kappa1 = j.at("kappa1").get<std::vector<int>>();
  dec.leg_psi = j.at("leg_psi").get<std::vector<int>>();
  for (const auto& e : j.at("halfedge_psi"))
    dec.edge_psi.push_back({e[0].get<int>(), e[1].get<int>()});
  dec.validate(g);
  return dec;
}

// Distributes the per-vertex label signatures back onto slots.
LabeledTerm term_from_json(const Json& j) {
  LabeledTerm term;
  term.graph = graph_from_json(j.at("graph"));
  term.dec = decoration_from_json(j.at("decoration"), term.graph);
  term.labels = VertexLabels::fundamental(term.graph);
  if (j.contains("labels")) {
    const auto& labels = j.at("labels");
    if (static_cast<int>(labels.size()) != term.graph.num_vertices())
      throw std::invalid_argument("one label per vertex required");
    for (int v = 0; v < term.graph.num_vertices(); ++v) {
      const auto& lj = labels[v];
      if (lj.is_string()) {
        if (lj.get<std::string>() != "fundamental")
          throw std::invalid_argument("unknown label: " +
                                      lj.get<std::string>());
        continue;
      }
      term.labels.vert[v].opaque = true;
      term.labels.vert[v].kind =
          opaque_kind_parse(lj.at("kind").get<std::string>());
      term.labels.vert[v].k = lj.at("k").get<int>();
      if (lj.contains("g") && lj.at("g").get<int>() != term.graph.genus[v])
        throw std::invalid_argument("label genus disagrees with vertex");
      const auto sig = lj.at("sig").get<std::vector<int>>();
      const auto slots = vertex_slots(term.graph, v);
      if (sig.size() != slots.size())
        throw std::invalid_argument("label signature arity mismatch");
      for (std::size_t i = 0; i < slots.size(); ++i) {
        if (slots[i].is_leg)
          term.labels.leg_entry[slots[i].leg_index] = sig[i];
        else
          term.labels.edge_entry[slots[i].edge_index][slots[i].end] = sig[i];
      }
    }
  }
  return term;
}

}  // namespace

Json term_to_json(const StableGraph& g, const Decoration& dec,
                  const VertexLabels& labels, const Rat& coeff) {
  LabeledTerm term{g, dec, labels};
  Json j;
  j["coeff"] = rat_str(coeff);
  j["graph"] = graph_to_json(g);
  j["decoration"] = decoration_to_json(dec);
  j["labels"] = Json::array();
  for (int v = 0; v < g.num_vertices(); ++v)
    j["labels"].push_back(label_to_json(term, v));
  return j;
}

Json class_to_json(const TautClass& t) {
  Json j;
  j["space"] = Json{{"g", t.genus()}, {"n", t.markings()}};
  j["terms"] = Json::array();
  for (const auto& [key, tv] : t.terms())
    j["terms"].push_back(term_to_json(
        tv.first.graph, tv.first.dec,
        VertexLabels::fundamental(tv.first.graph), tv.second));
  return j;
}

Json class_to_json(const SymbolicClass& s) {
  Json j;
  j["space"] = Json{{"g", s.genus()}, {"n", s.markings()}};
  j["terms"] = Json::array();
  for (const auto& [key, tv] : s.terms())
    j["terms"].push_back(
        term_to_json(tv.first.graph, tv.first.dec, tv.first.labels, tv.second));
  return j;
}

SymbolicClass symbolic_class_from_json(const Json& j) {
  SymbolicClass out(j.at("space").at("g").get<int>(),
                    j.at("space").at("n").get<int>());
  for (const auto& tj : j.at("terms")) {
    const LabeledTerm term = term_from_json(tj);
    out.add_term(term, rat_parse(tj.at("coeff").get<std::string>()));
  }
  return out;
}

TautClass class_from_json(const Json& j) {
  const SymbolicClass s = symbolic_class_from_json(j);
  auto t = to_tautological(s);
  if (!t)
    throw std::invalid_argument("class JSON contains opaque labels");
  return *t;
}

Json registry_to_json(const ClassRegistry& r) {
  Json j;
  j["entries"] = Json::array();
  for (const auto& [ks, entry] : r.entries()) {
    Json e;
    e["key"] = Json{{"kind", opaque_kind_name(entry.key.kind)},
                    {"g", entry.key.g},
                    {"k", entry.key.k},
                    {"sig", entry.key.sig}};
    e["expansion"] = class_to_json(entry.expansion);
    e["provenance"] = entry.provenance;
    j["entries"].push_back(e);
  }
  return j;
}

ClassRegistry registry_from_json(const Json& j) {
  ClassRegistry r;
  for (const auto& e : j.at("entries")) {
    RegistryEntry entry;
    entry.key.kind = opaque_kind_parse(e.at("key").at("kind").get<std::string>());
    entry.key.g = e.at("key").at("g").get<int>();
    entry.key.k = e.at("key").at("k").get<int>();
    entry.key.sig = e.at("key").at("sig").get<std::vector<int>>();
    entry.expansion = class_from_json(e.at("expansion"));
    entry.provenance = e.value("provenance", std::string{});
    r.add(std::move(entry));
  }
  return r;
}

ClassRegistry ClassRegistry::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open registry file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& ex) {
    throw std::runtime_error("malformed registry JSON in " + path + ": " +
                             ex.what());
  }
  return registry_from_json(j);
}

void ClassRegistry::save_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write registry file: " + path);
  out << dump(registry_to_json(*this));
}

}  // namespace tauttwist

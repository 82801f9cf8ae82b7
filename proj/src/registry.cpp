#include "tauttwist/registry.hpp"

#include <algorithm>
#include <stdexcept>

namespace tauttwist {

void ClassRegistry::add(RegistryEntry entry) {
  if (entry.key.k < 1)
    throw std::invalid_argument("registry key needs k >= 1");
  const int n = static_cast<int>(entry.key.sig.size());
  if (entry.expansion.genus() != entry.key.g ||
      entry.expansion.markings() != n)
    throw std::invalid_argument("registry expansion on wrong ambient space: " +
                                entry.key.key_string());
  const auto deg = entry.expansion.homogeneous_degree();
  if (!deg)
    throw std::invalid_argument("registry expansion not homogeneous: " +
                                entry.key.key_string());
  if (!entry.expansion.empty() && *deg != entry.key.codim())
    throw std::invalid_argument(
        "registry expansion degree does not match declared codimension: " +
        entry.key.key_string());
  const std::string ks = entry.key.key_string();
  entries_.insert_or_assign(ks, std::move(entry));
}

std::optional<ClassRegistry::Match> ClassRegistry::lookup(
    const OpaqueGen& gen) const {
  auto it = entries_.find(gen.key_string());
  if (it != entries_.end()) {
    std::vector<int> id(gen.sig.size());
    for (std::size_t i = 0; i < id.size(); ++i) id[i] = static_cast<int>(i);
    return Match{&it->second, id};
  }
  // same multiset of entries up to a marking permutation
  std::vector<int> sorted = gen.sig;
  std::sort(sorted.begin(), sorted.end());
  for (const auto& [ks, entry] : entries_) {
    if (entry.key.kind != gen.kind || entry.key.g != gen.g ||
        entry.key.k != gen.k || entry.key.sig.size() != gen.sig.size())
      continue;
    std::vector<int> s2 = entry.key.sig;
    std::sort(s2.begin(), s2.end());
    if (s2 != sorted) continue;
    // greedy entry-preserving bijection; any one is correct since
    // relabeling by a signature-preserving permutation fixes the class
    std::vector<int> perm(gen.sig.size(), -1);
    std::vector<bool> used(gen.sig.size(), false);
    for (std::size_t i = 0; i < gen.sig.size(); ++i)
      for (std::size_t j = 0; j < entry.key.sig.size(); ++j)
        if (!used[j] && entry.key.sig[j] == gen.sig[i]) {
          perm[i] = static_cast<int>(j);
          used[j] = true;
          break;
        }
    return Match{&entry, perm};
  }
  return std::nullopt;
}

namespace {

bool all_zero(const std::vector<int>& v) {
  return std::all_of(v.begin(), v.end(), [](int x) { return x == 0; });
}

// Applies built-in rules to one term in place. Returns false if the term
// is annihilated (HbarPrime of the zero signature in genus 1).
bool normalize_term(LabeledTerm& term) {
  for (int v = 0; v < term.graph.num_vertices(); ++v) {
    if (!term.labels.vert[v].opaque) continue;
    OpaqueGen gen = term.opaque_at(v);
    if (gen.kind == OpaqueKind::Hbar) {
      if (gen.g == 0) {
        term.labels.vert[v] = VertexLabels::Vert{};
        for (const Slot& s : vertex_slots(term.graph, v)) {
          if (s.is_leg)
            term.labels.leg_entry[s.leg_index] = 0;
          else
            term.labels.edge_entry[s.edge_index][s.end] = 0;
        }
        continue;
      }
      if (gen.g == 1) {
        if (all_zero(gen.sig)) {
          term.labels.vert[v] = VertexLabels::Vert{};
          for (const Slot& s : vertex_slots(term.graph, v)) {
            if (s.is_leg)
              term.labels.leg_entry[s.leg_index] = 0;
            else
              term.labels.edge_entry[s.edge_index][s.end] = 0;
          }
        } else {
          term.labels.vert[v].k = 1;  // the genus-1 locus is k-independent
        }
      }
    } else if (gen.kind == OpaqueKind::HbarPrime) {
      if (gen.g == 1 && all_zero(gen.sig)) return false;
    }
  }
  return true;
}

}  // namespace

SymbolicClass expand(const SymbolicClass& s, const ClassRegistry& reg) {
  SymbolicClass cur = s;
  for (int round = 0; round < 8; ++round) {
    SymbolicClass next(cur.genus(), cur.markings());
    bool changed = false;
    for (const auto& [key, tv] : cur.terms()) {
      LabeledTerm term = tv.first;
      if (!normalize_term(term)) {
        changed = true;
        continue;
      }
      std::map<int, SymbolicClass> subs;
      for (int v = 0; v < term.graph.num_vertices(); ++v) {
        if (!term.labels.vert[v].opaque) continue;
        const OpaqueGen gen = term.opaque_at(v);
        const auto match = reg.lookup(gen);
        if (!match) continue;
        // slot i of the vertex is marking match->perm[i]+1 of the stored
        // expansion; relabel so slot i becomes marking i+1
        std::vector<int> new_of_old(gen.sig.size());
        for (std::size_t i = 0; i < match->perm.size(); ++i)
          new_of_old[match->perm[i]] = static_cast<int>(i);
        subs[v] =
            to_symbolic(relabel_markings(match->entry->expansion, new_of_old));
        // the substituted slots lose their label entries
        for (const Slot& sl : vertex_slots(term.graph, v)) {
          if (sl.is_leg)
            term.labels.leg_entry[sl.leg_index] = 0;
          else
            term.labels.edge_entry[sl.edge_index][sl.end] = 0;
        }
        term.labels.vert[v] = VertexLabels::Vert{};
      }
      if (subs.empty()) {
        if (!(term == tv.first)) changed = true;
        next.add_term(term, tv.second);
      } else {
        changed = true;
        // vertices being substituted must look fundamental to splice
        next += splice(term, tv.second, subs);
      }
    }
    if (!changed) return next;
    cur = std::move(next);
  }
  return cur;
}

}  // namespace tauttwist

#include "tauttwist/stable_graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

namespace tauttwist {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

int StableGraph::total_genus() const {
  int s = 0;
  for (int gv : genus) s += gv;
  return s + h1();
}

int StableGraph::valence(int v) const {
  int n = 0;
  for (const auto& l : legs)
    if (l.second == v) ++n;
  for (const auto& e : edges) {
    if (e[0] == v) ++n;
    if (e[1] == v) ++n;
  }
  return n;
}

bool StableGraph::is_connected() const {
  const int nv = num_vertices();
  if (nv == 0) return false;
  std::vector<int> parent(nv);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : edges) parent[find(e[0])] = find(e[1]);
  const int root = find(0);
  for (int v = 1; v < nv; ++v)
    if (find(v) != root) return false;
  return true;
}

void StableGraph::validate() const {
  const int nv = num_vertices();
  require(nv >= 1, "graph needs at least one vertex");
  for (int gv : genus) require(gv >= 0, "negative vertex genus");
  std::set<int> markings;
  for (const auto& [m, v] : legs) {
    require(m >= 1, "marking indices start at 1");
    require(v >= 0 && v < nv, "leg vertex out of range");
    require(markings.insert(m).second, "duplicate marking");
  }
  require(markings.empty() ||
              (*markings.begin() == 1 &&
               *markings.rbegin() == static_cast<int>(markings.size())),
          "markings must be exactly {1..n}");
  require(std::is_sorted(legs.begin(), legs.end()), "legs not sorted by marking");
  for (const auto& e : edges) {
    require(e[0] >= 0 && e[0] < nv && e[1] >= 0 && e[1] < nv,
            "edge endpoint out of range");
  }
  require(is_connected(), "graph not connected");
  for (int v = 0; v < nv; ++v)
    require(2 * genus[v] - 2 + valence(v) > 0, "unstable vertex");
}

StableGraph trivial_graph(int g, int n) {
  StableGraph out;
  out.genus = {g};
  for (int i = 1; i <= n; ++i) out.legs.emplace_back(i, 0);
  out.validate();
  return out;
}

namespace {

// Builds the key for one vertex relabeling and records the induced edge
// order and end flips.
void build_key(const StableGraph& g, const TermData& d,
               const std::vector<int>& perm, CanonicalKey& key,
               std::vector<int>& edge_order, std::vector<char>& edge_flip) {
  const int nv = g.num_vertices();
  const int nl = g.num_legs();
  const int ne = g.num_edges();
  key.clear();
  key.reserve(3 + nv * (1 + d.vertex_stride) + nl * (2 + d.leg_stride) +
              ne * 2 * (1 + d.end_stride));
  key.push_back(nv);
  key.push_back(nl);
  key.push_back(ne);

  std::vector<int> inv(nv);
  for (int v = 0; v < nv; ++v) inv[perm[v]] = v;
  for (int vn = 0; vn < nv; ++vn) {
    const int v = inv[vn];
    key.push_back(g.genus[v]);
    for (int s = 0; s < d.vertex_stride; ++s)
      key.push_back(d.vertex[v * d.vertex_stride + s]);
  }
  for (int i = 0; i < nl; ++i) {
    key.push_back(g.legs[i].first);
    key.push_back(perm[g.legs[i].second]);
    for (int s = 0; s < d.leg_stride; ++s)
      key.push_back(d.leg[i * d.leg_stride + s]);
  }

  // Per edge: two end tuples (mapped vertex, end data...), smaller first.
  const int tuple_len = 1 + d.end_stride;
  struct EdgeEnc {
    std::vector<std::int64_t> enc;
    int index;
    char flip;
  };
  std::vector<EdgeEnc> encs(ne);
  std::vector<std::int64_t> t0, t1;
  for (int e = 0; e < ne; ++e) {
    t0.clear();
    t1.clear();
    t0.push_back(perm[g.edges[e][0]]);
    t1.push_back(perm[g.edges[e][1]]);
    for (int s = 0; s < d.end_stride; ++s) {
      t0.push_back(d.end[(2 * e + 0) * d.end_stride + s]);
      t1.push_back(d.end[(2 * e + 1) * d.end_stride + s]);
    }
    const bool flip = t1 < t0;
    encs[e].enc.reserve(2 * tuple_len);
    const auto& a = flip ? t1 : t0;
    const auto& b = flip ? t0 : t1;
    encs[e].enc.insert(encs[e].enc.end(), a.begin(), a.end());
    encs[e].enc.insert(encs[e].enc.end(), b.begin(), b.end());
    encs[e].index = e;
    encs[e].flip = flip ? 1 : 0;
  }
  std::sort(encs.begin(), encs.end(), [](const EdgeEnc& x, const EdgeEnc& y) {
    if (x.enc != y.enc) return x.enc < y.enc;
    return x.index < y.index;
  });
  edge_order.resize(ne);
  edge_flip.assign(ne, 0);
  for (int p = 0; p < ne; ++p) {
    edge_order[p] = encs[p].index;
    edge_flip[encs[p].index] = encs[p].flip;
    key.insert(key.end(), encs[p].enc.begin(), encs[p].enc.end());
  }
}

}  // namespace

CanonResult canonicalize(const StableGraph& g, const TermData& data) {
  const int nv = g.num_vertices();
  std::vector<int> perm(nv);
  std::iota(perm.begin(), perm.end(), 0);

  CanonResult best;
  CanonicalKey key;
  std::vector<int> eorder;
  std::vector<char> eflip;
  bool first = true;
  do {
    build_key(g, data, perm, key, eorder, eflip);
    if (first || key < best.key) {
      best.key = key;
      best.vertex_perm = perm;
      best.edge_order = eorder;
      best.edge_flip = eflip;
      first = false;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

StableGraph apply_canonical(const StableGraph& g, const CanonResult& c) {
  StableGraph out;
  const int nv = g.num_vertices();
  out.genus.resize(nv);
  for (int v = 0; v < nv; ++v) out.genus[c.vertex_perm[v]] = g.genus[v];
  out.legs = g.legs;
  for (auto& [m, v] : out.legs) v = c.vertex_perm[v];
  std::sort(out.legs.begin(), out.legs.end());
  out.edges.reserve(g.num_edges());
  for (int p = 0; p < g.num_edges(); ++p) {
    const int e = c.edge_order[p];
    auto ends = g.edges[e];
    if (c.edge_flip[e]) std::swap(ends[0], ends[1]);
    out.edges.push_back({c.vertex_perm[ends[0]], c.vertex_perm[ends[1]]});
  }
  return out;
}

std::pair<CanonicalKey, StableGraph> canonical_form(const StableGraph& g) {
  g.validate();
  const CanonResult c = canonicalize(g, TermData{});
  return {c.key, apply_canonical(g, c)};
}

long long automorphism_count(const StableGraph& g) {
  g.validate();
  const int nv = g.num_vertices();

  // Edge multiset as counts per unordered vertex pair; loops kept separate.
  std::map<std::pair<int, int>, int> mult;
  std::vector<int> loops(nv, 0);
  for (const auto& e : g.edges) {
    if (e[0] == e[1]) {
      ++loops[e[0]];
    } else {
      ++mult[{std::min(e[0], e[1]), std::max(e[0], e[1])}];
    }
  }

  long long base = 1;
  for (const auto& [p, m] : mult)
    for (int i = 2; i <= m; ++i) base *= i;
  for (int v = 0; v < nv; ++v) {
    for (int i = 2; i <= loops[v]; ++i) base *= i;
    for (int i = 0; i < loops[v]; ++i) base *= 2;
  }

  long long valid_perms = 0;
  std::vector<int> perm(nv);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (int v = 0; v < nv && ok; ++v)
      if (g.genus[perm[v]] != g.genus[v]) ok = false;
    for (const auto& [m, v] : g.legs)
      if (ok && perm[v] != v) ok = false;
    if (ok) {
      std::map<std::pair<int, int>, int> mult2;
      std::vector<int> loops2(nv, 0);
      for (const auto& e : g.edges) {
        const int a = perm[e[0]], b = perm[e[1]];
        if (a == b)
          ++loops2[a];
        else
          ++mult2[{std::min(a, b), std::max(a, b)}];
      }
      if (mult2 == mult && loops2 == loops) ++valid_perms;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  return valid_perms * base;
}

namespace {

struct Enumerator {
  int g, n;
  std::map<CanonicalKey, StableGraph> found;

  void consider(const StableGraph& cand) {
    if (!cand.is_connected()) return;
    for (int v = 0; v < cand.num_vertices(); ++v)
      if (2 * cand.genus[v] - 2 + cand.valence(v) <= 0) return;
    if (cand.total_genus() != g) return;
    auto [key, canon] = canonical_form(cand);
    found.emplace(std::move(key), std::move(canon));
  }

  void edge_multisets(StableGraph& cand,
                      const std::vector<std::array<int, 2>>& pairs,
                      size_t pair_idx, int remaining) {
    if (remaining == 0) {
      consider(cand);
      return;
    }
    if (pair_idx >= pairs.size()) return;
    // take 0..remaining copies of pairs[pair_idx]
    edge_multisets(cand, pairs, pair_idx + 1, remaining);
    for (int c = 1; c <= remaining; ++c) {
      cand.edges.push_back(pairs[pair_idx]);
      edge_multisets(cand, pairs, pair_idx + 1, remaining - c);
    }
    for (int c = 1; c <= remaining; ++c) cand.edges.pop_back();
  }

  void leg_assignments(StableGraph& cand, int mark, int num_edges) {
    const int nv = cand.num_vertices();
    if (mark > n) {
      std::vector<std::array<int, 2>> pairs;
      for (int a = 0; a < nv; ++a)
        for (int b = a; b < nv; ++b) pairs.push_back({a, b});
      edge_multisets(cand, pairs, 0, num_edges);
      return;
    }
    for (int v = 0; v < nv; ++v) {
      cand.legs.emplace_back(mark, v);
      leg_assignments(cand, mark + 1, num_edges);
      cand.legs.pop_back();
    }
  }

  void genus_assignments(StableGraph& cand, int v, int remaining,
                         int num_edges) {
    const int nv = cand.num_vertices();
    if (v == nv) {
      if (remaining != 0) return;
      leg_assignments(cand, 1, num_edges);
      return;
    }
    for (int gv = 0; gv <= remaining; ++gv) {
      cand.genus[v] = gv;
      genus_assignments(cand, v + 1, remaining - gv, num_edges);
    }
  }
};

}  // namespace

std::vector<StableGraph> enumerate_stable_graphs(int g, int n, int max_edges) {
  if (g < 0 || g > kMaxGenus)
    throw std::invalid_argument("genus out of supported range");
  if (n < 0) throw std::invalid_argument("negative marking count");
  if (2 * g - 2 + n <= 0) throw std::invalid_argument("unstable (g,n)");
  if (max_edges < 0) throw std::invalid_argument("negative max_edges");

  Enumerator en{g, n, {}};
  for (int E = 0; E <= max_edges; ++E) {
    for (int V = 1; V <= E + 1; ++V) {
      const int h1 = E - V + 1;
      const int gsum = g - h1;
      if (gsum < 0) continue;
      StableGraph cand;
      cand.genus.assign(V, 0);
      en.genus_assignments(cand, 0, gsum, E);
    }
  }
  std::vector<StableGraph> out;
  out.reserve(en.found.size());
  for (auto& [key, graph] : en.found) out.push_back(std::move(graph));
  return out;
}

std::vector<Slot> vertex_slots(const StableGraph& g, int v) {
  std::vector<Slot> slots;
  for (int i = 0; i < g.num_legs(); ++i)
    if (g.legs[i].second == v) slots.push_back({true, i, -1, -1});
  for (int e = 0; e < g.num_edges(); ++e)
    for (int end = 0; end < 2; ++end)
      if (g.edges[e][end] == v) slots.push_back({false, -1, e, end});
  return slots;
}

int slot_index_of_leg(const StableGraph& g, int leg_index) {
  const auto slots = vertex_slots(g, g.legs[leg_index].second);
  for (size_t i = 0; i < slots.size(); ++i)
    if (slots[i].is_leg && slots[i].leg_index == leg_index)
      return static_cast<int>(i);
  throw std::logic_error("leg slot not found");
}

int slot_index_of_end(const StableGraph& g, int edge_index, int end) {
  const auto slots = vertex_slots(g, g.edges[edge_index][end]);
  for (size_t i = 0; i < slots.size(); ++i)
    if (!slots[i].is_leg && slots[i].edge_index == edge_index &&
        slots[i].end == end)
      return static_cast<int>(i);
  throw std::logic_error("half-edge slot not found");
}

StableGraph insert_graph_at_vertex(const StableGraph& g, int v,
                                   const StableGraph& inner,
                                   const std::vector<int>& boundary_match) {
  g.validate();
  inner.validate();
  require(v >= 0 && v < g.num_vertices(), "vertex index out of range");
  require(inner.total_genus() == g.genus[v], "genus mismatch at insertion");
  const int nslots = g.valence(v);
  require(inner.num_legs() == nslots, "arity mismatch at insertion");
  require(static_cast<int>(boundary_match.size()) == nslots,
          "boundary match has wrong size");
  {
    std::set<int> seen(boundary_match.begin(), boundary_match.end());
    require(static_cast<int>(seen.size()) == nslots &&
                (nslots == 0 || (*seen.begin() == 0 && *seen.rbegin() == nslots - 1)),
            "boundary match is not a bijection onto slots");
  }

  const auto slots = vertex_slots(g, v);
  // slot index -> (inner vertex) via the matched inner marking
  std::vector<int> slot_vertex(nslots, -1);
  std::vector<int> slot_marking(nslots, -1);
  for (int i = 0; i < nslots; ++i) {
    slot_vertex[boundary_match[i]] = inner.legs[i].second;
    slot_marking[boundary_match[i]] = inner.legs[i].first;
  }

  const int nv = g.num_vertices();
  std::vector<int> base(nv, -1);
  int next = 0;
  for (int w = 0; w < nv; ++w)
    if (w != v) base[w] = next++;
  const int inner_base = next;

  StableGraph out;
  for (int w = 0; w < nv; ++w)
    if (w != v) out.genus.push_back(g.genus[w]);
  for (int u = 0; u < inner.num_vertices(); ++u)
    out.genus.push_back(inner.genus[u]);

  for (int i = 0; i < g.num_legs(); ++i) {
    const auto& [m, w] = g.legs[i];
    if (w != v) {
      out.legs.emplace_back(m, base[w]);
    } else {
      const int s = slot_index_of_leg(g, i);
      out.legs.emplace_back(m, inner_base + slot_vertex[s]);
    }
  }
  std::sort(out.legs.begin(), out.legs.end());

  for (int e = 0; e < g.num_edges(); ++e) {
    std::array<int, 2> ends{};
    for (int end = 0; end < 2; ++end) {
      const int w = g.edges[e][end];
      if (w != v) {
        ends[end] = base[w];
      } else {
        const int s = slot_index_of_end(g, e, end);
        ends[end] = inner_base + slot_vertex[s];
      }
    }
    out.edges.push_back(ends);
  }
  for (const auto& e : inner.edges)
    out.edges.push_back({inner_base + e[0], inner_base + e[1]});

  out.validate();
  return out;
}

}  // namespace tauttwist

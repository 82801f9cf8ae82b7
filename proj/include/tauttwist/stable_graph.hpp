#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

namespace tauttwist {

// Hard configuration cap: graph machinery is only exercised for small genus.
inline constexpr int kMaxGenus = 3;

// Dual graph of a stable curve. Vertices carry a genus, legs are labeled
// marked points, edges are unordered pairs of half-edges (self-loops
// allowed). A half-edge is addressed as (edge index, end index 0/1).
struct StableGraph {
  std::vector<int> genus;                  // per vertex
  std::vector<std::pair<int, int>> legs;   // (marking, vertex), sorted by marking
  std::vector<std::array<int, 2>> edges;   // endpoint vertices

  int num_vertices() const { return static_cast<int>(genus.size()); }
  int num_legs() const { return static_cast<int>(legs.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  int h1() const { return num_edges() - num_vertices() + 1; }
  int total_genus() const;
  // n(v): legs plus incident half-edges; a self-loop counts twice.
  int valence(int v) const;
  bool is_connected() const;
  // Throws std::invalid_argument on any violated invariant: connectivity,
  // stability 2g(v)-2+n(v) > 0, markings {1..n} each exactly once.
  void validate() const;

  bool operator==(const StableGraph&) const = default;
};

StableGraph trivial_graph(int g, int n);

using CanonicalKey = std::vector<std::int64_t>;

// Extra data that participates in canonical labeling: one fixed-stride
// record per vertex, per leg and per edge end. Decorations and opaque
// labels ride along here so relabeling moves them consistently.
struct TermData {
  int vertex_stride = 0;
  int leg_stride = 0;
  int end_stride = 0;
  std::vector<std::int64_t> vertex;  // V * vertex_stride
  std::vector<std::int64_t> leg;     // L * leg_stride
  std::vector<std::int64_t> end;     // 2E * end_stride, index 2*e+end
};

struct CanonResult {
  CanonicalKey key;
  std::vector<int> vertex_perm;  // old vertex -> new vertex
  std::vector<int> edge_order;   // new edge position -> old edge index
  std::vector<char> edge_flip;   // per old edge: ends swapped in canonical form
};

// Exhaustive minimization over vertex relabelings; graphs here are tiny
// (genus at most kMaxGenus), so correctness wins over asymptotics.
CanonResult canonicalize(const StableGraph& g, const TermData& data);

StableGraph apply_canonical(const StableGraph& g, const CanonResult& c);

// Key and relabeled representative; equal keys iff isomorphic as
// genus-and-marking-labeled graphs (legs are never permuted).
std::pair<CanonicalKey, StableGraph> canonical_form(const StableGraph& g);

// Order of the automorphism group fixing legs pointwise; half-edge swaps
// on self-loops and parallel-edge swaps count.
long long automorphism_count(const StableGraph& g);

// One representative per isomorphism class with #edges <= max_edges,
// ordered by canonical key.
std::vector<StableGraph> enumerate_stable_graphs(int g, int n, int max_edges);

// Boundary slots at a vertex: legs in increasing marking order, then
// half-edges in (edge index, end) order. Vertex classes and opaque
// signatures refer to slots in exactly this order.
struct Slot {
  bool is_leg = false;
  int leg_index = -1;   // into legs
  int edge_index = -1;  // into edges
  int end = -1;
};

std::vector<Slot> vertex_slots(const StableGraph& g, int v);
int slot_index_of_leg(const StableGraph& g, int leg_index);
int slot_index_of_end(const StableGraph& g, int edge_index, int end);

// Replaces vertex v by the graph `inner` (genus g(v), n(v) legs);
// boundary_match[i] is the slot of v glued to inner's marking i+1.
// Inserting the trivial graph is the identity up to relabeling.
StableGraph insert_graph_at_vertex(const StableGraph& g, int v,
                                   const StableGraph& inner,
                                   const std::vector<int>& boundary_match);

}  // namespace tauttwist

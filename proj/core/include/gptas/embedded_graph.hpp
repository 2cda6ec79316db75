#pragma once

#include <utility>
#include <vector>

#include "gptas/util.hpp"

namespace gptas {

using Vertex = int;
using EdgeId = int;
using Dart = int;

inline constexpr int kNone = -1;

struct EdgeRec {
  Vertex u = kNone;
  Vertex v = kNone;
  double length = 0.0;
  int sig = 1;
};

// Multigraph embedded in a surface, given as a rotation system with edge
// signatures. Edge e owns darts 2e (based at u) and 2e+1 (based at v), with
// twin(d) = d ^ 1. rot[v] lists the darts based at v in cyclic order, and
// sig -1 marks an edge across which the cyclic sense flips.
//
// validate() rebuilds the dart index; every routine here expects its inputs
// to have been validated after the last edit to rot or edges.
struct EmbeddedGraph {
  std::vector<EdgeRec> edges;
  std::vector<std::vector<Dart>> rot;
  std::vector<char> terminal;

  int n() const { return static_cast<int>(rot.size()); }
  int m() const { return static_cast<int>(edges.size()); }

  static Dart twin(Dart d) { return d ^ 1; }
  static EdgeId edge_of(Dart d) { return d >> 1; }

  Vertex vertex_of(Dart d) const {
    const EdgeRec& e = edges[d >> 1];
    return (d & 1) ? e.v : e.u;
  }
  Vertex head_of(Dart d) const { return vertex_of(twin(d)); }
  double len(EdgeId e) const { return edges[e].length; }
  int sig(EdgeId e) const { return edges[e].sig; }
  bool is_loop(EdgeId e) const { return edges[e].u == edges[e].v; }
  Vertex other_end(EdgeId e, Vertex v) const;
  Dart dart_at(EdgeId e, Vertex v) const;  // dart of e based at v; 2e for loops

  Dart rot_next(Dart d) const;
  Dart rot_prev(Dart d) const;

  void validate();  // index rebuild plus structural checks

  bool connected() const;
  std::vector<Vertex> terminal_list() const;
  double total_length() const;

 private:
  std::vector<int> pos_;
};

// A closed facial walk; sides[i] is the side darts[i] is traced on.
struct FaceWalk {
  std::vector<Dart> darts;
  std::vector<int> sides;
  int size() const { return static_cast<int>(darts.size()); }
};

// Facial structure of an embedding. A walk state is a (dart, side) pair
// encoded as 2*dart + (side < 0). The tracing successor of (d, s) continues
// at twin(d), taking the next dart in rotation when s*sig(d) is positive and
// the previous one otherwise. Orbits of that map come in mirror pairs; one
// orbit per pair is kept, picked and rotated to start at its minimal state
// under the side-major order (+ states before -, lower darts first), and the
// walks are sorted by that starting key.
struct Faces {
  std::vector<FaceWalk> walks;
  std::vector<int> walk_of_state;  // encoded state -> walk id, kNone on mirror orbits
  std::vector<int> pos_of_state;   // position within the walk, kNone likewise
};

Faces trace_faces(const EmbeddedGraph& g);

// 2 - (n - m + f) of a connected graph: 0 on the sphere, 1 on the projective
// plane, 2 on the torus and the Klein bottle.
int euler_genus(const EmbeddedGraph& g);

// Geometric dual: one vertex per facial walk; edge ids, lengths and Euler
// genus carry over.
EmbeddedGraph dual(const EmbeddedGraph& g);

// Fixed-order sum of the lengths of a multiset of edge ids; equal multisets
// give bit-identical totals.
double canonical_length(const EmbeddedGraph& g, std::vector<EdgeId> ids);

// (component count, vertex -> component id); components are numbered by
// their smallest vertex.
std::pair<int, std::vector<int>> components(const EmbeddedGraph& g);

// A graph carved out of a host graph, with maps back into it.
struct Piece {
  EmbeddedGraph g;
  std::vector<Vertex> vmap;  // piece vertex -> host vertex
  std::vector<EdgeId> emap;  // piece edge -> host edge
};

// Sub-embedding induced by an edge set: the incident vertices keep their
// cyclic order restricted to the set. Vertices and edges are renumbered in
// ascending host order.
Piece sub_embedding(const EmbeddedGraph& g, const std::vector<EdgeId>& es);

// One piece per connected component.
std::vector<Piece> split_components(const EmbeddedGraph& g);

struct ContractResult {
  EmbeddedGraph g;
  std::vector<Vertex> vmap;  // host vertex -> new vertex
  std::vector<EdgeId> emap;  // host edge -> new edge, kNone when removed
};

// Contract non-loop edge e, merging its endpoints into min(u, v). With
// keep_parallel every other edge survives (parallels of e become loops) and
// the Euler genus is unchanged; without it, loops at the merged vertex are
// dropped and each parallel bundle there keeps its shortest edge.
ContractResult contract_edge(const EmbeddedGraph& g, EdgeId e, bool keep_parallel);

// Contract a set of edges in sequence, deleting set members that have
// already collapsed into loops. Edges outside the set all survive.
ContractResult contract_edge_set(const EmbeddedGraph& g, const std::vector<EdgeId>& es);

// Result of slicing the surface open along the edges of a connected
// subgraph. Every cut edge reappears as two copies; boundary[w] chains the
// copies of one cut walk head to tail.
struct CutResult {
  EmbeddedGraph g;
  std::vector<std::vector<Dart>> boundary;
  std::vector<Vertex> vmap;     // new vertex -> host vertex
  std::vector<EdgeId> emap;     // new edge -> host edge
  std::vector<char> is_copy;    // new edge is a boundary copy
  std::vector<char> is_corner;  // new vertex is a corner of the cut
};

CutResult cut_along(const EmbeddedGraph& g, const std::vector<EdgeId>& cut_edges);

// Reverses the cyclic order at a set of vertices until every signature is
// positive. The surface and its facial structure are unchanged; only an
// embedding in an orientable surface admits such a flip set.
void orient(EmbeddedGraph& g);

}  // namespace gptas

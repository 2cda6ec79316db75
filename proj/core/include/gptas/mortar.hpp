#pragma once

#include <optional>
#include <string>

#include "gptas/embedded_graph.hpp"
#include "gptas/params.hpp"

namespace gptas {

// One cell of the mortar decomposition: the subgraph enclosed by a face of
// the mortar graph, cut out of the planarized instance. The enclosing face
// is stored as the facial walk west + north + east + reverse(south). The
// south side is epsilon-short, the north side 0-short, and every terminal
// of the cell lies on one of the two; the east and west sides are copies of
// supercolumns. s_pos marks the spine positions along the south side (0 to
// south_len inclusive), always including both ends. A brick whose north
// side degenerates to a single vertex records it in north_anchor instead.
struct Brick {
  EmbeddedGraph g;
  std::vector<Vertex> vmap;  // brick vertex -> planar vertex
  std::vector<EdgeId> emap;  // brick edge -> planar edge
  std::vector<Dart> walk;    // facial walk, blocks in west/north/east/south order
  int west_len = 0;
  int north_len = 0;
  int east_len = 0;
  std::vector<int> s_pos;       // spine positions along the south side
  Vertex north_anchor = kNone;  // single-vertex north side, if any
  std::vector<int> portal_pos;  // walk positions of the portal vertices
  bool south_closed = false;    // the walk is south only and closes on itself

  int south_len() const { return static_cast<int>(walk.size()) - west_len - north_len - east_len; }
  std::vector<Dart> west() const;
  std::vector<Dart> north() const;
  std::vector<Dart> east() const;
  std::vector<Dart> south() const;  // oriented along the side, not along the walk
  std::vector<Vertex> portal_vertices() const;
};

// First brick condition that fails, if any. Conditions, in the order they
// are checked:
//   1 the brick is connected and planar
//   2 the stored walk is a closed, vertex-simple face of the brick
//   3 every terminal lies on the north or south side
//   4 the north side is 0-short and the south side is epsilon-short
//   5 s_pos covers the south side: it runs from end to end, each vertex x
//     strictly between consecutive entries s_i, s_{i+1} has its south-side
//     distance from s_i below epsilon times its brick distance to the north
//     side, and there are at most kappa_ceil entries
struct BrickViolation {
  int condition = 0;
  std::string detail;
};

std::optional<BrickViolation> validate_brick(const Brick& b, double epsilon, int kappa_ceil);

// Up to theta walk positions whose vertices split the walk into arcs of
// near-even length: every walk vertex is within length(walk)/theta of a
// portal along the walk. Targets are spaced from the first occurrence of
// the lowest vertex id. Returns all positions with distinct vertices when
// the walk has at most theta of them.
std::vector<int> select_portals(const EmbeddedGraph& g, const std::vector<Dart>& walk, int theta);

struct MortarStats {
  int peels = 0;               // strips whose chord undercuts the boundary span
  int flat_peels = 0;          // strips whose chord merely matches it
  int terminal_strips = 0;     // pieces consumed whole
  int forced_strips = 0;       // pieces consumed whole despite a stretched boundary
  int dropped_components = 0;  // outer sides discarded, one per cut
};

// Mortar decomposition of a planarized instance. mortar_edges lists the
// subgraph (in planar edge ids) whose faces the bricks fill, one brick per
// face apart from the one sigma bounds; when no forced strip fired its
// length is at most (1 + 1/epsilon)^2 times the length of sigma, and the
// supercolumn edges (the subset contributed by the chosen columns) total at
// most (1/kappa)(1/epsilon)(1/epsilon + 1) times the length of sigma.
struct MortarDecomposition {
  std::vector<EdgeId> mortar_edges;
  std::vector<EdgeId> supercolumn_edges;
  double mortar_length = 0.0;
  double sigma_length = 0.0;
  double supercolumn_length = 0.0;
  std::vector<Brick> bricks;
  DerivedParams params;
  MortarStats stats;
};

// planar must be connected and of genus 0, sigma the vertex-simple closed
// facial walk its terminals live on. Every returned brick passes
// validate_brick; the exception is condition 4 on a run that forced strips.
MortarDecomposition build_mortar(const EmbeddedGraph& planar, const std::vector<Dart>& sigma,
                                 const PtasParams& par, int genus);

// The mortar graph with every brick glued back in. Vertices are the mortar
// subgraph's followed by each brick's own copies; each portal is joined to
// its mortar original by a zero-length portal edge embedded in the face the
// brick fills, so the whole graph stays planar.
struct BrickCopy {
  EmbeddedGraph g;
  std::vector<Vertex> mortar_vertex;              // planar vertex -> vertex here, kNone off the mortar
  std::vector<std::vector<Vertex>> brick_vertex;  // per brick: brick vertex -> vertex here
  std::vector<EdgeId> portal_edges;               // ascending edge ids
  std::vector<EdgeId> planar_edge;                // edge -> planar edge, kNone for portal edges
  std::vector<int> brick_of;                      // edge -> brick index, kNone for mortar edges
};

// planar must carry positive signatures throughout (planarize leaves it so).
BrickCopy brick_copy(const EmbeddedGraph& planar, const MortarDecomposition& md);

// The brick copy with each brick contracted to a single vertex. Parallel
// portal edges survive, so every brick vertex keeps one incidence per
// portal, at most theta of them.
struct BrickContraction {
  EmbeddedGraph g;
  std::vector<Vertex> vmap;          // brick-copy vertex -> vertex here
  std::vector<EdgeId> emap;          // brick-copy edge -> edge here, kNone when contracted
  std::vector<Vertex> brick_vertex;  // brick index -> vertex here
};

BrickContraction brick_contract(const BrickCopy& bc, int theta);

// Mortar edges mapped back through a planar-to-host edge map, each host
// edge counted once however many copies land on it.
struct LiftedMortar {
  std::vector<EdgeId> edges;  // ascending host edge ids
  double length = 0.0;
};

LiftedMortar lift_mortar(const MortarDecomposition& md, const std::vector<EdgeId>& emap,
                         const EmbeddedGraph& g);

}  // namespace gptas

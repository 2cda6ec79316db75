#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gptas/embedded_graph.hpp"
#include "gptas/mortar.hpp"
#include "gptas/params.hpp"

namespace gptas {

// Tree over bags of vertices. links are edges between bag ids; a valid
// decomposition keeps them a tree.
struct TreeDecomposition {
  std::vector<std::vector<Vertex>> bags;
  std::vector<std::pair<int, int>> links;

  int width() const;
};

struct TdViolation {
  int condition = 0;  // 0 broken tree, 1 vertex uncovered, 2 edge split, 3 bags disconnected
  std::string detail;
};

// Checks the three decomposition conditions exhaustively against g (plus the
// links actually forming a tree) and reports the first witness found.
std::optional<TdViolation> validate_tree_decomposition(const EmbeddedGraph& g,
                                                       const TreeDecomposition& td);

// Greedy minimum-fill elimination: bags are the eliminated vertex with its
// then-neighborhood, linked along the elimination order. Valid for any
// connected input; the achieved width is heuristic, not optimal.
TreeDecomposition build_tree_decomposition(const EmbeddedGraph& g);

// Partitions the edges into k classes by breadth-first rings in the radial
// (vertex-face incidence) graph, each edge filed under its shallower
// endpoint's ring modulo k. Contracting any one class keeps the treewidth
// bounded in terms of the genus and k; the achieved width is reported by
// callers rather than asserted.
std::vector<std::vector<EdgeId>> contraction_decomposition(const EmbeddedGraph& g, int k);

// Output of the thinning pass over a brick decomposition.
//
// bplus glues one copy of every brick into its mortar face through
// zero-length portal edges; bdiv contracts each brick block to a single
// vertex. sstar is the cheapest contraction class under shadow weights that
// charge each portal edge its face boundary length, widened by the boundary
// of every face whose brick it touched (those bricks are ignored); k is bdiv
// with sstar contracted. The tree decomposition covers k's vertices, with
// one extra leaf bag per unignored brick holding the brick vertex and its
// portals, so brick vertices appear nowhere else.
struct ThinningResult {
  BrickCopy bplus;
  BrickContraction bdiv;
  EmbeddedGraph k;
  std::vector<Vertex> k_vmap;        // bdiv vertex -> k vertex
  std::vector<EdgeId> k_emap;        // bdiv edge -> k edge, kNone when contracted
  std::vector<EdgeId> sstar;         // contracted edges, bdiv ids, sorted
  std::vector<EdgeId> sstar_planar;  // their non-portal images, planar ids, deduped
  double sstar_weight = 0.0;         // shadow weight at selection time
  double sstar_length = 0.0;         // plain length after the weight reset
  double reweighted_total = 0.0;     // shadow weight of all of bdiv
  std::int64_t classes = 0;          // modulus used by the contraction step
  std::vector<char> ignored;         // one flag per brick
  TreeDecomposition td;              // bags over k vertex ids
  std::vector<int> leaf_bag;         // per brick: its leaf bag id, kNone when ignored
};

// Runs the thinning pass on a decomposition of planar. The modulus defaults
// to the derived level count; class_override substitutes a smaller modulus
// (tests exercise the ignore rule with it, which desk-scale level counts
// never trigger).
ThinningResult thinning(const EmbeddedGraph& planar, const MortarDecomposition& md,
                        const PtasParams& par, int class_override = 0);

}  // namespace gptas

#pragma once

#include "gptas/embedded_graph.hpp"

namespace gptas {

// Drops every vertex farther than 2 * xi * length(base_tree) from the tree
// and every edge that cannot be reached within that radius, then keeps the
// tree's component. base_tree must connect all terminals.
Piece preprocess(const EmbeddedGraph& g, const std::vector<EdgeId>& base_tree, double xi);

// Partition of the edges into a spanning tree t1 (given), a spanning tree of
// the dual avoiding t1, and the leftover x. |x| always equals the genus.
struct TreeCotree {
  std::vector<char> in_cotree;
  std::vector<EdgeId> x;
};

TreeCotree tree_cotree(const EmbeddedGraph& g, const std::vector<char>& in_t1);

// Planar graph obtained by cutting the surface along a short cut graph that
// contains a Steiner tree of the terminals. The cut graph doubles into the
// boundary walk of a single new face, and every terminal keeps a copy on it.
struct PlanarizeResult {
  EmbeddedGraph planar;
  std::vector<Dart> boundary;  // closed walk around the new face
  std::vector<Vertex> vmap;    // planar vertex -> input vertex
  std::vector<EdgeId> emap;    // planar edge -> input edge
  std::vector<EdgeId> tree;    // 2-approximate Steiner tree, input ids
  std::vector<EdgeId> cut;     // cut graph, input ids
  double tree_length = 0.0;
  double cut_length = 0.0;
  int genus = 0;  // genus removed by the cut
};

PlanarizeResult planarize(const EmbeddedGraph& g, double xi);

}  // namespace gptas

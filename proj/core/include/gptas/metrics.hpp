#pragma once

#include <limits>
#include <optional>

#include "gptas/embedded_graph.hpp"

namespace gptas {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Shortest-path forest from a set of sources. parent[v] is the dart based at
// v on the edge toward the root; sources and unreachable vertices hold
// kNone. Ties prefer the lower dart, making the forest canonical.
struct SsspResult {
  std::vector<double> dist;
  std::vector<Dart> parent;
};

SsspResult sssp(const EmbeddedGraph& g, const std::vector<Vertex>& sources);

// Forest path from v up to its root.
std::vector<EdgeId> sssp_path_edges(const SsspResult& r, const EmbeddedGraph& g, Vertex v);
std::vector<Vertex> sssp_path_vertices(const SsspResult& r, const EmbeddedGraph& g, Vertex v);

// Steiner tree on the required vertices within twice the optimal length.
std::vector<EdgeId> two_approx_steiner(const EmbeddedGraph& g, const std::vector<Vertex>& req);

struct SteinerResult {
  std::vector<EdgeId> edges;
  double length = 0.0;
};

// Minimum Steiner tree by dynamic programming over terminal subsets; takes
// at most 10 required vertices.
SteinerResult exact_steiner(const EmbeddedGraph& g, const std::vector<Vertex>& req);

// Pair of path vertices whose distance along the path exceeds (1 + t) times
// their graph distance.
struct StretchWitness {
  Vertex x = kNone;
  Vertex y = kNone;
  double along = 0.0;
  double metric = 0.0;
};

// path chains darts head to tail and must be vertex-simple. Returns the
// worst offending pair, or nothing when the path is t-short.
std::optional<StretchWitness> t_short_violation(const EmbeddedGraph& g,
                                                const std::vector<Dart>& path, double t);

inline bool is_t_short(const EmbeddedGraph& g, const std::vector<Dart>& path, double t) {
  return !t_short_violation(g, path, t).has_value();
}

}  // namespace gptas

#pragma once

#include <gptas/embedded_graph.hpp>
#include <gptas/util.hpp>

#include <limits>
#include <vector>

namespace gptas::testing {

inline EmbeddedGraph make_graph(int n, const std::vector<EdgeRec>& edges,
                                const std::vector<std::vector<Dart>>& rot,
                                const std::vector<Vertex>& terminals = {}) {
  EmbeddedGraph g;
  g.edges = edges;
  g.rot = rot;
  g.terminal.assign(n, 0);
  for (Vertex t : terminals) g.terminal[t] = 1;
  g.validate();
  return g;
}

// Connected random multigraph (loops and parallels allowed) with a random
// rotation system; lengths are multiples of 0.001.
inline EmbeddedGraph random_graph(Rng& rng, int max_n, int max_extra, bool mixed_sigs) {
  int n = static_cast<int>(rng.range(1, max_n));
  EmbeddedGraph g;
  g.rot.assign(n, {});
  g.terminal.assign(n, 0);
  auto add_edge = [&](Vertex u, Vertex v) {
    double len = static_cast<double>(rng.range(1, 1000)) * 0.001;
    int sig = mixed_sigs && rng.coin(0.5) ? -1 : 1;
    g.edges.push_back({u, v, len, sig});
  };
  for (Vertex v = 1; v < n; ++v) add_edge(static_cast<Vertex>(rng.range(0, v - 1)), v);
  int extra = static_cast<int>(rng.range(0, max_extra));
  for (int i = 0; i < extra; ++i)
    add_edge(static_cast<Vertex>(rng.range(0, n - 1)), static_cast<Vertex>(rng.range(0, n - 1)));
  for (EdgeId e = 0; e < g.m(); ++e) {
    g.rot[g.edges[e].u].push_back(2 * e);
    g.rot[g.edges[e].v].push_back(2 * e + 1);
  }
  for (Vertex v = 0; v < n; ++v) rng.shuffle(g.rot[v]);
  g.validate();
  return g;
}

// Minimum Steiner length by trying every edge subset. Usable up to ~14 edges.
inline double brute_force_steiner_length(const EmbeddedGraph& g, const std::vector<Vertex>& req) {
  if (req.size() <= 1) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (unsigned mask = 0; mask < (1u << g.m()); ++mask) {
    std::vector<Vertex> root(g.n());
    for (Vertex v = 0; v < g.n(); ++v) root[v] = v;
    auto find = [&](Vertex x) {
      while (root[x] != x) x = root[x] = root[root[x]];
      return x;
    };
    std::vector<EdgeId> ids;
    double len = 0.0;
    for (EdgeId e = 0; e < g.m(); ++e) {
      if (!(mask >> e & 1u)) continue;
      ids.push_back(e);
      root[find(g.edges[e].u)] = find(g.edges[e].v);
    }
    bool ok = true;
    for (Vertex t : req) ok = ok && find(t) == find(req[0]);
    if (!ok) continue;
    len = canonical_length(g, ids);
    best = std::min(best, len);
  }
  return best;
}

}  // namespace gptas::testing

#include "gptas/generator.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

#include <fmt/format.h>

namespace gptas {

namespace {

double random_length(Rng& rng) { return static_cast<double>(rng.range(1, 1000)) * 0.001; }

void place_terminals(Rng& rng, EmbeddedGraph& g, int q) {
  require(0 <= q && q <= g.n(), "terminal count out of range");
  std::vector<Vertex> vs(g.n());
  std::iota(vs.begin(), vs.end(), 0);
  rng.shuffle(vs);
  for (int i = 0; i < q; ++i) g.terminal[vs[i]] = 1;
}

EmbeddedGraph draw_topology(Rng& rng, const GenParams& p) {
  EmbeddedGraph g;
  g.rot.assign(p.n, {});
  g.terminal.assign(p.n, 0);
  auto add_edge = [&](Vertex u, Vertex v) {
    int sig = p.mixed && rng.coin(0.5) ? -1 : 1;
    g.edges.push_back({u, v, random_length(rng), sig});
  };
  for (Vertex v = 1; v < p.n; ++v) add_edge(static_cast<Vertex>(rng.range(0, v - 1)), v);
  for (int i = 0; i < p.extra; ++i)
    add_edge(static_cast<Vertex>(rng.range(0, p.n - 1)),
             static_cast<Vertex>(rng.range(0, p.n - 1)));
  for (EdgeId e = 0; e < g.m(); ++e) {
    g.rot[g.edges[e].u].push_back(2 * e);
    g.rot[g.edges[e].v].push_back(2 * e + 1);
  }
  for (Vertex v = 0; v < p.n; ++v) rng.shuffle(g.rot[v]);
  g.validate();
  return g;
}

// Local search toward the target genus. Swapping neighbouring darts moves
// the genus in steps of at most 2; signature flips change its parity.
bool search_embedding(Rng& rng, EmbeddedGraph& g, int target, bool mixed, int steps) {
  int cur = euler_genus(g);
  for (int s = 0; s < steps && cur != target; ++s) {
    EdgeId flipped = kNone;
    Vertex v = kNone;
    size_t i = 0;
    if (mixed && rng.coin(0.3) && g.m() > 0) {
      flipped = static_cast<EdgeId>(rng.range(0, g.m() - 1));
      g.edges[flipped].sig = -g.edges[flipped].sig;
    } else {
      v = static_cast<Vertex>(rng.range(0, g.n() - 1));
      if (g.rot[v].size() < 2) continue;
      i = static_cast<size_t>(rng.range(0, static_cast<std::int64_t>(g.rot[v].size()) - 1));
      std::swap(g.rot[v][i], g.rot[v][(i + 1) % g.rot[v].size()]);
    }
    g.validate();
    int next = euler_genus(g);
    if (std::abs(next - target) <= std::abs(cur - target)) {
      cur = next;
    } else {
      if (flipped != kNone)
        g.edges[flipped].sig = -g.edges[flipped].sig;
      else
        std::swap(g.rot[v][i], g.rot[v][(i + 1) % g.rot[v].size()]);
      g.validate();
    }
  }
  return cur == target;
}

}  // namespace

EmbeddedGraph gen_random(Rng& rng, const GenParams& p) {
  require(p.n >= 1 && p.extra >= 0, "need n >= 1 and extra >= 0");
  int m = p.n - 1 + p.extra;
  if (p.genus >= 0) {
    require(p.genus <= m - p.n + 1,
            fmt::format("genus {} needs more than {} extra edges", p.genus, p.extra));
    require(p.mixed || p.genus % 2 == 0, "odd genus needs orientation-reversing edges");
  }

  int steps = p.max_steps > 0 ? p.max_steps : 400 * (m + 2);
  for (int attempt = 0; attempt < 20; ++attempt) {
    EmbeddedGraph g = draw_topology(rng, p);
    if (p.genus >= 0 && !search_embedding(rng, g, p.genus, p.mixed, steps)) continue;
    place_terminals(rng, g, p.terminals);
    g.validate();
    return g;
  }
  throw StructuralError(fmt::format("no embedding of genus {} found within budget", p.genus));
}

EmbeddedGraph gen_grid(Rng& rng, int rows, int cols, int terminals) {
  require(rows >= 1 && cols >= 1, "grid needs positive dimensions");
  EmbeddedGraph g;
  int n = rows * cols;
  g.rot.assign(n, {});
  g.terminal.assign(n, 0);
  auto vid = [&](int r, int c) { return r * cols + c; };
  // horizontal edges first, row-major, then vertical ones
  auto hid = [&](int r, int c) { return r * (cols - 1) + c; };
  int vbase = rows * (cols - 1);
  auto wid = [&](int r, int c) { return vbase + r * cols + c; };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c + 1 < cols; ++c)
      g.edges.push_back({vid(r, c), vid(r, c + 1), random_length(rng), 1});
  for (int r = 0; r + 1 < rows; ++r)
    for (int c = 0; c < cols; ++c)
      g.edges.push_back({vid(r, c), vid(r + 1, c), random_length(rng), 1});
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      std::vector<Dart>& rot = g.rot[vid(r, c)];
      if (r > 0) rot.push_back(2 * wid(r - 1, c) + 1);      // up
      if (c + 1 < cols) rot.push_back(2 * hid(r, c));       // right
      if (r + 1 < rows) rot.push_back(2 * wid(r, c));       // down
      if (c > 0) rot.push_back(2 * hid(r, c - 1) + 1);      // left
    }
  }
  g.validate();
  ensure(euler_genus(g) == 0, "grid embedding must be planar");
  place_terminals(rng, g, terminals);
  return g;
}

}  // namespace gptas

#include "gptas/planarizer.hpp"

#include <algorithm>
#include <queue>
#include <set>

#include <fmt/format.h>

#include "gptas/metrics.hpp"
#include "gptas/util.hpp"

namespace gptas {

Piece preprocess(const EmbeddedGraph& g, const std::vector<EdgeId>& base_tree, double xi) {
  // Below 1/2 the radius could cut the base tree itself.
  require(xi >= 0.5, "radius factor must be at least 1/2");
  require(g.connected(), "graph must be connected");
  std::vector<Vertex> q = g.terminal_list();
  require(!q.empty(), "need at least one terminal");

  std::set<Vertex> tree_vertices(q.begin(), q.end());
  for (EdgeId e : base_tree) {
    tree_vertices.insert(g.edges[e].u);
    tree_vertices.insert(g.edges[e].v);
  }
  std::vector<EdgeId> ids(base_tree);
  double radius = 2.0 * xi * canonical_length(g, ids);

  SsspResult r = sssp(g, {tree_vertices.begin(), tree_vertices.end()});

  std::vector<EdgeId> kept;
  for (EdgeId e = 0; e < g.m(); ++e) {
    double du = r.dist[g.edges[e].u];
    double dv = r.dist[g.edges[e].v];
    if (!approx_le(du, radius) || !approx_le(dv, radius)) continue;
    if (!approx_le(std::min(du, dv) + g.edges[e].length, radius)) continue;
    kept.push_back(e);
  }

  if (kept.empty()) {
    // lone terminal with nothing in reach
    ensure(q.size() == 1, "base tree edges always stay in range");
    Piece out;
    out.g.rot.assign(1, {});
    out.g.terminal.assign(1, 1);
    out.g.validate();
    out.vmap = {q[0]};
    return out;
  }

  Piece sub = sub_embedding(g, kept);
  std::vector<int> comp = components(sub.g).second;
  std::vector<Vertex> into(g.n(), kNone);
  for (Vertex v = 0; v < sub.g.n(); ++v) into[sub.vmap[v]] = v;
  ensure(into[q[0]] != kNone, "terminal lost in preprocessing");
  int home = comp[into[q[0]]];

  std::vector<EdgeId> final_edges;
  for (EdgeId e = 0; e < sub.g.m(); ++e)
    if (comp[sub.g.edges[e].u] == home) final_edges.push_back(sub.emap[e]);

  Piece out = sub_embedding(g, final_edges);
  ensure(out.g.connected(), "preprocessing must leave one component");
  std::vector<Vertex> check(g.n(), kNone);
  for (Vertex v = 0; v < out.g.n(); ++v) check[out.vmap[v]] = v;
  for (Vertex t : q) ensure(check[t] != kNone, "preprocessing must keep every terminal");
  return out;
}

TreeCotree tree_cotree(const EmbeddedGraph& g, const std::vector<char>& in_t1) {
  require(static_cast<int>(in_t1.size()) == g.m(), "tree marks must cover all edges");
  EmbeddedGraph d = dual(g);
  TreeCotree out;
  out.in_cotree.assign(g.m(), 0);

  std::vector<std::vector<EdgeId>> adj(d.n());
  for (EdgeId e = 0; e < g.m(); ++e) {
    if (in_t1[e]) continue;
    adj[d.edges[e].u].push_back(e);
    adj[d.edges[e].v].push_back(e);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());

  std::vector<char> seen(d.n(), 0);
  std::queue<int> bfs;
  seen[0] = 1;
  bfs.push(0);
  while (!bfs.empty()) {
    int f = bfs.front();
    bfs.pop();
    for (EdgeId e : adj[f]) {
      int o = d.edges[e].u == f ? d.edges[e].v : d.edges[e].u;
      if (seen[o]) continue;
      seen[o] = 1;
      out.in_cotree[e] = 1;
      bfs.push(o);
    }
  }
  ensure(std::count(seen.begin(), seen.end(), 0) == 0,
         "dual must stay connected without the tree edges");

  for (EdgeId e = 0; e < g.m(); ++e)
    if (!in_t1[e] && !out.in_cotree[e]) out.x.push_back(e);
  ensure(static_cast<int>(out.x.size()) == euler_genus(g),
         "leftover edges must count the genus");
  return out;
}

PlanarizeResult planarize(const EmbeddedGraph& g0, double xi) {
  std::vector<Vertex> q0 = g0.terminal_list();
  require(q0.size() >= 2, "planarization needs at least two terminals");

  std::vector<EdgeId> t0 = two_approx_steiner(g0, q0);
  Piece piece = preprocess(g0, t0, xi);
  const EmbeddedGraph& g = piece.g;

  std::vector<EdgeId> rev(g0.m(), kNone);
  for (EdgeId e = 0; e < g.m(); ++e) rev[piece.emap[e]] = e;

  PlanarizeResult out;
  out.tree = t0;
  std::vector<char> in_t1(g.m(), 0);
  std::set<Vertex> roots;
  for (EdgeId e0 : t0) {
    EdgeId e = rev[e0];
    ensure(e != kNone, "base tree must survive preprocessing");
    in_t1[e] = 1;
    roots.insert(g.edges[e].u);
    roots.insert(g.edges[e].v);
  }
  {
    std::vector<EdgeId> ids(t0);
    out.tree_length = canonical_length(g0, ids);
  }

  // Extend the tree to span the piece with shortest-path attachments.
  SsspResult r = sssp(g, {roots.begin(), roots.end()});
  for (Vertex v = 0; v < g.n(); ++v) {
    ensure(r.dist[v] < kInf, "piece must be connected");
    if (r.parent[v] != kNone) in_t1[EmbeddedGraph::edge_of(r.parent[v])] = 1;
  }
  ensure(std::count(in_t1.begin(), in_t1.end(), 1) == g.n() - 1,
         "extended tree must be spanning");

  TreeCotree tc = tree_cotree(g, in_t1);
  out.genus = static_cast<int>(tc.x.size());

  std::set<EdgeId> cut_set;
  for (EdgeId e : t0) cut_set.insert(rev[e]);
  for (EdgeId e : tc.x) {
    cut_set.insert(e);
    for (Vertex v : {g.edges[e].u, g.edges[e].v})
      for (EdgeId pe : sssp_path_edges(r, g, v)) cut_set.insert(pe);
  }
  std::vector<EdgeId> cg(cut_set.begin(), cut_set.end());
  out.cut_length = canonical_length(g, cg);
  ensure_bound(approx_le(out.cut_length, (4.0 * xi * out.genus + 1.0) * out.tree_length),
               fmt::format("cut graph length {} exceeds ({}g+1) tree lengths",
                           out.cut_length, 4.0 * xi));

  CutResult cut = cut_along(g, cg);
  ensure(cut.boundary.size() == 1, "cut graph must open into a single face");
  ensure(euler_genus(cut.g) == 0, "cut result must be planar");
  ensure(cut.g.connected(), "cut result must be connected");

  out.planar = std::move(cut.g);
  orient(out.planar);
  out.boundary = cut.boundary[0];

  // The boundary doubles the cut graph exactly, visits no vertex twice, and
  // carries a copy of every terminal.
  std::vector<EdgeId> hosts;
  std::set<Vertex> on_walk;
  for (Dart d : out.boundary) {
    hosts.push_back(cut.emap[EmbeddedGraph::edge_of(d)]);
    ensure(on_walk.insert(out.planar.vertex_of(d)).second, "boundary walk must be simple");
  }
  ensure(canonical_length(g, hosts) == 2.0 * out.cut_length,
         "boundary must double the cut graph");
  std::vector<char> terminal_covered(g.n(), 0);
  for (Vertex v = 0; v < out.planar.n(); ++v)
    if (out.planar.terminal[v] && on_walk.count(v)) terminal_covered[cut.vmap[v]] = 1;
  for (Vertex v = 0; v < g.n(); ++v)
    ensure(!g.terminal[v] || terminal_covered[v], "every terminal needs a boundary copy");

  out.vmap.resize(out.planar.n());
  for (Vertex v = 0; v < out.planar.n(); ++v) out.vmap[v] = piece.vmap[cut.vmap[v]];
  out.emap.resize(out.planar.m());
  for (EdgeId e = 0; e < out.planar.m(); ++e) out.emap[e] = piece.emap[cut.emap[e]];
  out.cut.clear();
  for (EdgeId e : cg) out.cut.push_back(piece.emap[e]);
  return out;
}

}  // namespace gptas

#include <fmt/core.h>

#include <algorithm>
#include <map>

#include "gptas/embedded_graph.hpp"

namespace gptas {

namespace {

struct Compacted {
  EmbeddedGraph g;
  std::vector<Vertex> vmap;
  std::vector<EdgeId> emap;
};

// Drop marked edges and vertices, renumbering the rest in order. Darts of
// dead edges vanish from the rotations; dead vertices must have none left.
Compacted compact(const EmbeddedGraph& g, const std::vector<char>& dead_edge,
                  const std::vector<char>& dead_vertex) {
  Compacted c;
  c.vmap.assign(g.n(), kNone);
  c.emap.assign(g.m(), kNone);
  int nn = 0;
  for (Vertex v = 0; v < g.n(); ++v)
    if (!dead_vertex[v]) c.vmap[v] = nn++;
  int mm = 0;
  for (EdgeId e = 0; e < g.m(); ++e)
    if (!dead_edge[e]) c.emap[e] = mm++;
  c.g.rot.assign(nn, {});
  c.g.terminal.assign(nn, 0);
  for (Vertex v = 0; v < g.n(); ++v) {
    if (dead_vertex[v]) continue;
    c.g.terminal[c.vmap[v]] = g.terminal[v];
    for (Dart d : g.rot[v])
      if (!dead_edge[d >> 1]) c.g.rot[c.vmap[v]].push_back(2 * c.emap[d >> 1] + (d & 1));
  }
  for (EdgeId e = 0; e < g.m(); ++e) {
    if (dead_edge[e]) continue;
    EdgeRec er = g.edges[e];
    ensure(c.vmap[er.u] != kNone && c.vmap[er.v] != kNone,
           "dead vertex still carries a live edge");
    er.u = c.vmap[er.u];
    er.v = c.vmap[er.v];
    c.g.edges.push_back(er);
  }
  c.g.validate();
  return c;
}

// Reverse the cyclic order at v and flip the signature of every incidence
// there. Loops at v toggle twice and keep their signature. The embedding
// stays the same surface.
void flip_vertex(EmbeddedGraph& g, Vertex v) {
  std::reverse(g.rot[v].begin(), g.rot[v].end());
  for (Dart d : g.rot[v]) g.edges[d >> 1].sig = -g.edges[d >> 1].sig;
}

bool cyclic_match(const std::vector<Dart>& a, const std::vector<Dart>& b) {
  if (a.size() != b.size()) return false;
  if (a.empty()) return true;
  std::vector<Dart> bb(b);
  bb.insert(bb.end(), b.begin(), b.end());
  return std::search(bb.begin(), bb.end(), a.begin(), a.end()) != bb.end();
}

}  // namespace

ContractResult contract_edge(const EmbeddedGraph& g0, EdgeId e, bool keep_parallel) {
  require(0 <= e && e < g0.m(), "edge id out of range");
  require(!g0.is_loop(e), "cannot contract a loop");
  EmbeddedGraph g = g0;
  Vertex a = std::min(g.edges[e].u, g.edges[e].v);
  Vertex b = std::max(g.edges[e].u, g.edges[e].v);
  if (g.sig(e) < 0) flip_vertex(g, b);

  Dart da = g.dart_at(e, a);
  Dart db = EmbeddedGraph::twin(da);
  const std::vector<Dart>& rb = g.rot[b];
  int kb = static_cast<int>(std::find(rb.begin(), rb.end(), db) - rb.begin());
  std::vector<Dart> merged;
  merged.reserve(g.rot[a].size() + rb.size() - 2);
  for (Dart d : g.rot[a]) {
    if (d != da) {
      merged.push_back(d);
      continue;
    }
    for (int i = 1; i < static_cast<int>(rb.size()); ++i)
      merged.push_back(rb[(kb + i) % rb.size()]);
  }
  g.rot[a] = std::move(merged);
  g.rot[b].clear();
  for (EdgeRec& er : g.edges) {
    if (er.u == b) er.u = a;
    if (er.v == b) er.v = a;
  }
  g.terminal[a] = g.terminal[a] || g.terminal[b];

  std::vector<char> dead_e(g.m(), 0), dead_v(g.n(), 0);
  dead_e[e] = 1;
  dead_v[b] = 1;
  if (!keep_parallel) {
    std::map<Vertex, EdgeId> best;
    for (EdgeId f = 0; f < g.m(); ++f) {
      if (dead_e[f] || (g.edges[f].u != a && g.edges[f].v != a)) continue;
      if (g.is_loop(f)) {
        dead_e[f] = 1;
        continue;
      }
      Vertex w = g.other_end(f, a);
      auto [it, fresh] = best.emplace(w, f);
      if (fresh) continue;
      EdgeId old = it->second;
      if (std::make_pair(g.len(f), f) < std::make_pair(g.len(old), old)) {
        dead_e[old] = 1;
        it->second = f;
      } else {
        dead_e[f] = 1;
      }
    }
  }
  Compacted c = compact(g, dead_e, dead_v);
  c.vmap[b] = c.vmap[a];
  return {std::move(c.g), std::move(c.vmap), std::move(c.emap)};
}

ContractResult contract_edge_set(const EmbeddedGraph& g0, const std::vector<EdgeId>& es) {
  ContractResult acc;
  acc.g = g0;
  acc.vmap.resize(g0.n());
  acc.emap.resize(g0.m());
  for (Vertex v = 0; v < g0.n(); ++v) acc.vmap[v] = v;
  for (EdgeId e = 0; e < g0.m(); ++e) acc.emap[e] = e;

  auto compose = [&](const std::vector<Vertex>& vm, const std::vector<EdgeId>& em) {
    for (Vertex& v : acc.vmap) v = vm[v];
    for (EdgeId& e : acc.emap)
      if (e != kNone) e = em[e];
  };

  for (EdgeId e0 : es) {
    require(0 <= e0 && e0 < g0.m(), "edge id out of range");
    EdgeId e = acc.emap[e0];
    if (e == kNone) continue;
    if (acc.g.is_loop(e)) {
      std::vector<char> de(acc.g.m(), 0), dv(acc.g.n(), 0);
      de[e] = 1;
      Compacted c = compact(acc.g, de, dv);
      compose(c.vmap, c.emap);
      acc.g = std::move(c.g);
    } else {
      ContractResult r = contract_edge(acc.g, e, true);
      compose(r.vmap, r.emap);
      acc.g = std::move(r.g);
    }
  }
  return acc;
}

CutResult cut_along(const EmbeddedGraph& g, const std::vector<EdgeId>& cut_edges) {
  std::vector<char> in_cut(g.m(), 0);
  for (EdgeId e : cut_edges) {
    require(0 <= e && e < g.m(), "edge id out of range");
    require(!in_cut[e], "duplicate edge id in cut set");
    in_cut[e] = 1;
  }
  Piece sub = sub_embedding(g, cut_edges);
  require(sub.g.connected(), "cut edges must form a connected subgraph");
  Faces cf = trace_faces(sub.g);
  int nw = static_cast<int>(cf.walks.size());

  int mcut = static_cast<int>(cut_edges.size());
  std::vector<Vertex> vkeep(g.n(), kNone);
  std::vector<char> touched(g.n(), 0);
  for (Vertex v : sub.vmap) touched[v] = 1;
  int nn = 0;
  for (Vertex v = 0; v < g.n(); ++v)
    if (!touched[v]) vkeep[v] = nn++;
  int first_corner = nn;

  std::vector<EdgeId> enew(g.m(), kNone);
  int mm = 0;
  for (EdgeId e = 0; e < g.m(); ++e)
    if (!in_cut[e]) enew[e] = mm++;
  int first_copy = mm;

  std::vector<int> corner_base(nw), copy_base(nw);
  int total = 0;
  for (int w = 0; w < nw; ++w) {
    corner_base[w] = first_corner + total;
    copy_base[w] = first_copy + total;
    total += cf.walks[w].size();
  }
  ensure(total == 2 * mcut, "cut walk lengths fail to cover every cut edge twice");
  nn = first_corner + total;
  mm = first_copy + total;

  // Walk the corners: host vertex, wedge of non-cut darts, arrival sense.
  // A corner keeps one sector of its host vertex, and the whole sector is
  // written in the host's cyclic sense with every signature inherited, so a
  // negative-sense arrival lists the departure copy first and the wedge
  // reversed.
  std::vector<Dart> consumed_by(2 * g.m(), kNone);
  std::vector<Vertex> corner_host(total, kNone);
  std::vector<char> corner_rev(total, 0);
  std::vector<std::vector<Dart>> wedge(total);
  auto host_dart = [&](Dart d) { return 2 * sub.emap[d >> 1] + (d & 1); };
  for (int w = 0; w < nw; ++w) {
    const FaceWalk& walk = cf.walks[w];
    int L = walk.size();
    for (int i = 0; i < L; ++i) {
      int cid = corner_base[w] + i - first_corner;
      Dart c = host_dart(walk.darts[i]);
      int dir = walk.sides[i] * g.sig(c >> 1);
      Dart a = EmbeddedGraph::twin(c);
      corner_host[cid] = g.vertex_of(a);
      corner_rev[cid] = dir < 0;
      Dart cur = a;
      for (;;) {
        cur = dir > 0 ? g.rot_next(cur) : g.rot_prev(cur);
        if (in_cut[cur >> 1]) break;
        ensure(consumed_by[cur] == kNone, "wedge dart claimed by two corners");
        consumed_by[cur] = first_corner + cid;
        wedge[cid].push_back(cur);
      }
      ensure(cur == host_dart(walk.darts[(i + 1) % L]),
             "wedge scan missed the next dart of its cut walk");
    }
  }
  for (Vertex v = 0; v < g.n(); ++v) {
    if (!touched[v]) continue;
    for (Dart d : g.rot[v])
      ensure(in_cut[d >> 1] || consumed_by[d] != kNone, "unconsumed dart at a cut vertex");
  }

  CutResult out;
  EmbeddedGraph& G = out.g;
  G.rot.assign(nn, {});
  G.terminal.assign(nn, 0);
  G.edges.assign(mm, {});
  out.vmap.assign(nn, kNone);
  out.emap.assign(mm, kNone);
  out.is_copy.assign(mm, 0);
  out.is_corner.assign(nn, 0);

  for (Vertex v = 0; v < g.n(); ++v) {
    if (touched[v]) continue;
    Vertex i = vkeep[v];
    out.vmap[i] = v;
    G.terminal[i] = g.terminal[v];
    for (Dart d : g.rot[v]) G.rot[i].push_back(2 * enew[d >> 1] + (d & 1));
  }
  for (EdgeId e = 0; e < g.m(); ++e) {
    if (in_cut[e]) continue;
    auto endpoint = [&](Dart d) {
      return consumed_by[d] != kNone ? consumed_by[d] : vkeep[g.vertex_of(d)];
    };
    EdgeId ne = enew[e];
    G.edges[ne] = {endpoint(2 * e), endpoint(2 * e + 1), g.len(e), g.sig(e)};
    out.emap[ne] = e;
  }
  out.boundary.assign(nw, {});
  for (int w = 0; w < nw; ++w) {
    const FaceWalk& walk = cf.walks[w];
    int L = walk.size();
    for (int i = 0; i < L; ++i) {
      EdgeId he = sub.emap[walk.darts[i] >> 1];
      EdgeId ce = copy_base[w] + i;
      G.edges[ce] = {corner_base[w] + (i + L - 1) % L, corner_base[w] + i, g.len(he),
                     g.sig(he)};
      out.emap[ce] = he;
      out.is_copy[ce] = 1;
      out.boundary[w].push_back(2 * ce);
    }
    for (int i = 0; i < L; ++i) {
      Vertex k = corner_base[w] + i;
      int cid = k - first_corner;
      out.vmap[k] = corner_host[cid];
      out.is_corner[k] = 1;
      G.terminal[k] = g.terminal[corner_host[cid]];
      Dart arrive = 2 * (copy_base[w] + i) + 1;
      Dart depart = 2 * (copy_base[w] + (i + 1) % L);
      if (!corner_rev[cid]) {
        G.rot[k].push_back(arrive);
        for (Dart d : wedge[cid]) G.rot[k].push_back(2 * enew[d >> 1] + (d & 1));
        G.rot[k].push_back(depart);
      } else {
        G.rot[k].push_back(depart);
        for (auto it = wedge[cid].rbegin(); it != wedge[cid].rend(); ++it)
          G.rot[k].push_back(2 * enew[*it >> 1] + (*it & 1));
        G.rot[k].push_back(arrive);
      }
    }
  }
  G.validate();

  // Each boundary chain must bound a face of the cut graph. The face may
  // traverse a copy via either of its darts, so compare edge sequences.
  for (int w = 0; w < nw; ++w) {
    std::vector<EdgeId> B;
    for (Dart d : out.boundary[w]) B.push_back(d >> 1);
    std::vector<EdgeId> R(B.rbegin(), B.rend());
    bool ok = false;
    for (int side = 0; side < 2 && !ok; ++side) {
      std::vector<EdgeId> seq;
      int s0 = 2 * (2 * B[0]) + side;
      int s = s0;
      do {
        seq.push_back(s >> 2);
        Dart d = s >> 1;
        int s2 = ((s & 1) ? -1 : 1) * G.sig(d >> 1);
        Dart t = EmbeddedGraph::twin(d);
        s = 2 * (s2 > 0 ? G.rot_next(t) : G.rot_prev(t)) + (s2 < 0);
      } while (s != s0 && seq.size() <= B.size());
      ok = s == s0 && (cyclic_match(seq, B) || cyclic_match(seq, R));
    }
    ensure(ok, "cut boundary does not bound a face");
  }
  return out;
}

void orient(EmbeddedGraph& g) {
  std::vector<int> flip(g.n(), kNone);
  std::vector<Vertex> stack;
  for (Vertex r = 0; r < g.n(); ++r) {
    if (flip[r] != kNone) continue;
    flip[r] = 0;
    stack.push_back(r);
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      for (Dart d : g.rot[v]) {
        Vertex w = g.head_of(d);
        int want = flip[v] ^ (g.sig(EmbeddedGraph::edge_of(d)) < 0 ? 1 : 0);
        if (flip[w] == kNone) {
          flip[w] = want;
          stack.push_back(w);
        } else {
          require(flip[w] == want, "embedding is not orientable");
        }
      }
    }
  }
  for (Vertex v = 0; v < g.n(); ++v)
    if (flip[v]) flip_vertex(g, v);
  g.validate();
}

}  // namespace gptas

#include "gptas/embedded_graph.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <array>
#include <cmath>

namespace gptas {

Vertex EmbeddedGraph::other_end(EdgeId e, Vertex v) const {
  const EdgeRec& er = edges[e];
  require(er.u == v || er.v == v, fmt::format("vertex {} not on edge {}", v, e));
  return er.u == v ? er.v : er.u;
}

Dart EmbeddedGraph::dart_at(EdgeId e, Vertex v) const {
  const EdgeRec& er = edges[e];
  require(er.u == v || er.v == v, fmt::format("vertex {} not on edge {}", v, e));
  return er.u == v ? 2 * e : 2 * e + 1;
}

Dart EmbeddedGraph::rot_next(Dart d) const {
  const std::vector<Dart>& r = rot[vertex_of(d)];
  int i = pos_[d] + 1;
  return r[i == static_cast<int>(r.size()) ? 0 : i];
}

Dart EmbeddedGraph::rot_prev(Dart d) const {
  const std::vector<Dart>& r = rot[vertex_of(d)];
  int i = pos_[d];
  return r[(i == 0 ? r.size() : i) - 1];
}

void EmbeddedGraph::validate() {
  require(n() >= 1, "graph needs at least one vertex");
  if (terminal.empty()) terminal.assign(n(), 0);
  require(static_cast<int>(terminal.size()) == n(), "terminal flag count differs from n");
  for (int e = 0; e < m(); ++e) {
    const EdgeRec& er = edges[e];
    require(0 <= er.u && er.u < n() && 0 <= er.v && er.v < n(),
            fmt::format("edge {} has an endpoint out of range", e));
    require(std::isfinite(er.length) && er.length >= 0.0,
            fmt::format("edge {} needs a finite nonnegative length", e));
    require(er.sig == 1 || er.sig == -1,
            fmt::format("edge {} needs signature +1 or -1", e));
  }
  pos_.assign(2 * m(), kNone);
  for (Vertex v = 0; v < n(); ++v) {
    for (int i = 0; i < static_cast<int>(rot[v].size()); ++i) {
      Dart d = rot[v][i];
      require(0 <= d && d < 2 * m(), fmt::format("dart {} out of range", d));
      require(pos_[d] == kNone, fmt::format("dart {} listed twice", d));
      require(vertex_of(d) == v,
              fmt::format("dart {} listed at vertex {} instead of {}", d, v, vertex_of(d)));
      pos_[d] = i;
    }
  }
  for (Dart d = 0; d < 2 * m(); ++d)
    require(pos_[d] != kNone, fmt::format("dart {} missing from the rotations", d));
}

bool EmbeddedGraph::connected() const {
  if (n() == 0) return false;
  std::vector<char> seen(n(), 0);
  std::vector<Vertex> stack{0};
  seen[0] = 1;
  int cnt = 1;
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    for (Dart d : rot[v]) {
      Vertex w = head_of(d);
      if (!seen[w]) {
        seen[w] = 1;
        ++cnt;
        stack.push_back(w);
      }
    }
  }
  return cnt == n();
}

std::vector<Vertex> EmbeddedGraph::terminal_list() const {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < n(); ++v)
    if (terminal[v]) out.push_back(v);
  return out;
}

double EmbeddedGraph::total_length() const {
  double total = 0.0;
  for (int e = 0; e < m(); ++e) total += edges[e].length;
  return total;
}

Faces trace_faces(const EmbeddedGraph& g) {
  const int nd = 2 * g.m();
  Faces out;
  if (nd == 0) {
    require(g.n() == 1, "facial walks of an edgeless graph need a single vertex");
    out.walks.push_back(FaceWalk{});
    return out;
  }

  auto succ = [&](int id) {
    Dart d = id >> 1;
    int s2 = ((id & 1) ? -1 : 1) * g.sig(d >> 1);
    Dart t = EmbeddedGraph::twin(d);
    Dart d2 = s2 > 0 ? g.rot_next(t) : g.rot_prev(t);
    return 2 * d2 + (s2 < 0);
  };
  auto mirror = [&](int id) {
    Dart d = id >> 1;
    int s2 = ((id & 1) ? 1 : -1) * g.sig(d >> 1);
    return 2 * EmbeddedGraph::twin(d) + (s2 < 0);
  };
  auto key = [&](int id) { return ((id & 1) ? nd : 0) + (id >> 1); };

  std::vector<int> orbit_id(2 * nd, kNone);
  std::vector<std::vector<int>> orbits;
  for (int s0 = 0; s0 < 2 * nd; ++s0) {
    if (orbit_id[s0] != kNone) continue;
    std::vector<int> orb;
    int s = s0;
    while (orbit_id[s] == kNone) {
      orbit_id[s] = static_cast<int>(orbits.size());
      orb.push_back(s);
      s = succ(s);
    }
    ensure(s == s0, "face successor failed to close its orbit");
    orbits.push_back(std::move(orb));
  }

  int cnt = static_cast<int>(orbits.size());
  ensure(cnt % 2 == 0, "odd face orbit count");
  std::vector<int> min_pos(cnt, 0);
  std::vector<int> partner(cnt, kNone);
  for (int i = 0; i < cnt; ++i) {
    const std::vector<int>& orb = orbits[i];
    for (int p = 1; p < static_cast<int>(orb.size()); ++p)
      if (key(orb[p]) < key(orb[min_pos[i]])) min_pos[i] = p;
    partner[i] = orbit_id[mirror(orb[0])];
    ensure(partner[i] != i, "facial orbit equal to its own mirror");
  }
  for (int i = 0; i < cnt; ++i)
    ensure(partner[partner[i]] == i, "face orbit mirror pairing broke");

  std::vector<int> chosen;
  for (int i = 0; i < cnt; ++i) {
    int j = partner[i];
    if (i < j) chosen.push_back(key(orbits[i][min_pos[i]]) < key(orbits[j][min_pos[j]]) ? i : j);
  }
  std::sort(chosen.begin(), chosen.end(), [&](int a, int b) {
    return key(orbits[a][min_pos[a]]) < key(orbits[b][min_pos[b]]);
  });

  out.walk_of_state.assign(2 * nd, kNone);
  out.pos_of_state.assign(2 * nd, kNone);
  for (int w = 0; w < static_cast<int>(chosen.size()); ++w) {
    const std::vector<int>& orb = orbits[chosen[w]];
    int L = static_cast<int>(orb.size());
    FaceWalk walk;
    walk.darts.reserve(L);
    walk.sides.reserve(L);
    for (int p = 0; p < L; ++p) {
      int id = orb[(min_pos[chosen[w]] + p) % L];
      walk.darts.push_back(id >> 1);
      walk.sides.push_back((id & 1) ? -1 : 1);
      out.walk_of_state[id] = w;
      out.pos_of_state[id] = p;
    }
    out.walks.push_back(std::move(walk));
  }
  return out;
}

int euler_genus(const EmbeddedGraph& g) {
  require(g.connected(), "euler genus needs a connected graph");
  int f = static_cast<int>(trace_faces(g).walks.size());
  int eg = 2 - g.n() + g.m() - f;
  ensure(eg >= 0, "negative euler genus");
  return eg;
}

EmbeddedGraph dual(const EmbeddedGraph& g) {
  require(g.connected(), "dual needs a connected graph");
  Faces fs = trace_faces(g);
  int f = static_cast<int>(fs.walks.size());

  // the two chosen states of every edge, lower encoding first
  std::vector<std::array<int, 2>> st(g.m(), {kNone, kNone});
  for (int w = 0; w < f; ++w) {
    const FaceWalk& walk = fs.walks[w];
    for (int i = 0; i < walk.size(); ++i) {
      int id = 2 * walk.darts[i] + (walk.sides[i] < 0);
      EdgeId e = walk.darts[i] >> 1;
      if (st[e][0] == kNone) {
        st[e][0] = id;
      } else {
        ensure(st[e][1] == kNone, "edge appears more than twice on chosen walks");
        st[e][1] = id;
      }
    }
  }

  EmbeddedGraph d;
  d.rot.assign(f, {});
  d.terminal.assign(f, 0);
  d.edges.assign(g.m(), {});
  for (EdgeId e = 0; e < g.m(); ++e) {
    ensure(st[e][1] != kNone, "edge missing from chosen walks");
    if (st[e][0] > st[e][1]) std::swap(st[e][0], st[e][1]);
    int lo = st[e][0];
    int s2 = ((lo & 1) ? -1 : 1) * g.sig(e);
    int alpha = 2 * EmbeddedGraph::twin(lo >> 1) + (s2 < 0);
    d.edges[e].u = fs.walk_of_state[st[e][0]];
    d.edges[e].v = fs.walk_of_state[st[e][1]];
    d.edges[e].length = g.len(e);
    d.edges[e].sig = alpha == st[e][1] ? 1 : -1;
  }
  for (int w = 0; w < f; ++w) {
    const FaceWalk& walk = fs.walks[w];
    for (int i = 0; i < walk.size(); ++i) {
      int id = 2 * walk.darts[i] + (walk.sides[i] < 0);
      EdgeId e = walk.darts[i] >> 1;
      d.rot[w].push_back(2 * e + (id == st[e][0] ? 0 : 1));
    }
  }
  d.validate();
  return d;
}

double canonical_length(const EmbeddedGraph& g, std::vector<EdgeId> ids) {
  std::sort(ids.begin(), ids.end());
  double total = 0.0;
  for (std::size_t i = 0; i < ids.size();) {
    require(0 <= ids[i] && ids[i] < g.m(), "edge id out of range");
    std::size_t j = i;
    while (j < ids.size() && ids[j] == ids[i]) ++j;
    total += static_cast<double>(j - i) * g.len(ids[i]);
    i = j;
  }
  return total;
}

std::pair<int, std::vector<int>> components(const EmbeddedGraph& g) {
  std::vector<int> comp(g.n(), kNone);
  int cnt = 0;
  for (Vertex root = 0; root < g.n(); ++root) {
    if (comp[root] != kNone) continue;
    comp[root] = cnt;
    std::vector<Vertex> stack{root};
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      for (Dart d : g.rot[v]) {
        Vertex w = g.head_of(d);
        if (comp[w] == kNone) {
          comp[w] = cnt;
          stack.push_back(w);
        }
      }
    }
    ++cnt;
  }
  return {cnt, std::move(comp)};
}

Piece sub_embedding(const EmbeddedGraph& g, const std::vector<EdgeId>& es) {
  std::vector<char> in(g.m(), 0);
  for (EdgeId e : es) {
    require(0 <= e && e < g.m(), "edge id out of range");
    require(!in[e], "duplicate edge id");
    in[e] = 1;
  }
  Piece p;
  std::vector<EdgeId> enew(g.m(), kNone);
  for (EdgeId e = 0; e < g.m(); ++e) {
    if (!in[e]) continue;
    enew[e] = static_cast<int>(p.emap.size());
    p.emap.push_back(e);
  }
  require(!p.emap.empty(), "empty edge set");
  std::vector<Vertex> vnew(g.n(), kNone);
  for (Vertex v = 0; v < g.n(); ++v) {
    bool touched = false;
    for (Dart d : g.rot[v]) touched = touched || in[d >> 1];
    if (!touched) continue;
    vnew[v] = static_cast<int>(p.vmap.size());
    p.vmap.push_back(v);
  }
  int nn = static_cast<int>(p.vmap.size());
  p.g.rot.assign(nn, {});
  p.g.terminal.assign(nn, 0);
  for (int i = 0; i < nn; ++i) {
    Vertex v = p.vmap[i];
    p.g.terminal[i] = g.terminal[v];
    for (Dart d : g.rot[v])
      if (in[d >> 1]) p.g.rot[i].push_back(2 * enew[d >> 1] + (d & 1));
  }
  for (EdgeId e : p.emap) {
    EdgeRec er = g.edges[e];
    er.u = vnew[er.u];
    er.v = vnew[er.v];
    p.g.edges.push_back(er);
  }
  p.g.validate();
  return p;
}

std::vector<Piece> split_components(const EmbeddedGraph& g) {
  auto [cnt, comp] = components(g);
  std::vector<Piece> out(cnt);
  std::vector<Vertex> vnew(g.n(), kNone);
  for (Vertex v = 0; v < g.n(); ++v) {
    Piece& p = out[comp[v]];
    vnew[v] = static_cast<int>(p.vmap.size());
    p.vmap.push_back(v);
  }
  std::vector<EdgeId> enew(g.m(), kNone);
  for (EdgeId e = 0; e < g.m(); ++e) {
    Piece& p = out[comp[g.edges[e].u]];
    enew[e] = static_cast<int>(p.emap.size());
    p.emap.push_back(e);
  }
  for (int c = 0; c < cnt; ++c) {
    Piece& p = out[c];
    int nn = static_cast<int>(p.vmap.size());
    p.g.rot.assign(nn, {});
    p.g.terminal.assign(nn, 0);
    for (int i = 0; i < nn; ++i) {
      Vertex v = p.vmap[i];
      p.g.terminal[i] = g.terminal[v];
      for (Dart d : g.rot[v]) p.g.rot[i].push_back(2 * enew[d >> 1] + (d & 1));
    }
    for (EdgeId e : p.emap) {
      EdgeRec er = g.edges[e];
      er.u = vnew[er.u];
      er.v = vnew[er.v];
      p.g.edges.push_back(er);
    }
    p.g.validate();
  }
  return out;
}

}  // namespace gptas

#include "gptas/mortar.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <queue>
#include <utility>

#include <fmt/format.h>

#include "gptas/metrics.hpp"
#include "gptas/util.hpp"

namespace gptas {

namespace {

std::vector<Vertex> chain_vertices(const EmbeddedGraph& g, const std::vector<Dart>& chain) {
  std::vector<Vertex> out;
  if (chain.empty()) return out;
  out.reserve(chain.size() + 1);
  out.push_back(g.vertex_of(chain[0]));
  for (Dart d : chain) out.push_back(g.head_of(d));
  return out;
}

// Dijkstra as in sssp, except that tentative distances beyond cap are not
// pushed. Distances at most cap come out exact with the same canonical
// parents; kInf only means farther than cap.
SsspResult sssp_capped(const EmbeddedGraph& g, const std::vector<Vertex>& sources, double cap) {
  require(!sources.empty(), "need at least one source");
  SsspResult r;
  r.dist.assign(g.n(), kInf);
  r.parent.assign(g.n(), kNone);
  using Item = std::pair<double, Vertex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (Vertex s : sources) {
    require(0 <= s && s < g.n(), "source out of range");
    if (r.dist[s] == 0.0) continue;
    r.dist[s] = 0.0;
    pq.push({0.0, s});
  }
  std::vector<char> done(g.n(), 0);
  while (!pq.empty()) {
    auto [dv, v] = pq.top();
    pq.pop();
    if (done[v]) continue;
    done[v] = 1;
    for (Dart d : g.rot[v]) {
      Vertex w = g.head_of(d);
      double nd = dv + g.len(EmbeddedGraph::edge_of(d));
      if (nd > cap) continue;
      Dart back = EmbeddedGraph::twin(d);
      if (nd < r.dist[w]) {
        r.dist[w] = nd;
        r.parent[w] = back;
        pq.push({nd, w});
      } else if (!done[w] && nd == r.dist[w] && r.parent[w] != kNone && back < r.parent[w]) {
        r.parent[w] = back;
      }
    }
  }
  return r;
}

// Forest path as chained darts from the nearest source to v.
std::vector<Dart> path_darts(const SsspResult& r, const EmbeddedGraph& g, Vertex v) {
  require(0 <= v && v < g.n() && r.dist[v] < kInf, "vertex unreachable");
  std::vector<Dart> out;
  while (r.parent[v] != kNone) {
    Dart d = r.parent[v];
    out.push_back(EmbeddedGraph::twin(d));
    v = g.head_of(d);
    ensure(out.size() <= static_cast<size_t>(g.n()), "parent chain does not terminate");
  }
  std::reverse(out.begin(), out.end());
  return out;
}

// Worst t-short violation over the arcs of a closed walk. Both directions
// around the walk are available, so an arc's along-distance is the shorter
// of the two ways between its positions.
std::optional<StretchWitness> closed_walk_violation(const EmbeddedGraph& g,
                                                    const std::vector<Dart>& walk, double t) {
  require(t >= 0.0, "stretch parameter must be nonnegative");
  const int L = static_cast<int>(walk.size());
  require(L > 0, "walk must be nonempty");
  std::vector<Vertex> vs = chain_vertices(g, walk);
  require(vs[L] == vs[0], "walk must close");
  std::vector<double> pref(L + 1, 0.0);
  for (int i = 0; i < L; ++i) pref[i + 1] = pref[i] + g.len(EmbeddedGraph::edge_of(walk[i]));

  std::optional<StretchWitness> worst;
  double worst_excess = 0.0;
  for (int i = 0; i < L; ++i) {
    SsspResult r = sssp_capped(g, {vs[i]}, pref[L] - pref[i]);
    for (int j = i + 1; j <= L; ++j) {
      if (i == 0 && j == L) continue;
      double forward = pref[j] - pref[i];
      double along = std::min(forward, pref[L] - forward);
      double metric = r.dist[vs[j]];
      if (metric == kInf) continue;  // capped out, so the metric exceeds the arc
      if (approx_le(along, (1.0 + t) * metric)) continue;
      double excess = along - (1.0 + t) * metric;
      if (!worst || excess > worst_excess) {
        worst_excess = excess;
        worst = StretchWitness{vs[i], vs[j], along, metric};
      }
    }
  }
  return worst;
}

bool matches_face(const Faces& f, const std::vector<Dart>& w) {
  for (int s = 0; s < 2; ++s) {
    int st = 2 * w[0] + s;
    int fw = f.walk_of_state[st];
    if (fw == kNone) continue;
    const std::vector<Dart>& darts = f.walks[fw].darts;
    if (darts.size() != w.size()) continue;
    int pos = f.pos_of_state[st];
    bool ok = true;
    for (size_t i = 0; i < w.size() && ok; ++i)
      ok = darts[(pos + i) % darts.size()] == w[i];
    if (ok) return true;
  }
  return false;
}

// Whether w, in either traversal direction, is a facial walk of g.
bool is_facial_walk(const EmbeddedGraph& g, const std::vector<Dart>& w) {
  if (w.empty()) return false;
  Faces f = trace_faces(g);
  if (matches_face(f, w)) return true;
  std::vector<Dart> rev(w.size());
  for (size_t i = 0; i < w.size(); ++i) rev[i] = EmbeddedGraph::twin(w[w.size() - 1 - i]);
  return matches_face(f, rev);
}

// component id -> its single boundary walk
std::vector<int> walk_per_comp(const CutResult& cut, const std::vector<int>& comp_of, int ncomp) {
  ensure(static_cast<int>(cut.boundary.size()) == ncomp, "cut sides and walks disagree");
  std::vector<int> w(ncomp, kNone);
  for (int i = 0; i < ncomp; ++i) {
    int k = comp_of[cut.g.vertex_of(cut.boundary[i][0])];
    ensure(w[k] == kNone, "cut sides and walks disagree");
    w[k] = i;
  }
  return w;
}

// Boundary walk rebased into one split component, dart parity preserved.
std::vector<Dart> rebase_walk(const CutResult& cut, const Piece& part,
                              const std::vector<Dart>& bwalk) {
  std::vector<EdgeId> cut_to_part(cut.g.m(), kNone);
  for (EdgeId e = 0; e < part.g.m(); ++e) cut_to_part[part.emap[e]] = e;
  std::vector<Dart> walk(bwalk.size());
  for (size_t i = 0; i < bwalk.size(); ++i) {
    EdgeId pe = cut_to_part[EmbeddedGraph::edge_of(bwalk[i])];
    ensure(pe != kNone, "boundary copy outside its cell");
    walk[i] = 2 * pe + (bwalk[i] & 1);
  }
  return walk;
}

// True when a cut boundary walk retraces the reference walk, in either
// cyclic direction. That flags the outer side of a cut: the face the
// reference walk bounded comes back as an all-copy component whose walk
// repeats it verbatim, and the sense of that walk is a convention of the
// face trace rather than anything geometric. Copies lose dart parity, so
// darts are compared through their host edge and endpoints.
bool retraces_either(const EmbeddedGraph& host, const std::vector<Dart>& ref,
                     const CutResult& cut, const std::vector<Dart>& bwalk) {
  const int L = static_cast<int>(ref.size());
  if (static_cast<int>(bwalk.size()) != L) return false;
  auto same = [&](Dart cd, Dart hd) {
    return cut.emap[EmbeddedGraph::edge_of(cd)] == EmbeddedGraph::edge_of(hd) &&
           cut.vmap[cut.g.vertex_of(cd)] == host.vertex_of(hd) &&
           cut.vmap[cut.g.head_of(cd)] == host.head_of(hd);
  };
  auto matches = [&](const std::vector<Dart>& want) {
    for (int off = 0; off < L; ++off) {
      if (!same(bwalk[off], want[0])) continue;
      bool all = true;
      for (int i = 1; i < L && all; ++i) all = same(bwalk[(off + i) % L], want[i]);
      if (all) return true;
    }
    return false;
  };
  if (matches(ref)) return true;
  std::vector<Dart> rev(L);
  for (int i = 0; i < L; ++i) rev[i] = EmbeddedGraph::twin(ref[L - 1 - i]);
  return matches(rev);
}

// A piece still waiting to be carved. hole is a closed, vertex-simple facial
// walk of h bounding an empty face; every edge on it is already mortar, and
// every terminal of h lies on it. The maps point back into the planar graph.
struct WorkPiece {
  EmbeddedGraph h;
  std::vector<Dart> hole;
  std::vector<Vertex> vmap;
  std::vector<EdgeId> emap;
};

// A strip cut off a piece: s_walk is the span along the old boundary
// (epsilon-short), n_walk the copy of the chord (0-short). A terminal piece
// is consumed whole as a closed strip, with the hole as s_walk and a single
// anchor vertex standing in for the chord.
struct StripJob {
  EmbeddedGraph h;
  std::vector<Vertex> vmap;
  std::vector<EdgeId> emap;
  std::vector<Dart> s_walk;
  std::vector<Dart> n_walk;
  Vertex n_anchor = kNone;
  bool closed = false;
};

struct Builder {
  DerivedParams dp;
  double eps;
  std::vector<char> mortar;
  std::vector<char> supercol;
  std::vector<Brick> bricks;
  MortarStats stats;
  std::deque<WorkPiece> queue;

  // Longest epsilon-short arc of the hole starting at cursor c, with its
  // length. Each extension runs one capped Dijkstra from the new endpoint;
  // shorter prefixes were checked when they were added, so the first failing
  // extension is final.
  std::pair<int, double> grow_span(const WorkPiece& p, int c) const {
    const EmbeddedGraph& h = p.h;
    const int len = static_cast<int>(p.hole.size());
    std::vector<double> apref{0.0};
    std::vector<Vertex> av{h.vertex_of(p.hole[c])};
    int t = 0;
    while (t < len - 1) {
      Dart d = p.hole[(c + t) % len];
      apref.push_back(apref.back() + h.len(EmbeddedGraph::edge_of(d)));
      av.push_back(h.head_of(d));
      const int nt = t + 1;
      SsspResult r = sssp_capped(h, {av[nt]}, apref[nt]);
      bool ok = true;
      for (int i = 0; i < nt && ok; ++i) {
        double along = apref[nt] - apref[i];
        double metric = r.dist[av[i]];
        if (metric == kInf) continue;  // beyond the cap, hence beyond the arc
        ok = approx_le(along, (1.0 + eps) * metric);
      }
      if (!ok) break;
      t = nt;
    }
    return {t, apref[t]};
  }

  void run_piece(WorkPiece p) {
    const int len = static_cast<int>(p.hole.size());
    int start = 0;
    for (int i = 1; i < len; ++i)
      if (p.h.vertex_of(p.hole[i]) < p.h.vertex_of(p.hole[start])) start = i;
    std::rotate(p.hole.begin(), p.hole.begin() + start, p.hole.end());

    // A piece with at most two faces is the hole plus hanging trees. Every
    // path between hole vertices runs along the hole itself, so the whole
    // piece is one strip with a closed, unconditionally epsilon-short south.
    if (static_cast<int>(trace_faces(p.h).walks.size()) <= 2) {
      ++stats.terminal_strips;
      terminal_strip(std::move(p));
      return;
    }

    for (int c = 0; c < len; ++c) {
      auto [t, slen] = grow_span(p, c);
      if (t < 1) continue;
      SsspResult r = sssp_capped(p.h, {p.h.vertex_of(p.hole[c])}, slen);
      if (execute_trimmed_peel(p, c, t, r)) return;
    }

    // Every chord hugs the boundary, so there is nothing to cut along. A
    // boundary that is epsilon-short all around makes a valid strip; one
    // that is not gets consumed anyway, which is the one place a brick can
    // come out with a stretched south.
    if (closed_walk_violation(p.h, p.hole, eps)) {
      ++stats.forced_strips;
    } else {
      ++stats.terminal_strips;
    }
    terminal_strip(std::move(p));
  }

  // Trims the chord to its first window clear of the grown arc and peels
  // there. The shared prefix runs along the arc, so the window starts on it;
  // the window ends at the next arc vertex and strictly between the two the
  // path stays off the arc. Returns false when the chord never leaves the
  // arc, which leaves nothing to peel.
  bool execute_trimmed_peel(WorkPiece& p, int c, int t, const SsspResult& r) {
    const EmbeddedGraph& h = p.h;
    const int len = static_cast<int>(p.hole.size());
    std::vector<Dart> path = path_darts(r, h, h.vertex_of(p.hole[(c + t) % len]));

    std::vector<int> pos_arc(h.n(), kNone);
    std::vector<char> arc_edge(h.m(), 0);
    for (int q = 0; q <= t; ++q) pos_arc[h.vertex_of(p.hole[(c + q) % len])] = q;
    for (int q = 0; q < t; ++q) arc_edge[EmbeddedGraph::edge_of(p.hole[(c + q) % len])] = 1;

    const int k = static_cast<int>(path.size());
    std::vector<Vertex> pv = chain_vertices(h, path);
    int i = 0;
    while (i < k && arc_edge[EmbeddedGraph::edge_of(path[i])]) ++i;
    if (i == k) return false;
    int j = i + 1;
    while (pos_arc[pv[j]] == kNone) ++j;
    int px = pos_arc[pv[i]];
    int py = pos_arc[pv[j]];
    ensure(px != kNone && px < py, "chord window out of order");

    std::vector<EdgeId> chord;
    for (int q = i; q < j; ++q) chord.push_back(EmbeddedGraph::edge_of(path[q]));
    double nlen = 0.0, slen = 0.0;
    for (EdgeId e : chord) nlen += h.len(e);
    for (int q = px; q < py; ++q) slen += h.len(EmbeddedGraph::edge_of(p.hole[(c + q) % len]));
    if (approx_lt(nlen, slen)) {
      ++stats.peels;
    } else {
      ++stats.flat_peels;
    }
    peel(p, (c + px) % len, py - px, chord);
    return true;
  }

  // Cuts the piece open along the whole hole plus the chord. The hole face
  // comes out as the component retracing the hole and is dropped; the
  // components carrying span copies are strips; every other component is a
  // smaller piece whose fresh boundary face becomes its hole.
  void peel(WorkPiece& p, int c, int t, const std::vector<EdgeId>& chord) {
    EmbeddedGraph& h = p.h;
    const int len = static_cast<int>(p.hole.size());
    std::vector<char> in_s(h.m(), 0), in_n(h.m(), 0), in_cut(h.m(), 0);
    for (int q = 0; q < t; ++q) in_s[EmbeddedGraph::edge_of(p.hole[(c + q) % len])] = 1;
    for (EdgeId e : chord) {
      ensure(!in_s[e], "chord runs along its own span");
      in_n[e] = 1;
    }
    for (Dart d : p.hole) in_cut[EmbeddedGraph::edge_of(d)] = 1;
    for (EdgeId e : chord) in_cut[e] = 1;
    std::vector<EdgeId> cut_ids;
    for (EdgeId e = 0; e < h.m(); ++e)
      if (in_cut[e]) cut_ids.push_back(e);

    CutResult cut = cut_along(h, cut_ids);
    auto [ncomp, comp_of] = components(cut.g);
    std::vector<Piece> parts = split_components(cut.g);
    std::vector<int> wpc = walk_per_comp(cut, comp_of, ncomp);

    for (EdgeId e : chord) mortar[p.emap[e]] = 1;

    // The hole face comes back as a bare component retracing the hole. With
    // nothing on either side the retrace can come round in either sense and
    // the two cells are interchangeable, so the first match is the one
    // dropped.
    int outer = kNone;
    for (int comp = 0; comp < ncomp && outer == kNone; ++comp) {
      ensure(wpc[comp] != kNone, "cell without a boundary walk");
      bool bare = true;
      for (EdgeId e = 0; e < parts[comp].g.m() && bare; ++e)
        bare = cut.is_copy[parts[comp].emap[e]];
      if (bare && retraces_either(h, p.hole, cut, cut.boundary[wpc[comp]])) outer = comp;
    }
    ensure(outer != kNone, "cut failed to expose its outer side");
    ++stats.dropped_components;

    for (int comp = 0; comp < ncomp; ++comp) {
      if (comp == outer) continue;
      Piece& part = parts[comp];
      bool has_span = false;
      for (EdgeId e = 0; e < part.g.m() && !has_span; ++e) {
        EdgeId ce = part.emap[e];
        has_span = cut.is_copy[ce] && in_s[cut.emap[ce]];
      }
      ensure(wpc[comp] != kNone, "cell without a boundary walk");
      if (has_span) {
        make_strip(p, cut, part, cut.boundary[wpc[comp]], in_s, in_n);
      } else {
        requeue(p, cut, part, cut.boundary[wpc[comp]]);
      }
    }
  }

  void make_strip(const WorkPiece& p, const CutResult& cut, Piece& part,
                  const std::vector<Dart>& bwalk, const std::vector<char>& in_s,
                  const std::vector<char>& in_n) {
    std::vector<Dart> walk = rebase_walk(cut, part, bwalk);
    const int b = static_cast<int>(walk.size());
    std::vector<char> lab(b);
    for (int i = 0; i < b; ++i) {
      EdgeId he = cut.emap[EmbeddedGraph::edge_of(bwalk[i])];
      ensure(in_s[he] || in_n[he], "strip boundary carries a stray edge");
      lab[i] = in_s[he] ? 'S' : 'N';
    }
    int sruns = 0, nruns = 0, s0 = kNone;
    for (int i = 0; i < b; ++i) {
      if (lab[i] == lab[(i + b - 1) % b]) continue;
      if (lab[i] == 'S') {
        ++sruns;
        s0 = i;
      } else {
        ++nruns;
      }
    }
    ensure(sruns == 1 && nruns == 1, "strip boundary is not one span and one chord");
    std::rotate(walk.begin(), walk.begin() + s0, walk.end());
    std::rotate(lab.begin(), lab.begin() + s0, lab.end());
    int scnt = 0;
    while (scnt < b && lab[scnt] == 'S') ++scnt;

    StripJob job;
    job.s_walk.assign(walk.begin(), walk.begin() + scnt);
    job.n_walk.assign(walk.begin() + scnt, walk.end());
    job.vmap.resize(part.g.n());
    for (Vertex v = 0; v < part.g.n(); ++v) job.vmap[v] = p.vmap[cut.vmap[part.vmap[v]]];
    job.emap.resize(part.g.m());
    for (EdgeId e = 0; e < part.g.m(); ++e) job.emap[e] = p.emap[cut.emap[part.emap[e]]];
    job.h = std::move(part.g);
    process_strip(std::move(job));
  }

  void requeue(const WorkPiece& p, const CutResult& cut, Piece& part,
               const std::vector<Dart>& bwalk) {
    WorkPiece np;
    np.hole = rebase_walk(cut, part, bwalk);
    std::vector<Vertex> bases;
    for (Dart d : np.hole) bases.push_back(part.g.vertex_of(d));
    std::sort(bases.begin(), bases.end());
    ensure(std::adjacent_find(bases.begin(), bases.end()) == bases.end(),
           "peel leaves a revisiting boundary");
    np.vmap.resize(part.g.n());
    for (Vertex v = 0; v < part.g.n(); ++v) np.vmap[v] = p.vmap[cut.vmap[part.vmap[v]]];
    np.emap.resize(part.g.m());
    for (EdgeId e = 0; e < part.g.m(); ++e) np.emap[e] = p.emap[cut.emap[part.emap[e]]];
    np.h = std::move(part.g);
    queue.push_back(std::move(np));
  }

  void terminal_strip(WorkPiece p) {
    StripJob job;
    job.s_walk = p.hole;
    job.n_anchor = p.h.vertex_of(p.hole[0]);
    job.closed = true;
    job.vmap = std::move(p.vmap);
    job.emap = std::move(p.emap);
    job.h = std::move(p.h);
    process_strip(std::move(job));
  }

  // Subdivides a strip into bricks. Marks are placed greedily along the
  // south so that between consecutive marks the south stays within epsilon
  // times the distance to the north; columns are the shortest-path forest
  // paths at the marks, and every stride-th mark in the cheapest residue
  // class becomes a supercolumn. Cutting along south, north and the chosen
  // columns leaves one cell per brick.
  void process_strip(StripJob job) {
    const EmbeddedGraph& h = job.h;
    ensure(h.connected(), "strip must be connected");
    ensure(euler_genus(h) == 0, "strip must be planar");
    const int slen = static_cast<int>(job.s_walk.size());
    std::vector<Vertex> sv = chain_vertices(h, job.s_walk);
    std::vector<double> spref(slen + 1, 0.0);
    for (int q = 0; q < slen; ++q)
      spref[q + 1] = spref[q] + h.len(EmbeddedGraph::edge_of(job.s_walk[q]));
    std::vector<Vertex> nsrc;
    if (job.closed) {
      nsrc.push_back(job.n_anchor);
    } else {
      nsrc = chain_vertices(h, job.n_walk);
    }
    SsspResult dn = sssp(h, nsrc);

    std::vector<int> marks{0};
    for (int q = 1; q < slen; ++q) {
      double d = dn.dist[sv[q]];
      if (d == kInf) continue;
      if (!approx_lt(spref[q] - spref[marks.back()], eps * d)) marks.push_back(q);
    }
    const int nmarks = static_cast<int>(marks.size());
    std::vector<std::vector<EdgeId>> cols(nmarks);
    std::vector<double> clen(nmarks, 0.0);
    for (int i = 0; i < nmarks; ++i) {
      cols[i] = sssp_path_edges(dn, h, sv[marks[i]]);
      for (EdgeId e : cols[i]) clen[i] += h.len(e);
    }
    int rbest = 0;
    double cbest = kInf;
    for (int r = 0; r < dp.stride; ++r) {
      double tot = 0.0;
      for (int i = r; i < nmarks; i += dp.stride) tot += clen[i];
      if (tot < cbest) {
        cbest = tot;
        rbest = r;
      }
    }

    std::vector<char> in_s(h.m(), 0), in_n(h.m(), 0), in_sc(h.m(), 0);
    for (Dart d : job.s_walk) in_s[EmbeddedGraph::edge_of(d)] = 1;
    for (Dart d : job.n_walk) in_n[EmbeddedGraph::edge_of(d)] = 1;
    for (int i = rbest; i < nmarks; i += dp.stride)
      for (EdgeId e : cols[i])
        if (!in_s[e] && !in_n[e]) in_sc[e] = 1;
    std::vector<EdgeId> cutset;
    for (EdgeId e = 0; e < h.m(); ++e)
      if (in_s[e] || in_n[e] || in_sc[e]) cutset.push_back(e);

    CutResult bcut = cut_along(h, cutset);
    auto [ncomp, comp_of] = components(bcut.g);
    std::vector<Piece> parts = split_components(bcut.g);
    std::vector<int> wpc = walk_per_comp(bcut, comp_of, ncomp);

    std::vector<Dart> sdart_of(h.m(), kNone);
    for (Dart d : job.s_walk) sdart_of[EmbeddedGraph::edge_of(d)] = d;

    std::vector<Dart> ref = job.s_walk;
    if (!job.closed) ref.insert(ref.end(), job.n_walk.begin(), job.n_walk.end());
    int outer = kNone;
    for (int comp = 0; comp < ncomp && outer == kNone; ++comp) {
      ensure(wpc[comp] != kNone, "cell without a boundary walk");
      bool bare = true;
      for (EdgeId e = 0; e < parts[comp].g.m() && bare; ++e)
        bare = bcut.is_copy[parts[comp].emap[e]];
      if (bare && retraces_either(h, ref, bcut, bcut.boundary[wpc[comp]])) outer = comp;
    }
    ensure(outer != kNone, "cut failed to expose its outer side");
    ++stats.dropped_components;
    for (int comp = 0; comp < ncomp; ++comp) {
      if (comp == outer) continue;
      ensure(wpc[comp] != kNone, "cell without a boundary walk");
      emit_brick(job, parts[comp], bcut, bcut.boundary[wpc[comp]], in_s, in_n, sdart_of);
    }
    for (EdgeId e = 0; e < h.m(); ++e)
      if (in_sc[e]) {
        mortar[job.emap[e]] = 1;
        supercol[job.emap[e]] = 1;
      }
  }

  void emit_brick(const StripJob& job, Piece& part, const CutResult& bcut,
                  const std::vector<Dart>& bwalk, const std::vector<char>& in_s,
                  const std::vector<char>& in_n, const std::vector<Dart>& sdart_of) {
    std::vector<Dart> walk = rebase_walk(bcut, part, bwalk);
    const int len = static_cast<int>(walk.size());
    std::vector<char> lab(len);
    for (int i = 0; i < len; ++i) {
      EdgeId he = bcut.emap[EmbeddedGraph::edge_of(bwalk[i])];
      lab[i] = in_s[he] ? 'S' : in_n[he] ? 'N' : 'C';
    }
    auto runs_of = [&](char c) {
      int r = 0;
      for (int i = 0; i < len; ++i)
        if (lab[i] == c && lab[(i + len - 1) % len] != c) ++r;
      return r;
    };
    ensure(runs_of('S') == 1 || std::count(lab.begin(), lab.end(), 'S') == len,
           "brick boundary needs one south run");
    ensure(runs_of('N') <= 1, "brick boundary north is split");

    auto strip_vertex = [&](Vertex v) { return bcut.vmap[part.vmap[v]]; };

    // The cell walk arrives in whichever direction the cut traced it. The
    // stored walk must run against the strip south, so Brick::south() comes
    // out along it.
    int spos = 0;
    while (lab[spos] != 'S') ++spos;
    Dart sd = walk[spos];
    Dart od = sdart_of[bcut.emap[part.emap[EmbeddedGraph::edge_of(sd)]]];
    ensure(od != kNone, "south copy without a strip edge");
    Vertex sb = strip_vertex(part.g.vertex_of(sd)), sh = strip_vertex(part.g.head_of(sd));
    Vertex ob = job.h.vertex_of(od), oh = job.h.head_of(od);
    ensure((sb == ob && sh == oh) || (sb == oh && sh == ob), "span copy endpoints disagree");
    if (sb == ob && sh == oh) {
      std::vector<Dart> rw(len);
      std::vector<char> rl(len);
      for (int i = 0; i < len; ++i) {
        rw[i] = EmbeddedGraph::twin(walk[len - 1 - i]);
        rl[i] = lab[len - 1 - i];
      }
      walk.swap(rw);
      lab.swap(rl);
    }

    Brick b;
    const int sl = static_cast<int>(std::count(lab.begin(), lab.end(), 'S'));
    if (sl == len) {
      ensure(job.closed, "closed south outside a terminal strip");
      int at = kNone;
      for (int i = 0; i < len && at == kNone; ++i)
        if (strip_vertex(part.g.vertex_of(walk[i])) == job.n_anchor) at = i;
      ensure(at != kNone, "anchor not on the closed south");
      std::rotate(walk.begin(), walk.begin() + at, walk.end());
      b.south_closed = true;
      b.north_anchor = part.g.vertex_of(walk[0]);
    } else {
      int s0 = 0;
      while (!(lab[s0] == 'S' && lab[(s0 + len - 1) % len] != 'S')) ++s0;
      int rot = (s0 + sl) % len;
      std::rotate(walk.begin(), walk.begin() + rot, walk.end());
      std::rotate(lab.begin(), lab.begin() + rot, lab.end());
      const int total = len - sl;
      int n0 = kNone, nl = 0;
      for (int i = 0; i < total; ++i) {
        if (lab[i] != 'N') continue;
        if (n0 == kNone) n0 = i;
        ensure(i == n0 + nl, "brick boundary north is split");
        ++nl;
      }
      if (n0 != kNone) {
        b.west_len = n0;
        b.north_len = nl;
        b.east_len = total - n0 - nl;
      } else {
        // No north edges: the columns meet at a point. On a terminal strip
        // that point is the anchor copy; column merges elsewhere leave the
        // junction unnamed.
        int at = kNone;
        if (job.n_anchor != kNone) {
          for (int i = 0; i <= total && at == kNone; ++i)
            if (strip_vertex(part.g.vertex_of(walk[i])) == job.n_anchor) at = i;
        }
        if (at != kNone) {
          b.west_len = at;
          b.east_len = total - at;
          b.north_anchor = part.g.vertex_of(walk[at]);
        } else {
          b.west_len = total;
        }
      }
    }

    // South vertex j, walking along the strip south direction.
    auto south_vertex = [&](int j) -> Vertex {
      if (j < sl) return part.g.head_of(walk[len - 1 - j]);
      return part.g.vertex_of(walk[len - sl]);
    };

    // Spine: the same greedy rule the strip used for its marks, run against
    // this cell's own north side so the validator's recomputation agrees.
    std::vector<double> sprefb(sl + 1, 0.0);
    for (int j = 0; j < sl; ++j)
      sprefb[j + 1] = sprefb[j] + part.g.len(EmbeddedGraph::edge_of(walk[len - 1 - j]));
    std::vector<Vertex> nsrcb;
    for (int i = b.west_len; i < b.west_len + b.north_len; ++i)
      nsrcb.push_back(part.g.vertex_of(walk[i]));
    if (b.north_len > 0) nsrcb.push_back(part.g.vertex_of(walk[b.west_len + b.north_len]));
    if (b.north_anchor != kNone) nsrcb.push_back(b.north_anchor);
    b.s_pos.push_back(0);
    if (!nsrcb.empty()) {
      SsspResult dnb = sssp(part.g, nsrcb);
      for (int j = 1; j < sl; ++j) {
        double d = dnb.dist[south_vertex(j)];
        if (d == kInf) continue;
        if (!approx_lt(sprefb[j] - sprefb[b.s_pos.back()], eps * d)) b.s_pos.push_back(j);
      }
    }
    b.s_pos.push_back(sl);

    b.portal_pos = select_portals(part.g, walk, dp.theta);

    // Columns may pass through boundary vertices of the strip, leaving
    // terminal flags on side copies; only the north and south carry
    // terminals, and every terminal keeps a copy there in some brick.
    std::vector<char> keep(part.g.n(), 0);
    for (int j = 0; j <= sl; ++j) keep[south_vertex(j)] = 1;
    for (int i = b.west_len; i < b.west_len + b.north_len; ++i)
      keep[part.g.vertex_of(walk[i])] = 1;
    if (b.north_len > 0) keep[part.g.vertex_of(walk[b.west_len + b.north_len])] = 1;
    if (b.north_anchor != kNone) keep[b.north_anchor] = 1;
    for (Vertex v = 0; v < part.g.n(); ++v)
      if (!keep[v]) part.g.terminal[v] = 0;

    b.vmap.resize(part.g.n());
    for (Vertex v = 0; v < part.g.n(); ++v) b.vmap[v] = job.vmap[bcut.vmap[part.vmap[v]]];
    b.emap.resize(part.g.m());
    for (EdgeId e = 0; e < part.g.m(); ++e) b.emap[e] = job.emap[bcut.emap[part.emap[e]]];
    b.walk = std::move(walk);
    b.g = std::move(part.g);
    bricks.push_back(std::move(b));
  }
};

}  // namespace

std::vector<Dart> Brick::west() const {
  return {walk.begin(), walk.begin() + west_len};
}

std::vector<Dart> Brick::north() const {
  return {walk.begin() + west_len, walk.begin() + west_len + north_len};
}

std::vector<Dart> Brick::east() const {
  return {walk.begin() + west_len + north_len, walk.begin() + west_len + north_len + east_len};
}

std::vector<Dart> Brick::south() const {
  std::vector<Dart> out;
  out.reserve(south_len());
  for (int i = static_cast<int>(walk.size()) - 1; i >= west_len + north_len + east_len; --i)
    out.push_back(EmbeddedGraph::twin(walk[i]));
  return out;
}

std::vector<Vertex> Brick::portal_vertices() const {
  std::vector<Vertex> out;
  out.reserve(portal_pos.size());
  for (int p : portal_pos) out.push_back(g.vertex_of(walk[p]));
  return out;
}

std::vector<int> select_portals(const EmbeddedGraph& g, const std::vector<Dart>& walk,
                                int theta) {
  require(theta >= 1, "need at least one portal");
  const int len = static_cast<int>(walk.size());
  require(len >= 1, "walk must be nonempty");
  std::vector<int> firsts;
  std::vector<char> seen(g.n(), 0);
  for (int i = 0; i < len; ++i) {
    Vertex v = g.vertex_of(walk[i]);
    if (seen[v]) continue;
    seen[v] = 1;
    firsts.push_back(i);
  }
  if (static_cast<int>(firsts.size()) <= theta) return firsts;

  std::vector<double> pref(len + 1, 0.0);
  for (int i = 0; i < len; ++i) pref[i + 1] = pref[i] + g.len(EmbeddedGraph::edge_of(walk[i]));
  const double total = pref[len];
  int origin = firsts[0];
  for (int p : firsts)
    if (g.vertex_of(walk[p]) < g.vertex_of(walk[origin])) origin = p;
  std::vector<int> chosen;
  for (int i = 0; i < theta; ++i) {
    double target = pref[origin] + total * i / theta;
    if (target >= total) target -= total;
    int best = firsts[0];
    double bd = kInf;
    for (int p : firsts) {
      double delta = std::abs(pref[p] - target);
      double d = std::min(delta, total - delta);
      if (d < bd) {
        bd = d;
        best = p;
      }
    }
    chosen.push_back(best);
  }
  std::sort(chosen.begin(), chosen.end());
  chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
  return chosen;
}

std::optional<BrickViolation> validate_brick(const Brick& b, double epsilon, int kappa_ceil) {
  require(epsilon > 0.0, "need a positive epsilon");
  require(kappa_ceil >= 2, "need room for both spine ends");
  const EmbeddedGraph& g = b.g;

  if (!g.connected()) return BrickViolation{1, "brick graph is disconnected"};
  if (euler_genus(g) != 0) return BrickViolation{1, "brick graph is not planar"};

  const int len = static_cast<int>(b.walk.size());
  if (len == 0) return BrickViolation{2, "empty boundary walk"};
  if (b.west_len < 0 || b.north_len < 0 || b.east_len < 0 || b.south_len() < 1)
    return BrickViolation{2, "side lengths out of range"};
  if (b.south_closed && b.south_len() != len)
    return BrickViolation{2, "closed south must cover the whole walk"};
  for (Dart d : b.walk)
    if (d < 0 || d >= 2 * g.m()) return BrickViolation{2, "walk dart out of range"};
  for (int i = 0; i < len; ++i)
    if (g.head_of(b.walk[i]) != g.vertex_of(b.walk[(i + 1) % len]))
      return BrickViolation{2, "walk does not chain"};
  std::vector<Vertex> bases;
  bases.reserve(len);
  for (Dart d : b.walk) bases.push_back(g.vertex_of(d));
  std::vector<Vertex> sorted(bases);
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    return BrickViolation{2, "walk revisits a vertex"};
  if (!is_facial_walk(g, b.walk)) return BrickViolation{2, "walk does not bound a face"};
  if (b.north_anchor != kNone) {
    if (b.north_len != 0) return BrickViolation{2, "anchor next to a north side"};
    if (b.north_anchor < 0 || b.north_anchor >= g.n() ||
        std::find(bases.begin(), bases.end(), b.north_anchor) == bases.end())
      return BrickViolation{2, "anchor off the walk"};
  }

  std::vector<Dart> north = b.north();
  std::vector<Dart> south = b.south();
  std::vector<char> side(g.n(), 0);
  for (Vertex v : chain_vertices(g, north)) side[v] = 1;
  for (Vertex v : chain_vertices(g, south)) side[v] = 1;
  if (b.north_anchor != kNone) side[b.north_anchor] = 1;
  for (Vertex v = 0; v < g.n(); ++v)
    if (g.terminal[v] && !side[v])
      return BrickViolation{3, fmt::format("terminal {} off the north and south sides", v)};

  if (!north.empty()) {
    if (auto w = t_short_violation(g, north, 0.0))
      return BrickViolation{
          4, fmt::format("north from {} to {} runs {} against distance {}", w->x, w->y, w->along,
                         w->metric)};
  }
  std::optional<StretchWitness> w = b.south_closed
                                        ? closed_walk_violation(g, south, epsilon)
                                        : t_short_violation(g, south, epsilon);
  if (w)
    return BrickViolation{4, fmt::format("south from {} to {} runs {} against distance {}", w->x,
                                         w->y, w->along, w->metric)};

  const int sl = b.south_len();
  if (b.s_pos.empty() || b.s_pos.front() != 0 || b.s_pos.back() != sl)
    return BrickViolation{5, "spine must run end to end"};
  for (size_t i = 1; i < b.s_pos.size(); ++i)
    if (b.s_pos[i] <= b.s_pos[i - 1]) return BrickViolation{5, "spine positions must increase"};
  if (static_cast<int>(b.s_pos.size()) > kappa_ceil)
    return BrickViolation{5, fmt::format("{} spine vertices exceed the budget {}",
                                         b.s_pos.size(), kappa_ceil)};
  std::vector<Vertex> nsrc = chain_vertices(g, north);
  if (b.north_anchor != kNone) nsrc.push_back(b.north_anchor);
  if (!nsrc.empty()) {
    SsspResult dn = sssp(g, nsrc);
    std::vector<Vertex> sv = chain_vertices(g, south);
    std::vector<double> spref(sl + 1, 0.0);
    for (int i = 0; i < sl; ++i)
      spref[i + 1] = spref[i] + g.len(EmbeddedGraph::edge_of(south[i]));
    for (size_t i = 1; i < b.s_pos.size(); ++i) {
      int p = b.s_pos[i - 1], q = b.s_pos[i];
      for (int x = p + 1; x < q; ++x) {
        double d = dn.dist[sv[x]];
        if (d == kInf) continue;
        if (!approx_lt(spref[x] - spref[p], epsilon * d))
          return BrickViolation{
              5, fmt::format("south vertex {} sits {} past its spine mark, north distance {}",
                             sv[x], spref[x] - spref[p], d)};
      }
    }
  }
  return std::nullopt;
}

MortarDecomposition build_mortar(const EmbeddedGraph& planar, const std::vector<Dart>& sigma,
                                 const PtasParams& par, int genus) {
  require(planar.connected(), "graph must be connected");
  require(euler_genus(planar) == 0, "graph must be planar");
  require(!sigma.empty(), "boundary walk must be nonempty");
  const int len = static_cast<int>(sigma.size());
  for (Dart d : sigma) require(0 <= d && d < 2 * planar.m(), "boundary dart out of range");
  for (int i = 0; i < len; ++i)
    require(planar.head_of(sigma[i]) == planar.vertex_of(sigma[(i + 1) % len]),
            "boundary walk must chain and close");
  std::vector<char> on_sigma(planar.n(), 0);
  {
    std::vector<Vertex> bases;
    for (Dart d : sigma) bases.push_back(planar.vertex_of(d));
    for (Vertex v : bases) on_sigma[v] = 1;
    std::sort(bases.begin(), bases.end());
    require(std::adjacent_find(bases.begin(), bases.end()) == bases.end(),
            "boundary walk must be vertex-simple");
  }
  require(is_facial_walk(planar, sigma), "boundary walk must bound a face");
  for (Vertex v = 0; v < planar.n(); ++v)
    if (planar.terminal[v])
      require(on_sigma[v], fmt::format("terminal {} must lie on the boundary walk", v));

  Builder bld;
  bld.dp = derive_params(par, genus);
  bld.eps = par.epsilon;
  bld.mortar.assign(planar.m(), 0);
  bld.supercol.assign(planar.m(), 0);
  for (Dart d : sigma) bld.mortar[EmbeddedGraph::edge_of(d)] = 1;

  WorkPiece first;
  first.h = planar;
  first.hole = sigma;
  first.vmap.resize(planar.n());
  std::iota(first.vmap.begin(), first.vmap.end(), 0);
  first.emap.resize(planar.m());
  std::iota(first.emap.begin(), first.emap.end(), 0);
  bld.queue.push_back(std::move(first));
  while (!bld.queue.empty()) {
    WorkPiece p = std::move(bld.queue.front());
    bld.queue.pop_front();
    bld.run_piece(std::move(p));
  }

  MortarDecomposition out;
  out.params = bld.dp;
  out.stats = bld.stats;
  for (EdgeId e = 0; e < planar.m(); ++e)
    if (bld.mortar[e]) out.mortar_edges.push_back(e);
  out.mortar_length = canonical_length(planar, out.mortar_edges);
  for (EdgeId e = 0; e < planar.m(); ++e)
    if (bld.supercol[e]) out.supercolumn_edges.push_back(e);
  out.supercolumn_length = canonical_length(planar, out.supercolumn_edges);
  std::vector<EdgeId> sids;
  for (Dart d : sigma) sids.push_back(EmbeddedGraph::edge_of(d));
  out.sigma_length = canonical_length(planar, sids);
  out.bricks = std::move(bld.bricks);

  // Each peel swaps a boundary window for a chord no longer than it, and the
  // window is epsilon-short against that chord, so boundary recycled through
  // later peels shrinks geometrically. Columns are within 1/epsilon of the
  // south gap behind them and only every stride-th mark keeps one. A forced
  // strip consumes a stretched boundary whole and voids both accounts.
  if (out.stats.forced_strips == 0) {
    double f = 1.0 + 1.0 / par.epsilon;
    ensure_bound(approx_le(out.mortar_length, f * f * out.sigma_length),
                 fmt::format("mortar length {} exceeds its budget {}", out.mortar_length,
                             f * f * out.sigma_length));
    double scap = f / (par.epsilon * bld.dp.kappa) * out.sigma_length;
    ensure_bound(approx_le(out.supercolumn_length, scap),
                 fmt::format("supercolumn length {} exceeds its budget {}",
                             out.supercolumn_length, scap));
  }

  // A failed condition is a construction bug, except for condition 4 when a
  // forced strip knowingly shipped a stretched south.
  for (size_t i = 0; i < out.bricks.size(); ++i) {
    std::optional<BrickViolation> bad =
        validate_brick(out.bricks[i], par.epsilon, bld.dp.kappa_ceil);
    if (!bad) continue;
    ensure(bad->condition == 4 && out.stats.forced_strips > 0,
           fmt::format("brick {} fails condition {}: {}", i, bad->condition, bad->detail));
  }
  return out;
}

namespace {

// Facial sense of a closed walk in an all-positive-signature graph: +1 when
// it chains rot_next(twin(.)), -1 for the mirror reading, 0 when every
// vertex on it has degree two and both readings hold, which happens exactly
// on a bare cycle.
int walk_sense(const EmbeddedGraph& g, const std::vector<Dart>& w) {
  const int L = static_cast<int>(w.size());
  int sense = 0;
  for (int i = 0; i < L; ++i) {
    Dart t = EmbeddedGraph::twin(w[i]);
    Dart nx = w[(i + 1) % L];
    bool fwd = g.rot_next(t) == nx;
    bool bwd = g.rot_prev(t) == nx;
    ensure(fwd || bwd, "walk does not follow a face");
    if (fwd != bwd) {
      int s = fwd ? 1 : -1;
      ensure(sense == 0 || sense == s, "walk changes facial sense");
      sense = s;
    }
  }
  return sense;
}

// Splice nd into the face corner that leaves along anchor: just before it
// for a walk of sense +1, just after it for the mirror sense.
void splice_dart(std::vector<Dart>& r, Dart anchor, Dart nd, int sense) {
  auto it = std::find(r.begin(), r.end(), anchor);
  ensure(it != r.end(), "splice anchor missing from its rotation");
  r.insert(sense > 0 ? it : it + 1, nd);
}

}  // namespace

BrickCopy brick_copy(const EmbeddedGraph& planar, const MortarDecomposition& md) {
  for (const EdgeRec& er : planar.edges)
    require(er.sig > 0, "graph must carry positive signatures");

  Piece mg = sub_embedding(planar, md.mortar_edges);
  std::vector<Vertex> vinv(planar.n(), kNone);
  for (size_t i = 0; i < mg.vmap.size(); ++i) vinv[mg.vmap[i]] = static_cast<Vertex>(i);
  std::vector<EdgeId> einv(planar.m(), kNone);
  for (size_t i = 0; i < mg.emap.size(); ++i) einv[mg.emap[i]] = static_cast<EdgeId>(i);

  BrickCopy out;
  out.g = mg.g;
  out.planar_edge = mg.emap;
  out.brick_of.assign(mg.g.m(), kNone);

  for (size_t bi = 0; bi < md.bricks.size(); ++bi) {
    const Brick& b = md.bricks[bi];
    for (const EdgeRec& er : b.g.edges)
      ensure(er.sig > 0, "brick lost its orientation");

    // The brick boundary retraces one facial walk of the mortar subgraph;
    // recover it dart by dart. That walk names the face the brick fills,
    // and the portal edges are spliced into its corners.
    const int L = static_cast<int>(b.walk.size());
    std::vector<Dart> anchor(L);
    for (int i = 0; i < L; ++i) {
      EdgeId se = einv[b.emap[EmbeddedGraph::edge_of(b.walk[i])]];
      ensure(se != kNone, "brick boundary edge missing from the mortar");
      Vertex tail = vinv[b.vmap[b.g.vertex_of(b.walk[i])]];
      ensure(tail != kNone, "brick boundary vertex missing from the mortar");
      anchor[i] = mg.g.edges[se].u == tail ? 2 * se : 2 * se + 1;
      ensure(mg.g.vertex_of(anchor[i]) == tail, "brick boundary dart detached from its vertex");
    }
    // The filled mortar face and the brick face it came out of lie on
    // opposite sides of the shared cycle, so their senses must disagree. A
    // bare cycle leaves its sense free and takes the other side's mirror.
    int mg_sense = walk_sense(mg.g, anchor);
    int bk_sense = walk_sense(b.g, b.walk);
    if (mg_sense == 0 && bk_sense == 0) {
      mg_sense = 1;
      bk_sense = -1;
    } else if (mg_sense == 0) {
      mg_sense = -bk_sense;
    } else if (bk_sense == 0) {
      bk_sense = -mg_sense;
    } else {
      ensure(mg_sense != bk_sense, "brick glued against its face");
    }

    const Vertex vbase = out.g.n();
    const EdgeId ebase = out.g.m();
    std::vector<Vertex> bmap(b.g.n());
    for (Vertex v = 0; v < b.g.n(); ++v) {
      bmap[v] = vbase + v;
      out.g.rot.push_back({});
      out.g.terminal.push_back(b.g.terminal[v]);
    }
    for (Vertex v = 0; v < b.g.n(); ++v)
      for (Dart d : b.g.rot[v])
        out.g.rot[vbase + v].push_back(2 * (ebase + EmbeddedGraph::edge_of(d)) + (d & 1));
    for (EdgeId e = 0; e < b.g.m(); ++e) {
      EdgeRec er = b.g.edges[e];
      er.u = vbase + er.u;
      er.v = vbase + er.v;
      out.g.edges.push_back(er);
      out.planar_edge.push_back(b.emap[e]);
      out.brick_of.push_back(static_cast<int>(bi));
    }

    for (int pi : b.portal_pos) {
      Dart bd = b.walk[pi];
      Vertex bv = b.g.vertex_of(bd);
      EdgeId pe = out.g.m();
      out.g.edges.push_back({vinv[b.vmap[bv]], vbase + bv, 0.0, 1});
      out.portal_edges.push_back(pe);
      out.planar_edge.push_back(kNone);
      out.brick_of.push_back(static_cast<int>(bi));
      splice_dart(out.g.rot[vinv[b.vmap[bv]]], anchor[pi], 2 * pe, mg_sense);
      splice_dart(out.g.rot[vbase + bv], 2 * (ebase + EmbeddedGraph::edge_of(bd)) + (bd & 1),
                  2 * pe + 1, bk_sense);
    }
    out.brick_vertex.push_back(std::move(bmap));
  }

  out.mortar_vertex = std::move(vinv);
  out.g.validate();
  ensure(out.g.connected(), "brick copies must stay attached");
  ensure(euler_genus(out.g) == 0, "brick copies must glue into their faces");
  return out;
}

BrickContraction brick_contract(const BrickCopy& bc, int theta) {
  require(theta >= 1, "need at least one portal");
  std::vector<EdgeId> ids;
  for (EdgeId e = 0; e < bc.g.m(); ++e)
    if (bc.brick_of[e] != kNone && bc.planar_edge[e] != kNone) ids.push_back(e);

  ContractResult r = contract_edge_set(bc.g, ids);
  BrickContraction out;
  out.g = std::move(r.g);
  out.vmap = std::move(r.vmap);
  out.emap = std::move(r.emap);
  for (EdgeId pe : bc.portal_edges)
    ensure(out.emap[pe] != kNone, "portal edge lost in contraction");
  for (const std::vector<Vertex>& bm : bc.brick_vertex) {
    ensure(!bm.empty(), "brick without vertices");
    Vertex c = out.vmap[bm[0]];
    for (Vertex v : bm) ensure(out.vmap[v] == c, "brick failed to collapse to one vertex");
    int deg = static_cast<int>(out.g.rot[c].size());
    ensure(deg <= theta, fmt::format("brick vertex keeps degree {} over the cap {}", deg, theta));
    out.brick_vertex.push_back(c);
  }
  return out;
}

LiftedMortar lift_mortar(const MortarDecomposition& md, const std::vector<EdgeId>& emap,
                         const EmbeddedGraph& g) {
  LiftedMortar out;
  for (EdgeId e : md.mortar_edges) {
    require(0 <= e && e < static_cast<int>(emap.size()), "mortar edge outside the edge map");
    EdgeId he = emap[e];
    require(0 <= he && he < g.m(), "edge map leaves the host graph");
    out.edges.push_back(he);
  }
  std::sort(out.edges.begin(), out.edges.end());
  out.edges.erase(std::unique(out.edges.begin(), out.edges.end()), out.edges.end());
  for (EdgeId e : out.edges) out.length += g.len(e);
  return out;
}

}  // namespace gptas

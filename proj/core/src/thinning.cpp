#include "gptas/thinning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <set>

#include <fmt/format.h>

#include "gptas/util.hpp"

namespace gptas {

int TreeDecomposition::width() const {
  int w = -1;
  for (const std::vector<Vertex>& b : bags) w = std::max(w, static_cast<int>(b.size()) - 1);
  return w;
}

std::optional<TdViolation> validate_tree_decomposition(const EmbeddedGraph& g,
                                                       const TreeDecomposition& td) {
  const int nb = static_cast<int>(td.bags.size());
  auto fail = [](int c, std::string d) { return TdViolation{c, std::move(d)}; };

  for (int i = 0; i < nb; ++i)
    for (Vertex v : td.bags[i])
      if (v < 0 || v >= g.n()) return fail(0, fmt::format("bag {} names vertex {}", i, v));
  if (static_cast<int>(td.links.size()) != std::max(nb - 1, 0))
    return fail(0, fmt::format("{} bags need {} links, got {}", nb, std::max(nb - 1, 0),
                               td.links.size()));
  std::vector<std::vector<int>> tadj(nb);
  {
    std::vector<int> rep(nb);
    for (int i = 0; i < nb; ++i) rep[i] = i;
    auto find = [&](int x) {
      while (rep[x] != x) x = rep[x] = rep[rep[x]];
      return x;
    };
    for (auto [a, b] : td.links) {
      if (a < 0 || a >= nb || b < 0 || b >= nb)
        return fail(0, fmt::format("link ({}, {}) leaves the bag range", a, b));
      if (find(a) == find(b)) return fail(0, fmt::format("link ({}, {}) closes a cycle", a, b));
      rep[find(a)] = find(b);
      tadj[a].push_back(b);
      tadj[b].push_back(a);
    }
  }

  std::vector<std::vector<int>> bags_of(g.n());
  for (int i = 0; i < nb; ++i)
    for (Vertex v : td.bags[i]) bags_of[v].push_back(i);

  for (Vertex v = 0; v < g.n(); ++v)
    if (bags_of[v].empty()) return fail(1, fmt::format("vertex {} is in no bag", v));

  for (EdgeId e = 0; e < g.m(); ++e) {
    Vertex u = g.edges[e].u;
    Vertex v = g.edges[e].v;
    bool together = false;
    for (int i : bags_of[u]) {
      together = std::find(td.bags[i].begin(), td.bags[i].end(), v) != td.bags[i].end();
      if (together) break;
    }
    if (!together) return fail(2, fmt::format("edge {} = ({}, {}) shares no bag", e, u, v));
  }

  std::vector<char> in_set(nb, 0);
  std::vector<char> seen(nb, 0);
  for (Vertex v = 0; v < g.n(); ++v) {
    for (int i : bags_of[v]) in_set[i] = 1;
    std::queue<int> q;
    q.push(bags_of[v][0]);
    seen[bags_of[v][0]] = 1;
    std::size_t reached = 0;
    while (!q.empty()) {
      int i = q.front();
      q.pop();
      ++reached;
      for (int j : tadj[i])
        if (in_set[j] && !seen[j]) {
          seen[j] = 1;
          q.push(j);
        }
    }
    for (int i : bags_of[v]) {
      in_set[i] = 0;
      seen[i] = 0;
    }
    if (reached != bags_of[v].size())
      return fail(3, fmt::format("vertex {} spans {} bags but only {} connect", v,
                                 bags_of[v].size(), reached));
  }
  return std::nullopt;
}

TreeDecomposition build_tree_decomposition(const EmbeddedGraph& g) {
  require(g.n() >= 1, "decomposition needs a vertex");
  require(g.connected(), "decomposition needs a connected graph");
  const int n = g.n();

  std::vector<std::set<Vertex>> adj(n);
  for (EdgeId e = 0; e < g.m(); ++e) {
    Vertex u = g.edges[e].u;
    Vertex v = g.edges[e].v;
    if (u == v) continue;
    adj[u].insert(v);
    adj[v].insert(u);
  }

  auto fill_of = [&](Vertex v) {
    int fill = 0;
    for (auto it = adj[v].begin(); it != adj[v].end(); ++it)
      for (auto jt = std::next(it); jt != adj[v].end(); ++jt)
        if (!adj[*it].count(*jt)) ++fill;
    return fill;
  };

  TreeDecomposition out;
  std::vector<Vertex> elim(n, kNone);
  std::vector<int> pos(n, kNone);
  std::vector<int> fill(n);
  for (Vertex v = 0; v < n; ++v) fill[v] = fill_of(v);

  for (int t = 0; t < n; ++t) {
    Vertex best = kNone;
    for (Vertex v = 0; v < n; ++v) {
      if (pos[v] != kNone) continue;
      if (best == kNone || fill[v] < fill[best]) best = v;
    }
    pos[best] = t;
    elim[t] = best;

    std::vector<Vertex> bag(adj[best].begin(), adj[best].end());
    bag.push_back(best);
    std::sort(bag.begin(), bag.end());
    out.bags.push_back(std::move(bag));

    std::set<Vertex> touched;
    for (Vertex u : adj[best]) {
      for (Vertex w : adj[best])
        if (u < w && adj[u].insert(w).second) {
          adj[w].insert(u);
          touched.insert(u);
          touched.insert(w);
        }
      adj[u].erase(best);
      touched.insert(u);
      for (Vertex w : adj[u]) touched.insert(w);
    }
    adj[best].clear();
    for (Vertex u : touched)
      if (pos[u] == kNone) fill[u] = fill_of(u);
  }

  // Each bag hangs off the bag of its earliest-eliminated other member.
  // The survivors stay connected after every elimination, so only the last
  // bag is a singleton and the links form a tree.
  for (int t = 0; t < n; ++t) {
    int parent = kNone;
    for (Vertex u : out.bags[t])
      if (u != elim[t] && (parent == kNone || pos[u] < parent)) parent = pos[u];
    if (parent != kNone) out.links.push_back({t, parent});
  }
  ensure(out.links.size() + 1 == out.bags.size(), "elimination left the bag tree loose");

  std::optional<TdViolation> bad = validate_tree_decomposition(g, out);
  ensure(!bad, bad ? fmt::format("elimination broke condition {}: {}", bad->condition, bad->detail)
                   : "");
  return out;
}

namespace {

// Ring index of every edge: breadth-first depth from vertex 0 in the radial
// graph, which joins each vertex to every face whose walk passes it. Vertex
// depths are even, faces odd; an edge takes its shallower endpoint's ring.
std::vector<std::int64_t> radial_rings(const EmbeddedGraph& g) {
  Faces fc = trace_faces(g);
  const int n = g.n();
  const int nodes = n + static_cast<int>(fc.walks.size());
  std::vector<std::vector<int>> radial(nodes);
  for (std::size_t w = 0; w < fc.walks.size(); ++w) {
    std::set<Vertex> on;
    for (Dart d : fc.walks[w].darts) on.insert(g.vertex_of(d));
    for (Vertex v : on) {
      radial[v].push_back(n + static_cast<int>(w));
      radial[n + w].push_back(v);
    }
  }

  std::vector<int> dist(nodes, kNone);
  std::queue<int> q;
  dist[0] = 0;
  q.push(0);
  while (!q.empty()) {
    int x = q.front();
    q.pop();
    for (int y : radial[x])
      if (dist[y] == kNone) {
        dist[y] = dist[x] + 1;
        q.push(y);
      }
  }
  for (int x = 0; x < nodes; ++x) ensure(dist[x] != kNone, "radial graph fell apart");

  std::vector<std::int64_t> ring(g.m());
  for (EdgeId e = 0; e < g.m(); ++e)
    ring[e] = std::min(dist[g.edges[e].u], dist[g.edges[e].v]) / 2;
  return ring;
}

}  // namespace

std::vector<std::vector<EdgeId>> contraction_decomposition(const EmbeddedGraph& g, int k) {
  require(k >= 2, "need at least two classes");
  require(g.connected(), "class assignment needs a connected graph");
  std::vector<std::int64_t> ring = radial_rings(g);
  std::vector<std::vector<EdgeId>> sets(k);
  for (EdgeId e = 0; e < g.m(); ++e) sets[ring[e] % k].push_back(e);
  return sets;
}

ThinningResult thinning(const EmbeddedGraph& planar, const MortarDecomposition& md,
                        const PtasParams& par, int class_override) {
  require(class_override >= 0, "class override cannot be negative");
  require(par.epsilon > 0.0, "epsilon must be positive");
  {
    double want = std::ceil(3.0 * md.params.theta * md.params.gamma / par.epsilon);
    bool match = want >= static_cast<double>(std::numeric_limits<std::int64_t>::max())
                     ? md.params.levels == std::numeric_limits<std::int64_t>::max()
                     : md.params.levels == static_cast<std::int64_t>(want);
    require(match, "parameters disagree with the decomposition");
  }
  ThinningResult out;
  out.bplus = brick_copy(planar, md);
  out.bdiv = brick_contract(out.bplus, md.params.theta);
  const EmbeddedGraph& bd = out.bdiv.g;

  // Track each surviving edge back to its origin.
  std::vector<EdgeId> planar_of(bd.m(), kNone);
  std::vector<int> brick_of(bd.m(), kNone);
  std::vector<char> assigned(bd.m(), 0);
  for (EdgeId e = 0; e < out.bplus.g.m(); ++e) {
    EdgeId be = out.bdiv.emap[e];
    if (be == kNone) continue;
    ensure(!assigned[be], "contraction folded two edges together");
    assigned[be] = 1;
    planar_of[be] = out.bplus.planar_edge[e];
    brick_of[be] = out.bplus.brick_of[e];
  }
  for (EdgeId be = 0; be < bd.m(); ++be) ensure(assigned[be], "edge with no origin");

  std::vector<double> boundary_len(md.bricks.size(), 0.0);
  for (std::size_t bi = 0; bi < md.bricks.size(); ++bi) {
    std::vector<EdgeId> ids;
    for (Dart d : md.bricks[bi].walk) ids.push_back(EmbeddedGraph::edge_of(d));
    boundary_len[bi] = canonical_length(md.bricks[bi].g, std::move(ids));
  }

  // Shadow weights: a portal edge carries the boundary length of the face
  // its brick fills, everything else its own length. Base lengths are never
  // touched.
  std::vector<double> weight(bd.m());
  for (EdgeId e = 0; e < bd.m(); ++e)
    weight[e] = planar_of[e] == kNone ? boundary_len[brick_of[e]] : bd.len(e);
  out.reweighted_total = 0.0;
  for (EdgeId e = 0; e < bd.m(); ++e) out.reweighted_total += weight[e];

  out.classes = class_override > 0 ? class_override : md.params.levels;
  require(out.classes >= 2, "need at least two classes");

  // File each edge by ring modulo the class count and take the lightest
  // class, lowest index first on ties. The modulus can dwarf the edge
  // count, so only used classes are materialized; when one goes unused the
  // lowest such index competes at weight zero.
  std::vector<std::int64_t> ring = radial_rings(bd);
  std::map<std::int64_t, double> class_weight;
  for (EdgeId e = 0; e < bd.m(); ++e) class_weight[ring[e] % out.classes] += weight[e];

  std::int64_t winner = kNone;
  double winner_weight = std::numeric_limits<double>::infinity();
  auto consider = [&](double w, std::int64_t c) {
    if (winner == kNone || w < winner_weight || (w == winner_weight && c < winner)) {
      winner_weight = w;
      winner = c;
    }
  };
  for (const auto& [c, w] : class_weight) consider(w, c);
  if (static_cast<std::int64_t>(class_weight.size()) < out.classes) {
    std::int64_t missing = 0;
    for (const auto& [c, w] : class_weight) {
      if (c != missing) break;
      ++missing;
    }
    consider(0.0, missing);
  }

  std::set<EdgeId> chosen;
  for (EdgeId e = 0; e < bd.m(); ++e)
    if (ring[e] % out.classes == winner) chosen.insert(e);
  out.sstar_weight = 0.0;
  for (EdgeId e : chosen) out.sstar_weight += weight[e];
  ensure_bound(approx_le(out.sstar_weight, out.reweighted_total / double(out.classes)),
               fmt::format("selected class weighs {} against an average of {}", out.sstar_weight,
                           out.reweighted_total / double(out.classes)));

  // A selected portal edge forfeits its brick: the boundary of the face the
  // brick fills joins the contraction and the brick drops out of the
  // dynamic program. The additions are mortar edges, so they trigger
  // nothing further.
  out.ignored.assign(md.bricks.size(), 0);
  for (EdgeId e : chosen)
    if (planar_of[e] == kNone) out.ignored[brick_of[e]] = 1;

  std::vector<EdgeId> mortar_at(planar.m(), kNone);
  for (EdgeId e = 0; e < out.bplus.g.m(); ++e)
    if (out.bplus.brick_of[e] == kNone) {
      EdgeId be = out.bdiv.emap[e];
      ensure(be != kNone, "mortar edge lost in contraction");
      mortar_at[out.bplus.planar_edge[e]] = be;
    }
  for (std::size_t bi = 0; bi < md.bricks.size(); ++bi) {
    if (!out.ignored[bi]) continue;
    for (Dart d : md.bricks[bi].walk) {
      EdgeId pe = md.bricks[bi].emap[EmbeddedGraph::edge_of(d)];
      EdgeId be = mortar_at[pe];
      ensure(be != kNone, "brick boundary edge missing from the mortar");
      chosen.insert(be);
    }
  }

  out.sstar.assign(chosen.begin(), chosen.end());
  for (EdgeId e : out.sstar) {
    out.sstar_length += bd.len(e);
    if (planar_of[e] != kNone) out.sstar_planar.push_back(planar_of[e]);
  }
  std::sort(out.sstar_planar.begin(), out.sstar_planar.end());
  out.sstar_planar.erase(std::unique(out.sstar_planar.begin(), out.sstar_planar.end()),
                         out.sstar_planar.end());

  // Every boundary a brick added was charged to one of its portal edges at
  // full boundary weight, so dropping the shadow weights afterwards cannot
  // push the plain length past the selection-time weight.
  ensure_bound(approx_le(out.sstar_length, out.sstar_weight),
               fmt::format("kept {} of length against {} of selected weight", out.sstar_length,
                           out.sstar_weight));

  for (std::size_t bi = 0; bi < md.bricks.size(); ++bi) {
    if (out.ignored[bi]) continue;
    for (EdgeId pe : out.bplus.portal_edges)
      if (out.bplus.brick_of[pe] == static_cast<int>(bi))
        ensure(!chosen.count(out.bdiv.emap[pe]), "kept brick lost a portal edge");
  }

  ContractResult r = contract_edge_set(bd, out.sstar);
  out.k = std::move(r.g);
  out.k_vmap = std::move(r.vmap);
  out.k_emap = std::move(r.emap);
  ensure(out.k.connected(), "contraction disconnected the graph");

  out.td = build_tree_decomposition(out.k);

  // Kept bricks retreat into private leaf bags: the brick vertex is struck
  // from every bag in favor of its portals, then reattached beside them in
  // a fresh bag. A portal shared a bag with the brick vertex before, so its
  // bags stay connected after picking up the brick vertex's.
  out.leaf_bag.assign(md.bricks.size(), kNone);
  for (std::size_t bi = 0; bi < md.bricks.size(); ++bi) {
    if (out.ignored[bi]) continue;
    Vertex bk = out.k_vmap[out.bdiv.brick_vertex[bi]];
    std::set<Vertex> ports;
    for (EdgeId pe : out.bplus.portal_edges) {
      if (out.bplus.brick_of[pe] != static_cast<int>(bi)) continue;
      EdgeId ke = out.k_emap[out.bdiv.emap[pe]];
      ensure(ke != kNone, "kept brick lost a portal edge");
      Vertex u = out.k.edges[ke].u;
      Vertex v = out.k.edges[ke].v;
      ensure(u == bk || v == bk, "portal edge detached from its brick");
      ports.insert(u == bk ? v : u);
    }
    ensure(!ports.empty() && !ports.count(bk), "brick vertex fused with the mortar");

    int host = kNone;
    for (std::size_t i = 0; i < out.td.bags.size(); ++i) {
      std::vector<Vertex>& bag = out.td.bags[i];
      auto it = std::find(bag.begin(), bag.end(), bk);
      if (it == bag.end()) continue;
      bag.erase(it);
      for (Vertex p : ports)
        if (std::find(bag.begin(), bag.end(), p) == bag.end()) bag.push_back(p);
      std::sort(bag.begin(), bag.end());
      if (host == kNone) host = static_cast<int>(i);
    }
    ensure(host != kNone, "brick vertex absent from the decomposition");

    std::vector<Vertex> leaf(ports.begin(), ports.end());
    leaf.push_back(bk);
    std::sort(leaf.begin(), leaf.end());
    out.leaf_bag[bi] = static_cast<int>(out.td.bags.size());
    out.td.bags.push_back(std::move(leaf));
    out.td.links.push_back({host, out.leaf_bag[bi]});
  }

  std::optional<TdViolation> bad = validate_tree_decomposition(out.k, out.td);
  ensure(!bad, bad ? fmt::format("leaf surgery broke condition {}: {}", bad->condition, bad->detail)
                   : "");
  return out;
}

}  // namespace gptas

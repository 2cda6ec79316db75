#include "gptas/metrics.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <tuple>

#include "gptas/util.hpp"

namespace gptas {

namespace {

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    p[b] = a;
    return true;
  }
};

std::vector<Vertex> sorted_unique(const EmbeddedGraph& g, const std::vector<Vertex>& req) {
  std::vector<Vertex> r(req);
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end()), r.end());
  for (Vertex v : r) require(0 <= v && v < g.n(), "required vertex out of range");
  return r;
}

}  // namespace

SsspResult sssp(const EmbeddedGraph& g, const std::vector<Vertex>& sources) {
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
      Dart back = EmbeddedGraph::twin(d);
      if (nd < r.dist[w]) {
        r.dist[w] = nd;
        r.parent[w] = back;
        pq.push({nd, w});
      } else if (!done[w] && nd == r.dist[w] && r.parent[w] != kNone && back < r.parent[w]) {
        // Same distance through an earlier dart: keep the forest canonical.
        r.parent[w] = back;
      }
    }
  }
  return r;
}

std::vector<EdgeId> sssp_path_edges(const SsspResult& r, const EmbeddedGraph& g, Vertex v) {
  std::vector<EdgeId> out;
  require(0 <= v && v < g.n() && r.dist[v] < kInf, "vertex unreachable");
  while (r.parent[v] != kNone) {
    Dart d = r.parent[v];
    out.push_back(EmbeddedGraph::edge_of(d));
    v = g.head_of(d);
    ensure(out.size() <= static_cast<size_t>(g.n()), "parent chain does not terminate");
  }
  return out;
}

std::vector<Vertex> sssp_path_vertices(const SsspResult& r, const EmbeddedGraph& g, Vertex v) {
  std::vector<Vertex> out{v};
  require(0 <= v && v < g.n() && r.dist[v] < kInf, "vertex unreachable");
  while (r.parent[v] != kNone) {
    v = g.head_of(r.parent[v]);
    out.push_back(v);
    ensure(out.size() <= static_cast<size_t>(g.n()), "parent chain does not terminate");
  }
  return out;
}

std::vector<EdgeId> two_approx_steiner(const EmbeddedGraph& g, const std::vector<Vertex>& req0) {
  std::vector<Vertex> req = sorted_unique(g, req0);
  require(!req.empty(), "need at least one required vertex");
  if (req.size() == 1) return {};
  require(g.connected(), "graph must be connected");

  // Nearest-required-vertex regions, owner ties resolved toward the lower
  // vertex so the partition is input-order independent.
  std::vector<double> dist(g.n(), kInf);
  std::vector<Vertex> owner(g.n(), kNone);
  std::vector<Dart> parent(g.n(), kNone);
  using Item = std::tuple<double, Vertex, Vertex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (Vertex t : req) {
    dist[t] = 0.0;
    owner[t] = t;
    pq.push({0.0, t, t});
  }
  std::vector<char> done(g.n(), 0);
  while (!pq.empty()) {
    auto [dv, ov, v] = pq.top();
    pq.pop();
    if (done[v]) continue;
    done[v] = 1;
    for (Dart d : g.rot[v]) {
      Vertex w = g.head_of(d);
      double nd = dv + g.len(EmbeddedGraph::edge_of(d));
      Dart back = EmbeddedGraph::twin(d);
      bool better = nd < dist[w] || (nd == dist[w] && ov < owner[w]);
      if (better) {
        dist[w] = nd;
        owner[w] = ov;
        parent[w] = back;
        pq.push({nd, ov, w});
      } else if (!done[w] && nd == dist[w] && ov == owner[w] && back < parent[w]) {
        parent[w] = back;
      }
    }
  }

  // Best connecting edge per region pair.
  std::map<std::pair<Vertex, Vertex>, std::pair<double, EdgeId>> cand;
  for (EdgeId e = 0; e < g.m(); ++e) {
    Vertex a = owner[g.edges[e].u];
    Vertex b = owner[g.edges[e].v];
    if (a == b) continue;
    auto key = std::minmax(a, b);
    std::pair<double, EdgeId> val{dist[g.edges[e].u] + g.edges[e].length + dist[g.edges[e].v], e};
    auto it = cand.find({key.first, key.second});
    if (it == cand.end() || val < it->second) cand[{key.first, key.second}] = val;
  }

  std::vector<std::tuple<double, Vertex, Vertex, EdgeId>> order;
  for (const auto& [key, val] : cand) order.push_back({val.first, key.first, key.second, val.second});
  std::sort(order.begin(), order.end());

  std::set<EdgeId> used;
  UnionFind uf(g.n());
  for (const auto& [w, a, b, e] : order) {
    if (!uf.unite(a, b)) continue;
    used.insert(e);
    for (Vertex x : {g.edges[e].u, g.edges[e].v})
      for (Vertex p = x; parent[p] != kNone; p = g.head_of(parent[p]))
        used.insert(EmbeddedGraph::edge_of(parent[p]));
  }

  // The union can carry redundant edges where expanded paths overlap; keep a
  // spanning tree of it and peel non-required leaves.
  std::vector<std::tuple<double, EdgeId>> by_len;
  for (EdgeId e : used) by_len.push_back({g.edges[e].length, e});
  std::sort(by_len.begin(), by_len.end());
  UnionFind mf(g.n());
  std::set<EdgeId> keep;
  for (const auto& [len, e] : by_len)
    if (mf.unite(g.edges[e].u, g.edges[e].v)) keep.insert(e);

  std::vector<char> required(g.n(), 0);
  for (Vertex t : req) required[t] = 1;
  for (bool peeled = true; peeled;) {
    peeled = false;
    std::vector<int> deg(g.n(), 0);
    std::vector<EdgeId> at(g.n(), kNone);
    for (EdgeId e : keep) {
      for (Vertex x : {g.edges[e].u, g.edges[e].v}) {
        ++deg[x];
        at[x] = e;
      }
    }
    for (Vertex v = 0; v < g.n(); ++v) {
      if (deg[v] == 1 && !required[v] && keep.count(at[v])) {
        keep.erase(at[v]);
        peeled = true;
      }
    }
  }

  std::vector<EdgeId> out(keep.begin(), keep.end());
  UnionFind check(g.n());
  for (EdgeId e : out) check.unite(g.edges[e].u, g.edges[e].v);
  for (Vertex t : req) ensure(check.find(t) == check.find(req[0]), "result must connect required vertices");
  return out;
}

SteinerResult exact_steiner(const EmbeddedGraph& g, const std::vector<Vertex>& req0) {
  std::vector<Vertex> req = sorted_unique(g, req0);
  require(!req.empty(), "need at least one required vertex");
  require(req.size() <= 10, "exact solver takes at most 10 required vertices");
  if (req.size() == 1) return {};

  int k = static_cast<int>(req.size()) - 1;
  Vertex root = req[k];
  int full = (1 << k) - 1;
  int n = g.n();

  // cost[mask][v] = cheapest tree containing v and the masked subset. A
  // state is reached either by merging two subtrees at v or by extending an
  // edge from its head.
  std::vector<std::vector<double>> cost(full + 1, std::vector<double>(n, kInf));
  struct Back {
    char kind = 0;  // 0 seed, 1 merge, 2 edge
    int arg = kNone;
  };
  std::vector<std::vector<Back>> back(full + 1, std::vector<Back>(n));

  using Item = std::pair<double, Vertex>;
  for (int mask = 1; mask <= full; ++mask) {
    auto& c = cost[mask];
    auto& b = back[mask];
    if ((mask & (mask - 1)) == 0) {
      int i = std::countr_zero(static_cast<unsigned>(mask));
      c[req[i]] = 0.0;
    } else {
      for (int sub = (mask - 1) & mask; sub > (mask ^ sub); sub = (sub - 1) & mask) {
        const auto& ca = cost[sub];
        const auto& cb = cost[mask ^ sub];
        for (Vertex v = 0; v < n; ++v) {
          double nd = ca[v] + cb[v];
          if (nd < c[v]) {
            c[v] = nd;
            b[v] = {1, sub};
          }
        }
      }
    }
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    for (Vertex v = 0; v < n; ++v)
      if (c[v] < kInf) pq.push({c[v], v});
    std::vector<char> done(n, 0);
    while (!pq.empty()) {
      auto [dv, v] = pq.top();
      pq.pop();
      if (done[v] || dv > c[v]) continue;
      done[v] = 1;
      for (Dart d : g.rot[v]) {
        Vertex w = g.head_of(d);
        double nd = dv + g.len(EmbeddedGraph::edge_of(d));
        if (nd < c[w]) {
          c[w] = nd;
          b[w] = {2, EmbeddedGraph::twin(d)};
          pq.push({nd, w});
        }
      }
    }
  }

  require(cost[full][root] < kInf, "required vertices are not connected");

  std::set<EdgeId> edges;
  std::vector<std::pair<int, Vertex>> stack{{full, root}};
  while (!stack.empty()) {
    auto [mask, v] = stack.back();
    stack.pop_back();
    while (true) {
      Back b = back[mask][v];
      if (b.kind == 0) break;
      if (b.kind == 1) {
        stack.push_back({b.arg, v});
        stack.push_back({mask ^ b.arg, v});
        break;
      }
      edges.insert(EmbeddedGraph::edge_of(b.arg));
      v = g.head_of(b.arg);
    }
  }

  SteinerResult out;
  out.edges.assign(edges.begin(), edges.end());
  out.length = canonical_length(g, out.edges);
  ensure(approx_eq(out.length, cost[full][root]), "realized tree must match the table");

  UnionFind check(n);
  for (EdgeId e : out.edges) check.unite(g.edges[e].u, g.edges[e].v);
  for (Vertex t : req) ensure(check.find(t) == check.find(root), "result must connect required vertices");
  return out;
}

std::optional<StretchWitness> t_short_violation(const EmbeddedGraph& g,
                                                const std::vector<Dart>& path, double t) {
  require(t >= 0.0, "stretch parameter must be nonnegative");
  if (path.empty()) return std::nullopt;

  std::vector<Vertex> vs{g.vertex_of(path[0])};
  std::vector<double> pre{0.0};
  for (Dart d : path) {
    require(g.vertex_of(d) == vs.back(), "path darts must chain head to tail");
    vs.push_back(g.head_of(d));
    pre.push_back(pre.back() + g.len(EmbeddedGraph::edge_of(d)));
  }
  std::vector<Vertex> seen(vs);
  std::sort(seen.begin(), seen.end());
  require(std::adjacent_find(seen.begin(), seen.end()) == seen.end(), "path must be vertex-simple");

  std::optional<StretchWitness> worst;
  double worst_excess = 0.0;
  for (size_t i = 0; i + 1 < vs.size(); ++i) {
    SsspResult r = sssp(g, {vs[i]});
    for (size_t j = i + 1; j < vs.size(); ++j) {
      double along = pre[j] - pre[i];
      double metric = r.dist[vs[j]];
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

}  // namespace gptas

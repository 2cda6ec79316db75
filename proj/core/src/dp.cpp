#include "gptas/dp.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <fmt/format.h>

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

template <class F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StructuralError& e) {
    throw StructuralError(fmt::format("{}: {}", name, e.what()));
  } catch (const BoundViolation& e) {
    throw BoundViolation(fmt::format("{}: {}", name, e.what()));
  } catch (const InternalError& e) {
    throw InternalError(fmt::format("{}: {}", name, e.what()));
  }
}

}  // namespace

double PartitionTable::forest_cost(const std::vector<std::uint32_t>& blocks) const {
  double total = 0.0;
  for (std::uint32_t b : blocks) {
    require(b < tree_cost.size(), "portal subset out of range");
    total += tree_cost[b];
  }
  return total;
}

std::vector<EdgeId> PartitionTable::realize(const EmbeddedGraph& g, std::uint32_t subset) const {
  require(subset < tree_cost.size(), "portal subset out of range");
  if (subset == 0) return {};
  require(static_cast<std::size_t>(g.n()) == cost[subset].size(), "graph does not match the table");
  require(tree_cost[subset] < kInf, "portal subset is not connected inside the brick");

  Vertex best = kNone;
  for (Vertex v = 0; v < g.n(); ++v)
    if (best == kNone || cost[subset][v] < cost[subset][best]) best = v;

  std::set<EdgeId> edges;
  std::vector<std::pair<std::uint32_t, Vertex>> stack{{subset, best}};
  while (!stack.empty()) {
    auto [mask, v] = stack.back();
    stack.pop_back();
    while (true) {
      Step s = back[mask][v];
      if (s.kind == 0) break;
      if (s.kind == 1) {
        stack.push_back({static_cast<std::uint32_t>(s.arg), v});
        stack.push_back({mask ^ static_cast<std::uint32_t>(s.arg), v});
        break;
      }
      edges.insert(EmbeddedGraph::edge_of(s.arg));
      v = g.head_of(s.arg);
    }
  }

  std::vector<EdgeId> out(edges.begin(), edges.end());
  ensure(approx_eq(canonical_length(g, out), tree_cost[subset]),
         "realized tree must match the table");
  return out;
}

PartitionTable brick_leaf_table(const Brick& b, const std::vector<Vertex>& portals) {
  require(portals.size() <= 16, "too many portals for one table");
  std::set<Vertex> boundary;
  for (Dart d : b.walk) boundary.insert(b.g.vertex_of(d));
  for (Vertex p : portals) {
    require(0 <= p && p < b.g.n(), "portal out of range");
    require(boundary.count(p) != 0, "portal off the brick boundary");
  }

  PartitionTable out;
  out.portals = portals;
  int np = static_cast<int>(portals.size());
  std::uint32_t full = np == 0 ? 0 : (std::uint32_t{1} << np) - 1;
  int n = b.g.n();
  out.tree_cost.assign(full + 1, 0.0);
  out.cost.assign(full + 1, {});
  out.back.assign(full + 1, {});
  if (np == 0) return out;

  // cost[mask][v] = cheapest connected subgraph containing v and the masked
  // portals, built by merging two subtrees at v or extending along an edge.
  using Item = std::pair<double, Vertex>;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    out.cost[mask].assign(n, kInf);
    out.back[mask].assign(n, {});
    auto& c = out.cost[mask];
    auto& bk = out.back[mask];
    if ((mask & (mask - 1)) == 0) {
      int i = std::countr_zero(mask);
      c[portals[i]] = 0.0;
    } else {
      for (std::uint32_t sub = (mask - 1) & mask; sub > (mask ^ sub); sub = (sub - 1) & mask) {
        const auto& ca = out.cost[sub];
        const auto& cb = out.cost[mask ^ sub];
        for (Vertex v = 0; v < n; ++v) {
          double nd = ca[v] + cb[v];
          if (nd < c[v]) {
            c[v] = nd;
            bk[v] = {1, static_cast<int>(sub)};
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
      for (Dart d : b.g.rot[v]) {
        Vertex w = b.g.head_of(d);
        double nd = dv + b.g.len(EmbeddedGraph::edge_of(d));
        if (nd < c[w]) {
          c[w] = nd;
          bk[w] = {2, EmbeddedGraph::twin(d)};
          pq.push({nd, w});
        }
      }
    }
    double bestc = kInf;
    for (Vertex v = 0; v < n; ++v) bestc = std::min(bestc, c[v]);
    out.tree_cost[mask] = bestc;
  }
  return out;
}

namespace {

constexpr char kFreeSlot = -1;

// Blocks renumbered by first appearance so equal partitions share one key.
std::string canonical_key(std::string k) {
  std::array<signed char, 256> relabel;
  relabel.fill(-1);
  signed char next = 0;
  for (char& c : k) {
    if (c == kFreeSlot) continue;
    signed char& r = relabel[static_cast<unsigned char>(c)];
    if (r < 0) r = next++;
    c = static_cast<char>(r);
  }
  return k;
}

struct Prov {
  EdgeId edge = kNone;                // edge of the brick-copy graph taken here
  int brick = kNone;                  // brick settled at a leaf
  std::uint32_t subset = 0;           // portal positions wired through
  std::vector<std::uint32_t> blocks;  // how the wired positions join up inside
  const Prov* a = nullptr;
  const Prov* b = nullptr;
};

struct Entry {
  double cost = 0.0;
  const Prov* prov = nullptr;
};

using Table = std::map<std::string, Entry>;

// Cheaper cost wins a state; on a tie the first writer stays, keeping the
// sweep deterministic. Returns the slot to hang provenance on, null when
// nothing changed.
Entry* relax(Table& t, std::string key, double cost) {
  auto [it, fresh] = t.try_emplace(std::move(key), Entry{cost, nullptr});
  if (!fresh) {
    if (!(cost < it->second.cost)) return nullptr;
    it->second.cost = cost;
    it->second.prov = nullptr;
  }
  return &it->second;
}

// Every noncrossing set partition of the given positions, delivered as
// bitmasks. Scanning left to right, an element either opens a block or
// joins an open one, retiring every block opened after it; a crossing
// would need a retired block back, so exactly the noncrossing patterns
// come out.
void noncrossing(const std::vector<int>& elems,
                 const std::function<void(const std::vector<std::uint32_t>&)>& emit) {
  std::vector<std::uint32_t> open, closed, all;
  std::function<void(std::size_t)> step = [&](std::size_t i) {
    if (i == elems.size()) {
      all = closed;
      all.insert(all.end(), open.begin(), open.end());
      emit(all);
      return;
    }
    std::uint32_t bit = std::uint32_t{1} << elems[i];
    open.push_back(bit);
    step(i + 1);
    open.pop_back();
    for (std::size_t j = open.size(); j-- > 0;) {
      std::size_t keep = closed.size();
      closed.insert(closed.end(), open.begin() + j + 1, open.end());
      open.resize(j + 1);
      std::uint32_t saved = open[j];
      open[j] |= bit;
      step(i + 1);
      open[j] = saved;
      open.insert(open.end(), closed.begin() + keep, closed.end());
      closed.resize(keep);
    }
  };
  step(0);
}

struct Nice {
  int kind = 0;  // 0 start, 1 introduce, 2 forget, 3 join, 4 edge, 5 brick
  Vertex v = kNone;
  EdgeId ke = kNone;
  int brick = kNone;
  int a = kNone;
  int b = kNone;
  std::vector<Vertex> bag;  // sorted
};

std::size_t pos_in(const std::vector<Vertex>& bag, Vertex v) {
  auto it = std::lower_bound(bag.begin(), bag.end(), v);
  ensure(it != bag.end() && *it == v, "vertex missing from its bag");
  return static_cast<std::size_t>(it - bag.begin());
}

}  // namespace

DpSolution dp_solve(const ThinningResult& thin, const MortarDecomposition& md,
                    const std::vector<Vertex>& q) {
  const EmbeddedGraph& bg = thin.bplus.g;
  const EmbeddedGraph& kg = thin.k;
  require(!q.empty(), "need at least one terminal");
  require(md.bricks.size() == thin.leaf_bag.size(), "decomposition out of step with the thinning");

  // Terminals land on their mortar copies, then on the contracted graph.
  std::vector<Vertex> qk;
  {
    std::set<Vertex> seen;
    for (Vertex t : q) {
      require(0 <= t && t < static_cast<Vertex>(thin.bplus.mortar_vertex.size()),
              "terminal out of range");
      Vertex mv = thin.bplus.mortar_vertex[t];
      require(mv != kNone, "terminal off the mortar graph");
      seen.insert(thin.k_vmap[thin.bdiv.vmap[mv]]);
    }
    qk.assign(seen.begin(), seen.end());
  }
  if (qk.size() <= 1) return {};

  std::vector<char> in_sstar(thin.bdiv.g.m(), 0);
  for (EdgeId e : thin.sstar) in_sstar[e] = 1;

  std::vector<EdgeId> bplus_of_bdiv(thin.bdiv.g.m(), kNone);
  for (EdgeId e = 0; e < bg.m(); ++e) {
    EdgeId de = thin.bdiv.emap[e];
    if (de == kNone) continue;
    ensure(bplus_of_bdiv[de] == kNone, "brick contraction folded an edge");
    bplus_of_bdiv[de] = e;
  }
  std::vector<EdgeId> bplus_of_k(kg.m(), kNone);
  for (EdgeId e = 0; e < thin.bdiv.g.m(); ++e) {
    EdgeId ke = thin.k_emap[e];
    if (ke == kNone) continue;
    ensure(bplus_of_k[ke] == kNone, "thinning contraction folded an edge");
    bplus_of_k[ke] = bplus_of_bdiv[e];
    ensure(bplus_of_k[ke] != kNone, "contracted edge outlived its original");
  }

  // Bricks the sweep may enter: portal edges in walk order, their partner
  // vertices in the contracted graph, and the subset table of the interior.
  // Portal edges of a kept brick are settled at its leaf, never introduced;
  // an ignored brick has its whole boundary contracted, so its leftover
  // portal edges are loops and drop out on their own.
  struct BrickInfo {
    int count = 0;
    EdgeId ebase = kNone;
    std::vector<EdgeId> pedge;
    std::vector<Vertex> kvert;
    std::vector<std::size_t> slot;
  };
  int nb = static_cast<int>(md.bricks.size());
  std::vector<BrickInfo> pinfo(nb);
  std::vector<PartitionTable> btab(nb);
  std::vector<char> leaf_edge(kg.m(), 0);
  for (EdgeId pe : thin.bplus.portal_edges) pinfo[thin.bplus.brick_of[pe]].pedge.push_back(pe);
  for (int bi = 0; bi < nb; ++bi) {
    BrickInfo& in = pinfo[bi];
    in.count = static_cast<int>(in.pedge.size());
    ensure(in.count == static_cast<int>(md.bricks[bi].portal_pos.size()),
           "portal edges out of step with the brick");
    Vertex hub = thin.k_vmap[thin.bdiv.vmap[thin.bdiv.brick_vertex[bi]]];
    if (thin.leaf_bag[bi] == kNone) {
      for (EdgeId pe : in.pedge) {
        EdgeId de = thin.bdiv.emap[pe];
        ensure(de != kNone, "portal edge vanished in the contraction");
        EdgeId ke = thin.k_emap[de];
        ensure(ke == kNone || kg.is_loop(ke), "ignored brick kept an open portal");
      }
      continue;
    }
    for (EdgeId pe : in.pedge) {
      ensure(thin.bdiv.vmap[bg.edges[pe].v] == thin.bdiv.brick_vertex[bi],
             "portal edge lost its brick side");
      Vertex kv = thin.k_vmap[thin.bdiv.vmap[bg.edges[pe].u]];
      ensure(kv != hub, "portal partner collapsed onto its brick");
      in.kvert.push_back(kv);
      EdgeId de = thin.bdiv.emap[pe];
      ensure(de != kNone, "portal edge vanished in the contraction");
      EdgeId ke = thin.k_emap[de];
      ensure(ke != kNone, "portal edge of a kept brick fell into the contracted set");
      leaf_edge[ke] = 1;
    }
    for (EdgeId e = 0; e < bg.m(); ++e)
      if (thin.bplus.brick_of[e] == bi) {
        in.ebase = e;
        break;
      }
    int mb = md.bricks[bi].g.m();
    for (EdgeId e = 0; e < mb; ++e)
      ensure(thin.bplus.brick_of[in.ebase + e] == bi && thin.bplus.planar_edge[in.ebase + e] != kNone,
             "brick edges are not contiguous in the copy");
    btab[bi] = brick_leaf_table(md.bricks[bi], md.bricks[bi].portal_vertices());
  }

  int nbag = static_cast<int>(thin.td.bags.size());
  require(nbag > 0, "empty tree decomposition");
  std::vector<int> leaf_of(nbag, kNone);
  for (int bi = 0; bi < nb; ++bi)
    if (thin.leaf_bag[bi] != kNone) leaf_of[thin.leaf_bag[bi]] = bi;

  std::vector<std::vector<Vertex>> bags(nbag);
  for (int t = 0; t < nbag; ++t) {
    bags[t] = thin.td.bags[t];
    std::sort(bags[t].begin(), bags[t].end());
    ensure(bags[t].size() <= 100, "bag too wide for the sweep");
  }
  std::vector<std::vector<int>> tadj(nbag);
  for (auto [x, y] : thin.td.links) {
    tadj[x].push_back(y);
    tadj[y].push_back(x);
  }

  std::vector<char> is_term(kg.n(), 0);
  for (Vertex v : qk) is_term[v] = 1;

  // Positions of the portal partners inside their leaf bag.
  for (int bi = 0; bi < nb; ++bi) {
    if (thin.leaf_bag[bi] == kNone) continue;
    const auto& lb = bags[thin.leaf_bag[bi]];
    for (Vertex kv : pinfo[bi].kvert) pinfo[bi].slot.push_back(pos_in(lb, kv));
  }

  // The sweep runs toward a bag holding the lowest terminal, so the block
  // containing it can never die below the root and pruning a state whose
  // block just lost its last bag vertex is safe.
  Vertex r = qk[0];
  int root_bag = kNone;
  for (int t = 0; t < nbag && root_bag == kNone; ++t)
    if (leaf_of[t] == kNone && std::binary_search(bags[t].begin(), bags[t].end(), r)) root_bag = t;
  ensure(root_bag != kNone, "terminal missing from every ordinary bag");

  // Each usable edge enters at the lowest ordinary bag holding both ends.
  std::vector<std::vector<EdgeId>> edges_at(nbag);
  for (EdgeId e = 0; e < kg.m(); ++e) {
    Vertex u = kg.edges[e].u;
    Vertex v = kg.edges[e].v;
    if (u == v || leaf_edge[e]) continue;
    int home = kNone;
    for (int t = 0; t < nbag && home == kNone; ++t)
      if (leaf_of[t] == kNone && std::binary_search(bags[t].begin(), bags[t].end(), u) &&
          std::binary_search(bags[t].begin(), bags[t].end(), v))
        home = t;
    ensure(home != kNone, "edge missed every ordinary bag");
    edges_at[home].push_back(e);
  }

  // Unrolled tree: children precede parents, so one forward pass suffices.
  std::vector<Nice> nodes;
  auto push = [&](Nice nd) {
    nodes.push_back(std::move(nd));
    return static_cast<int>(nodes.size()) - 1;
  };
  auto transform = [&](int from, const std::vector<Vertex>& target) {
    int cur = from;
    std::vector<Vertex> drop, add;
    std::set_difference(nodes[cur].bag.begin(), nodes[cur].bag.end(), target.begin(), target.end(),
                        std::back_inserter(drop));
    std::set_difference(target.begin(), target.end(), nodes[cur].bag.begin(), nodes[cur].bag.end(),
                        std::back_inserter(add));
    for (Vertex v : drop) {
      Nice nd;
      nd.kind = 2;
      nd.v = v;
      nd.a = cur;
      nd.bag = nodes[cur].bag;
      nd.bag.erase(nd.bag.begin() + pos_in(nd.bag, v));
      cur = push(std::move(nd));
    }
    for (Vertex v : add) {
      Nice nd;
      nd.kind = 1;
      nd.v = v;
      nd.a = cur;
      nd.bag = nodes[cur].bag;
      nd.bag.insert(std::lower_bound(nd.bag.begin(), nd.bag.end(), v), v);
      cur = push(std::move(nd));
    }
    return cur;
  };
  std::function<int(int, int)> expand = [&](int t, int parent) -> int {
    if (leaf_of[t] != kNone) {
      Nice nd;
      nd.kind = 5;
      nd.brick = leaf_of[t];
      nd.bag = bags[t];
      return push(std::move(nd));
    }
    int acc = kNone;
    for (int c : tadj[t]) {
      if (c == parent) continue;
      int sub = transform(expand(c, t), bags[t]);
      if (acc == kNone) {
        acc = sub;
      } else {
        Nice nd;
        nd.kind = 3;
        nd.a = acc;
        nd.b = sub;
        nd.bag = bags[t];
        acc = push(std::move(nd));
      }
    }
    if (acc == kNone) {
      Nice nd;
      nd.kind = 0;
      acc = transform(push(std::move(nd)), bags[t]);
    }
    for (EdgeId e : edges_at[t]) {
      Nice nd;
      nd.kind = 4;
      nd.ke = e;
      nd.a = acc;
      nd.bag = bags[t];
      acc = push(std::move(nd));
    }
    return acc;
  };
  int root_node = expand(root_bag, kNone);

  std::deque<Prov> arena;
  std::vector<Table> tabs(nodes.size());
  std::vector<int> elems;
  std::vector<int> bpar;
  std::vector<int> firstv;
  for (std::size_t ni = 0; ni < nodes.size(); ++ni) {
    const Nice& nd = nodes[ni];
    Table out;
    switch (nd.kind) {
      case 0: {
        relax(out, std::string(), 0.0);
        break;
      }
      case 1: {
        std::size_t p = pos_in(nd.bag, nd.v);
        for (const auto& [k, e] : tabs[nd.a]) {
          std::string k2 = k;
          k2.insert(k2.begin() + p, kFreeSlot);
          if (Entry* slot = relax(out, std::move(k2), e.cost)) slot->prov = e.prov;
        }
        break;
      }
      case 2: {
        std::size_t p = pos_in(nodes[nd.a].bag, nd.v);
        bool term = is_term[nd.v] != 0;
        for (const auto& [k, e] : tabs[nd.a]) {
          char c = k[p];
          if (c == kFreeSlot) {
            if (term) continue;  // terminal never touched: dead end
          } else {
            bool survives = false;
            for (std::size_t q2 = 0; q2 < k.size(); ++q2)
              if (q2 != p && k[q2] == c) {
                survives = true;
                break;
              }
            if (!survives) continue;  // block lost its last bag vertex
          }
          std::string k2 = k;
          k2.erase(k2.begin() + p);
          if (Entry* slot = relax(out, canonical_key(std::move(k2)), e.cost)) slot->prov = e.prov;
        }
        break;
      }
      case 3: {
        std::size_t w = nd.bag.size();
        std::vector<int> par(w);
        auto find = [&](int x) {
          while (par[x] != x) x = par[x] = par[par[x]];
          return x;
        };
        std::array<int, 256> first{};
        for (const auto& [k1, e1] : tabs[nd.a])
          for (const auto& [k2, e2] : tabs[nd.b]) {
            std::iota(par.begin(), par.end(), 0);
            auto glue = [&](const std::string& k) {
              first.fill(-1);
              for (std::size_t p = 0; p < w; ++p) {
                char c = k[p];
                if (c == kFreeSlot) continue;
                int& f = first[static_cast<unsigned char>(c)];
                if (f < 0) {
                  f = static_cast<int>(p);
                } else {
                  int ra = find(f);
                  int rb = find(static_cast<int>(p));
                  if (ra != rb) par[rb] = ra;
                }
              }
            };
            glue(k1);
            glue(k2);
            std::string km(w, kFreeSlot);
            for (std::size_t p = 0; p < w; ++p)
              if (k1[p] != kFreeSlot || k2[p] != kFreeSlot)
                km[p] = static_cast<char>(find(static_cast<int>(p)));
            if (Entry* slot = relax(out, canonical_key(std::move(km)), e1.cost + e2.cost)) {
              arena.push_back({kNone, kNone, 0, {}, e1.prov, e2.prov});
              slot->prov = &arena.back();
            }
          }
        break;
      }
      case 4: {
        Vertex u = kg.edges[nd.ke].u;
        Vertex v = kg.edges[nd.ke].v;
        std::size_t pu = pos_in(nd.bag, u);
        std::size_t pv = pos_in(nd.bag, v);
        double len = kg.len(nd.ke);
        EdgeId be = bplus_of_k[nd.ke];
        for (const auto& [k, e] : tabs[nd.a]) {
          if (Entry* slot = relax(out, k, e.cost)) slot->prov = e.prov;
          std::string k2 = k;
          char cu = k2[pu];
          char cv = k2[pv];
          if (cu == kFreeSlot && cv == kFreeSlot) {
            char fresh = 0;
            for (char ch : k2) fresh = std::max(fresh, static_cast<char>(ch + 1));
            k2[pu] = k2[pv] = fresh;
          } else if (cu == kFreeSlot) {
            k2[pu] = cv;
          } else if (cv == kFreeSlot) {
            k2[pv] = cu;
          } else if (cu != cv) {
            for (char& ch : k2)
              if (ch == cv) ch = cu;
          }
          if (Entry* slot = relax(out, canonical_key(std::move(k2)), e.cost + len)) {
            arena.push_back({be, kNone, 0, {}, e.prov, nullptr});
            slot->prov = &arena.back();
          }
        }
        break;
      }
      case 5: {
        const BrickInfo& in = pinfo[nd.brick];
        const PartitionTable& tab = btab[nd.brick];
        std::size_t w = nd.bag.size();
        firstv.assign(w, -1);
        for (std::uint32_t sub = 0; sub < (std::uint32_t{1} << in.count); ++sub) {
          if (sub == 0) {
            relax(out, std::string(w, kFreeSlot), 0.0);
            continue;
          }
          elems.clear();
          for (int i = 0; i < in.count; ++i)
            if (sub >> i & 1u) elems.push_back(i);
          noncrossing(elems, [&](const std::vector<std::uint32_t>& blocks) {
            double c = 0.0;
            for (std::uint32_t blk : blocks) c += tab.tree_cost[blk];
            if (!(c < kInf)) return;  // some block has no tree inside
            bpar.assign(blocks.size(), 0);
            std::iota(bpar.begin(), bpar.end(), 0);
            auto bfind = [&](int x) {
              while (bpar[x] != x) x = bpar[x] = bpar[bpar[x]];
              return x;
            };
            std::fill(firstv.begin(), firstv.end(), -1);
            for (std::size_t j = 0; j < blocks.size(); ++j)
              for (int i = 0; i < in.count; ++i)
                if (blocks[j] >> i & 1u) {
                  int& f = firstv[in.slot[i]];
                  if (f < 0) {
                    f = static_cast<int>(j);
                  } else {
                    int ra = bfind(f);
                    int rb = bfind(static_cast<int>(j));
                    if (ra != rb) bpar[rb] = ra;
                  }
                }
            std::string km(w, kFreeSlot);
            for (std::size_t j = 0; j < blocks.size(); ++j)
              for (int i = 0; i < in.count; ++i)
                if (blocks[j] >> i & 1u)
                  km[in.slot[i]] = static_cast<char>(bfind(static_cast<int>(j)));
            if (Entry* slot = relax(out, canonical_key(std::move(km)), c)) {
              arena.push_back({kNone, nd.brick, sub, blocks, nullptr, nullptr});
              slot->prov = &arena.back();
            }
          });
        }
        break;
      }
      default:
        ensure(false, "unknown sweep node");
    }
    tabs[ni] = std::move(out);
    if (nd.a != kNone) tabs[nd.a] = Table{};
    if (nd.b != kNone) tabs[nd.b] = Table{};
  }

  // Accept states where every terminal of the root bag is wired and the
  // touched vertices form a single block.
  const Table& rt = tabs[root_node];
  const auto& rbag = nodes[root_node].bag;
  double best = kInf;
  const Prov* bp = nullptr;
  for (const auto& [k, e] : rt) {
    bool ok = true;
    for (std::size_t p = 0; p < rbag.size(); ++p)
      if (is_term[rbag[p]] && k[p] == kFreeSlot) {
        ok = false;
        break;
      }
    if (!ok) continue;
    char seen = kFreeSlot;
    for (char c : k) {
      if (c == kFreeSlot) continue;
      if (seen == kFreeSlot) {
        seen = c;
      } else if (c != seen) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    if (e.cost < best) {
      best = e.cost;
      bp = e.prov;
    }
  }
  ensure(best < kInf, "no feasible state at the root");

  std::set<EdgeId> chosen;
  std::vector<const Prov*> stack;
  if (bp != nullptr) stack.push_back(bp);
  while (!stack.empty()) {
    const Prov* p = stack.back();
    stack.pop_back();
    if (p->edge != kNone) chosen.insert(p->edge);
    if (p->brick != kNone) {
      const BrickInfo& in = pinfo[p->brick];
      for (int i = 0; i < in.count; ++i)
        if (p->subset >> i & 1u) chosen.insert(in.pedge[i]);
      for (std::uint32_t blk : p->blocks)
        for (EdgeId le : btab[p->brick].realize(md.bricks[p->brick].g, blk))
          chosen.insert(in.ebase + le);
    }
    if (p->a != nullptr) stack.push_back(p->a);
    if (p->b != nullptr) stack.push_back(p->b);
  }

  DpSolution out;
  out.edges.assign(chosen.begin(), chosen.end());
  out.cost = canonical_length(bg, out.edges);
  // Leaf blocks may share interior edges, so the deduplicated set can only
  // come in at or under the swept cost.
  ensure_bound(approx_le(out.cost, best), "realized length above the swept cost");

  UnionFind uf(bg.n());
  for (EdgeId e : out.edges) uf.unite(bg.edges[e].u, bg.edges[e].v);
  for (EdgeId e = 0; e < bg.m(); ++e) {
    EdgeId de = thin.bdiv.emap[e];
    if (de != kNone && in_sstar[de]) uf.unite(bg.edges[e].u, bg.edges[e].v);
  }
  Vertex anchor = kNone;
  for (Vertex t : q) {
    Vertex mv = thin.bplus.mortar_vertex[t];
    if (anchor == kNone) anchor = mv;
    ensure(uf.find(mv) == uf.find(anchor), "program output must connect the terminals");
  }
  return out;
}

SteinerResult lift_solution(const DpSolution& a, const ThinningResult& thin,
                            const PlanarizeResult& cut, const EmbeddedGraph& g) {
  const BrickCopy& bc = thin.bplus;
  require(cut.emap.size() == static_cast<std::size_t>(cut.planar.m()),
          "cut map out of step with its graph");

  std::set<EdgeId> planar_ids;
  for (EdgeId e : a.edges) {
    require(0 <= e && e < bc.g.m(), "solution edge out of range");
    EdgeId pe = bc.planar_edge[e];
    if (pe == kNone) continue;  // portal edges carry no length and vanish
    planar_ids.insert(pe);
  }
  for (EdgeId e : thin.sstar_planar) {
    require(0 <= e && e < cut.planar.m(), "contracted edge out of range");
    planar_ids.insert(e);
  }

  std::set<EdgeId> host;
  for (EdgeId pe : planar_ids) {
    EdgeId ge = cut.emap[pe];
    ensure(ge != kNone && ge < g.m(), "planar edge lost its original");
    host.insert(ge);
  }

  SteinerResult out;
  out.edges.assign(host.begin(), host.end());
  out.length = canonical_length(g, out.edges);
  ensure_bound(approx_le(out.length, a.cost + thin.sstar_length), "lifted length above its parts");

  UnionFind uf(g.n());
  for (EdgeId e : out.edges) uf.unite(g.edges[e].u, g.edges[e].v);
  std::vector<Vertex> terms = g.terminal_list();
  for (Vertex t : terms)
    ensure(uf.find(t) == uf.find(terms[0]), "lifted solution must connect the terminals");
  return out;
}

PipelineReport run_ptas(const EmbeddedGraph& g0, const std::vector<Vertex>& q,
                        const PtasParams& par) {
  PipelineReport rep;
  std::vector<Vertex> qs = stage("instance", [&] {
    g0.validate();
    require(g0.connected(), "instance must be connected");
    std::vector<Vertex> r(q);
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    require(!r.empty(), "need at least one terminal");
    for (Vertex v : r) require(0 <= v && v < g0.n(), "terminal out of range");
    return r;
  });

  EmbeddedGraph g = g0;
  g.terminal.assign(g.n(), 0);
  for (Vertex t : qs) g.terminal[t] = 1;

  rep.n = g.n();
  rep.m = g.m();
  rep.q = static_cast<int>(qs.size());
  rep.genus = stage("embedding", [&] { return euler_genus(g); });

  std::vector<EdgeId> base = stage("baseline", [&] { return two_approx_steiner(g, qs); });
  rep.tree_length = canonical_length(g, base);

  PlanarizeResult cut = stage("planarize", [&] { return planarize(g, par.xi); });
  rep.cut_length = cut.cut_length;
  for (Dart d : cut.boundary) rep.sigma_length += cut.planar.len(EmbeddedGraph::edge_of(d));

  MortarDecomposition md =
      stage("mortar", [&] { return build_mortar(cut.planar, cut.boundary, par, cut.genus); });
  rep.mortar_length = md.mortar_length;

  ThinningResult thin = stage("thinning", [&] { return thinning(cut.planar, md, par); });
  rep.sstar_length = thin.sstar_length;
  rep.width = thin.td.width();

  rep.solution.edges = base;
  rep.solution.length = rep.tree_length;
  if (rep.width <= par.width_cap) {
    DpSolution inner = stage("solve", [&] { return dp_solve(thin, md, qs); });
    SteinerResult lifted = stage("lift", [&] { return lift_solution(inner, thin, cut, g); });
    rep.dp_used = true;
    if (lifted.length < rep.solution.length) rep.solution = std::move(lifted);
  }
  ensure_bound(approx_le(rep.solution.length, rep.tree_length), "final answer above the baseline");

  if (qs.size() <= 8 && g.n() <= 600) {
    SteinerResult exact = stage("oracle", [&] { return exact_steiner(g, qs); });
    rep.opt = exact.length;
    ensure_bound(approx_ge(rep.solution.length, exact.length), "final answer below the optimum");
    rep.ratio = exact.length > 0.0 ? rep.solution.length / exact.length : 1.0;
  }
  return rep;
}

}  // namespace gptas

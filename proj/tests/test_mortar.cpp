#include <gptas/mortar.hpp>

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include <doctest.h>

#include <gptas/generator.hpp>
#include <gptas/metrics.hpp>
#include <gptas/planarizer.hpp>

#include "helpers.hpp"

using namespace gptas;
using testing::make_graph;

namespace {

// 2x3 grid with an extra pendant vertex inside the left square:
//   3 - 4 - 5
//   |   |   |      6 hangs off 1
//   0 - 1 - 2
EmbeddedGraph fenced_grid() {
  return make_graph(7,
                    {{0, 1, 1.0, 1},
                     {1, 2, 1.0, 1},
                     {1, 4, 1.0, 1},
                     {3, 4, 1.0, 1},
                     {4, 5, 1.0, 1},
                     {0, 3, 1.0, 1},
                     {2, 5, 1.0, 1},
                     {1, 6, 0.5, 1}},
                    {{0, 10}, {2, 4, 14, 1}, {12, 3}, {6, 11}, {8, 7, 5}, {9, 13}, {15}});
}

Brick open_brick() {
  Brick b;
  b.g = fenced_grid();
  b.walk = {10, 6, 8, 13, 3, 1};
  b.west_len = 1;
  b.north_len = 2;
  b.east_len = 1;
  b.s_pos = {0, 1, 2};
  return b;
}

// Triangle with a pendant vertex inside one face; the other face stays
// bounded by the plain cycle.
Brick closed_brick() {
  Brick b;
  b.g = make_graph(4,
                   {{0, 1, 1.0, 1}, {1, 2, 1.0, 1}, {2, 0, 1.0, 1}, {0, 3, 1.0, 1}},
                   {{0, 6, 5}, {2, 1}, {4, 3}, {7}});
  b.walk = {0, 2, 4};
  b.south_closed = true;
  b.north_anchor = 0;
  b.s_pos = {0, 1, 2, 3};
  return b;
}

struct Dsu {
  std::vector<int> p;
  explicit Dsu(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  void unite(int a, int b) { p[find(a)] = find(b); }
};

// The perimeter of a grid in its planar embedding: the one long facial walk.
std::vector<Dart> outer_walk(const EmbeddedGraph& g) {
  Faces f = trace_faces(g);
  size_t best = 0;
  for (size_t i = 1; i < f.walks.size(); ++i)
    if (f.walks[i].darts.size() > f.walks[best].darts.size()) best = i;
  return f.walks[best].darts;
}

void check_decomposition(const MortarDecomposition& md, const EmbeddedGraph& planar,
                         const std::vector<Dart>& sigma, double epsilon) {
  std::set<EdgeId> interior_seen;
  std::set<EdgeId> mortar(md.mortar_edges.begin(), md.mortar_edges.end());
  CHECK(mortar.size() == md.mortar_edges.size());
  CHECK(std::is_sorted(md.mortar_edges.begin(), md.mortar_edges.end()));
  for (EdgeId e : md.mortar_edges) CHECK((0 <= e && e < planar.m()));
  for (Dart d : sigma) CHECK(mortar.count(EmbeddedGraph::edge_of(d)) == 1);
  CHECK(md.mortar_length == canonical_length(planar, md.mortar_edges));

  CHECK(std::is_sorted(md.supercolumn_edges.begin(), md.supercolumn_edges.end()));
  CHECK(std::adjacent_find(md.supercolumn_edges.begin(), md.supercolumn_edges.end()) ==
        md.supercolumn_edges.end());
  for (EdgeId e : md.supercolumn_edges) CHECK(mortar.count(e) == 1);
  CHECK(md.supercolumn_length == canonical_length(planar, md.supercolumn_edges));

  // one face per brick besides the one the input walk bounds
  Faces mf = trace_faces(sub_embedding(planar, md.mortar_edges).g);
  CHECK(mf.walks.size() == md.bricks.size() + 1);

  // terminals keep a seat on the mortar
  std::vector<char> on_mortar(planar.n(), 0);
  for (EdgeId e : md.mortar_edges) {
    on_mortar[planar.edges[e].u] = 1;
    on_mortar[planar.edges[e].v] = 1;
  }
  for (Vertex v = 0; v < planar.n(); ++v)
    if (planar.terminal[v]) CHECK(on_mortar[v] == 1);

  for (const Brick& b : md.bricks) {
    auto viol = validate_brick(b, epsilon, md.params.kappa_ceil);
    if (viol) {
      // a piece whose boundary offers no chord is consumed whole, short or
      // not; only that path may leave a stretched south behind
      CAPTURE(viol->detail);
      CHECK(viol->condition == 4);
      CHECK(md.stats.forced_strips > 0);
    }

    REQUIRE(b.vmap.size() == static_cast<size_t>(b.g.n()));
    REQUIRE(b.emap.size() == static_cast<size_t>(b.g.m()));
    for (EdgeId e = 0; e < b.g.m(); ++e) {
      EdgeId he = b.emap[e];
      REQUIRE((0 <= he && he < planar.m()));
      CHECK(b.g.edges[e].length == planar.edges[he].length);
      std::set<Vertex> got{b.vmap[b.g.edges[e].u], b.vmap[b.g.edges[e].v]};
      std::set<Vertex> want{planar.edges[he].u, planar.edges[he].v};
      CHECK(got == want);
    }
    for (Vertex v = 0; v < b.g.n(); ++v)
      if (b.g.terminal[v]) CHECK(planar.terminal[b.vmap[v]] == 1);

    // boundary edges are mortar; interior edges are private and stay out
    std::vector<char> on_walk(b.g.m(), 0);
    for (Dart d : b.walk) on_walk[EmbeddedGraph::edge_of(d)] = 1;
    for (EdgeId e = 0; e < b.g.m(); ++e) {
      if (on_walk[e]) {
        CHECK(mortar.count(b.emap[e]) == 1);
      } else {
        CHECK(mortar.count(b.emap[e]) == 0);
        CHECK(interior_seen.insert(b.emap[e]).second);
      }
    }

    CHECK(static_cast<int>(b.portal_pos.size()) <= md.params.theta);
    CHECK(std::is_sorted(b.portal_pos.begin(), b.portal_pos.end()));
    REQUIRE(!b.portal_pos.empty());
    const int len = static_cast<int>(b.walk.size());
    std::vector<double> pref(len + 1, 0.0);
    for (int i = 0; i < len; ++i)
      pref[i + 1] = pref[i] + b.g.len(EmbeddedGraph::edge_of(b.walk[i]));
    const double total = pref[len];
    for (int i = 0; i < len; ++i) {
      double best = kInf;
      for (int p : b.portal_pos) {
        double delta = std::abs(pref[i] - pref[p]);
        best = std::min(best, std::min(delta, total - delta));
      }
      CHECK(approx_le(best, total / md.params.theta));
    }
  }

  // bricks partition the non-mortar edges
  CHECK(interior_seen.size() + mortar.size() == static_cast<size_t>(planar.m()));

  if (md.stats.forced_strips == 0) {
    double f = 1.0 + 1.0 / epsilon;
    CHECK(approx_le(md.mortar_length, f * f * md.sigma_length));
    CHECK(approx_le(md.supercolumn_length,
                    f / (epsilon * md.params.kappa) * md.sigma_length));
  }
}

}  // namespace

TEST_CASE("derived parameters follow the stated shapes") {
  PtasParams par;
  DerivedParams dp = derive_params(par, 1);
  CHECK(dp.gamma == 324.0);
  CHECK(dp.kappa == 648.0);
  CHECK(dp.kappa_ceil == 648);
  CHECK(dp.stride == 647);
  CHECK(dp.theta == par.theta_max);
  CHECK(dp.levels > 0);

  par.epsilon = 1.0;
  par.xi = 0.5;
  dp = derive_params(par, 0);
  CHECK(dp.gamma == 16.0);
  CHECK(dp.kappa == 16.0);
  CHECK(dp.kappa_ceil == 16);
  CHECK(dp.stride == 15);
  CHECK(dp.theta == par.theta_max);

  par.epsilon = 0.0;
  CHECK_THROWS_AS(derive_params(par, 0), StructuralError);
}

TEST_CASE("portal selection spreads along the walk") {
  // hexagon cycle
  EmbeddedGraph g = make_graph(6,
                               {{0, 1, 1.0, 1},
                                {1, 2, 1.0, 1},
                                {2, 3, 1.0, 1},
                                {3, 4, 1.0, 1},
                                {4, 5, 1.0, 1},
                                {5, 0, 1.0, 1}},
                               {{0, 11}, {2, 1}, {4, 3}, {6, 5}, {8, 7}, {10, 9}});
  std::vector<Dart> walk{0, 2, 4, 6, 8, 10};
  CHECK(select_portals(g, walk, 6) == std::vector<int>{0, 1, 2, 3, 4, 5});
  CHECK(select_portals(g, walk, 9) == std::vector<int>{0, 1, 2, 3, 4, 5});
  CHECK(select_portals(g, walk, 3) == std::vector<int>{0, 2, 4});

  g.edges[0].length = 3.0;
  g.validate();
  CHECK(select_portals(g, walk, 4) == std::vector<int>{0, 1, 2, 4});

  CHECK_THROWS_AS(select_portals(g, walk, 0), StructuralError);
  CHECK_THROWS_AS(select_portals(g, {}, 3), StructuralError);
}

TEST_CASE("brick validation accepts a sound open brick") {
  Brick b = open_brick();
  CHECK(!validate_brick(b, 0.5, 648));

  CHECK(b.south_len() == 2);
  CHECK(b.west() == std::vector<Dart>{10});
  CHECK(b.north() == std::vector<Dart>{6, 8});
  CHECK(b.east() == std::vector<Dart>{13});
  CHECK(b.south() == std::vector<Dart>{0, 2});

  b.portal_pos = select_portals(b.g, b.walk, 4);
  CHECK(b.portal_vertices().size() == b.portal_pos.size());
}

TEST_CASE("brick validation rejects tampering") {
  SUBCASE("disconnected graph") {
    Brick b = open_brick();
    b.g.rot.push_back({});
    b.g.terminal.push_back(0);
    b.g.validate();
    auto v = validate_brick(b, 0.5, 648);
    REQUIRE(v);
    CHECK(v->condition == 1);
  }
  SUBCASE("broken walk") {
    Brick b = open_brick();
    std::swap(b.walk[0], b.walk[1]);
    auto v = validate_brick(b, 0.5, 648);
    REQUIRE(v);
    CHECK(v->condition == 2);
  }
  SUBCASE("negative side length") {
    Brick b = open_brick();
    b.west_len = -1;
    b.east_len = 3;
    auto v = validate_brick(b, 0.5, 648);
    REQUIRE(v);
    CHECK(v->condition == 2);
  }
  SUBCASE("terminal off the boundary") {
    Brick b = open_brick();
    b.g.terminal[6] = 1;
    auto v = validate_brick(b, 0.5, 648);
    REQUIRE(v);
    CHECK(v->condition == 3);
  }
  SUBCASE("stretched south") {
    Brick b = open_brick();
    b.g.edges[0].length = 6.0;
    auto v = validate_brick(b, 0.5, 648);
    REQUIRE(v);
    CHECK(v->condition == 4);
  }
  SUBCASE("missing spine vertex") {
    Brick b = open_brick();
    b.s_pos = {0, 2};
    auto v = validate_brick(b, 0.5, 648);
    REQUIRE(v);
    CHECK(v->condition == 5);
  }
  SUBCASE("spine over budget") {
    Brick b = open_brick();
    auto v = validate_brick(b, 0.5, 2);
    REQUIRE(v);
    CHECK(v->condition == 5);
  }
  SUBCASE("spine not spanning") {
    Brick b = open_brick();
    b.s_pos = {0, 1};
    auto v = validate_brick(b, 0.5, 648);
    REQUIRE(v);
    CHECK(v->condition == 5);
  }
}

TEST_CASE("brick validation handles a closed south") {
  Brick b = closed_brick();
  CHECK(!validate_brick(b, 2.0, 4));
  CHECK(b.south_len() == 3);
  CHECK(b.north().empty());

  SUBCASE("anchor off the walk") {
    b.north_anchor = 3;
    auto v = validate_brick(b, 2.0, 4);
    REQUIRE(v);
    CHECK(v->condition == 2);
  }
  SUBCASE("terminal on the pendant") {
    b.g.terminal[3] = 1;
    auto v = validate_brick(b, 2.0, 4);
    REQUIRE(v);
    CHECK(v->condition == 3);
  }
  SUBCASE("closed south must cover the walk") {
    b.south_closed = true;
    b.west_len = 1;
    auto v = validate_brick(b, 2.0, 4);
    REQUIRE(v);
    CHECK(v->condition == 2);
  }
  SUBCASE("tight spine budget") {
    auto v = validate_brick(b, 2.0, 3);
    REQUIRE(v);
    CHECK(v->condition == 5);
  }
}

TEST_CASE("decomposition rejects unusable inputs") {
  EmbeddedGraph bouquet = make_graph(1, {{0, 0, 1.0, 1}, {0, 0, 1.0, 1}}, {{0, 2, 1, 3}});
  PtasParams par;
  CHECK_THROWS_AS(build_mortar(bouquet, {0}, par, 2), StructuralError);

  Brick seed = closed_brick();
  CHECK_THROWS_AS(build_mortar(seed.g, {0, 4, 2}, par, 0), StructuralError);

  seed.g.terminal[3] = 1;
  CHECK_THROWS_AS(build_mortar(seed.g, {0, 2, 4}, par, 0), StructuralError);
}

TEST_CASE("decomposing a small grid piece") {
  EmbeddedGraph g = fenced_grid();
  g.terminal[0] = 1;
  g.terminal[2] = 1;
  PtasParams par;
  MortarDecomposition md = build_mortar(g, {10, 6, 8, 13, 3, 1}, par, 0);

  check_decomposition(md, g, {10, 6, 8, 13, 3, 1}, par.epsilon);
  CHECK(md.bricks.size() == 2);
  CHECK(md.stats.forced_strips == 0);
}

TEST_CASE("grid decompositions stay within every stated bound") {
  Rng rng(4242);
  for (auto [rows, cols] : {std::pair{3, 4}, {4, 6}, {6, 6}}) {
    EmbeddedGraph g = gen_grid(rng, rows, cols, 3);
    PlanarizeResult res = planarize(g, 2.0);
    PtasParams par;
    par.epsilon = rows % 2 ? 0.5 : 1.0;
    MortarDecomposition md = build_mortar(res.planar, res.boundary, par, res.genus);
    check_decomposition(md, res.planar, res.boundary, par.epsilon);
  }
}

TEST_CASE("random surface decompositions stay within every stated bound") {
  Rng rng(909);
  int bricks_seen = 0;
  for (int it = 0; it < 40; ++it) {
    GenParams p;
    p.n = 3 + static_cast<int>(rng.range(0, 9));
    p.genus = static_cast<int>(rng.range(0, 3));
    p.extra = p.genus + 1 + static_cast<int>(rng.range(0, 5));
    p.mixed = true;
    p.terminals = 2 + static_cast<int>(rng.range(0, std::min(3, p.n - 2)));
    EmbeddedGraph g = gen_random(rng, p);
    PlanarizeResult res = planarize(g, 2.0);

    PtasParams par;
    par.epsilon = it % 2 ? 0.5 : 1.0;
    MortarDecomposition md = build_mortar(res.planar, res.boundary, par, res.genus);
    check_decomposition(md, res.planar, res.boundary, par.epsilon);
    bricks_seen += static_cast<int>(md.bricks.size());
  }
  CHECK(bricks_seen > 0);
}

TEST_CASE("decomposition is deterministic") {
  Rng rng(7);
  EmbeddedGraph g = gen_grid(rng, 5, 5, 4);
  PlanarizeResult res = planarize(g, 2.0);
  PtasParams par;
  MortarDecomposition a = build_mortar(res.planar, res.boundary, par, res.genus);
  MortarDecomposition b = build_mortar(res.planar, res.boundary, par, res.genus);

  CHECK(a.mortar_edges == b.mortar_edges);
  CHECK(a.mortar_length == b.mortar_length);
  CHECK(a.supercolumn_edges == b.supercolumn_edges);
  CHECK(a.supercolumn_length == b.supercolumn_length);
  CHECK(a.sigma_length == b.sigma_length);
  CHECK(a.stats.peels == b.stats.peels);
  CHECK(a.stats.terminal_strips == b.stats.terminal_strips);
  CHECK(a.stats.flat_peels == b.stats.flat_peels);
  CHECK(a.stats.forced_strips == b.stats.forced_strips);
  CHECK(a.stats.dropped_components == b.stats.dropped_components);
  REQUIRE(a.bricks.size() == b.bricks.size());
  for (size_t i = 0; i < a.bricks.size(); ++i) {
    const Brick& x = a.bricks[i];
    const Brick& y = b.bricks[i];
    CHECK(x.walk == y.walk);
    CHECK(x.west_len == y.west_len);
    CHECK(x.north_len == y.north_len);
    CHECK(x.east_len == y.east_len);
    CHECK(x.south_closed == y.south_closed);
    CHECK(x.north_anchor == y.north_anchor);
    CHECK(x.s_pos == y.s_pos);
    CHECK(x.portal_pos == y.portal_pos);
    CHECK(x.vmap == y.vmap);
    CHECK(x.emap == y.emap);
  }
}

TEST_CASE("a boundary covering the whole graph yields one empty brick") {
  EmbeddedGraph g = make_graph(
      4, {{0, 1, 1.0, 1}, {1, 2, 1.0, 1}, {2, 3, 1.0, 1}, {3, 0, 1.0, 1}},
      {{0, 7}, {2, 1}, {4, 3}, {6, 5}});
  g.terminal[0] = 1;
  g.terminal[2] = 1;
  PtasParams par;
  MortarDecomposition md = build_mortar(g, {0, 2, 4, 6}, par, 0);

  check_decomposition(md, g, {0, 2, 4, 6}, par.epsilon);
  REQUIRE(md.bricks.size() == 1);
  const Brick& b = md.bricks[0];
  CHECK(b.walk.size() == 4);
  CHECK(b.g.m() == 4);
  CHECK(md.mortar_edges == std::vector<EdgeId>{0, 1, 2, 3});
  CHECK(md.mortar_length == md.sigma_length);
  CHECK(md.supercolumn_edges.empty());
}

TEST_CASE("unit grid mortar stays within four boundary lengths") {
  Rng rng(11);
  EmbeddedGraph g = gen_grid(rng, 4, 4, 2);
  for (EdgeRec& e : g.edges) e.length = 1.0;
  std::fill(g.terminal.begin(), g.terminal.end(), 0);
  std::vector<Dart> sigma = outer_walk(g);
  g.terminal[g.vertex_of(sigma[0])] = 1;
  g.terminal[g.vertex_of(sigma[sigma.size() / 2])] = 1;
  g.validate();

  PtasParams par;
  par.epsilon = 1.0;
  MortarDecomposition md = build_mortar(g, sigma, par, 0);
  check_decomposition(md, g, sigma, par.epsilon);
  CHECK(md.stats.forced_strips == 0);
  for (const Brick& b : md.bricks)
    CHECK(!validate_brick(b, par.epsilon, md.params.kappa_ceil));
  CHECK(approx_le(md.mortar_length, 4.0 * md.sigma_length));
}

TEST_CASE("brick copies glue each brick into its mortar face") {
  Rng rng(21);
  EmbeddedGraph g = gen_grid(rng, 4, 5, 3);
  PlanarizeResult res = planarize(g, 2.0);
  PtasParams par;
  MortarDecomposition md = build_mortar(res.planar, res.boundary, par, res.genus);
  BrickCopy bc = brick_copy(res.planar, md);
  REQUIRE(!md.bricks.empty());

  CHECK(bc.g.connected());
  CHECK(euler_genus(bc.g) == 0);

  double total = 0.0;
  for (const EdgeRec& e : bc.g.edges) total += e.length;
  double want = md.mortar_length;
  for (const Brick& b : md.bricks)
    for (const EdgeRec& e : b.g.edges) want += e.length;
  CHECK(total == doctest::Approx(want));

  size_t portals = 0;
  for (const Brick& b : md.bricks) portals += b.portal_pos.size();
  CHECK(bc.portal_edges.size() == portals);
  std::set<EdgeId> portal(bc.portal_edges.begin(), bc.portal_edges.end());
  for (EdgeId pe : bc.portal_edges) {
    CHECK(bc.g.edges[pe].length == 0.0);
    CHECK(bc.planar_edge[pe] == kNone);
    CHECK(bc.brick_of[pe] != kNone);
  }

  // every brick copy hangs off the mortar by its portal edges alone
  Dsu cut(bc.g.n());
  for (EdgeId e = 0; e < bc.g.m(); ++e)
    if (!portal.count(e)) cut.unite(bc.g.edges[e].u, bc.g.edges[e].v);
  std::set<int> comps;
  for (Vertex v = 0; v < bc.g.n(); ++v) comps.insert(cut.find(v));
  CHECK(comps.size() == md.bricks.size() + 1);
  std::set<int> mortar_side;
  for (Vertex v : bc.mortar_vertex)
    if (v != kNone) mortar_side.insert(cut.find(v));
  CHECK(mortar_side.size() == 1);
  for (const std::vector<Vertex>& bvs : bc.brick_vertex) {
    std::set<int> side;
    for (Vertex v : bvs) side.insert(cut.find(v));
    CHECK(side.size() == 1);
    CHECK(mortar_side.count(*side.begin()) == 0);
  }
}

TEST_CASE("connected chunks of the copy survive portal removal in the host") {
  Rng rng(55);
  EmbeddedGraph g = gen_grid(rng, 4, 4, 3);
  PlanarizeResult res = planarize(g, 2.0);
  PtasParams par;
  MortarDecomposition md = build_mortar(res.planar, res.boundary, par, res.genus);
  BrickCopy bc = brick_copy(res.planar, md);

  std::vector<Vertex> host_of(bc.g.n(), kNone);
  for (Vertex v = 0; v < res.planar.n(); ++v)
    if (bc.mortar_vertex[v] != kNone) host_of[bc.mortar_vertex[v]] = v;
  for (size_t bi = 0; bi < md.bricks.size(); ++bi)
    for (Vertex v = 0; v < md.bricks[bi].g.n(); ++v)
      host_of[bc.brick_vertex[bi][v]] = md.bricks[bi].vmap[v];
  for (Vertex v = 0; v < bc.g.n(); ++v) REQUIRE(host_of[v] != kNone);

  for (int it = 0; it < 25; ++it) {
    Vertex s = static_cast<Vertex>(rng.range(0, bc.g.n() - 1));
    std::set<Vertex> vis{s};
    std::set<EdgeId> acc;
    const int target = 1 + static_cast<int>(rng.range(0, bc.g.m() - 1));
    while (static_cast<int>(acc.size()) < target) {
      std::vector<EdgeId> frontier;
      for (EdgeId e = 0; e < bc.g.m(); ++e)
        if (vis.count(bc.g.edges[e].u) + vis.count(bc.g.edges[e].v) == 1)
          frontier.push_back(e);
      if (frontier.empty()) break;
      EdgeId e = frontier[rng.range(0, static_cast<int>(frontier.size()) - 1)];
      acc.insert(e);
      vis.insert(bc.g.edges[e].u);
      vis.insert(bc.g.edges[e].v);
    }
    for (EdgeId e = 0; e < bc.g.m(); ++e)
      if (vis.count(bc.g.edges[e].u) && vis.count(bc.g.edges[e].v) &&
          rng.range(0, 1) == 0)
        acc.insert(e);

    Dsu host(res.planar.n());
    std::set<Vertex> span;
    for (Vertex v : vis) span.insert(host_of[v]);
    for (EdgeId e : acc) {
      if (bc.planar_edge[e] == kNone) continue;
      const EdgeRec& he = res.planar.edges[bc.planar_edge[e]];
      std::set<Vertex> got{host_of[bc.g.edges[e].u], host_of[bc.g.edges[e].v]};
      std::set<Vertex> ends{he.u, he.v};
      CHECK(got == ends);
      host.unite(he.u, he.v);
    }
    int root = host.find(*span.begin());
    for (Vertex v : span) CHECK(host.find(v) == root);
  }
}

TEST_CASE("contracting brick interiors leaves portal stubs") {
  Rng rng(77);
  EmbeddedGraph g = gen_grid(rng, 5, 4, 3);
  PlanarizeResult res = planarize(g, 2.0);
  PtasParams par;
  MortarDecomposition md = build_mortar(res.planar, res.boundary, par, res.genus);
  BrickCopy bc = brick_copy(res.planar, md);
  BrickContraction ct = brick_contract(bc, md.params.theta);

  CHECK(ct.g.connected());
  CHECK(euler_genus(ct.g) == 0);
  CHECK(ct.g.m() ==
        static_cast<int>(md.mortar_edges.size() + bc.portal_edges.size()));
  int shrink = 0;
  for (const Brick& b : md.bricks) shrink += b.g.n() - 1;
  CHECK(ct.g.n() == bc.g.n() - shrink);

  REQUIRE(ct.brick_vertex.size() == md.bricks.size());
  for (size_t bi = 0; bi < md.bricks.size(); ++bi) {
    Vertex c = ct.brick_vertex[bi];
    CHECK(ct.g.rot[c].size() == md.bricks[bi].portal_pos.size());
    CHECK(static_cast<int>(ct.g.rot[c].size()) <= md.params.theta);
    for (Vertex v : bc.brick_vertex[bi]) CHECK(ct.vmap[v] == c);
  }

  for (EdgeId e = 0; e < bc.g.m(); ++e) {
    EdgeId ne = ct.emap[e];
    if (ne == kNone) {
      CHECK(bc.brick_of[e] != kNone);
      CHECK(bc.planar_edge[e] != kNone);
      continue;
    }
    CHECK(ct.g.edges[ne].length == bc.g.edges[e].length);
    std::set<Vertex> got{ct.g.edges[ne].u, ct.g.edges[ne].v};
    std::set<Vertex> want{ct.vmap[bc.g.edges[e].u], ct.vmap[bc.g.edges[e].v]};
    CHECK(got == want);
  }
}

TEST_CASE("lifting the mortar identifies cut copies") {
  Rng rng(33);
  GenParams p;
  p.n = 9;
  p.genus = 2;
  p.extra = 5;
  p.terminals = 3;
  EmbeddedGraph g = gen_random(rng, p);
  PlanarizeResult res = planarize(g, 2.0);
  PtasParams par;
  MortarDecomposition md = build_mortar(res.planar, res.boundary, par, res.genus);
  LiftedMortar lm = lift_mortar(md, res.emap, g);

  CHECK(std::is_sorted(lm.edges.begin(), lm.edges.end()));
  CHECK(std::adjacent_find(lm.edges.begin(), lm.edges.end()) == lm.edges.end());
  for (EdgeId e : lm.edges) CHECK((0 <= e && e < g.m()));

  // the planar side carries two copies of every cut edge, both landing on it
  std::map<EdgeId, int> copies;
  for (EdgeId pe = 0; pe < res.planar.m(); ++pe) ++copies[res.emap[pe]];
  for (EdgeId ce : res.cut) CHECK(copies[ce] == 2);
  CHECK(lm.length < md.mortar_length);
  CHECK(approx_le(lm.length, md.mortar_length));

  std::set<EdgeId> in_lift(lm.edges.begin(), lm.edges.end());
  for (Dart d : res.boundary)
    CHECK(in_lift.count(res.emap[EmbeddedGraph::edge_of(d)]) == 1);

  std::set<EdgeId> image;
  for (EdgeId e : md.mortar_edges) image.insert(res.emap[e]);
  CHECK(image.size() == lm.edges.size());

  if (md.stats.forced_strips == 0)
    CHECK(approx_le(lm.length, md.params.gamma * res.tree_length));
}

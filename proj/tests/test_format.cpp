#include <gptas/embg.hpp>
#include <gptas/generator.hpp>

#include <cstdio>

#include <doctest.h>

#include "helpers.hpp"

using namespace gptas;
using testing::random_graph;

namespace {

int error_line(const std::string& text) {
  try {
    parse_embg(text);
  } catch (const ParseError& e) {
    return e.line;
  }
  return -1;
}

bool same_graph(const EmbeddedGraph& a, const EmbeddedGraph& b) {
  if (a.n() != b.n() || a.m() != b.m()) return false;
  for (EdgeId e = 0; e < a.m(); ++e) {
    if (a.edges[e].u != b.edges[e].u || a.edges[e].v != b.edges[e].v) return false;
    if (a.edges[e].length != b.edges[e].length || a.edges[e].sig != b.edges[e].sig) return false;
  }
  return a.rot == b.rot && a.terminal == b.terminal;
}

}  // namespace

TEST_CASE("parsing accepts records in any order") {
  EmbeddedGraph g = parse_embg(
      "embg 1\n"
      "# a triangle with one twisted edge and one marked vertex\n"
      "3 3 1\n"
      "r 1: 1 2\n"
      "e 2 2 0 0.25 +1\n"
      "t 1: 2\n"
      "e 0 0 1 1.5 +1\n"
      "\n"
      "r 0: 0 5\n"
      "e 1 1 2 0.125 -1\n"
      "r 2: 3 4\n");
  CHECK(g.n() == 3);
  CHECK(g.m() == 3);
  CHECK(g.edges[1].sig == -1);
  CHECK(g.edges[2].length == 0.25);
  CHECK(g.terminal_list() == std::vector<Vertex>{2});
  CHECK(g.rot[1] == std::vector<Dart>{1, 2});
}

TEST_CASE("parse errors carry line numbers") {
  CHECK(error_line("") == 0);
  CHECK(error_line("embg 2\n") == 1);
  CHECK(error_line("hello\n") == 1);
  CHECK(error_line("embg 1\n1\n") == 2);
  CHECK(error_line("embg 1\n0 0\n") == 2);
  CHECK(error_line("embg 1\n1 0\nr 0:\n") == 3);  // no terminal line
  CHECK(error_line("embg 1\n1 0\nt 0:\n") == 3);  // no rotation line
  CHECK(error_line("embg 1\n1 1\ne 0 0 0 1.0 1\nr 0: 0 1\nt 0:\n") == 3);   // bad signature
  CHECK(error_line("embg 1\n1 1\ne 0 0 0 1.x +1\nr 0: 0 1\nt 0:\n") == 3);  // bad number
  CHECK(error_line("embg 1\n1 1\ne 1 0 0 1.0 +1\nr 0: 0 1\nt 0:\n") == 3);  // id range
  CHECK(error_line("embg 1\n1 1\ne 0 0 0 1.0 +1\ne 0 0 0 1.0 +1\nr 0: 0 1\nt 0:\n") == 4);
  CHECK(error_line("embg 1\n1 1\ne 0 0 0 1.0 +1\nr 0: 0 3\nt 0:\n") == 4);  // dart range
  CHECK(error_line("embg 1\n1 1\ne 0 0 0 1.0 +1\nr 0: 0 1\nt 2: 0\n") == 5);  // count mismatch
  CHECK(error_line("embg 1\n1 1\ne 0 0 0 1.0 +1\nr 0: 0 1\nt 0:\nx\n") == 6);  // unknown record
  CHECK(error_line("embg 1\n2 0 0\nr 0:\nr 1:\nt 0:\n") == 2);  // genus while disconnected
  CHECK(error_line("embg 1\n1 1 1\ne 0 0 0 1.0 +1\nr 0: 0 1\nt 0:\n") == 2);  // genus mismatch
}

TEST_CASE("structural problems surface through validation") {
  // dart 1 appears twice, dart 0 never
  CHECK_THROWS_AS(parse_embg("embg 1\n1 1\ne 0 0 0 1.0 +1\nr 0: 1 1\nt 0:\n"), StructuralError);
}

TEST_CASE("serialization round trips random instances") {
  Rng rng(707);
  for (int it = 0; it < 100; ++it) {
    EmbeddedGraph g = random_graph(rng, 9, 10, true);
    for (Vertex v = 0; v < g.n(); ++v) g.terminal[v] = rng.coin(0.3) ? 1 : 0;
    std::string text = serialize_embg(g);
    EmbeddedGraph h = parse_embg(text);
    CHECK(same_graph(g, h));
    CHECK(serialize_embg(h) == text);
  }
}

TEST_CASE("files survive a save and load") {
  Rng rng(708);
  EmbeddedGraph g = random_graph(rng, 6, 6, true);
  std::string path = "gptas_format_test.embg";
  save_embg(path, g);
  EmbeddedGraph h = load_embg(path);
  CHECK(same_graph(g, h));
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_embg("does_not_exist.embg"), ParseError);
}

TEST_CASE("grid generation") {
  Rng rng(808);
  EmbeddedGraph g = gen_grid(rng, 3, 4, 5);
  CHECK(g.n() == 12);
  CHECK(g.m() == 17);
  CHECK(g.connected());
  CHECK(euler_genus(g) == 0);
  CHECK(g.terminal_list().size() == 5);
  for (EdgeId e = 0; e < g.m(); ++e) {
    CHECK(g.edges[e].sig == 1);
    CHECK(g.edges[e].length > 0.0);
  }

  EmbeddedGraph one = gen_grid(rng, 1, 1, 1);
  CHECK(one.n() == 1);
  CHECK(one.m() == 0);
  EmbeddedGraph row = gen_grid(rng, 1, 6, 2);
  CHECK(row.m() == 5);
  CHECK(euler_genus(row) == 0);
}

TEST_CASE("random generation hits the requested genus") {
  Rng rng(909);
  for (int target : {0, 2, 4}) {
    GenParams p;
    p.n = 6;
    p.extra = 8;
    p.genus = target;
    p.terminals = 3;
    EmbeddedGraph g = gen_random(rng, p);
    CHECK(euler_genus(g) == target);
    CHECK(g.connected());
    CHECK(g.m() == p.n - 1 + p.extra);
    CHECK(g.terminal_list().size() == 3);
    for (EdgeId e = 0; e < g.m(); ++e) CHECK(g.edges[e].sig == 1);
  }
  for (int target : {1, 2, 3}) {
    GenParams p;
    p.n = 6;
    p.extra = 8;
    p.genus = target;
    p.mixed = true;
    EmbeddedGraph g = gen_random(rng, p);
    CHECK(euler_genus(g) == target);
    if (target % 2 == 1) {
      bool has_flip = false;
      for (EdgeId e = 0; e < g.m(); ++e) has_flip = has_flip || g.edges[e].sig == -1;
      CHECK(has_flip);
    }
  }
}

TEST_CASE("infeasible generator targets are rejected") {
  Rng rng(910);
  GenParams tree;
  tree.n = 5;
  tree.extra = 0;
  tree.genus = 2;
  CHECK_THROWS_AS(gen_random(rng, tree), StructuralError);

  GenParams odd;
  odd.n = 5;
  odd.extra = 6;
  odd.genus = 1;
  odd.mixed = false;
  CHECK_THROWS_AS(gen_random(rng, odd), StructuralError);
}

TEST_CASE("generation is a function of the seed") {
  GenParams p;
  p.n = 7;
  p.extra = 6;
  p.genus = 2;
  p.mixed = true;
  p.terminals = 4;
  Rng a(42), b(42), c(43);
  std::string sa = serialize_embg(gen_random(a, p));
  std::string sb = serialize_embg(gen_random(b, p));
  std::string sc = serialize_embg(gen_random(c, p));
  CHECK(sa == sb);
  CHECK(sa != sc);
}

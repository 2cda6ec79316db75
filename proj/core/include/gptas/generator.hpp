#pragma once

#include "gptas/embedded_graph.hpp"
#include "gptas/util.hpp"

namespace gptas {

struct GenParams {
  int n = 8;
  int extra = 4;        // edges beyond the spanning tree
  int genus = -1;       // target Euler genus, -1 leaves it as drawn
  bool mixed = false;   // allow orientation-reversing edges
  int terminals = 2;
  int max_steps = 0;    // embedding search budget, 0 picks a default
};

// Connected random multigraph with a rotation system reaching the requested
// genus, found by local search over dart swaps (and signature flips when
// mixed). Throws when the target is infeasible or the search budget runs out.
EmbeddedGraph gen_random(Rng& rng, const GenParams& p);

// rows x cols grid in its planar embedding with random edge lengths.
EmbeddedGraph gen_grid(Rng& rng, int rows, int cols, int terminals);

}  // namespace gptas

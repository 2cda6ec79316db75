#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gptas/metrics.hpp"
#include "gptas/mortar.hpp"
#include "gptas/params.hpp"
#include "gptas/planarizer.hpp"
#include "gptas/thinning.hpp"

namespace gptas {

// Steiner costs of one brick against a fixed portal list. tree_cost holds,
// per portal subset, the length of the cheapest connected subgraph of the
// brick touching every portal in the subset; forest_cost sums blocks of a
// partition. cost and back are the subset tables the realizer walks to
// recover an actual edge set.
struct PartitionTable {
  struct Step {
    char kind = 0;  // 0 seed, 1 merge, 2 edge
    int arg = kNone;
  };

  std::vector<Vertex> portals;            // position -> brick vertex
  std::vector<double> tree_cost;          // portal subset -> tree length
  std::vector<std::vector<double>> cost;  // subset x brick vertex
  std::vector<std::vector<Step>> back;

  double forest_cost(const std::vector<std::uint32_t>& blocks) const;
  std::vector<EdgeId> realize(const EmbeddedGraph& g, std::uint32_t subset) const;
};

PartitionTable brick_leaf_table(const Brick& b, const std::vector<Vertex>& portals);

// A connected subgraph of the brick-copy graph with its total length.
struct DpSolution {
  std::vector<EdgeId> edges;
  double cost = 0.0;
};

// Cheapest subgraph of the brick-copy graph connecting the terminals q
// (planar vertex ids) modulo the contracted thinning set: contracted edges
// come for free and are not part of the answer. Brick interiors are entered
// through portal edges only, each brick settled by its own subset table,
// and the remainder swept over the thinning tree decomposition.
DpSolution dp_solve(const ThinningResult& thin, const MortarDecomposition& md,
                    const std::vector<Vertex>& q);

// Projects a brick-copy solution back onto the input graph: portal edges
// vanish, brick copies land on their planar originals, the thinning set is
// added back, and the two sides of the cut collapse to the surface edge
// they were sliced from.
SteinerResult lift_solution(const DpSolution& a, const ThinningResult& thin,
                            const PlanarizeResult& cut, const EmbeddedGraph& g);

// End-to-end run summary. The length fields cover each layer of the
// pipeline; solution is the better of the dynamic program and the baseline
// tree, dp_used says whether the program ran or the width cap forced the
// baseline, and opt/ratio are filled when the instance is small enough for
// the exact solver.
struct PipelineReport {
  int n = 0;
  int m = 0;
  int genus = 0;
  int q = 0;
  double tree_length = 0.0;    // baseline two-approximation
  double cut_length = 0.0;     // planarizing cut graph
  double sigma_length = 0.0;   // cut boundary after slicing
  double mortar_length = 0.0;  // mortar graph
  double sstar_length = 0.0;   // contracted thinning set
  int width = 0;               // tree decomposition width actually reached
  bool dp_used = false;
  SteinerResult solution;      // edges in the input graph
  std::optional<double> opt;   // exact optimum when computed
  double ratio = 0.0;          // solution length over opt, 0 when opt absent
};

// Full pipeline on an embedded instance: approximate Steiner tree for the
// terminals q under the given parameters. Stage failures surface as the
// underlying error prefixed with the stage name.
PipelineReport run_ptas(const EmbeddedGraph& g0, const std::vector<Vertex>& q,
                        const PtasParams& par);

}  // namespace gptas

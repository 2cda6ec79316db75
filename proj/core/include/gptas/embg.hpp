#pragma once

#include <string>

#include "gptas/embedded_graph.hpp"

namespace gptas {

// Text format for embedded graphs:
//
//   embg 1
//   <n> <m> [genus]
//   e <id> <u> <v> <length> <+1|-1>     (one per edge)
//   r <v>: <darts...>                   (one per vertex)
//   t <q>: <terminals...>               (exactly once)
//
// Blank lines and lines starting with # are skipped. e and r lines may come
// in any order but must cover their id ranges exactly. A genus on the header
// line is checked against the embedding, which must then be connected.
EmbeddedGraph parse_embg(const std::string& text);
std::string serialize_embg(const EmbeddedGraph& g);

EmbeddedGraph load_embg(const std::string& path);
void save_embg(const std::string& path, const EmbeddedGraph& g);

}  // namespace gptas

#include "gptas/embg.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include <fmt/format.h>

#include "gptas/util.hpp"

namespace gptas {

namespace {

std::vector<std::string> tokens_of(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

long parse_int(const std::string& tok, int line) {
  const char* s = tok.c_str();
  char* end = nullptr;
  errno = 0;
  long v = std::strtol(s, &end, 10);
  if (errno != 0 || end == s || *end != '\0')
    throw ParseError(fmt::format("expected an integer, got '{}'", tok), line);
  return v;
}

double parse_num(const std::string& tok, int line) {
  const char* s = tok.c_str();
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(s, &end);
  if (errno != 0 || end == s || *end != '\0')
    throw ParseError(fmt::format("expected a number, got '{}'", tok), line);
  return v;
}

// "r 3: ..." carries its id in a token with a trailing colon
int parse_tagged_id(const std::string& tok, int line) {
  if (tok.size() < 2 || tok.back() != ':')
    throw ParseError(fmt::format("expected '<id>:', got '{}'", tok), line);
  return static_cast<int>(parse_int(tok.substr(0, tok.size() - 1), line));
}

}  // namespace

EmbeddedGraph parse_embg(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;

  auto next = [&](std::vector<std::string>& out) {
    while (std::getline(in, line)) {
      ++lineno;
      out = tokens_of(line);
      if (out.empty() || out[0][0] == '#') continue;
      return true;
    }
    return false;
  };

  std::vector<std::string> tok;
  if (!next(tok)) throw ParseError("empty input", lineno);
  if (tok.size() != 2 || tok[0] != "embg" || tok[1] != "1")
    throw ParseError("expected header 'embg 1'", lineno);

  if (!next(tok)) throw ParseError("missing size line", lineno);
  if (tok.size() != 2 && tok.size() != 3)
    throw ParseError("size line must be '<n> <m>' or '<n> <m> <genus>'", lineno);
  int size_line = lineno;
  long n = parse_int(tok[0], lineno);
  long m = parse_int(tok[1], lineno);
  long declared_genus = tok.size() == 3 ? parse_int(tok[2], lineno) : -1;
  if (n < 1 || m < 0) throw ParseError("need n >= 1 and m >= 0", lineno);

  EmbeddedGraph g;
  g.edges.assign(m, EdgeRec{kNone, kNone, 0.0, 1});
  g.rot.assign(n, {});
  g.terminal.assign(n, 0);
  std::vector<char> got_e(m, 0), got_r(n, 0);
  bool got_t = false;

  while (next(tok)) {
    if (tok[0] == "e") {
      if (tok.size() != 6) throw ParseError("edge line must be 'e <id> <u> <v> <length> <sig>'", lineno);
      long id = parse_int(tok[1], lineno);
      if (id < 0 || id >= m) throw ParseError(fmt::format("edge id {} out of range", id), lineno);
      if (got_e[id]) throw ParseError(fmt::format("edge {} given twice", id), lineno);
      got_e[id] = 1;
      long u = parse_int(tok[2], lineno);
      long v = parse_int(tok[3], lineno);
      if (u < 0 || u >= n || v < 0 || v >= n)
        throw ParseError(fmt::format("edge {} endpoint out of range", id), lineno);
      double len = parse_num(tok[4], lineno);
      int sig;
      if (tok[5] == "+1")
        sig = 1;
      else if (tok[5] == "-1")
        sig = -1;
      else
        throw ParseError(fmt::format("signature must be +1 or -1, got '{}'", tok[5]), lineno);
      g.edges[id] = {static_cast<Vertex>(u), static_cast<Vertex>(v), len, sig};
    } else if (tok[0] == "r") {
      if (tok.size() < 2) throw ParseError("rotation line must be 'r <v>: <darts>'", lineno);
      long v = parse_tagged_id(tok[1], lineno);
      if (v < 0 || v >= n) throw ParseError(fmt::format("vertex {} out of range", v), lineno);
      if (got_r[v]) throw ParseError(fmt::format("rotation of {} given twice", v), lineno);
      got_r[v] = 1;
      for (size_t i = 2; i < tok.size(); ++i) {
        long d = parse_int(tok[i], lineno);
        if (d < 0 || d >= 2 * m) throw ParseError(fmt::format("dart {} out of range", d), lineno);
        g.rot[v].push_back(static_cast<Dart>(d));
      }
    } else if (tok[0] == "t") {
      if (got_t) throw ParseError("terminal line given twice", lineno);
      got_t = true;
      if (tok.size() < 2) throw ParseError("terminal line must be 't <q>: <terminals>'", lineno);
      long q = parse_tagged_id(tok[1], lineno);
      if (q != static_cast<long>(tok.size()) - 2)
        throw ParseError(fmt::format("terminal line announces {} entries but has {}", q, tok.size() - 2), lineno);
      for (size_t i = 2; i < tok.size(); ++i) {
        long v = parse_int(tok[i], lineno);
        if (v < 0 || v >= n) throw ParseError(fmt::format("terminal {} out of range", v), lineno);
        if (g.terminal[v]) throw ParseError(fmt::format("terminal {} listed twice", v), lineno);
        g.terminal[v] = 1;
      }
    } else {
      throw ParseError(fmt::format("unknown record '{}'", tok[0]), lineno);
    }
  }

  for (long e = 0; e < m; ++e)
    if (!got_e[e]) throw ParseError(fmt::format("edge {} missing", e), lineno);
  for (long v = 0; v < n; ++v)
    if (!got_r[v]) throw ParseError(fmt::format("rotation of {} missing", v), lineno);
  if (!got_t) throw ParseError("terminal line missing", lineno);

  g.validate();

  if (declared_genus >= 0) {
    if (!g.connected())
      throw ParseError("header declares a genus but the graph is disconnected", size_line);
    int eg = euler_genus(g);
    if (eg != declared_genus)
      throw ParseError(fmt::format("header declares genus {} but the embedding has genus {}",
                                   declared_genus, eg), size_line);
  }
  return g;
}

std::string serialize_embg(const EmbeddedGraph& g) {
  std::string out = "embg 1\n";
  if (g.connected())
    out += fmt::format("{} {} {}\n", g.n(), g.m(), euler_genus(g));
  else
    out += fmt::format("{} {}\n", g.n(), g.m());
  for (EdgeId e = 0; e < g.m(); ++e) {
    const EdgeRec& r = g.edges[e];
    out += fmt::format("e {} {} {} {} {}\n", e, r.u, r.v, r.length, r.sig > 0 ? "+1" : "-1");
  }
  for (Vertex v = 0; v < g.n(); ++v) {
    out += fmt::format("r {}:", v);
    for (Dart d : g.rot[v]) out += fmt::format(" {}", d);
    out += "\n";
  }
  std::vector<Vertex> ts = g.terminal_list();
  out += fmt::format("t {}:", ts.size());
  for (Vertex t : ts) out += fmt::format(" {}", t);
  out += "\n";
  return out;
}

EmbeddedGraph load_embg(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(fmt::format("cannot open '{}'", path), 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_embg(buf.str());
}

void save_embg(const std::string& path, const EmbeddedGraph& g) {
  std::ofstream out(path);
  require(static_cast<bool>(out), fmt::format("cannot write '{}'", path));
  out << serialize_embg(g);
  require(static_cast<bool>(out), fmt::format("write to '{}' failed", path));
}

}  // namespace gptas

#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "obm/graph.hpp"

namespace obm {

// Text format:
//   line 1:            n m
//   one line per a:    a: b1 b2 ...     (neighbors ascending)
// '#' starts a comment, blank lines are ignored. A-vertices may be listed
// in any order; a missing line means an isolated vertex.
inline BipartiteGraph read_instance(std::istream& in) {
  std::string line;
  int n = -1, m = -1;
  std::vector<Edge> edges;
  std::vector<bool> seen;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    std::istringstream ls(line);
    if (n < 0) {
      if (!(ls >> n >> m)) {
        n = -1;
        continue;  // blank or comment-only line before the header
      }
      if (n < 0 || m < 0)
        throw std::invalid_argument("instance line " + std::to_string(lineno) +
                                    ": negative side size");
      seen.assign(static_cast<std::size_t>(n) + 1, false);
      continue;
    }
    std::string head;
    if (!(ls >> head)) continue;
    if (head.back() != ':')
      throw std::invalid_argument("instance line " + std::to_string(lineno) +
                                  ": expected 'a:' prefix");
    int a = 0;
    try {
      a = std::stoi(head.substr(0, head.size() - 1));
    } catch (const std::exception&) {
      throw std::invalid_argument("instance line " + std::to_string(lineno) +
                                  ": bad A-vertex id");
    }
    if (a < 1 || a > n)
      throw std::invalid_argument("instance line " + std::to_string(lineno) +
                                  ": A-vertex " + std::to_string(a) +
                                  " out of range");
    if (seen[static_cast<std::size_t>(a)])
      throw std::invalid_argument("instance line " + std::to_string(lineno) +
                                  ": duplicate line for A-vertex " +
                                  std::to_string(a));
    seen[static_cast<std::size_t>(a)] = true;
    int b = 0;
    while (ls >> b) edges.push_back({a, b});
    if (!ls.eof())
      throw std::invalid_argument("instance line " + std::to_string(lineno) +
                                  ": bad neighbor id");
  }
  if (n < 0) throw std::invalid_argument("instance: missing 'n m' header");
  return BipartiteGraph(n, m, std::move(edges));
}

inline void write_instance(std::ostream& out, const BipartiteGraph& g) {
  out << g.n() << ' ' << g.m() << '\n';
  for (int a = 1; a <= g.n(); ++a) {
    out << a << ':';
    for (int b : g.neighbors(a)) out << ' ' << b;
    out << '\n';
  }
}

inline BipartiteGraph parse_instance(const std::string& text) {
  std::istringstream in(text);
  return read_instance(in);
}

inline std::string format_instance(const BipartiteGraph& g) {
  std::ostringstream out;
  write_instance(out, g);
  return out.str();
}

}  // namespace obm

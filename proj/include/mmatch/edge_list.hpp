#pragma once

#include <charconv>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mmatch/errors.hpp"
#include "mmatch/graph.hpp"

namespace mmatch {

// Edge-list text format:
//
//   n m [bipartite]
//   [t_0 t_1 ... t_{n-1}]      only when "bipartite"; each t_i is 'a' or 'b'
//   u v                        m lines, 0 <= u < v < n
//
// LF line endings; blank lines are not allowed between records. Output is
// canonical: edges sorted lexicographically.

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::uint64_t to_index(std::string_view tok, std::size_t line) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError("expected a nonnegative integer, got '" + std::string(tok) + "'", line);
  return v;
}

}  // namespace detail

inline Graph read_edge_list(std::string_view text) {
  std::vector<std::string_view> lines;
  for (std::size_t start = 0; start < text.size();) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  if (lines.empty()) throw ParseError("missing header", 1);

  auto header = detail::split_ws(lines[0]);
  if (header.size() < 2 || header.size() > 3) throw ParseError("header must be 'n m [bipartite]'", 1);
  const auto n = detail::to_index(header[0], 1);
  const auto m = detail::to_index(header[1], 1);
  const bool bip = header.size() == 3;
  if (bip && header[2] != "bipartite") throw ParseError("unknown header flag '" + std::string(header[2]) + "'", 1);

  std::size_t next = 1;
  std::optional<std::vector<Side>> sides;
  if (bip) {
    if (lines.size() <= next) throw ParseError("missing vertex type line", next + 1);
    auto toks = detail::split_ws(lines[next]);
    if (toks.size() != n) throw ParseError("type line must list exactly n types", next + 1);
    sides.emplace();
    for (auto t : toks) {
      if (t == "a") sides->push_back(Side::a);
      else if (t == "b") sides->push_back(Side::b);
      else throw ParseError("vertex type must be 'a' or 'b'", next + 1);
    }
    ++next;
  }

  std::vector<Edge> edges;
  edges.reserve(m);
  for (std::uint64_t i = 0; i < m; ++i, ++next) {
    const std::size_t lineno = next + 1;
    if (next >= lines.size()) throw ParseError("expected " + std::to_string(m) + " edges", lineno);
    auto toks = detail::split_ws(lines[next]);
    if (toks.size() != 2) throw ParseError("edge line must be 'u v'", lineno);
    auto u = detail::to_index(toks[0], lineno);
    auto v = detail::to_index(toks[1], lineno);
    if (u >= n || v >= n) throw ParseError("vertex index out of range", lineno);
    if (u == v) throw ParseError("loop edge", lineno);
    if (sides && (*sides)[u] == (*sides)[v]) throw ParseError("edge joins two vertices of the same type", lineno);
    edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
  }
  for (; next < lines.size(); ++next)
    if (!detail::split_ws(lines[next]).empty()) throw ParseError("trailing content after the edge list", next + 1);

  // Duplicate detection reports the line of the second occurrence.
  std::vector<std::pair<Edge, std::size_t>> order;
  order.reserve(edges.size());
  const std::size_t first_edge_line = bip ? 3 : 2;
  for (std::size_t i = 0; i < edges.size(); ++i) order.emplace_back(edges[i], first_edge_line + i);
  std::sort(order.begin(), order.end());
  for (std::size_t i = 1; i < order.size(); ++i)
    if (order[i].first == order[i - 1].first) throw ParseError("duplicate edge", order[i].second);

  return Graph(n, std::move(edges), std::move(sides));
}

inline std::string write_edge_list(const Graph& g) {
  std::ostringstream os;
  os << g.vertex_count() << ' ' << g.edge_count();
  if (g.is_bipartite_tagged()) {
    os << " bipartite\n";
    for (Vertex v = 0; v < g.vertex_count(); ++v) os << (v ? " " : "") << (g.side(v) == Side::a ? 'a' : 'b');
  }
  os << '\n';
  for (const Edge& e : g.edges()) os << e.u << ' ' << e.v << '\n';
  return os.str();
}

}  // namespace mmatch

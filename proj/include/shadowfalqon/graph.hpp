// Copyright 2026 The shadowfalqon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "shadowfalqon/errors.hpp"

namespace shadowfalqon {

/** Undirected edge, stored with u < v. */
struct Edge {
  std::size_t u;
  std::size_t v;

  friend auto operator<=>(const Edge &, const Edge &) = default;
};

/**
 * Undirected unweighted MaxCut instance on vertices 0..n-1.
 *
 * Edges are normalised to u < v, deduplicated and kept in lexicographic
 * order; every observable list derived from a graph inherits this order.
 */
class Graph {
 public:
  Graph(std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> pairs) : n_(n) {
    edges_.reserve(pairs.size());
    for (auto [a, b] : pairs) {
      if (a == b) {
        throw DomainError("self-loop on vertex " + std::to_string(a));
      }
      if (a >= n || b >= n) {
        throw DomainError("edge (" + std::to_string(a) + ", " + std::to_string(b) +
                          ") out of range for " + std::to_string(n) + " vertices");
      }
      edges_.push_back(Edge{std::min(a, b), std::max(a, b)});
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  }

  std::size_t num_vertices() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Edge> &edges() const { return edges_; }

 private:
  std::size_t n_;
  std::vector<Edge> edges_;
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::size_t parse_index(const std::string &tok, std::size_t line) {
  if (tok.empty()) throw ParseError("missing vertex index on line " + std::to_string(line), line, 0);
  if (tok[0] == '-') {
    throw ParseError("negative vertex index '" + tok + "' on line " + std::to_string(line), line,
                     0);
  }
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(tok, &pos);
  } catch (const std::exception &) {
    pos = 0;
  }
  if (pos != tok.size()) {
    throw ParseError("malformed vertex index '" + tok + "' on line " + std::to_string(line), line,
                     0);
  }
  return static_cast<std::size_t>(v);
}

} // namespace detail

/**
 * Reads the edge-list format: one "i j" pair per line, '#' comments, and an
 * optional leading "n <count>" line. Without the header the vertex count is
 * one more than the largest index seen.
 */
inline Graph parse_edge_list(std::string_view text) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::size_t declared = 0;
  bool has_header = false;
  bool seen_content = false;
  std::size_t max_index = 0;

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    const std::string line = detail::trim(text.substr(start, end - start));
    start = end + 1;
    if (line.empty() || line[0] == '#') continue;

    std::istringstream ss(line);
    std::vector<std::string> toks;
    for (std::string t; ss >> t;) toks.push_back(t);

    if (toks[0] == "n") {
      if (seen_content || has_header || toks.size() != 2) {
        throw ParseError("misplaced or malformed 'n' header on line " + std::to_string(line_no),
                         line_no, 0);
      }
      declared = detail::parse_index(toks[1], line_no);
      has_header = true;
      seen_content = true;
      continue;
    }
    seen_content = true;
    if (toks.size() != 2) {
      throw ParseError("expected two vertex indices on line " + std::to_string(line_no), line_no,
                       0);
    }
    const auto a = detail::parse_index(toks[0], line_no);
    const auto b = detail::parse_index(toks[1], line_no);
    if (a == b) {
      throw ParseError("self-loop on line " + std::to_string(line_no), line_no, 0);
    }
    if (has_header && (a >= declared || b >= declared)) {
      throw ParseError("vertex index exceeds declared count on line " + std::to_string(line_no),
                       line_no, 0);
    }
    max_index = std::max({max_index, a, b});
    pairs.emplace_back(a, b);
  }
  if (!has_header && pairs.empty()) {
    throw ParseError("edge list contains no edges and no 'n' header", 0, 0);
  }
  const std::size_t n = has_header ? declared : max_index + 1;
  return Graph(n, std::move(pairs));
}

inline Graph complete_graph(std::size_t n) {
  if (n < 2) throw DomainError("complete_graph needs n >= 2");
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  return Graph(n, std::move(pairs));
}

inline Graph cycle_graph(std::size_t n) {
  if (n < 3) throw DomainError("cycle_graph needs n >= 3");
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i) pairs.emplace_back(i, (i + 1) % n);
  return Graph(n, std::move(pairs));
}

/// Observables per layer: 2|E| control terms and |E| cost terms.
struct OperatorCounts {
  std::size_t n_beta;
  std::size_t n_cost;

  friend bool operator==(const OperatorCounts &, const OperatorCounts &) = default;
};

inline OperatorCounts operator_counts(const Graph &g) {
  return {2 * g.num_edges(), g.num_edges()};
}

/// Largest vertex count accepted by exhaustive and dense routines.
inline constexpr std::size_t kMaxExhaustiveVertices = 22;

struct MaxCutResult {
  std::size_t cut_value;
  /// partition[v] is '0' or '1'; vertex n-1 is always on side '0'.
  std::string partition;
};

/** Number of edges cut by a vertex assignment given as a bitmask (bit v = side of vertex v). */
inline std::size_t cut_size(const Graph &g, std::uint64_t sides) {
  std::size_t cut = 0;
  for (const Edge &e : g.edges()) cut += ((sides >> e.u) ^ (sides >> e.v)) & 1U;
  return cut;
}

/** Exhaustive maximum cut over all 2^(n-1) bipartitions. */
inline MaxCutResult max_cut_brute_force(const Graph &g) {
  const std::size_t n = g.num_vertices();
  if (n > kMaxExhaustiveVertices) {
    throw SizeError("max_cut_brute_force limited to " +
                    std::to_string(kMaxExhaustiveVertices) + " vertices");
  }
  if (n == 0) return {0, {}};
  std::size_t best = 0;
  std::uint64_t best_sides = 0;
  const std::uint64_t count = std::uint64_t{1} << (n - 1);
  for (std::uint64_t sides = 0; sides < count; ++sides) {
    const std::size_t c = cut_size(g, sides);
    if (c > best) {
      best = c;
      best_sides = sides;
    }
  }
  std::string part(n, '0');
  for (std::size_t v = 0; v < n; ++v) {
    if ((best_sides >> v) & 1U) part[v] = '1';
  }
  return {best, part};
}

} // namespace shadowfalqon

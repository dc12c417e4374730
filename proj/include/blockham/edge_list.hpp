#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "blockham/graph.hpp"

namespace blockham {

/// Malformed edge-list input; carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Text format:
//   blockham v1 k=<k> sizes=<n1,...,nk>
//   u v        (one edge per line, 0-indexed, u < v)
std::string serialize(const BlockedGraph& graph);
void write_edge_list(std::ostream& out, const BlockedGraph& graph);

BlockedGraph deserialize(const std::string& text);
BlockedGraph read_edge_list(std::istream& in);
BlockedGraph load_edge_list(const std::string& path);

/// Bare "u v" pair list (used for forced-edge files); '#' starts a comment.
std::vector<Edge> read_pair_list(std::istream& in);

}  // namespace blockham

#include "blockham/edge_list.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string_view>

namespace blockham {

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

bool parse_uint(std::string_view s, std::size_t& out) {
  if (s.empty()) return false;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

BlockPartition parse_header(std::string_view line) {
  const auto tokens = split_ws(trim(line));
  if (tokens.size() != 4 || tokens[0] != "blockham" || tokens[1] != "v1") {
    throw ParseError(1, "expected header 'blockham v1 k=<k> sizes=<n1,...>'");
  }
  std::size_t k = 0;
  if (tokens[2].substr(0, 2) != "k=" || !parse_uint(tokens[2].substr(2), k) || k == 0) {
    throw ParseError(1, "bad block count '" + std::string(tokens[2]) + "'");
  }
  if (tokens[3].substr(0, 6) != "sizes=") throw ParseError(1, "missing sizes=");
  std::vector<std::size_t> sizes;
  std::string_view rest = tokens[3].substr(6);
  while (true) {
    const auto comma = rest.find(',');
    std::size_t v = 0;
    if (!parse_uint(rest.substr(0, comma), v) || v == 0) {
      throw ParseError(1, "bad block size in '" + std::string(tokens[3]) + "'");
    }
    sizes.push_back(v);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  if (sizes.size() != k) throw ParseError(1, "k does not match the number of sizes");
  return BlockPartition(std::move(sizes));
}

}  // namespace

void write_edge_list(std::ostream& out, const BlockedGraph& graph) {
  const auto& part = graph.partition();
  out << "blockham v1 k=" << part.k() << " sizes=";
  for (std::size_t i = 0; i < part.k(); ++i) out << (i ? "," : "") << part.size(i);
  out << '\n';
  for (const auto& e : graph.edges()) out << e.u << ' ' << e.v << '\n';
}

std::string serialize(const BlockedGraph& graph) {
  std::ostringstream out;
  write_edge_list(out, graph);
  return out.str();
}

BlockedGraph read_edge_list(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "empty input");
  BlockPartition part = parse_header(line);
  std::vector<Edge> edges;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = trim(line);
    if (body.empty()) continue;
    const auto tokens = split_ws(body);
    std::size_t u = 0;
    std::size_t v = 0;
    if (tokens.size() != 2 || !parse_uint(tokens[0], u) || !parse_uint(tokens[1], v)) {
      throw ParseError(lineno, "expected 'u v'");
    }
    if (u >= v) throw ParseError(lineno, "edge must satisfy u < v");
    if (v >= part.n()) throw ParseError(lineno, "vertex out of range");
    edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
  }
  return BlockedGraph(std::move(part), std::move(edges));
}

BlockedGraph deserialize(const std::string& text) {
  std::istringstream in(text);
  return read_edge_list(in);
}

BlockedGraph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_edge_list(in);
}

std::vector<Edge> read_pair_list(std::istream& in) {
  std::vector<Edge> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto body = std::string_view(line);
    if (const auto hash = body.find('#'); hash != std::string_view::npos) {
      body = body.substr(0, hash);
    }
    body = trim(body);
    if (body.empty()) continue;
    const auto tokens = split_ws(body);
    std::size_t u = 0;
    std::size_t v = 0;
    if (tokens.size() != 2 || !parse_uint(tokens[0], u) || !parse_uint(tokens[1], v) || u == v) {
      throw ParseError(lineno, "expected a pair 'u v' of distinct vertices");
    }
    out.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
  }
  return out;
}

}  // namespace blockham

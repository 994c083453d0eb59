#include "netopt/graph_io.hpp"

#include <fstream>
#include <regex>
#include <sstream>
#include <string>

#include "netopt/errors.hpp"

namespace netopt {

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return out;
}

}  // namespace

Graph read_edge_list(std::istream& in) {
  long long n = 0;
  long long m = 0;
  if (!(in >> n >> m) || n < 1 || m < 0) throw ParseError("edge list: expected header 'n m' with n >= 1");
  Graph g(static_cast<std::size_t>(n));
  if (static_cast<unsigned long long>(m) > g.pair_count()) throw ParseError("edge list: more edges than pairs");
  for (long long e = 0; e < m; ++e) {
    long long i = -1;
    long long j = -1;
    if (!(in >> i >> j)) throw ParseError("edge list: expected " + std::to_string(m) + " edges, got " + std::to_string(e));
    if (i < 0 || j < 0 || i >= n || j >= n || i == j) {
      throw ParseError("edge list: invalid edge " + std::to_string(i) + " " + std::to_string(j));
    }
    const auto a = static_cast<Node>(std::min(i, j));
    const auto b = static_cast<Node>(std::max(i, j));
    if (g.has_edge(a, b)) throw ParseError("edge list: duplicate edge " + std::to_string(a) + " " + std::to_string(b));
    g.set_edge(a, b);
  }
  std::string trailing;
  if (in >> trailing) throw ParseError("edge list: trailing content '" + trailing + "'");
  return g;
}

Graph read_edge_list(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_edge_list(in);
}

void write_edge_list(const Graph& g, std::ostream& out) {
  const auto edges = g.edges();
  out << g.node_count() << ' ' << edges.size() << '\n';
  for (auto [i, j] : edges) out << i << ' ' << j << '\n';
}

void write_edge_list(const Graph& g, const std::filesystem::path& path) {
  auto out = open_output(path);
  write_edge_list(g, out);
}

void write_dot(const Graph& g, std::ostream& out, std::string_view name) {
  out << "graph " << name << " {\n";
  for (Node v = 0; v < g.node_count(); ++v) out << "  " << v << ";\n";
  for (auto [i, j] : g.edges()) out << "  " << i << " -- " << j << ";\n";
  out << "}\n";
}

void write_dot(const Graph& g, const std::filesystem::path& path, std::string_view name) {
  auto out = open_output(path);
  write_dot(g, out, name);
}

Graph read_dot(std::istream& in) {
  static const std::regex node_line(R"(^\s*(\d+)\s*;\s*$)");
  static const std::regex edge_line(R"(^\s*(\d+)\s*--\s*(\d+)\s*;\s*$)");
  static const std::regex open_line(R"(^\s*graph\s+\w+\s*\{\s*$)");

  std::string line;
  if (!std::getline(in, line) || !std::regex_match(line, open_line)) throw ParseError("dot: expected 'graph <name> {'");
  std::size_t nodes = 0;
  std::vector<NodePair> edges;
  bool closed = false;
  std::smatch match;
  while (std::getline(in, line)) {
    if (std::regex_match(line, match, edge_line)) {
      edges.emplace_back(std::stoul(match[1]), std::stoul(match[2]));
    } else if (std::regex_match(line, match, node_line)) {
      if (std::stoul(match[1]) != nodes) throw ParseError("dot: nodes must be declared in order 0..n-1");
      ++nodes;
    } else if (line.find('}') != std::string::npos) {
      closed = true;
      break;
    } else if (line.find_first_not_of(" \t\r") != std::string::npos) {
      throw ParseError("dot: unsupported line '" + line + "'");
    }
  }
  if (!closed || nodes == 0) throw ParseError("dot: truncated graph");
  for (auto [i, j] : edges) {
    if (i >= nodes || j >= nodes || i == j) throw ParseError("dot: invalid edge");
  }
  return Graph::from_edges(nodes, edges);
}

}  // namespace netopt

#pragma once

#include <filesystem>
#include <iosfwd>

#include "netopt/graph.hpp"

namespace netopt {

// Edge-list text: first line "n m", then m lines "i j" with 0-based endpoints.
// The writer emits i < j in lexicographic order; the reader also accepts i > j
// but rejects loops, duplicates and out-of-range endpoints.
Graph read_edge_list(std::istream& in);
Graph read_edge_list(const std::filesystem::path& path);
void write_edge_list(const Graph& g, std::ostream& out);
void write_edge_list(const Graph& g, const std::filesystem::path& path);

// Undirected DOT with nodes 0..n-1 declared first, then edges in
// lexicographic order. read_dot understands exactly what write_dot emits.
void write_dot(const Graph& g, std::ostream& out, std::string_view name = "G");
void write_dot(const Graph& g, const std::filesystem::path& path, std::string_view name = "G");
Graph read_dot(std::istream& in);

}  // namespace netopt

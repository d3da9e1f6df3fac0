#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"
#include "trifree/graph.hpp"

namespace trifree {

// {"n": N, "edges": [[u,v],...]} with u < v, edges sorted
nlohmann::json graph_to_json(const Graph& g);
Graph graph_from_json(const nlohmann::json& j);

// "n <N>" header, then one "u v" pair per line
void write_edge_list(std::ostream& os, const Graph& g);
Graph read_edge_list(std::istream& is);

nlohmann::json partition_to_json(const Partition& p);
Partition partition_from_json(const nlohmann::json& j, int n);

// write-temp-then-rename
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace trifree

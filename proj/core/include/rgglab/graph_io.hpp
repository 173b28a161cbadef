#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "rgglab/graphgen.hpp"

namespace rgglab {

/// Plain-text edge list: header "n m", then m lines "i j" (0-indexed).
/// Blank lines and lines starting with '#' are ignored when reading.
void write_edge_list(std::ostream& out, const Adjacency& graph);
Adjacency read_edge_list(std::istream& in);
Adjacency read_edge_list_file(const std::filesystem::path& path);
void write_edge_list_file(const std::filesystem::path& path, const Adjacency& graph);

/// Sidecar describing how a graph was generated.
struct GraphMetadata {
  std::string generator;  ///< "geometric" or "erdos_renyi"
  std::size_t n = 0;
  std::size_t edges = 0;
  double p = 0.0;
  int d = 0;              ///< 0 for Erdos-Renyi
  double tau = 0.0;
  std::uint64_t seed = 0;
};

nlohmann::json to_json(const GraphMetadata& meta);

}  // namespace rgglab

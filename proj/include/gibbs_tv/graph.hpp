#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace gibbs_tv {

using SiteIndex = std::size_t;
using Edge = std::pair<SiteIndex, SiteIndex>;

enum class Neighborhood { N4, N8 };

/// Undirected pixel adjacency with degree bookkeeping.
///
/// Adjacency lists are sorted and duplicate free; the graph is immutable once
/// built. Sites with no neighbours are allowed.
class NeighborhoodGraph {
public:
  std::size_t num_sites() const { return adjacency_.size(); }
  std::span<const SiteIndex> neighbors(SiteIndex i) const { return adjacency_.at(i); }
  std::size_t degree(SiteIndex i) const { return adjacency_.at(i).size(); }
  std::span<const std::size_t> degrees() const { return degrees_; }
  std::size_t n_max() const { return n_max_; }
  std::size_t n_min() const { return n_min_; }
  std::size_t num_edges() const { return num_edges_; }

  /// Each undirected edge once, as (i, j) with i < j, in lexicographic order.
  std::vector<Edge> edges() const;

  friend NeighborhoodGraph build_custom_graph(std::span<const Edge> edges,
                                              std::size_t num_sites);

private:
  std::vector<std::vector<SiteIndex>> adjacency_;
  std::vector<std::size_t> degrees_;
  std::size_t n_max_ = 0;
  std::size_t n_min_ = 0;
  std::size_t num_edges_ = 0;
};

/// Row-major grid; site (col, row) has index row * width + col. No wrap-around.
NeighborhoodGraph build_grid_graph(std::size_t width, std::size_t height,
                                   Neighborhood scheme);

/// Symmetrizes and deduplicates the edge list. Rejects self-loops and
/// endpoints outside [0, num_sites).
NeighborhoodGraph build_custom_graph(std::span<const Edge> edges, std::size_t num_sites);

/// {"num_sites": N, "edges": [[i, j], ...]}
NeighborhoodGraph graph_from_json(const nlohmann::json& doc);
nlohmann::json graph_to_json(const NeighborhoodGraph& graph);
NeighborhoodGraph load_graph(const std::filesystem::path& path);

Neighborhood parse_neighborhood(std::string_view name);

} // namespace gibbs_tv

#include "gibbs_tv/graph.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>
#include <string>

namespace gibbs_tv {

std::vector<Edge> NeighborhoodGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges_);
  for (SiteIndex i = 0; i < adjacency_.size(); ++i) {
    for (const SiteIndex j : adjacency_[i]) {
      if (i < j) {
        out.emplace_back(i, j);
      }
    }
  }
  return out;
}

NeighborhoodGraph build_custom_graph(std::span<const Edge> edges, std::size_t num_sites) {
  if (num_sites == 0) {
    throw std::invalid_argument("graph must have at least one site");
  }
  NeighborhoodGraph g;
  g.adjacency_.resize(num_sites);
  for (const auto& [i, j] : edges) {
    if (i >= num_sites || j >= num_sites) {
      throw std::out_of_range("edge (" + std::to_string(i) + "," + std::to_string(j) +
                              ") has an endpoint outside [0," + std::to_string(num_sites) +
                              ")");
    }
    if (i == j) {
      throw std::invalid_argument("self-loop at site " + std::to_string(i));
    }
    g.adjacency_[i].push_back(j);
    g.adjacency_[j].push_back(i);
  }
  std::size_t degree_sum = 0;
  g.degrees_.resize(num_sites);
  for (SiteIndex i = 0; i < num_sites; ++i) {
    auto& adj = g.adjacency_[i];
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    adj.shrink_to_fit();
    g.degrees_[i] = adj.size();
    degree_sum += adj.size();
  }
  g.num_edges_ = degree_sum / 2;
  const auto [lo, hi] = std::minmax_element(g.degrees_.begin(), g.degrees_.end());
  g.n_min_ = *lo;
  g.n_max_ = *hi;
  return g;
}

NeighborhoodGraph build_grid_graph(std::size_t width, std::size_t height,
                                   Neighborhood scheme) {
  if (width == 0 || height == 0) {
    throw std::invalid_argument("grid dimensions must be positive, got " +
                                std::to_string(width) + "x" + std::to_string(height));
  }
  std::vector<Edge> edges;
  const auto at = [width](std::size_t col, std::size_t row) { return row * width + col; };
  for (std::size_t row = 0; row < height; ++row) {
    for (std::size_t col = 0; col < width; ++col) {
      if (col + 1 < width) {
        edges.emplace_back(at(col, row), at(col + 1, row));
      }
      if (row + 1 < height) {
        edges.emplace_back(at(col, row), at(col, row + 1));
      }
      if (scheme == Neighborhood::N8 && row + 1 < height) {
        if (col + 1 < width) {
          edges.emplace_back(at(col, row), at(col + 1, row + 1));
        }
        if (col > 0) {
          edges.emplace_back(at(col, row), at(col - 1, row + 1));
        }
      }
    }
  }
  return build_custom_graph(edges, width * height);
}

NeighborhoodGraph graph_from_json(const nlohmann::json& doc) {
  const auto n = doc.at("num_sites").get<long long>();
  if (n <= 0) {
    throw std::invalid_argument("num_sites must be positive");
  }
  std::vector<Edge> edges;
  for (const auto& e : doc.at("edges")) {
    if (!e.is_array() || e.size() != 2) {
      throw std::invalid_argument("each edge must be a pair [i, j]");
    }
    const auto i = e[0].get<long long>();
    const auto j = e[1].get<long long>();
    if (i < 0 || j < 0) {
      throw std::out_of_range("negative site index in edge list");
    }
    edges.emplace_back(static_cast<SiteIndex>(i), static_cast<SiteIndex>(j));
  }
  return build_custom_graph(edges, static_cast<std::size_t>(n));
}

nlohmann::json graph_to_json(const NeighborhoodGraph& graph) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [i, j] : graph.edges()) {
    edges.push_back({i, j});
  }
  return {{"num_sites", graph.num_sites()}, {"edges", std::move(edges)}};
}

NeighborhoodGraph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open graph file " + path.string());
  }
  try {
    return graph_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

Neighborhood parse_neighborhood(std::string_view name) {
  if (name == "N4" || name == "n4" || name == "4") {
    return Neighborhood::N4;
  }
  if (name == "N8" || name == "n8" || name == "8") {
    return Neighborhood::N8;
  }
  throw std::invalid_argument("unknown neighbourhood scheme '" + std::string(name) + "'");
}

} // namespace gibbs_tv

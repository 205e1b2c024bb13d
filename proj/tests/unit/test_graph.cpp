#include "gibbs_tv/graph.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>
#include <vector>
#include <stdexcept>

using namespace gibbs_tv;

TEST_CASE("grid examples") {
  const auto one = build_grid_graph(1, 1, Neighborhood::N4);
  CHECK(one.num_sites() == 1);
  CHECK(one.degree(0) == 0);
  CHECK(one.n_max() == 0);
  CHECK(one.n_min() == 0);

  const auto two = build_grid_graph(2, 2, Neighborhood::N4);
  for (SiteIndex i = 0; i < 4; ++i) {
    CHECK(two.degree(i) == 2);
  }
  CHECK(two.n_max() == 2);
  CHECK(two.n_min() == 2);

  const auto three = build_grid_graph(3, 3, Neighborhood::N4);
  CHECK(three.degree(0) == 2);
  CHECK(three.degree(1) == 3);
  CHECK(three.degree(4) == 4);
  CHECK(three.n_max() == 4);
  CHECK(three.n_min() == 2);

  const auto eight = build_grid_graph(3, 3, Neighborhood::N8);
  CHECK(eight.degree(0) == 3);
  CHECK(eight.degree(1) == 5);
  CHECK(eight.degree(4) == 8);
}

TEST_CASE("row-major indexing, no wrap-around") {
  const auto g = build_grid_graph(3, 2, Neighborhood::N4);
  const auto n = g.neighbors(2); // (x=2, y=0)
  CHECK(std::vector<SiteIndex>(n.begin(), n.end()) == std::vector<SiteIndex>{1, 5});
  CHECK_THROWS_AS(build_grid_graph(0, 3, Neighborhood::N4), std::invalid_argument);
  CHECK_THROWS_AS(build_grid_graph(3, 0, Neighborhood::N8), std::invalid_argument);
}

TEST_CASE("grid edge counts and handshake identity") {
  for (std::size_t w = 1; w <= 6; ++w) {
    for (std::size_t h = 1; h <= 5; ++h) {
      for (auto scheme : {Neighborhood::N4, Neighborhood::N8}) {
        const auto g = build_grid_graph(w, h, scheme);
        const auto deg = g.degrees();
        CHECK(std::accumulate(deg.begin(), deg.end(), std::size_t{0}) == 2 * g.num_edges());
        if (scheme == Neighborhood::N4) {
          CHECK(g.num_edges() == w * (h - 1) + h * (w - 1));
        }
        // symmetry, no self loops, no duplicates
        for (SiteIndex i = 0; i < g.num_sites(); ++i) {
          const auto ni = g.neighbors(i);
          std::set<SiteIndex> uniq(ni.begin(), ni.end());
          CHECK(uniq.size() == ni.size());
          CHECK(uniq.count(i) == 0);
          for (auto j : ni) {
            const auto nj = g.neighbors(j);
            CHECK(std::find(nj.begin(), nj.end(), i) != nj.end());
          }
        }
        // edge-list round trip
        const auto edges = g.edges();
        const auto rebuilt = build_custom_graph(edges, g.num_sites());
        CHECK(std::equal(rebuilt.degrees().begin(), rebuilt.degrees().end(), deg.begin(), deg.end()));
      }
    }
  }
}

TEST_CASE("custom graph examples and errors") {
  const auto isolated = build_custom_graph({}, 3);
  CHECK(isolated.num_sites() == 3);
  CHECK(isolated.n_max() == 0);

  const std::vector<Edge> single{{0, 1}};
  const auto path = build_custom_graph(single, 2);
  CHECK(path.degree(0) == 1);
  CHECK(path.degree(1) == 1);

  const std::vector<Edge> dup{{0, 1}, {1, 0}};
  const auto dedup = build_custom_graph(dup, 2);
  CHECK(dedup.num_edges() == 1);
  CHECK(dedup.degree(0) == 1);

  const std::vector<Edge> loop{{1, 1}};
  CHECK_THROWS_AS(build_custom_graph(loop, 2), std::invalid_argument);
  const std::vector<Edge> far{{0, 5}};
  CHECK_THROWS_AS(build_custom_graph(far, 2), std::out_of_range);
}

TEST_CASE("json edge list") {
  const auto doc = nlohmann::json::parse(R"({"num_sites": 3, "edges": [[0,1],[2,1]]})");
  const auto g = graph_from_json(doc);
  CHECK(g.degree(1) == 2);
  const auto back = graph_from_json(graph_to_json(g));
  CHECK(back.edges() == g.edges());
  CHECK_THROWS(graph_from_json(nlohmann::json::parse(R"({"num_sites": 2, "edges": [[0,2]]})")));
  CHECK(parse_neighborhood("n8") == Neighborhood::N8);
  CHECK_THROWS(parse_neighborhood("hex"));
}

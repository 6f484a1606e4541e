#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "helpers.hpp"
#include "nbx/errors.hpp"
#include "nbx/graph.hpp"
#include "nbx/matrices.hpp"
#include "nbx/sensitivity.hpp"

using namespace nbx;
using namespace testutil;

TEST_CASE("non-backtracking path enumeration") {
  SUBCASE("unique path on a path graph") {
    const auto paths = enumerate_nb_paths(path_graph(3), 0, 2, 2);
    REQUIRE(paths.size() == 1);
    CHECK(paths[0] == std::vector<int>{0, 1, 2});
  }
  SUBCASE("two two-step routes in the complete graph on four nodes") {
    const auto paths = enumerate_nb_paths(complete_graph(4), 0, 1, 2);
    CHECK(paths.size() == 2);  // via 2 and via 3
  }
  SUBCASE("backtracking exclusion empties odd-overshoot walks") {
    CHECK(enumerate_nb_paths(path_graph(3), 0, 2, 3).empty());
  }
  SUBCASE("adjacent pair at length one") {
    const auto paths = enumerate_nb_paths(path_graph(3), 0, 1, 1);
    REQUIRE(paths.size() == 1);
    CHECK(paths[0] == std::vector<int>{0, 1});
  }
}

TEST_CASE("path-sum bound") {
  CHECK(nba_bound_pathsum(cycle_graph(5), 0, 2, 2) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(nba_bound_pathsum(path_graph(3), 0, 2, 2) == doctest::Approx(0.5).epsilon(1e-14));
  // 3-regular with a unique non-backtracking path: d^{-T}
  const Graph k4 = complete_graph(4);
  CHECK(nba_bound_pathsum(k4, 0, 1, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("matrix form of the non-backtracking bound") {
  SUBCASE("five-cycle distance-two entry") {
    const DenseMatrix m = nba_bound_matrix(cycle_graph(5), 2);
    CHECK(m.at(2, 0) == doctest::Approx(0.25).epsilon(1e-12));
  }
  SUBCASE("adjacent pairs at one layer carry endpoint degree factors") {
    const Graph g = random_connected_graph(12, 5, 17);
    const DenseMatrix m = nba_bound_matrix(g, 1);
    for (int i = 0; i < g.n; ++i)
      for (int j : g.adj[i])
        CHECK(m.at(j, i) ==
              doctest::Approx(1.0 / std::sqrt(static_cast<double>(g.degree(i)) *
                                              g.degree(j)))
                  .epsilon(1e-12));
  }
  SUBCASE("disconnected pairs stay zero") {
    const Graph g = graph_from_edges(4, {{0, 1}, {2, 3}});
    const DenseMatrix m = nba_bound_matrix(g, 2);
    CHECK(m.at(2, 0) == 0.0);
    CHECK(m.at(0, 3) == 0.0);
  }
  SUBCASE("matches the enumeration oracle at exact distance") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const Graph g = random_connected_graph(14, 6, seed);
      for (int T = 1; T <= 4; ++T) {
        const DenseMatrix m = nba_bound_matrix(g, T);
        for (int i = 0; i < g.n; ++i) {
          const auto dist = bfs_distances(g, i);
          for (int j = 0; j < g.n; ++j)
            if (dist[j] == T)
              CHECK(m.at(j, i) ==
                    doctest::Approx(nba_bound_pathsum(g, i, j, T)).epsilon(1e-9));
        }
      }
    }
  }
}

TEST_CASE("conventional bound") {
  CHECK(gnn_bound(complete_graph(3), 0, 1, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(gnn_bound(cycle_graph(5), 0, 2, 2) == doctest::Approx(1.0 / 9.0).epsilon(1e-12));

  SUBCASE("matrix power matches a dense oracle") {
    const Graph g = random_connected_graph(12, 8, 23);
    const Eigen::MatrixXd ahat = to_eigen(normalized_adj(g));
    Eigen::MatrixXd power = Eigen::MatrixXd::Identity(g.n, g.n);
    for (int T = 1; T <= 4; ++T) {
      power = ahat * power;
      const DenseMatrix m = gnn_bound_matrix(g, T);
      for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
          CHECK(m.at(j, i) == doctest::Approx(power(j, i)).epsilon(1e-10));
    }
  }
}

TEST_CASE("bound comparison reports") {
  SUBCASE("five-cycle symmetry") {
    const auto reports = compare_bounds(cycle_graph(5), 2);
    REQUIRE(reports.size() == 5);
    for (const auto& r : reports) {
      CHECK(r.nba_bound == doctest::Approx(0.25).epsilon(1e-12));
      CHECK(r.gnn_bound == doctest::Approx(1.0 / 9.0).epsilon(1e-12));
      CHECK(r.path_count_nb == 1);
      CHECK(r.path_count_simple == 1);
    }
  }
  SUBCASE("path graph inequality") {
    const auto reports = compare_bounds(path_graph(3), 2);
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].nba_bound == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(reports[0].nba_bound >= reports[0].gnn_bound);
  }
  SUBCASE("no pairs beyond the diameter") {
    CHECK_THROWS_AS(compare_bounds(complete_graph(3), 2), NoPairsAtDistance);
  }
  SUBCASE("bounds are nonincreasing in the layer count on cycles") {
    const Graph g = cycle_graph(12);
    double prev_nba = 1e300, prev_gnn = 1e300;
    for (int T = 1; T <= 4; ++T) {
      const auto reports = compare_bounds(g, T);
      CHECK(reports[0].nba_bound <= prev_nba + 1e-12);
      CHECK(reports[0].gnn_bound <= prev_gnn + 1e-12);
      prev_nba = reports[0].nba_bound;
      prev_gnn = reports[0].gnn_bound;
    }
  }
}

TEST_CASE("per-path inequality") {
  CHECK(perpath_inequality_check(cycle_graph(5), 0, 2, 2));
  CHECK(perpath_inequality_check(complete_graph(4), 0, 1, 2));
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = random_tree(12, seed);
    for (int j = 1; j < g.n; ++j)
      if (bfs_distances(g, 0)[j] == 3) CHECK(perpath_inequality_check(g, 0, j, 3));
  }
}

TEST_CASE("Lipschitz prefactor") {
  LipschitzParams p;
  CHECK(p.prefactor(3) == doctest::Approx(1.0));
  p.alpha = 2.0;
  p.beta = 0.5;
  p.gamma = 3.0;
  CHECK(p.prefactor(4) == doctest::Approx(3.0));
  p.beta = 1.0;
  CHECK(p.prefactor(2) == doctest::Approx(12.0));
}

#pragma once

// Small graphs and matrices used across the test suites.

#include <vector>

#include "magtorus/graph.hpp"
#include "magtorus/magnetic.hpp"

namespace fixtures {

using namespace magtorus;

inline RMatrix from_rows(const std::vector<std::vector<double>>& rows) {
  RMatrix m(rows.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
  return m;
}

// Seven vertices: a triangle-ish support {1,2,3}, a hub 4, and a triangle
// {5,6,7} hanging off the hub.
inline Graph seven_vertex_graph() {
  return Graph::from_one_based(7, {{1, 2}, {2, 3}, {1, 4}, {2, 4}, {3, 4}, {4, 5}, {5, 6}, {5, 7}, {6, 7}});
}

inline BaseMatrix seven_vertex_matrix() {
  return BaseMatrix(seven_vertex_graph(), from_rows({{1, -1, 0, -1, 0, 0, 0},
                                                     {-1, 2, -1, -1, 0, 0, 0},
                                                     {0, -1, 1, -1, 0, 0, 0},
                                                     {-1, -1, -1, 4, -1, 0, 0},
                                                     {0, 0, 0, -1, 1, -1, -1},
                                                     {0, 0, 0, 0, -1, 2, -1},
                                                     {0, 0, 0, 0, -1, -1, 2}}));
}

// Path 1-2-3-4 with a fifth vertex joined to all of them.
inline Graph fan_graph() {
  return Graph::from_one_based(5, {{1, 2}, {2, 3}, {3, 4}, {1, 5}, {2, 5}, {3, 5}, {4, 5}});
}

inline BaseMatrix fan_matrix(double gamma) {
  return BaseMatrix(fan_graph(), from_rows({{1, -1, 0, 0, -1},
                                            {-1, 3, -2, 0, -1},
                                            {0, -2, 10, -4, -1},
                                            {0, 0, -4, 2, -1},
                                            {-1, -1, -1, -1, gamma}}));
}

inline Graph k4() { return Graph::from_one_based(4, {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}}); }

inline Graph triangle() { return Graph::from_one_based(3, {{1, 2}, {2, 3}, {1, 3}}); }

inline Graph path(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 1; i < n; ++i) e.push_back({i, i + 1});
  return Graph::from_one_based(n, e);
}

inline Graph cycle(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 1; i < n; ++i) e.push_back({i, i + 1});
  e.push_back({1, n});
  return Graph::from_one_based(n, e);
}

// Three triangles joined in a chain by bridges: cycles are vertex-disjoint.
inline Graph chain_of_triangles() {
  return Graph::from_one_based(9, {{1, 2}, {2, 3}, {1, 3}, {3, 4}, {4, 5}, {5, 6}, {4, 6}, {6, 7}, {7, 8}, {8, 9}, {7, 9}});
}

// Two squares sharing vertex 1.
inline Graph figure_eight() {
  return Graph::from_one_based(7, {{1, 2}, {2, 3}, {3, 4}, {1, 4}, {1, 5}, {5, 6}, {6, 7}, {1, 7}});
}

// Thirteen vertices with a support whose boundary and residual parts have
// 3 + 3 vertices, 11 crossing edges and 4 residual edges.
inline Graph partition_figure_graph() {
  return Graph::from_one_based(13, {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {1, 7}, {2, 6},
                                    {8, 1}, {8, 2}, {8, 3},
                                    {9, 3}, {9, 4}, {9, 5}, {9, 6},
                                    {10, 5}, {10, 6}, {10, 7}, {10, 1},
                                    {8, 11}, {11, 12}, {12, 13}, {13, 10}});
}

}  // namespace fixtures

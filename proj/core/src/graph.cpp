#include "magtorus/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <numeric>
#include <sstream>

#include "magtorus/error.hpp"
#include "magtorus/linalg.hpp"

namespace magtorus {

Graph::Graph(int n, const std::vector<std::pair<int, int>>& edges) : n_(n) {
  if (n < 0) throw Error(ErrorKind::InvalidInput, "negative vertex count");
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n || b >= n) {
      std::ostringstream os;
      os << "edge (" << a + 1 << "," << b + 1 << ") has a label outside 1.." << n;
      throw Error(ErrorKind::InvalidInput, os.str());
    }
    if (a == b) {
      std::ostringstream os;
      os << "loop at vertex " << a + 1;
      throw Error(ErrorKind::InvalidInput, os.str());
    }
    edges_.push_back({std::min(a, b), std::max(a, b)});
  }
  std::sort(edges_.begin(), edges_.end(),
            [](const Edge& x, const Edge& y) { return x.u != y.u ? x.u < y.u : x.v < y.v; });
  for (std::size_t i = 1; i < edges_.size(); ++i)
    if (edges_[i] == edges_[i - 1]) {
      std::ostringstream os;
      os << "duplicate edge (" << edges_[i].u + 1 << "," << edges_[i].v + 1 << ")";
      throw Error(ErrorKind::InvalidInput, os.str());
    }
  adj_.assign(static_cast<std::size_t>(n), {});
  adj_edge_.assign(static_cast<std::size_t>(n), {});
  std::vector<std::vector<std::pair<int, int>>> tmp(static_cast<std::size_t>(n));
  for (int e = 0; e < edge_count(); ++e) {
    tmp[static_cast<std::size_t>(edges_[e].u)].push_back({edges_[e].v, e});
    tmp[static_cast<std::size_t>(edges_[e].v)].push_back({edges_[e].u, e});
  }
  for (int v = 0; v < n; ++v) {
    auto& t = tmp[static_cast<std::size_t>(v)];
    std::sort(t.begin(), t.end());
    for (auto [w, e] : t) {
      adj_[static_cast<std::size_t>(v)].push_back(w);
      adj_edge_[static_cast<std::size_t>(v)].push_back(e);
    }
  }
}

Graph Graph::from_one_based(int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::pair<int, int>> zero;
  zero.reserve(edges.size());
  for (auto [a, b] : edges) zero.push_back({a - 1, b - 1});
  return Graph(n, zero);
}

int Graph::edge_index(int a, int b) const {
  if (a < 0 || b < 0 || a >= n_ || b >= n_) return -1;
  const auto& nb = adj_[static_cast<std::size_t>(a)];
  auto it = std::lower_bound(nb.begin(), nb.end(), b);
  if (it == nb.end() || *it != b) return -1;
  return adj_edge_[static_cast<std::size_t>(a)][static_cast<std::size_t>(it - nb.begin())];
}

std::vector<int> Graph::component_ids() const {
  std::vector<int> id(static_cast<std::size_t>(n_), -1);
  int next = 0;
  for (int s = 0; s < n_; ++s) {
    if (id[static_cast<std::size_t>(s)] >= 0) continue;
    std::deque<int> q{s};
    id[static_cast<std::size_t>(s)] = next;
    while (!q.empty()) {
      const int v = q.front();
      q.pop_front();
      for (int w : neighbors(v))
        if (id[static_cast<std::size_t>(w)] < 0) {
          id[static_cast<std::size_t>(w)] = next;
          q.push_back(w);
        }
    }
    ++next;
  }
  return id;
}

int Graph::components() const {
  const auto id = component_ids();
  return id.empty() ? 0 : *std::max_element(id.begin(), id.end()) + 1;
}

int Graph::betti() const { return edge_count() - n_ + components(); }

InducedSubgraph induced_subgraph(const Graph& g, std::span<const int> vs) {
  InducedSubgraph out;
  out.to_local.assign(static_cast<std::size_t>(g.n()), -1);
  out.to_parent.assign(vs.begin(), vs.end());
  std::sort(out.to_parent.begin(), out.to_parent.end());
  out.to_parent.erase(std::unique(out.to_parent.begin(), out.to_parent.end()), out.to_parent.end());
  for (std::size_t i = 0; i < out.to_parent.size(); ++i) {
    const int v = out.to_parent[i];
    if (v < 0 || v >= g.n()) throw Error(ErrorKind::InvalidInput, "vertex outside graph");
    out.to_local[static_cast<std::size_t>(v)] = static_cast<int>(i);
  }
  std::vector<std::pair<int, int>> edges;
  std::vector<int> parent_edges;
  for (int e = 0; e < g.edge_count(); ++e) {
    const int a = out.to_local[static_cast<std::size_t>(g.edge(e).u)];
    const int b = out.to_local[static_cast<std::size_t>(g.edge(e).v)];
    if (a >= 0 && b >= 0) {
      edges.push_back({a, b});
      parent_edges.push_back(e);
    }
  }
  out.graph = Graph(static_cast<int>(out.to_parent.size()), edges);
  // Parent edge order is (u,v)-lexicographic and to_local is monotone, so the
  // local edge order matches.
  out.edge_to_parent = parent_edges;
  return out;
}

std::vector<int> bfs_spanning_forest(const Graph& g) {
  std::vector<char> seen(static_cast<std::size_t>(g.n()), 0);
  std::vector<int> tree;
  for (int s = 0; s < g.n(); ++s) {
    if (seen[static_cast<std::size_t>(s)]) continue;
    seen[static_cast<std::size_t>(s)] = 1;
    std::deque<int> q{s};
    while (!q.empty()) {
      const int v = q.front();
      q.pop_front();
      for (int w : g.neighbors(v))
        if (!seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = 1;
          tree.push_back(g.edge_index(v, w));
          q.push_back(w);
        }
    }
  }
  return tree;
}

namespace {

std::vector<char> membership(const Graph& g, std::span<const int> vs) {
  std::vector<char> in(static_cast<std::size_t>(g.n()), 0);
  for (int v : vs) {
    if (v < 0 || v >= g.n()) throw Error(ErrorKind::InvalidInput, "vertex outside graph");
    in[static_cast<std::size_t>(v)] = 1;
  }
  return in;
}

int neighbours_in(const Graph& g, const std::vector<char>& in, int v) {
  int c = 0;
  for (int w : g.neighbors(v)) c += in[static_cast<std::size_t>(w)];
  return c;
}

bool connected_within(const Graph& g, const std::vector<char>& in) {
  int start = -1, total = 0;
  for (int v = 0; v < g.n(); ++v)
    if (in[static_cast<std::size_t>(v)]) {
      ++total;
      if (start < 0) start = v;
    }
  if (total == 0) return false;
  std::vector<char> seen(in.size(), 0);
  std::deque<int> q{start};
  seen[static_cast<std::size_t>(start)] = 1;
  int reached = 1;
  while (!q.empty()) {
    const int v = q.front();
    q.pop_front();
    for (int w : g.neighbors(v))
      if (in[static_cast<std::size_t>(w)] && !seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        ++reached;
        q.push_back(w);
      }
  }
  return reached == total;
}

void canonical_sort(std::vector<std::vector<int>>& sets) {
  for (auto& s : sets) std::sort(s.begin(), s.end());
  std::sort(sets.begin(), sets.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a < b;
  });
}

}  // namespace

bool is_admissible_support(const Graph& g, std::span<const int> v_n) {
  if (v_n.empty()) throw Error(ErrorKind::InvalidInput, "empty support");
  const auto in = membership(g, v_n);
  if (!connected_within(g, in)) return false;
  for (int v = 0; v < g.n(); ++v) {
    if (in[static_cast<std::size_t>(v)]) continue;
    const int c = neighbours_in(g, in, v);
    if (c == 1 || c == 2) return false;
  }
  return true;
}

std::vector<std::vector<int>> enumerate_admissible_supports(const Graph& g) {
  const int n = g.n();
  std::vector<std::vector<int>> out;
  // state per vertex: 0 undecided, 1 in S, 2 excluded
  std::vector<char> state(static_cast<std::size_t>(n), 0);
  std::vector<int> in_count(static_cast<std::size_t>(n), 0);
  std::vector<int> s;

  auto include = [&](int v, int delta) {
    for (int w : g.neighbors(v)) in_count[static_cast<std::size_t>(w)] += delta;
  };

  // Potential neighbours in S: current ones plus undecided ones still
  // reachable (label above root).
  auto feasible = [&](int root) {
    for (int u = 0; u < n; ++u) {
      if (state[static_cast<std::size_t>(u)] == 1) continue;
      const bool fixed_out = state[static_cast<std::size_t>(u)] == 2 || u < root;
      if (!fixed_out) continue;
      const int c = in_count[static_cast<std::size_t>(u)];
      if (c == 0 || c >= 3) continue;
      int potential = c;
      for (int w : g.neighbors(u))
        if (w > root && state[static_cast<std::size_t>(w)] == 0) ++potential;
      if (potential < 3) return false;
    }
    return true;
  };

  std::function<void(int, std::vector<int>)> grow = [&](int root, std::vector<int> frontier) {
    if (!feasible(root)) return;
    if (frontier.empty()) {
      for (int u = 0; u < n; ++u) {
        if (state[static_cast<std::size_t>(u)] == 1) continue;
        const int c = in_count[static_cast<std::size_t>(u)];
        if (c == 1 || c == 2) return;
      }
      out.push_back(s);
      return;
    }
    const int v = frontier.front();
    std::vector<int> rest(frontier.begin() + 1, frontier.end());

    state[static_cast<std::size_t>(v)] = 1;
    s.push_back(v);
    include(v, +1);
    std::vector<int> grown = rest;
    for (int w : g.neighbors(v))
      if (w > root && state[static_cast<std::size_t>(w)] == 0 &&
          std::find(grown.begin(), grown.end(), w) == grown.end())
        grown.push_back(w);
    std::sort(grown.begin(), grown.end());
    grow(root, grown);
    include(v, -1);
    s.pop_back();

    state[static_cast<std::size_t>(v)] = 2;
    grow(root, rest);
    state[static_cast<std::size_t>(v)] = 0;
  };

  for (int root = 0; root < n; ++root) {
    state[static_cast<std::size_t>(root)] = 1;
    s = {root};
    include(root, +1);
    std::vector<int> frontier;
    for (int w : g.neighbors(root))
      if (w > root) frontier.push_back(w);
    grow(root, frontier);
    include(root, -1);
    state[static_cast<std::size_t>(root)] = 0;
  }
  canonical_sort(out);
  return out;
}

std::vector<std::vector<int>> admissible_supports_3regular(const Graph& g) {
  const int n = g.n();
  std::vector<std::vector<int>> out;
  std::vector<char> outside(static_cast<std::size_t>(n), 0);
  std::function<void(int)> rec = [&](int v) {
    if (v == n) {
      std::vector<char> in(static_cast<std::size_t>(n));
      std::vector<int> s;
      for (int u = 0; u < n; ++u) {
        in[static_cast<std::size_t>(u)] = !outside[static_cast<std::size_t>(u)];
        if (in[static_cast<std::size_t>(u)]) s.push_back(u);
      }
      if (!s.empty() && connected_within(g, in)) out.push_back(s);
      return;
    }
    rec(v + 1);
    bool free_of_outside = true;
    for (int w : g.neighbors(v))
      if (outside[static_cast<std::size_t>(w)]) free_of_outside = false;
    if (free_of_outside) {
      outside[static_cast<std::size_t>(v)] = 1;
      rec(v + 1);
      outside[static_cast<std::size_t>(v)] = 0;
    }
  };
  rec(0);
  canonical_sort(out);
  return out;
}

std::vector<int> SupportPartition::free_edges() const {
  std::vector<int> out;
  out.insert(out.end(), free_nn.begin(), free_nn.end());
  out.insert(out.end(), free_zn.begin(), free_zn.end());
  out.insert(out.end(), free_zz.begin(), free_zz.end());
  std::sort(out.begin(), out.end());
  return out;
}

SupportPartition partition_for_support(const Graph& g, std::span<const int> v_n) {
  if (!g.connected()) throw Error(ErrorKind::InvalidInput, "graph is not connected");
  if (!is_admissible_support(g, v_n)) throw Error(ErrorKind::InvalidInput, "support is not admissible");
  const int n = g.n();
  SupportPartition p;
  const auto in = membership(g, v_n);
  p.vertex_class.assign(static_cast<std::size_t>(n), 2);
  for (int v = 0; v < n; ++v) {
    if (in[static_cast<std::size_t>(v)])
      p.vertex_class[static_cast<std::size_t>(v)] = 0;
    else if (neighbours_in(g, in, v) > 0)
      p.vertex_class[static_cast<std::size_t>(v)] = 1;
  }
  for (int v = 0; v < n; ++v) {
    switch (p.vertex_class[static_cast<std::size_t>(v)]) {
      case 0: p.v_n.push_back(v); break;
      case 1: p.v_zn.push_back(v); break;
      default: p.v_zz.push_back(v); break;
    }
  }
  for (int e = 0; e < g.edge_count(); ++e) {
    const bool a = in[static_cast<std::size_t>(g.edge(e).u)];
    const bool b = in[static_cast<std::size_t>(g.edge(e).v)];
    if (a && b)
      p.e_nn.push_back(e);
    else if (a || b)
      p.e_zn.push_back(e);
    else
      p.e_zz.push_back(e);
  }

  std::vector<char> in_tree(static_cast<std::size_t>(g.edge_count()), 0);
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  // 1. BFS spanning tree of G_N
  {
    const int start = p.v_n.front();
    seen[static_cast<std::size_t>(start)] = 1;
    std::deque<int> q{start};
    while (!q.empty()) {
      const int v = q.front();
      q.pop_front();
      for (int w : g.neighbors(v))
        if (in[static_cast<std::size_t>(w)] && !seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = 1;
          in_tree[static_cast<std::size_t>(g.edge_index(v, w))] = 1;
          q.push_back(w);
        }
    }
  }
  // 2. one crossing edge per boundary vertex
  for (int r : p.v_zn) {
    for (int w : g.neighbors(r))
      if (in[static_cast<std::size_t>(w)]) {
        const int e = g.edge_index(r, w);
        in_tree[static_cast<std::size_t>(e)] = 1;
        p.zn_tree_edge.push_back(e);
        break;
      }
    seen[static_cast<std::size_t>(r)] = 1;
  }
  // 3. multi-source BFS through E_ZZ
  {
    std::deque<int> q(p.v_zn.begin(), p.v_zn.end());
    while (!q.empty()) {
      const int v = q.front();
      q.pop_front();
      for (int w : g.neighbors(v))
        if (!in[static_cast<std::size_t>(w)] && !seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = 1;
          in_tree[static_cast<std::size_t>(g.edge_index(v, w))] = 1;
          q.push_back(w);
        }
    }
  }
  for (int e = 0; e < g.edge_count(); ++e)
    if (in_tree[static_cast<std::size_t>(e)]) p.tree_edges.push_back(e);
  for (int e : p.e_nn)
    if (!in_tree[static_cast<std::size_t>(e)]) p.free_nn.push_back(e);
  for (int e : p.e_zn)
    if (!in_tree[static_cast<std::size_t>(e)]) p.free_zn.push_back(e);
  for (int e : p.e_zz)
    if (!in_tree[static_cast<std::size_t>(e)]) p.free_zz.push_back(e);
  if (static_cast<int>(p.tree_edges.size()) != n - 1)
    throw Error(ErrorKind::Verification, "adapted spanning tree construction failed");
  return p;
}

SupportPartition whole_graph_partition(const Graph& g) {
  std::vector<int> all(static_cast<std::size_t>(g.n()));
  std::iota(all.begin(), all.end(), 0);
  return partition_for_support(g, all);
}

std::vector<int> fundamental_cycle(const Graph& g, std::span<const int> tree_edges, int free_edge) {
  const int n = g.n();
  std::vector<std::vector<std::pair<int, int>>> tadj(static_cast<std::size_t>(n));
  for (int e : tree_edges) {
    tadj[static_cast<std::size_t>(g.edge(e).u)].push_back({g.edge(e).v, e});
    tadj[static_cast<std::size_t>(g.edge(e).v)].push_back({g.edge(e).u, e});
  }
  const int a = g.edge(free_edge).u;
  const int b = g.edge(free_edge).v;
  // Path b -> a in the tree.
  std::vector<int> parent(static_cast<std::size_t>(n), -2), parent_edge(static_cast<std::size_t>(n), -1);
  parent[static_cast<std::size_t>(b)] = -1;
  std::deque<int> q{b};
  while (!q.empty()) {
    const int v = q.front();
    q.pop_front();
    for (auto [w, e] : tadj[static_cast<std::size_t>(v)])
      if (parent[static_cast<std::size_t>(w)] == -2) {
        parent[static_cast<std::size_t>(w)] = v;
        parent_edge[static_cast<std::size_t>(w)] = e;
        q.push_back(w);
      }
  }
  if (parent[static_cast<std::size_t>(a)] == -2) throw Error(ErrorKind::InvalidInput, "tree does not span the free edge");
  std::vector<int> z(static_cast<std::size_t>(g.edge_count()), 0);
  z[static_cast<std::size_t>(free_edge)] = 1;
  // Walk a -> ... -> b along parents, then the cycle is a->b (free), b->...->a.
  // Traversal direction for tree edge (w, parent w) in the b->a walk is parent->w.
  for (int w = a; w != b; w = parent[static_cast<std::size_t>(w)]) {
    const int from = parent[static_cast<std::size_t>(w)];
    const int e = parent_edge[static_cast<std::size_t>(w)];
    z[static_cast<std::size_t>(e)] = from < w ? 1 : -1;
  }
  return z;
}

std::uint64_t spanning_tree_count(const Graph& g) {
  const int n = g.n();
  if (n <= 1) return 1;
  if (!g.connected()) return 0;
  RMatrix l(static_cast<std::size_t>(n - 1), static_cast<std::size_t>(n - 1));
  for (const auto& e : g.edges()) {
    for (int x : {e.u, e.v})
      if (x < n - 1) l(static_cast<std::size_t>(x), static_cast<std::size_t>(x)) += 1.0;
    if (e.u < n - 1 && e.v < n - 1) {
      l(static_cast<std::size_t>(e.u), static_cast<std::size_t>(e.v)) -= 1.0;
      l(static_cast<std::size_t>(e.v), static_cast<std::size_t>(e.u)) -= 1.0;
    }
  }
  return static_cast<std::uint64_t>(std::llround(determinant(l)));
}

}  // namespace magtorus

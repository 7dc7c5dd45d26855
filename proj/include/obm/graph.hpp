#pragma once

#include <algorithm>
#include <cstddef>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace obm {

enum class Side { A, B };

struct Edge {
  int a = 0;
  int b = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

// Bipartite graph on A = {1..n} (the arriving side) and B = {1..m}.
// Vertex ids are 1-based everywhere; adjacency lists are kept sorted.
class BipartiteGraph {
 public:
  BipartiteGraph() = default;

  BipartiteGraph(int n, int m, std::vector<Edge> edges) : n_(n), m_(m) {
    if (n < 0 || m < 0)
      throw std::invalid_argument("BipartiteGraph: negative side size");
    adj_.assign(static_cast<std::size_t>(n), {});
    for (const Edge& e : edges) {
      if (e.a < 1 || e.a > n || e.b < 1 || e.b > m)
        throw std::invalid_argument("BipartiteGraph: edge (" +
                                    std::to_string(e.a) + "," +
                                    std::to_string(e.b) +
                                    ") out of range for n=" + std::to_string(n) +
                                    " m=" + std::to_string(m));
      adj_[static_cast<std::size_t>(e.a - 1)].push_back(e.b);
    }
    edge_count_ = 0;
    for (auto& nbrs : adj_) {
      std::sort(nbrs.begin(), nbrs.end());
      nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
      edge_count_ += nbrs.size();
    }
  }

  int n() const { return n_; }
  int m() const { return m_; }
  std::size_t edge_count() const { return edge_count_; }

  const std::vector<int>& neighbors(int a) const {
    return adj_[static_cast<std::size_t>(a - 1)];
  }

  bool has_edge(int a, int b) const {
    if (a < 1 || a > n_ || b < 1 || b > m_) return false;
    const auto& nbrs = neighbors(a);
    return std::binary_search(nbrs.begin(), nbrs.end(), b);
  }

  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (int a = 1; a <= n_; ++a)
      for (int b : neighbors(a)) out.push_back({a, b});
    return out;
  }

  friend bool operator==(const BipartiteGraph& x, const BipartiteGraph& y) {
    return x.n_ == y.n_ && x.m_ == y.m_ && x.adj_ == y.adj_;
  }

 private:
  int n_ = 0;
  int m_ = 0;
  std::size_t edge_count_ = 0;
  std::vector<std::vector<int>> adj_;
};

inline BipartiteGraph build_graph(int n, int m, std::vector<Edge> edges) {
  return BipartiteGraph(n, m, std::move(edges));
}

// Matching with O(1) endpoint queries. add() rejects anything that would
// give a vertex two partners or use ids outside the graph.
class Matching {
 public:
  Matching() = default;
  Matching(int n, int m)
      : n_(n), m_(m),
        a_to_b_(static_cast<std::size_t>(n) + 1, 0),
        b_to_a_(static_cast<std::size_t>(m) + 1, 0) {}

  int n() const { return n_; }
  int m() const { return m_; }
  int size() const { return size_; }

  int partner_of_a(int a) const { return a_to_b_[static_cast<std::size_t>(a)]; }
  int partner_of_b(int b) const { return b_to_a_[static_cast<std::size_t>(b)]; }
  bool covers_a(int a) const { return partner_of_a(a) != 0; }
  bool covers_b(int b) const { return partner_of_b(b) != 0; }

  void add(int a, int b) {
    if (a < 1 || a > n_ || b < 1 || b > m_)
      throw std::invalid_argument("Matching::add: vertex out of range");
    if (a_to_b_[static_cast<std::size_t>(a)] != 0 ||
        b_to_a_[static_cast<std::size_t>(b)] != 0)
      throw std::invalid_argument("Matching::add: endpoint already matched");
    a_to_b_[static_cast<std::size_t>(a)] = b;
    b_to_a_[static_cast<std::size_t>(b)] = a;
    ++size_;
  }

  void remove(int a, int b) {
    if (a < 1 || a > n_ || b < 1 || b > m_ ||
        a_to_b_[static_cast<std::size_t>(a)] != b)
      throw std::invalid_argument("Matching::remove: edge not present");
    a_to_b_[static_cast<std::size_t>(a)] = 0;
    b_to_a_[static_cast<std::size_t>(b)] = 0;
    --size_;
  }

  std::vector<Edge> pairs() const {
    std::vector<Edge> out;
    out.reserve(static_cast<std::size_t>(size_));
    for (int a = 1; a <= n_; ++a)
      if (a_to_b_[static_cast<std::size_t>(a)] != 0)
        out.push_back({a, a_to_b_[static_cast<std::size_t>(a)]});
    return out;
  }

  friend bool operator==(const Matching& x, const Matching& y) {
    return x.n_ == y.n_ && x.m_ == y.m_ && x.a_to_b_ == y.a_to_b_;
  }

 private:
  int n_ = 0;
  int m_ = 0;
  int size_ = 0;
  std::vector<int> a_to_b_;
  std::vector<int> b_to_a_;
};

// Maximum matching via layered augmenting paths (Hopcroft-Karp).
inline Matching max_matching(const BipartiteGraph& g) {
  const int n = g.n();
  const int m = g.m();
  constexpr int kInf = 1 << 29;
  std::vector<int> match_a(static_cast<std::size_t>(n) + 1, 0);
  std::vector<int> match_b(static_cast<std::size_t>(m) + 1, 0);
  std::vector<int> dist(static_cast<std::size_t>(n) + 1, 0);
  std::queue<int> q;

  auto bfs = [&]() {
    bool reachable_free_b = false;
    for (int a = 1; a <= n; ++a) {
      if (match_a[static_cast<std::size_t>(a)] == 0) {
        dist[static_cast<std::size_t>(a)] = 0;
        q.push(a);
      } else {
        dist[static_cast<std::size_t>(a)] = kInf;
      }
    }
    while (!q.empty()) {
      const int a = q.front();
      q.pop();
      for (int b : g.neighbors(a)) {
        const int a2 = match_b[static_cast<std::size_t>(b)];
        if (a2 == 0) {
          reachable_free_b = true;
        } else if (dist[static_cast<std::size_t>(a2)] == kInf) {
          dist[static_cast<std::size_t>(a2)] =
              dist[static_cast<std::size_t>(a)] + 1;
          q.push(a2);
        }
      }
    }
    return reachable_free_b;
  };

  auto dfs = [&](auto&& self, int a) -> bool {
    for (int b : g.neighbors(a)) {
      const int a2 = match_b[static_cast<std::size_t>(b)];
      if (a2 == 0 || (dist[static_cast<std::size_t>(a2)] ==
                          dist[static_cast<std::size_t>(a)] + 1 &&
                      self(self, a2))) {
        match_a[static_cast<std::size_t>(a)] = b;
        match_b[static_cast<std::size_t>(b)] = a;
        return true;
      }
    }
    dist[static_cast<std::size_t>(a)] = kInf;
    return false;
  };

  while (bfs()) {
    for (int a = 1; a <= n; ++a)
      if (match_a[static_cast<std::size_t>(a)] == 0) dfs(dfs, a);
  }

  Matching result(n, m);
  for (int a = 1; a <= n; ++a)
    if (match_a[static_cast<std::size_t>(a)] != 0)
      result.add(a, match_a[static_cast<std::size_t>(a)]);
  return result;
}

// A graph derived from another one, with id maps back to the original.
// new_to_orig_* are indexed by new id (1-based); orig_to_new_* by original
// id, with 0 marking vertices that were dropped.
struct RelabeledGraph {
  BipartiteGraph graph;
  std::vector<int> new_to_orig_a;
  std::vector<int> new_to_orig_b;
  std::vector<int> orig_to_new_a;
  std::vector<int> orig_to_new_b;

  int orig_a(int new_a) const { return new_to_orig_a[static_cast<std::size_t>(new_a)]; }
  int orig_b(int new_b) const { return new_to_orig_b[static_cast<std::size_t>(new_b)]; }
  int new_a(int orig_a) const { return orig_to_new_a[static_cast<std::size_t>(orig_a)]; }
  int new_b(int orig_b) const { return orig_to_new_b[static_cast<std::size_t>(orig_b)]; }
};

namespace detail {

inline RelabeledGraph relabel(const BipartiteGraph& g, std::vector<int> keep_a,
                              std::vector<int> keep_b) {
  std::sort(keep_a.begin(), keep_a.end());
  keep_a.erase(std::unique(keep_a.begin(), keep_a.end()), keep_a.end());
  std::sort(keep_b.begin(), keep_b.end());
  keep_b.erase(std::unique(keep_b.begin(), keep_b.end()), keep_b.end());
  if (!keep_a.empty() && (keep_a.front() < 1 || keep_a.back() > g.n()))
    throw std::invalid_argument("induced_subgraph: A-vertex out of range");
  if (!keep_b.empty() && (keep_b.front() < 1 || keep_b.back() > g.m()))
    throw std::invalid_argument("induced_subgraph: B-vertex out of range");

  RelabeledGraph out;
  out.new_to_orig_a.assign(keep_a.size() + 1, 0);
  out.new_to_orig_b.assign(keep_b.size() + 1, 0);
  out.orig_to_new_a.assign(static_cast<std::size_t>(g.n()) + 1, 0);
  out.orig_to_new_b.assign(static_cast<std::size_t>(g.m()) + 1, 0);
  for (std::size_t i = 0; i < keep_a.size(); ++i) {
    out.new_to_orig_a[i + 1] = keep_a[i];
    out.orig_to_new_a[static_cast<std::size_t>(keep_a[i])] = static_cast<int>(i + 1);
  }
  for (std::size_t i = 0; i < keep_b.size(); ++i) {
    out.new_to_orig_b[i + 1] = keep_b[i];
    out.orig_to_new_b[static_cast<std::size_t>(keep_b[i])] = static_cast<int>(i + 1);
  }

  std::vector<Edge> edges;
  for (int a : keep_a) {
    const int na = out.new_a(a);
    for (int b : g.neighbors(a)) {
      const int nb = out.new_b(b);
      if (nb != 0) edges.push_back({na, nb});
    }
  }
  out.graph = BipartiteGraph(static_cast<int>(keep_a.size()),
                             static_cast<int>(keep_b.size()), std::move(edges));
  return out;
}

}  // namespace detail

// Subgraph induced by A-subset and B-subset, relabeled to dense 1-based ids.
// Relabeling is order preserving on both sides.
inline RelabeledGraph induced_subgraph(const BipartiteGraph& g,
                                       const std::vector<int>& a_subset,
                                       const std::vector<int>& b_subset) {
  return detail::relabel(g, a_subset, b_subset);
}

inline RelabeledGraph remove_vertex(const BipartiteGraph& g, Side side, int id) {
  if (side == Side::A ? (id < 1 || id > g.n()) : (id < 1 || id > g.m()))
    throw std::invalid_argument("remove_vertex: id out of range");
  std::vector<int> keep_a;
  std::vector<int> keep_b;
  for (int a = 1; a <= g.n(); ++a)
    if (side != Side::A || a != id) keep_a.push_back(a);
  for (int b = 1; b <= g.m(); ++b)
    if (side != Side::B || b != id) keep_b.push_back(b);
  return detail::relabel(g, std::move(keep_a), std::move(keep_b));
}

}  // namespace obm

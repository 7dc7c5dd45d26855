#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "obm/bits.hpp"
#include "obm/graph.hpp"

namespace obm {

namespace detail {
inline void check_permutation(const std::vector<int>& p, const char* what) {
  std::vector<bool> seen(p.size() + 1, false);
  for (int v : p) {
    if (v < 1 || static_cast<std::size_t>(v) > p.size() || seen[static_cast<std::size_t>(v)])
      throw std::invalid_argument(std::string(what) + ": not a permutation");
    seen[static_cast<std::size_t>(v)] = true;
  }
}
}  // namespace detail

// pi: arrival sequence of the A-side. vertex_at(t) is the t-th arrival, t 1-based.
class ArrivalOrder {
 public:
  ArrivalOrder() = default;

  explicit ArrivalOrder(std::vector<int> sequence) : seq_(std::move(sequence)) {
    detail::check_permutation(seq_, "ArrivalOrder");
    pos_.assign(seq_.size() + 1, 0);
    for (std::size_t t = 0; t < seq_.size(); ++t)
      pos_[static_cast<std::size_t>(seq_[t])] = static_cast<int>(t + 1);
  }

  static ArrivalOrder identity(int n) {
    std::vector<int> s(static_cast<std::size_t>(n));
    std::iota(s.begin(), s.end(), 1);
    return ArrivalOrder(std::move(s));
  }

  int n() const { return static_cast<int>(seq_.size()); }
  int vertex_at(int t) const { return seq_[static_cast<std::size_t>(t - 1)]; }
  int position_of(int a) const { return pos_[static_cast<std::size_t>(a)]; }
  const std::vector<int>& sequence() const { return seq_; }

  friend bool operator==(const ArrivalOrder&, const ArrivalOrder&) = default;

 private:
  std::vector<int> seq_;
  std::vector<int> pos_;
};

// sigma: rank(b) = position of b in the preference order, 1 = most preferred.
class RankingPermutation {
 public:
  RankingPermutation() = default;

  explicit RankingPermutation(std::vector<int> ranks) : rank_(std::move(ranks)) {
    detail::check_permutation(rank_, "RankingPermutation");
  }

  static RankingPermutation identity(int m) {
    std::vector<int> r(static_cast<std::size_t>(m));
    std::iota(r.begin(), r.end(), 1);
    return RankingPermutation(std::move(r));
  }

  static RankingPermutation reverse(int m) {
    std::vector<int> r(static_cast<std::size_t>(m));
    for (int b = 1; b <= m; ++b) r[static_cast<std::size_t>(b - 1)] = m - b + 1;
    return RankingPermutation(std::move(r));
  }

  int m() const { return static_cast<int>(rank_.size()); }
  int rank(int b) const { return rank_[static_cast<std::size_t>(b - 1)]; }
  const std::vector<int>& ranks() const { return rank_; }

  friend bool operator==(const RankingPermutation&, const RankingPermutation&) = default;

 private:
  std::vector<int> rank_;  // rank_[b-1] = sigma(b)
};

// Each arriving vertex takes its free neighbor of minimum rank.
inline Matching ranking_run(const BipartiteGraph& g, const ArrivalOrder& pi,
                            const RankingPermutation& sigma) {
  if (pi.n() != g.n() || sigma.m() != g.m())
    throw std::invalid_argument("ranking_run: order/permutation size mismatch");
  Matching match(g.n(), g.m());
  for (int t = 1; t <= g.n(); ++t) {
    const int a = pi.vertex_at(t);
    int best = 0;
    for (int b : g.neighbors(a)) {
      if (!match.covers_b(b) && (best == 0 || sigma.rank(b) < sigma.rank(best)))
        best = b;
    }
    if (best != 0) match.add(a, best);
  }
  return match;
}

// Edge sequence grouped by arrival, neighbors in ascending B-id. Greedy over
// this order coincides with ranking_run under the identity permutation.
inline std::vector<Edge> pi_induced_edge_order(const BipartiteGraph& g,
                                               const ArrivalOrder& pi) {
  std::vector<Edge> order;
  order.reserve(g.edge_count());
  for (int t = 1; t <= pi.n(); ++t) {
    const int a = pi.vertex_at(t);
    for (int b : g.neighbors(a)) order.push_back({a, b});
  }
  return order;
}

// Maximal matching by scanning omega once, taking each edge whose endpoints
// are both still free. omega must enumerate each edge of g exactly once.
inline Matching greedy_edge_run(const BipartiteGraph& g,
                                const std::vector<Edge>& omega) {
  if (omega.size() != g.edge_count())
    throw std::invalid_argument("greedy_edge_run: omega must list every edge exactly once");
  std::vector<std::size_t> offset(static_cast<std::size_t>(g.n()) + 1, 0);
  for (int a = 1; a <= g.n(); ++a)
    offset[static_cast<std::size_t>(a)] =
        offset[static_cast<std::size_t>(a - 1)] + g.neighbors(a).size();
  std::vector<bool> seen(omega.size(), false);
  Matching match(g.n(), g.m());
  for (const Edge& e : omega) {
    if (!g.has_edge(e.a, e.b))
      throw std::invalid_argument("greedy_edge_run: (" + std::to_string(e.a) +
                                  "," + std::to_string(e.b) + ") is not an edge");
    const auto& nbrs = g.neighbors(e.a);
    const std::size_t canon =
        offset[static_cast<std::size_t>(e.a - 1)] +
        static_cast<std::size_t>(std::lower_bound(nbrs.begin(), nbrs.end(), e.b) -
                                 nbrs.begin());
    if (seen[canon])
      throw std::invalid_argument("greedy_edge_run: duplicate edge in omega");
    seen[canon] = true;
    if (!match.covers_a(e.a) && !match.covers_b(e.b)) match.add(e.a, e.b);
  }
  return match;
}

// Ranks B-vertices by (category, id); categories need not be contiguous.
inline RankingPermutation category_to_permutation(const std::vector<int>& category,
                                                  int m) {
  if (static_cast<int>(category.size()) != m)
    throw std::invalid_argument("category_to_permutation: size mismatch");
  for (int c : category)
    if (c < 1) throw std::invalid_argument("category_to_permutation: categories are 1-based");
  std::vector<int> ids(static_cast<std::size_t>(m));
  std::iota(ids.begin(), ids.end(), 1);
  std::stable_sort(ids.begin(), ids.end(), [&](int x, int y) {
    return category[static_cast<std::size_t>(x - 1)] < category[static_cast<std::size_t>(y - 1)];
  });
  std::vector<int> ranks(static_cast<std::size_t>(m));
  for (int r = 1; r <= m; ++r) ranks[static_cast<std::size_t>(ids[static_cast<std::size_t>(r - 1)] - 1)] = r;
  return RankingPermutation(std::move(ranks));
}

// Uniform permutation of [m] via Fisher-Yates with rejection-sampled draws.
inline RankingPermutation fisher_yates_permutation(int m, BitSource& bits) {
  std::vector<int> vals(static_cast<std::size_t>(m));
  std::iota(vals.begin(), vals.end(), 1);
  for (int i = m; i >= 2; --i) {
    const auto j = static_cast<std::size_t>(bits.uniform_below(static_cast<std::uint64_t>(i)));
    std::swap(vals[static_cast<std::size_t>(i - 1)], vals[j]);
  }
  // vals is the preference order; invert into ranks
  std::vector<int> ranks(static_cast<std::size_t>(m));
  for (int r = 1; r <= m; ++r) ranks[static_cast<std::size_t>(vals[static_cast<std::size_t>(r - 1)] - 1)] = r;
  return RankingPermutation(std::move(ranks));
}

struct KvvResult {
  Matching matching;
  std::uint64_t bits_used = 0;
};

// Ranking under a uniformly random permutation drawn from `bits`.
inline KvvResult kvv_run(const BipartiteGraph& g, const ArrivalOrder& pi,
                         BitSource& bits) {
  const std::uint64_t before = bits.bits_consumed();
  const RankingPermutation sigma = fisher_yates_permutation(g.m(), bits);
  Matching match = ranking_run(g, pi, sigma);
  return {std::move(match), bits.bits_consumed() - before};
}

struct VertexRef {
  Side side = Side::A;
  int id = 0;
  friend bool operator==(const VertexRef&, const VertexRef&) = default;
};

struct PathDiff {
  enum class Kind { identical, single_path, other };
  Kind kind = Kind::identical;
  std::vector<VertexRef> path;  // vertex sequence when kind == single_path
};

// Classifies the symmetric difference of two matchings over the same vertex
// sets: empty, one alternating path, or anything else (several components
// or a cycle).
inline PathDiff alternating_path_diff(const Matching& m1, const Matching& m2) {
  if (m1.n() != m2.n() || m1.m() != m2.m())
    throw std::invalid_argument("alternating_path_diff: incompatible matchings");
  const int n = m1.n();
  const int m = m1.m();

  // per A-vertex, up to two distinct partners (one from each matching)
  std::vector<Edge> diff;
  for (int a = 1; a <= n; ++a) {
    const int b1 = m1.partner_of_a(a);
    const int b2 = m2.partner_of_a(a);
    if (b1 == b2) continue;
    if (b1 != 0) diff.push_back({a, b1});
    if (b2 != 0) diff.push_back({a, b2});
  }
  if (diff.empty()) return {PathDiff::Kind::identical, {}};

  std::vector<std::vector<int>> adj_a(static_cast<std::size_t>(n) + 1);
  std::vector<std::vector<int>> adj_b(static_cast<std::size_t>(m) + 1);
  for (const Edge& e : diff) {
    adj_a[static_cast<std::size_t>(e.a)].push_back(e.b);
    adj_b[static_cast<std::size_t>(e.b)].push_back(e.a);
  }

  auto degree = [&](VertexRef v) {
    return v.side == Side::A ? adj_a[static_cast<std::size_t>(v.id)].size()
                             : adj_b[static_cast<std::size_t>(v.id)].size();
  };

  VertexRef start{Side::A, 0};
  for (int a = 1; a <= n && start.id == 0; ++a)
    if (adj_a[static_cast<std::size_t>(a)].size() == 1) start = {Side::A, a};
  if (start.id == 0)
    for (int b = 1; b <= m && start.id == 0; ++b)
      if (adj_b[static_cast<std::size_t>(b)].size() == 1) start = {Side::B, b};
  if (start.id == 0) return {PathDiff::Kind::other, {}};  // every component is a cycle

  // walk the path from `start`
  std::vector<VertexRef> path{start};
  VertexRef prev{Side::A, 0};
  VertexRef cur = start;
  std::size_t used_edges = 0;
  for (;;) {
    const auto& nbrs = cur.side == Side::A ? adj_a[static_cast<std::size_t>(cur.id)]
                                           : adj_b[static_cast<std::size_t>(cur.id)];
    VertexRef next{Side::A, 0};
    bool found = false;
    for (int u : nbrs) {
      VertexRef cand{cur.side == Side::A ? Side::B : Side::A, u};
      if (!(cand == prev)) {
        next = cand;
        found = true;
        break;
      }
    }
    if (!found) break;
    ++used_edges;
    path.push_back(next);
    prev = cur;
    cur = next;
    if (degree(cur) == 1) break;
  }
  return used_edges == diff.size() ? PathDiff{PathDiff::Kind::single_path, std::move(path)}
                                   : PathDiff{PathDiff::Kind::other, {}};
}

// sigma' with b promoted to `new_rank` (which must improve on sigma(b));
// ranks in between shift down by one place, everything else is unchanged.
inline RankingPermutation promote_rank(const RankingPermutation& sigma, int b,
                                       int new_rank) {
  const int old_rank = sigma.rank(b);
  if (new_rank < 1 || new_rank > old_rank)
    throw std::invalid_argument("promote_rank: new rank must be in [1, sigma(b)]");
  std::vector<int> ranks(sigma.ranks());
  for (int v = 1; v <= sigma.m(); ++v) {
    const int r = sigma.rank(v);
    if (v == b) ranks[static_cast<std::size_t>(v - 1)] = new_rank;
    else if (r >= new_rank && r < old_rank) ranks[static_cast<std::size_t>(v - 1)] = r + 1;
  }
  return RankingPermutation(std::move(ranks));
}

}  // namespace obm

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "obm/graph.hpp"
#include "obm/online.hpp"

namespace obm {

// Edges (a_i, b_j) for j >= i. The unique perfect matching pairs a_i with b_i.
inline BipartiteGraph semi_complete(int c) {
  if (c < 1) throw std::invalid_argument("semi_complete: c must be positive");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(c) * (static_cast<std::size_t>(c) + 1) / 2);
  for (int i = 1; i <= c; ++i)
    for (int j = i; j <= c; ++j) edges.push_back({i, j});
  return BipartiteGraph(c, c, std::move(edges));
}

// Hard gadget on z + z vertices (z even, >= 4):
//   u_i, i <= z/2: neighbors v_{2i-1}, v_{2i}, v_{2i+1}  (indices > z dropped)
//   u_i, i >  z/2: single neighbor v_{2i-z-1}
// Ranking matches z/2 of it when ranks increase with id, z/2 + 1 when they
// decrease, yet a perfect matching exists.
inline BipartiteGraph h_gadget(int z) {
  if (z < 4 || z % 2 != 0)
    throw std::invalid_argument("h_gadget: z must be even and at least 4");
  std::vector<Edge> edges;
  for (int i = 1; i <= z / 2; ++i)
    for (int v : {2 * i - 1, 2 * i, 2 * i + 1})
      if (v <= z) edges.push_back({i, v});
  for (int i = z / 2 + 1; i <= z; ++i) edges.push_back({i, 2 * i - z - 1});
  return BipartiteGraph(z, z, std::move(edges));
}

// The witness: u_i - v_{2i} on the first half, u_i - v_{2i-z-1} on the second.
inline Matching h_gadget_perfect_matching(int z) {
  const BipartiteGraph g = h_gadget(z);
  Matching match(z, z);
  for (int i = 1; i <= z / 2; ++i) match.add(i, 2 * i);
  for (int i = z / 2 + 1; i <= z; ++i) match.add(i, 2 * i - z - 1);
  for (const Edge& e : match.pairs())
    if (!g.has_edge(e.a, e.b))
      throw std::logic_error("h_gadget witness uses a non-edge");
  return match;
}

// Permutations of [c] ranked in Lehmer-code order (rank 0 = identity).
class PermutationIndex {
 public:
  explicit PermutationIndex(int c) : c_(c) {
    if (c < 1 || c > 20) throw std::invalid_argument("PermutationIndex: bad c");
    fact_.assign(static_cast<std::size_t>(c) + 1, 1);
    for (int i = 1; i <= c; ++i)
      fact_[static_cast<std::size_t>(i)] =
          fact_[static_cast<std::size_t>(i - 1)] * static_cast<std::uint64_t>(i);
  }

  int c() const { return c_; }
  std::uint64_t count() const { return fact_[static_cast<std::size_t>(c_)]; }

  std::vector<int> unrank(std::uint64_t idx) const {
    if (idx >= count()) throw std::invalid_argument("PermutationIndex: rank out of range");
    std::vector<int> pool(static_cast<std::size_t>(c_));
    for (int i = 0; i < c_; ++i) pool[static_cast<std::size_t>(i)] = i + 1;
    std::vector<int> perm;
    perm.reserve(static_cast<std::size_t>(c_));
    for (int i = c_ - 1; i >= 0; --i) {
      const std::uint64_t f = fact_[static_cast<std::size_t>(i)];
      const auto digit = static_cast<std::size_t>(idx / f);
      idx %= f;
      perm.push_back(pool[digit]);
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(digit));
    }
    return perm;
  }

  std::uint64_t rank(const std::vector<int>& perm) const {
    if (static_cast<int>(perm.size()) != c_)
      throw std::invalid_argument("PermutationIndex: wrong length");
    std::vector<int> pool(static_cast<std::size_t>(c_));
    for (int i = 0; i < c_; ++i) pool[static_cast<std::size_t>(i)] = i + 1;
    std::uint64_t idx = 0;
    for (int i = 0; i < c_; ++i) {
      const auto it = std::find(pool.begin(), pool.end(), perm[static_cast<std::size_t>(i)]);
      if (it == pool.end())
        throw std::invalid_argument("PermutationIndex: not a permutation of [c]");
      idx += static_cast<std::uint64_t>(it - pool.begin()) *
             fact_[static_cast<std::size_t>(c_ - 1 - i)];
      pool.erase(it);
    }
    return idx;
  }

 private:
  int c_;
  std::vector<std::uint64_t> fact_;
};

struct MonotoneBlocks {
  std::vector<std::vector<int>> blocks;  // ids ascending within each block
  std::vector<int> leftover;             // |leftover| <= sqrt(n)
};

namespace detail {

// Longest strictly monotone subsequence of `ids` under rank(), by patience
// sorting with parent links. Returns the winning subsequence, ids in order.
inline std::vector<int> longest_monotone(const std::vector<int>& ids,
                                         const RankingPermutation& sigma) {
  auto solve = [&](bool increasing) {
    const std::size_t n = ids.size();
    std::vector<int> tails;        // tail rank per pile (made comparable)
    std::vector<std::size_t> tail_idx;
    std::vector<int> parent(n, -1);
    std::vector<std::size_t> pile_of(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const int key = increasing ? sigma.rank(ids[i]) : -sigma.rank(ids[i]);
      const auto it = std::lower_bound(tails.begin(), tails.end(), key);
      const auto p = static_cast<std::size_t>(it - tails.begin());
      if (it == tails.end()) {
        tails.push_back(key);
        tail_idx.push_back(i);
      } else {
        *it = key;
        tail_idx[p] = i;
      }
      pile_of[i] = p;
      parent[i] = p == 0 ? -1 : static_cast<int>(tail_idx[p - 1]);
    }
    std::vector<int> out;
    if (tails.empty()) return out;
    int cur = static_cast<int>(tail_idx.back());
    while (cur >= 0) {
      out.push_back(ids[static_cast<std::size_t>(cur)]);
      cur = parent[static_cast<std::size_t>(cur)];
    }
    std::reverse(out.begin(), out.end());
    return out;
  };
  std::vector<int> inc = solve(true);
  std::vector<int> dec = solve(false);
  return inc.size() >= dec.size() ? inc : dec;
}

}  // namespace detail

// Largest k for which the partition guarantee is claimed at this scale.
// A single permutation is always admissible.
// Largest admissible permutation-family size: 2^k for the largest usable
// number of random bits k. The raw formula floor(log2 log2 n - log2 log2
// (1/eps) - 2) goes negative at every practical scale, so k is clamped to
// at least 1: a two-permutation family is always admissible, and the
// partition itself fails loudly if a block comes out smaller than 1/eps.
inline int es_max_permutations(int n, double eps) {
  if (n < 2) return 1;
  const double lln = std::log2(std::log2(static_cast<double>(n)));
  const double le = std::log2(1.0 / eps);
  const double lle = le > 1.0 ? std::log2(le) : 0.0;
  const double bound = std::floor(lln - lle - 2.0);
  const int kbits = std::max(1, static_cast<int>(bound));
  if (kbits >= 30) return 1 << 30;
  return 1 << kbits;
}

// Repeatedly peel off a subset of [n] that is monotone under every given
// permutation (intersecting longest monotone subsequences) until at most
// sqrt(n) ids remain; those become the leftover.
inline MonotoneBlocks es_partition(const std::vector<RankingPermutation>& perms,
                                   int n, double eps) {
  if (!(eps > 0.0) || !(eps < 1.0))
    throw std::invalid_argument("es_partition: eps must be in (0,1)");
  if (perms.empty()) throw std::invalid_argument("es_partition: no permutations");
  for (const auto& p : perms)
    if (p.m() != n) throw std::invalid_argument("es_partition: permutation size mismatch");
  const int kmax = es_max_permutations(n, eps);
  if (static_cast<int>(perms.size()) > kmax)
    throw std::invalid_argument("es_partition: too many permutations, at most " +
                                std::to_string(kmax) + " admissible at n=" +
                                std::to_string(n) + " eps=" + std::to_string(eps));

  std::vector<int> pool(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i + 1;
  const double root = std::sqrt(static_cast<double>(n));

  MonotoneBlocks out;
  while (static_cast<double>(pool.size()) > root) {
    std::vector<int> block = pool;
    for (const auto& sigma : perms) block = detail::longest_monotone(block, sigma);
    if (static_cast<double>(block.size()) * eps < 1.0)
      throw std::runtime_error("es_partition: extracted block smaller than 1/eps; "
                               "instance outside the guaranteed regime");
    std::vector<int> rest;
    rest.reserve(pool.size() - block.size());
    std::size_t bi = 0;
    for (int id : pool) {
      if (bi < block.size() && block[bi] == id) ++bi;
      else rest.push_back(id);
    }
    out.blocks.push_back(std::move(block));
    pool = std::move(rest);
  }
  out.leftover = std::move(pool);
  return out;
}

// Normative checker, independent of how the partition was produced.
inline void validate_monotone_blocks(const std::vector<RankingPermutation>& perms,
                                     int n, double eps, const MonotoneBlocks& mb) {
  std::vector<int> seen(static_cast<std::size_t>(n) + 1, 0);
  auto mark = [&](const std::vector<int>& ids) {
    for (int id : ids) {
      if (id < 1 || id > n) throw std::runtime_error("monotone blocks: id out of range");
      if (seen[static_cast<std::size_t>(id)]++)
        throw std::runtime_error("monotone blocks: id appears twice");
    }
  };
  for (const auto& blk : mb.blocks) mark(blk);
  mark(mb.leftover);
  for (int id = 1; id <= n; ++id)
    if (!seen[static_cast<std::size_t>(id)])
      throw std::runtime_error("monotone blocks: id missing from partition");
  if (static_cast<double>(mb.leftover.size()) > std::sqrt(static_cast<double>(n)))
    throw std::runtime_error("monotone blocks: leftover larger than sqrt(n)");
  for (const auto& blk : mb.blocks) {
    if (static_cast<double>(blk.size()) * eps < 1.0)
      throw std::runtime_error("monotone blocks: block smaller than 1/eps");
    if (!std::is_sorted(blk.begin(), blk.end()))
      throw std::runtime_error("monotone blocks: block ids not ascending");
    for (const auto& sigma : perms) {
      bool inc = true, dec = true;
      for (std::size_t i = 1; i < blk.size(); ++i) {
        if (sigma.rank(blk[i]) < sigma.rank(blk[i - 1])) inc = false;
        if (sigma.rank(blk[i]) > sigma.rank(blk[i - 1])) dec = false;
      }
      if (!inc && !dec)
        throw std::runtime_error("monotone blocks: block not monotone under a permutation");
    }
  }
}

struct RankingLbInstance {
  BipartiteGraph graph;    // n x n, perfect matching exists
  MonotoneBlocks blocks;   // B-side partition (original ids)
  double eps_prime = 0.0;  // eps / 2

  // Per-component certificate: sum over blocks of (|B_i|/2 + 2) plus |C|.
  double component_bound() const {
    double s = static_cast<double>(blocks.leftover.size());
    for (const auto& blk : blocks.blocks)
      s += static_cast<double>(blk.size()) / 2.0 + 2.0;
    return s;
  }

  double closed_bound() const {
    const double n = static_cast<double>(graph.n());
    return n / 2.0 + 2.0 * eps_prime * n + std::sqrt(n);
  }
};

// Hard instance for Ranking under any fixed permutation family: partition B
// into blocks monotone under every sigma, drop a gadget on each block, and a
// plain perfect matching on the leftover. Block vertices keep their B-ids;
// gadget roles on the A-side follow arrival rank within the block.
inline RankingLbInstance ranking_lb_instance(const std::vector<RankingPermutation>& perms,
                                             const ArrivalOrder& pi, double eps) {
  const int n = pi.n();
  for (const auto& p : perms)
    if (p.m() != n) throw std::invalid_argument("ranking_lb_instance: size mismatch");
  RankingLbInstance out;
  out.eps_prime = eps / 2.0;
  out.blocks = es_partition(perms, n, out.eps_prime);

  std::vector<Edge> edges;
  int arrival_offset = 0;
  auto take_arrival = [&](int t) { return pi.vertex_at(arrival_offset + t); };

  // leftover first: a plain perfect matching
  for (std::size_t i = 0; i < out.blocks.leftover.size(); ++i)
    edges.push_back({take_arrival(static_cast<int>(i) + 1), out.blocks.leftover[i]});
  arrival_offset += static_cast<int>(out.blocks.leftover.size());

  for (const auto& blk : out.blocks.blocks) {
    const int z = static_cast<int>(blk.size());
    auto vid = [&](int role) { return blk[static_cast<std::size_t>(role - 1)]; };
    if (z <= 3) {
      for (int t = 1; t <= z; ++t) edges.push_back({take_arrival(t), vid(t)});
    } else {
      const int ze = z % 2 == 0 ? z : z - 1;
      for (int i = 1; i <= ze / 2; ++i)
        for (int v : {2 * i - 1, 2 * i, 2 * i + 1})
          if (v <= ze) edges.push_back({take_arrival(i), vid(v)});
      for (int i = ze / 2 + 1; i <= ze; ++i)
        edges.push_back({take_arrival(i), vid(2 * i - ze - 1)});
      if (z % 2 != 0) edges.push_back({take_arrival(z), vid(z)});
    }
    arrival_offset += z;
  }

  out.graph = BipartiteGraph(n, n, std::move(edges));
  return out;
}

// q-ary entropy, log base q; the p log p terms vanish at the endpoints.
inline double entropy_q(int q, double p) {
  if (q < 2) throw std::invalid_argument("entropy_q: q must be at least 2");
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("entropy_q: p outside [0,1]");
  const double lq = std::log(static_cast<double>(q));
  double h = p * std::log(static_cast<double>(q - 1)) / lq;
  if (p > 0.0) h -= p * std::log(p) / lq;
  if (p < 1.0) h -= (1.0 - p) * std::log(1.0 - p) / lq;
  return h;
}

inline std::uint64_t factorial(int c) {
  if (c < 0 || c > 20) throw std::invalid_argument("factorial: out of range");
  std::uint64_t f = 1;
  for (int i = 2; i <= c; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

// Advice bits per request forced on any rho-competitive matcher, via the
// string-guessing reduction: (1 - H_{c!}(1 - alpha)) / 2 * log2(c) with
// alpha = 1 - (1 - rho) c. Valid for 1 - 1/c + 1/c! <= rho < 1.
inline double advice_lb_per_request(int c, double rho) {
  if (c < 2) throw std::invalid_argument("advice_lb_per_request: c must be >= 2");
  const double lo = 1.0 - 1.0 / static_cast<double>(c) +
                    1.0 / static_cast<double>(factorial(c));
  if (rho < lo || rho >= 1.0)
    throw std::invalid_argument("advice_lb_per_request: rho outside [" +
                                std::to_string(lo) + ", 1)");
  const double alpha = 1.0 - (1.0 - rho) * static_cast<double>(c);
  const auto q = static_cast<int>(factorial(c));
  return (1.0 - entropy_q(q, 1.0 - alpha)) / 2.0 * std::log2(static_cast<double>(c));
}

}  // namespace obm

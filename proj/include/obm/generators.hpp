#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "obm/bits.hpp"
#include "obm/graph.hpp"
#include "obm/online.hpp"

namespace obm {

// Uniform random permutation of 1..k as an explicit sequence.
inline std::vector<int> random_permutation(int k, BitSource& bits) {
  std::vector<int> seq(static_cast<std::size_t>(k));
  std::iota(seq.begin(), seq.end(), 1);
  for (int i = k - 1; i > 0; --i) {
    const auto j = bits.uniform_below(static_cast<std::uint64_t>(i) + 1);
    std::swap(seq[static_cast<std::size_t>(i)], seq[static_cast<std::size_t>(j)]);
  }
  return seq;
}

inline ArrivalOrder random_arrival_order(int n, BitSource& bits) {
  return ArrivalOrder(random_permutation(n, bits));
}

inline RankingPermutation random_ranking(int m, BitSource& bits) {
  const auto order = random_permutation(m, bits);  // order[r-1] = vertex with rank r
  std::vector<int> ranks(static_cast<std::size_t>(m));
  for (int r = 1; r <= m; ++r) ranks[static_cast<std::size_t>(order[static_cast<std::size_t>(r - 1)] - 1)] = r;
  return RankingPermutation(std::move(ranks));
}

// Every potential edge kept independently with probability num/den.
inline BipartiteGraph random_bipartite(int n, int m, std::uint64_t num, std::uint64_t den,
                                       BitSource& bits) {
  if (den == 0 || num > den) throw std::invalid_argument("random_bipartite: bad probability");
  std::vector<Edge> edges;
  for (int a = 1; a <= n; ++a)
    for (int b = 1; b <= m; ++b)
      if (bits.uniform_below(den) < num) edges.push_back({a, b});
  return BipartiteGraph(n, m, std::move(edges));
}

// A hidden perfect matching plus independent noise edges: the optimum is
// always n, which makes competitive ratios directly comparable.
inline BipartiteGraph perfect_random(int n, BitSource& bits, std::uint64_t num = 1,
                                     std::uint64_t den = 4) {
  if (den == 0 || num > den) throw std::invalid_argument("perfect_random: bad probability");
  const auto hidden = random_permutation(n, bits);
  std::vector<Edge> edges;
  for (int a = 1; a <= n; ++a) edges.push_back({a, hidden[static_cast<std::size_t>(a - 1)]});
  for (int a = 1; a <= n; ++a)
    for (int b = 1; b <= n; ++b)
      if (b != hidden[static_cast<std::size_t>(a - 1)] && bits.uniform_below(den) < num)
        edges.push_back({a, b});
  return BipartiteGraph(n, n, std::move(edges));
}

// All bipartite graphs on [n] x [m], encoded by edge-set bitmask.
inline BipartiteGraph graph_from_mask(int n, int m, std::uint64_t mask) {
  std::vector<Edge> edges;
  int bit = 0;
  for (int a = 1; a <= n; ++a)
    for (int b = 1; b <= m; ++b, ++bit)
      if ((mask >> bit) & 1ULL) edges.push_back({a, b});
  return BipartiteGraph(n, m, std::move(edges));
}

template <typename Fn>
void for_each_graph(int n, int m, Fn&& fn) {
  if (n * m > 25) throw std::invalid_argument("for_each_graph: too many graphs to enumerate");
  const std::uint64_t total = 1ULL << (n * m);
  for (std::uint64_t mask = 0; mask < total; ++mask) fn(graph_from_mask(n, m, mask));
}

template <typename Fn>
void for_each_permutation(int k, Fn&& fn) {
  std::vector<int> seq(static_cast<std::size_t>(k));
  std::iota(seq.begin(), seq.end(), 1);
  do {
    fn(seq);
  } while (std::next_permutation(seq.begin(), seq.end()));
}

}  // namespace obm

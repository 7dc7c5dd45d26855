#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "obm/advice_tape.hpp"
#include "obm/bits.hpp"
#include "obm/graph.hpp"
#include "obm/online.hpp"

namespace obm {

struct CategoryRunResult {
  Matching matching;
  std::vector<int> category;  // category[b-1] in {1..2^k}
  std::uint64_t bits_used = 0;
};

// Ranking with a coarse random permutation: each B-vertex draws one of 2^k
// categories from exactly k bits; ties inside a category break by vertex id.
inline CategoryRunResult randomized_category(const BipartiteGraph& g,
                                             const ArrivalOrder& pi, int k,
                                             BitSource& bits) {
  if (k < 1 || k > 30) throw std::invalid_argument("randomized_category: bad k");
  if ((1 << k) >= g.m())
    throw std::invalid_argument("randomized_category: requires 2^k < m");
  const std::uint64_t before = bits.bits_consumed();
  std::vector<int> category(static_cast<std::size_t>(g.m()));
  for (int b = 1; b <= g.m(); ++b)
    category[static_cast<std::size_t>(b - 1)] =
        static_cast<int>(bits.next_bits(k)) + 1;
  const RankingPermutation sigma = category_to_permutation(category, g.m());
  Matching match = ranking_run(g, pi, sigma);
  return {std::move(match), std::move(category), bits.bits_consumed() - before};
}

// Worst-case expected ratio of the k-bit category algorithm:
// 1 - (2^k / (2^k + 1))^(2^k). Increasing in k, 5/9 at k=1, -> 1-1/e.
inline double category_ratio_bound(int k) {
  if (k < 1 || k > 62) throw std::invalid_argument("category_ratio_bound: bad k");
  const double q = std::ldexp(1.0, k);
  return 1.0 - std::pow(q / (q + 1.0), q);
}

// S_i = sum_{j=1..i} (1 - 1/(2^k+1))^j = 2^k (1 - (2^k/(2^k+1))^i).
// S_{2^k} / 2^k equals category_ratio_bound(k).
inline double partial_sum_bound(int k, std::int64_t i) {
  if (k < 1 || k > 62) throw std::invalid_argument("partial_sum_bound: bad k");
  if (i < 1 || i > (std::int64_t{1} << k))
    throw std::invalid_argument("partial_sum_bound: i outside [1, 2^k]");
  const double q = std::ldexp(1.0, k);
  return q * (1.0 - std::pow(q / (q + 1.0), static_cast<double>(i)));
}

struct AdviceCategoryOracleResult {
  AdviceTape tape;       // exactly m bits, bit b-1 set iff b is matched below
  Matching baseline;     // Ranking under the identity permutation
  std::vector<int> category;
};

// Offline half: run Ranking with the identity permutation and write one bit
// per B-vertex telling whether it ended up matched (category 2) or not (1).
inline AdviceCategoryOracleResult advice_category_oracle(const BipartiteGraph& g,
                                                         const ArrivalOrder& pi) {
  Matching baseline = ranking_run(g, pi, RankingPermutation::identity(g.m()));
  AdviceTape tape;
  std::vector<int> category(static_cast<std::size_t>(g.m()));
  for (int b = 1; b <= g.m(); ++b) {
    const bool matched = baseline.covers_b(b);
    tape.write_bit(matched);
    category[static_cast<std::size_t>(b - 1)] = matched ? 2 : 1;
  }
  return {std::move(tape), std::move(baseline), std::move(category)};
}

// Online half: read the m category bits, prefer category-1 vertices.
inline Matching advice_category_online(const BipartiteGraph& g,
                                       const ArrivalOrder& pi, AdviceTape& tape) {
  std::vector<int> category(static_cast<std::size_t>(g.m()));
  for (int b = 1; b <= g.m(); ++b)
    category[static_cast<std::size_t>(b - 1)] = tape.read_bit() ? 2 : 1;
  const RankingPermutation sigma = category_to_permutation(category, g.m());
  return ranking_run(g, pi, sigma);
}

// Audit quantities for the two-category advice run: the A/B split induced by
// the baseline matching, the optimum's footprint on it, and where the final
// matching's edges land.
struct TwoCategorySplit {
  int a1 = 0, a2 = 0;            // A-vertices unmatched/matched in baseline
  int b1 = 0, b2 = 0;            // B-vertices unmatched/matched in baseline
  int b1_star = 0, b2_star = 0;  // ... of which covered by the optimum
  int m11 = 0, m21 = 0, m22 = 0, m12 = 0;  // final edges by (A part, B part)
};

inline TwoCategorySplit two_category_breakdown(const BipartiteGraph& g,
                                               const Matching& baseline,
                                               const Matching& final_match,
                                               const Matching& optimum) {
  TwoCategorySplit s;
  for (int a = 1; a <= g.n(); ++a) (baseline.covers_a(a) ? s.a2 : s.a1)++;
  for (int b = 1; b <= g.m(); ++b) {
    const bool in2 = baseline.covers_b(b);
    (in2 ? s.b2 : s.b1)++;
    if (optimum.covers_b(b)) (in2 ? s.b2_star : s.b1_star)++;
  }
  for (const Edge& e : final_match.pairs()) {
    const bool a2 = baseline.covers_a(e.a);
    const bool b2 = baseline.covers_b(e.b);
    if (!a2 && !b2) s.m11++;
    else if (a2 && !b2) s.m21++;
    else if (a2 && b2) s.m22++;
    else s.m12++;
  }
  return s;
}

}  // namespace obm

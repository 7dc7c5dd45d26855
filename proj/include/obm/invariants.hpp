#pragma once

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "obm/bits.hpp"
#include "obm/generators.hpp"
#include "obm/graph.hpp"
#include "obm/online.hpp"

namespace obm {

// Arrival order restricted to the vertices surviving a removal, in the same
// relative order, expressed in the relabeled id space.
inline ArrivalOrder restrict_arrival(const ArrivalOrder& pi, const RelabeledGraph& rg) {
  std::vector<int> seq;
  for (int a : pi.sequence())
    if (const int na = rg.new_a(a); na != 0) seq.push_back(na);
  return ArrivalOrder(std::move(seq));
}

// Ranking permutation restricted likewise: surviving vertices keep their
// relative rank order, ranks compressed to 1..m'.
inline RankingPermutation restrict_ranking(const RankingPermutation& sigma,
                                           const RelabeledGraph& rg) {
  std::vector<std::pair<int, int>> by_rank;  // (rank, new id)
  for (int b = 1; b <= sigma.m(); ++b)
    if (const int nb = rg.new_b(b); nb != 0) by_rank.emplace_back(sigma.rank(b), nb);
  std::sort(by_rank.begin(), by_rank.end());
  std::vector<int> ranks(by_rank.size());
  for (std::size_t r = 0; r < by_rank.size(); ++r)
    ranks[static_cast<std::size_t>(by_rank[r].second - 1)] = static_cast<int>(r) + 1;
  return RankingPermutation(std::move(ranks));
}

// A sub-instance matching expressed back in the original id space.
inline Matching lift_matching(const RelabeledGraph& rg, const Matching& sub, int n, int m) {
  Matching out(n, m);
  for (const auto& [a, b] : sub.pairs()) out.add(rg.orig_a(a), rg.orig_b(b));
  return out;
}

// Removing one vertex changes the greedy-by-rank outcome by at most one
// alternating path, and that path starts at the removed vertex.
inline bool removal_diff_ok(const BipartiteGraph& g, const ArrivalOrder& pi,
                            const RankingPermutation& sigma, Side side, int v,
                            std::string* why = nullptr) {
  const Matching before = ranking_run(g, pi, sigma);
  const RelabeledGraph rg = remove_vertex(g, side, v);
  const ArrivalOrder pi2 = side == Side::A ? restrict_arrival(pi, rg) : ArrivalOrder(pi.sequence());
  const RankingPermutation sigma2 = side == Side::B ? restrict_ranking(sigma, rg) : sigma;
  const Matching after = lift_matching(rg, ranking_run(rg.graph, pi2, sigma2), g.n(), g.m());
  const PathDiff diff = alternating_path_diff(before, after);
  if (diff.kind == PathDiff::Kind::identical) return true;
  if (diff.kind == PathDiff::Kind::single_path) {
    const VertexRef head{side, v};
    if (diff.path.front() == head || diff.path.back() == head) return true;
    if (why != nullptr) *why = "difference path does not start at the removed vertex";
    return false;
  }
  if (why != nullptr) *why = "difference is not a single alternating path";
  return false;
}

// Promoting a vertex the run left unmatched can only help: every matched
// arrival stays matched, to a partner ranked no worse under the new order.
inline bool promotion_ok(const BipartiteGraph& g, const ArrivalOrder& pi,
                         const RankingPermutation& sigma, int b, int new_rank,
                         std::string* why = nullptr) {
  const Matching before = ranking_run(g, pi, sigma);
  if (before.covers_b(b)) throw std::invalid_argument("promotion_ok: vertex is matched");
  const RankingPermutation sigma2 = promote_rank(sigma, b, new_rank);
  const Matching after = ranking_run(g, pi, sigma2);
  for (const auto& [a, old_b] : before.pairs()) {
    if (!after.covers_a(a)) {
      if (why != nullptr) {
        std::ostringstream out;
        out << "arrival " << a << " lost its match after promoting " << b;
        *why = out.str();
      }
      return false;
    }
    if (sigma2.rank(after.partner_of_a(a)) > sigma2.rank(old_b)) {
      if (why != nullptr) {
        std::ostringstream out;
        out << "arrival " << a << " was demoted to a worse-ranked partner";
        *why = out.str();
      }
      return false;
    }
  }
  return true;
}

// Any maximal matching, greedy over an edge order included, covers at least
// half the optimum.
inline bool greedy_half_ok(const BipartiteGraph& g, const std::vector<Edge>& omega,
                           std::string* why = nullptr) {
  const Matching got = greedy_edge_run(g, omega);
  const Matching best = max_matching(g);
  if (2 * got.size() >= best.size()) return true;
  if (why != nullptr) {
    std::ostringstream out;
    out << "greedy matched " << got.size() << " of optimum " << best.size();
    *why = out.str();
  }
  return false;
}

struct SweepReport {
  std::uint64_t cases = 0;
  std::uint64_t failures = 0;
  std::string first_failure;

  void record(bool ok, const std::string& context, const std::string& why) {
    ++cases;
    if (!ok) {
      ++failures;
      if (first_failure.empty()) first_failure = context + ": " + why;
    }
  }
};

namespace detail {

inline std::string case_tag(int n, int m, std::uint64_t mask, const std::vector<int>& pi,
                            const std::vector<int>& sigma_order) {
  std::ostringstream out;
  out << n << "x" << m << " mask=" << mask << " pi=";
  for (int a : pi) out << a;
  out << " sigma=";
  for (int r : sigma_order) out << r;
  return out.str();
}

}  // namespace detail

// Every graph up to the given shape, every arrival order, every rank order,
// every removable vertex.
inline SweepReport removal_sweep_exhaustive(int n, int m) {
  SweepReport report;
  std::uint64_t mask = 0;
  for_each_graph(n, m, [&](const BipartiteGraph& g) {
    for_each_permutation(n, [&](const std::vector<int>& pi_seq) {
      const ArrivalOrder pi(pi_seq);
      for_each_permutation(m, [&](const std::vector<int>& sigma_ranks_vec) {
        const RankingPermutation sigma{std::vector<int>(sigma_ranks_vec)};
        for (int a = 1; a <= n; ++a) {
          std::string why;
          const bool ok = removal_diff_ok(g, pi, sigma, Side::A, a, &why);
          report.record(ok, detail::case_tag(n, m, mask, pi_seq, sigma_ranks_vec) +
                                " remove A" + std::to_string(a),
                        why);
        }
        for (int b = 1; b <= m; ++b) {
          std::string why;
          const bool ok = removal_diff_ok(g, pi, sigma, Side::B, b, &why);
          report.record(ok, detail::case_tag(n, m, mask, pi_seq, sigma_ranks_vec) +
                                " remove B" + std::to_string(b),
                        why);
        }
      });
    });
    ++mask;
  });
  return report;
}

// Every graph of the given shape against a fixed panel of arrival and rank
// orders, every removable vertex.
inline SweepReport removal_sweep_panel(int n, int m,
                                       const std::vector<ArrivalOrder>& arrivals,
                                       const std::vector<RankingPermutation>& rankings) {
  SweepReport report;
  std::uint64_t mask = 0;
  for_each_graph(n, m, [&](const BipartiteGraph& g) {
    for (const auto& pi : arrivals)
      for (const auto& sigma : rankings) {
        for (int a = 1; a <= n; ++a) {
          std::string why;
          report.record(removal_diff_ok(g, pi, sigma, Side::A, a, &why),
                        "mask=" + std::to_string(mask) + " remove A" + std::to_string(a), why);
        }
        for (int b = 1; b <= m; ++b) {
          std::string why;
          report.record(removal_diff_ok(g, pi, sigma, Side::B, b, &why),
                        "mask=" + std::to_string(mask) + " remove B" + std::to_string(b), why);
        }
      }
    ++mask;
  });
  return report;
}

// Random graphs, orders, and removal targets at a larger shape.
inline SweepReport removal_sweep_random(int n, int m, std::uint64_t samples,
                                        std::uint64_t seed) {
  SweepReport report;
  MeteredBitSource bits(seed);
  for (std::uint64_t t = 0; t < samples; ++t) {
    const BipartiteGraph g = random_bipartite(n, m, 1, 2, bits);
    const ArrivalOrder pi = random_arrival_order(n, bits);
    const RankingPermutation sigma = random_ranking(m, bits);
    const bool remove_a = bits.next_bit();
    std::string why;
    bool ok;
    std::string tag;
    if (remove_a) {
      const int a = static_cast<int>(bits.uniform_below(static_cast<std::uint64_t>(n))) + 1;
      ok = removal_diff_ok(g, pi, sigma, Side::A, a, &why);
      tag = "sample " + std::to_string(t) + " remove A" + std::to_string(a);
    } else {
      const int b = static_cast<int>(bits.uniform_below(static_cast<std::uint64_t>(m))) + 1;
      ok = removal_diff_ok(g, pi, sigma, Side::B, b, &why);
      tag = "sample " + std::to_string(t) + " remove B" + std::to_string(b);
    }
    report.record(ok, tag, why);
  }
  return report;
}

// Exhaustive promotion sweep: all graphs, orders, unmatched vertices, and
// target ranks for the given shape.
inline SweepReport promotion_sweep_exhaustive(int n, int m) {
  SweepReport report;
  std::uint64_t mask = 0;
  for_each_graph(n, m, [&](const BipartiteGraph& g) {
    for_each_permutation(n, [&](const std::vector<int>& pi_seq) {
      const ArrivalOrder pi(pi_seq);
      for_each_permutation(m, [&](const std::vector<int>& sigma_ranks_vec) {
        const RankingPermutation sigma{std::vector<int>(sigma_ranks_vec)};
        const Matching base = ranking_run(g, pi, sigma);
        for (int b = 1; b <= m; ++b) {
          if (base.covers_b(b)) continue;
          for (int new_rank = 1; new_rank < sigma.rank(b); ++new_rank) {
            std::string why;
            report.record(promotion_ok(g, pi, sigma, b, new_rank, &why),
                          detail::case_tag(n, m, mask, pi_seq, sigma_ranks_vec) + " promote B" +
                              std::to_string(b) + " to " + std::to_string(new_rank),
                          why);
          }
        }
      });
    });
    ++mask;
  });
  return report;
}

inline SweepReport promotion_sweep_random(int n, int m, std::uint64_t samples,
                                          std::uint64_t seed) {
  SweepReport report;
  MeteredBitSource bits(seed);
  for (std::uint64_t t = 0; t < samples; ++t) {
    const BipartiteGraph g = random_bipartite(n, m, 1, 2, bits);
    const ArrivalOrder pi = random_arrival_order(n, bits);
    const RankingPermutation sigma = random_ranking(m, bits);
    const Matching base = ranking_run(g, pi, sigma);
    for (int b = 1; b <= m; ++b) {
      if (base.covers_b(b) || sigma.rank(b) == 1) continue;
      const int new_rank =
          static_cast<int>(bits.uniform_below(static_cast<std::uint64_t>(sigma.rank(b) - 1))) + 1;
      std::string why;
      report.record(promotion_ok(g, pi, sigma, b, new_rank, &why),
                    "sample " + std::to_string(t) + " promote B" + std::to_string(b), why);
    }
  }
  return report;
}

// Greedy over arrival-induced edge orders, exhaustively for small shapes.
inline SweepReport greedy_half_sweep_exhaustive(int n, int m) {
  SweepReport report;
  std::uint64_t mask = 0;
  for_each_graph(n, m, [&](const BipartiteGraph& g) {
    for_each_permutation(n, [&](const std::vector<int>& pi_seq) {
      const ArrivalOrder pi(pi_seq);
      std::string why;
      report.record(greedy_half_ok(g, pi_induced_edge_order(g, pi), &why),
                    "mask=" + std::to_string(mask), why);
    });
    ++mask;
  });
  return report;
}

// Greedy over uniformly random edge orders on random graphs.
inline SweepReport greedy_half_sweep_random(int n, int m, std::uint64_t samples,
                                            std::uint64_t seed) {
  SweepReport report;
  MeteredBitSource bits(seed);
  for (std::uint64_t t = 0; t < samples; ++t) {
    const BipartiteGraph g = random_bipartite(n, m, 1, 2, bits);
    std::vector<Edge> omega = g.edges();
    for (std::size_t i = omega.size(); i > 1; --i) {
      const auto j = bits.uniform_below(i);
      std::swap(omega[i - 1], omega[static_cast<std::size_t>(j)]);
    }
    std::string why;
    report.record(greedy_half_ok(g, omega, &why), "sample " + std::to_string(t), why);
  }
  return report;
}

}  // namespace obm

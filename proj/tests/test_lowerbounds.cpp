#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "obm/generators.hpp"
#include "obm/lower_bounds.hpp"
#include "obm/online.hpp"
#include "oracle_utils.hpp"

using namespace obm;

TEST_CASE("staircase graph has exactly one perfect matching") {
  for (int c = 1; c <= 6; ++c) {
    const BipartiteGraph g = semi_complete(c);
    CHECK(g.edge_count() == c * (c + 1) / 2);
    for (int a = 1; a <= c; ++a)
      for (int b = 1; b <= c; ++b) CHECK(g.has_edge(a, b) == (b >= a));
    CHECK(oracle::count_perfect_matchings(g) == 1);
  }
}

TEST_CASE("hard gadget: monotone rank orders trap the online rule") {
  for (int z = 4; z <= 16; z += 2) {
    const BipartiteGraph g = h_gadget(z);
    const ArrivalOrder pi = ArrivalOrder::identity(z);
    const auto inc = ranking_run(g, pi, RankingPermutation::identity(z));
    const auto dec = ranking_run(g, pi, RankingPermutation::reverse(z));
    CHECK(static_cast<int>(inc.size()) == z / 2);
    CHECK(static_cast<int>(dec.size()) == z / 2 + 1);

    const Matching witness = h_gadget_perfect_matching(z);
    CHECK(static_cast<int>(witness.size()) == z);
    CHECK(oracle::is_valid_matching(g, witness));
    CHECK(static_cast<int>(max_matching(g).size()) == z);
  }
  CHECK_THROWS_AS(h_gadget(3), std::invalid_argument);
  CHECK_THROWS_AS(h_gadget(2), std::invalid_argument);
}

TEST_CASE("permutation indexing round-trips in both directions") {
  const PermutationIndex idx(4);
  CHECK(idx.count() == 24);
  CHECK(idx.unrank(0) == std::vector<int>{1, 2, 3, 4});
  CHECK(idx.unrank(23) == std::vector<int>{4, 3, 2, 1});
  std::set<std::vector<int>> seen;
  for (std::uint64_t r = 0; r < 24; ++r) {
    const auto perm = idx.unrank(r);
    CHECK(idx.rank(perm) == r);
    seen.insert(perm);
  }
  CHECK(seen.size() == 24);
  CHECK_THROWS_AS(idx.rank({1, 1, 2, 3}), std::invalid_argument);
}

TEST_CASE("monotone partition obeys its contract on the k=1 family") {
  const std::vector<RankingPermutation> perms = {RankingPermutation::identity(16),
                                                 RankingPermutation::reverse(16)};
  const MonotoneBlocks mb = es_partition(perms, 16, 0.25);
  validate_monotone_blocks(perms, 16, 0.25, mb);  // throws on any violation
  CHECK(static_cast<double>(mb.leftover.size()) <= std::sqrt(16.0) + 1e-9);
  for (const auto& blk : mb.blocks) CHECK(static_cast<double>(blk.size()) >= 1.0 / 0.25);
}

TEST_CASE("monotone partition rejects an oversized family") {
  std::vector<RankingPermutation> too_many;
  for (int i = 0; i < 8; ++i) too_many.push_back(RankingPermutation::identity(16));
  CHECK_THROWS_AS(es_partition(too_many, 16, 0.25), std::invalid_argument);
}

TEST_CASE("partition validator catches doctored blocks") {
  const std::vector<RankingPermutation> perms = {RankingPermutation::identity(16),
                                                 RankingPermutation::reverse(16)};
  MonotoneBlocks mb = es_partition(perms, 16, 0.25);
  MonotoneBlocks broken = mb;
  REQUIRE(!broken.blocks.empty());
  broken.blocks[0].pop_back();  // partition no longer exact
  CHECK_THROWS(validate_monotone_blocks(perms, 16, 0.25, broken));
}

TEST_CASE("hard instance for the k=1 family meets its certificate") {
  for (int n : {16, 64}) {
    for (double eps : {0.5, 0.25}) {
      const std::vector<RankingPermutation> perms = {RankingPermutation::identity(n),
                                                     RankingPermutation::reverse(n)};
      const ArrivalOrder pi = ArrivalOrder::identity(n);
      const RankingLbInstance inst = ranking_lb_instance(perms, pi, eps);
      CHECK(static_cast<int>(max_matching(inst.graph).size()) == n);
      validate_monotone_blocks(perms, n, eps / 2.0, inst.blocks);
      for (const auto& sigma : perms) {
        const auto run = ranking_run(inst.graph, pi, sigma);
        CHECK(static_cast<double>(run.size()) <= inst.component_bound() + 1e-9);
        const double explicit_bound = n / 2.0 + eps * n + std::sqrt(n) +
                                      2.0 * static_cast<double>(inst.blocks.blocks.size());
        CHECK(static_cast<double>(run.size()) <= explicit_bound + 1e-9);
      }
    }
  }
}

TEST_CASE("q-ary entropy endpoints and interior values") {
  CHECK(entropy_q(6, 0.0) == 0.0);
  CHECK(std::abs(entropy_q(6, 1.0) - std::log(5.0) / std::log(6.0)) < 1e-12);
  // (0.5*ln 5 + ln 2) / ln 6, computed independently
  CHECK(std::abs(entropy_q(6, 0.5) - 0.8359750080865052) < 1e-12);
  CHECK(entropy_q(6, 0.5) < 1.0);
}

TEST_CASE("per-request advice lower bound at the published point") {
  const double v = advice_lb_per_request(3, 5.0 / 6.0);
  CHECK(v > 0.12);
  CHECK(v < 0.14);
  CHECK_THROWS_AS(advice_lb_per_request(3, 0.5), std::invalid_argument);  // below the domain
  CHECK_THROWS_AS(advice_lb_per_request(3, 1.0), std::invalid_argument);
}

TEST_CASE("factorials used by the reduction are exact") {
  CHECK(factorial(0) == 1);
  CHECK(factorial(3) == 6);
  CHECK(factorial(20) == 2432902008176640000ull);
  CHECK_THROWS_AS(factorial(21), std::invalid_argument);
}

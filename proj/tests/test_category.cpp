#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "obm/category.hpp"
#include "obm/generators.hpp"
#include "obm/harness.hpp"
#include "obm/lower_bounds.hpp"
#include "oracle_utils.hpp"

using namespace obm;

TEST_CASE("randomized category run uses exactly k bits per vertex") {
  const BipartiteGraph g = semi_complete(10);
  for (int k = 1; k <= 3; ++k) {
    MeteredBitSource bits(1000 + k);
    const CategoryRunResult run = randomized_category(g, ArrivalOrder::identity(10), k, bits);
    CHECK(run.bits_used == static_cast<std::uint64_t>(k) * 10);
    CHECK(bits.bits_consumed() == run.bits_used);
    for (int cat : run.category) {
      CHECK(cat >= 1);
      CHECK(cat <= (1 << k));
    }
    CHECK(oracle::is_maximal_matching(g, run.matching));
  }
}

TEST_CASE("category count must stay below the vertex count") {
  const BipartiteGraph g = semi_complete(4);
  MeteredBitSource bits(1);
  CHECK_THROWS_AS(randomized_category(g, ArrivalOrder::identity(4), 2, bits),
                  std::invalid_argument);  // 2^2 = 4 categories is not coarser than m = 4
  CHECK_THROWS_AS(randomized_category(g, ArrivalOrder::identity(4), 0, bits),
                  std::invalid_argument);
}

TEST_CASE("ratio bound closed form") {
  CHECK(std::abs(category_ratio_bound(1) - 5.0 / 9.0) < 1e-15);
  CHECK((1.0 - 1.0 / std::exp(1.0)) - category_ratio_bound(10) < 0.0002);
  CHECK(category_ratio_bound(10) < 1.0 - 1.0 / std::exp(1.0));
  for (int k = 1; k < 20; ++k) CHECK(category_ratio_bound(k) < category_ratio_bound(k + 1));
}

TEST_CASE("partial sums satisfy their recurrence and close the ratio bound") {
  for (int k = 1; k <= 6; ++k) {
    const double q = std::ldexp(1.0, k);
    for (std::int64_t i = 2; i <= (1 << k); ++i) {
      const double lhs = partial_sum_bound(k, i) * (1.0 + 1.0 / q);
      const double rhs = 1.0 + partial_sum_bound(k, i - 1);
      CHECK(std::abs(lhs - rhs) < 1e-12);
    }
    CHECK(std::abs(partial_sum_bound(k, 1 << k) / q - category_ratio_bound(k)) < 1e-12);
    CHECK(std::abs(partial_sum_bound(k, 1) - 1.0 / (1.0 + 1.0 / q)) < 1e-12);
  }
}

TEST_CASE("advice run: oracle writes one bit per vertex, online replays it") {
  const BipartiteGraph g = semi_complete(6);
  const ArrivalOrder pi = ArrivalOrder::identity(6);
  const auto oracle_out = advice_category_oracle(g, pi);
  CHECK(oracle_out.tape.bits_written() == 6);

  AdviceTape tape = oracle_out.tape;
  tape.rewind();
  const Matching online = advice_category_online(g, pi, tape);
  CHECK(tape.bits_read() == 6);
  CHECK(online.size() >= oracle_out.baseline.size());
}

TEST_CASE("advice run achieves 3/5 on every tiny instance and order") {
  for (int n = 1; n <= 3; ++n)
    for (int m = 1; m <= 3; ++m)
      for_each_graph(n, m, [&](const BipartiteGraph& g) {
        for_each_permutation(n, [&](const std::vector<int>& arrivals) {
          const ArrivalOrder pi{std::vector<int>(arrivals)};
          const AdviceCategoryCheck check = check_advice_category(g, pi);
          REQUIRE(check.bits_ok);
          REQUIRE(check.three_fifths_ok);
          REQUIRE(check.no_loss_ok);
        });
      });
}

TEST_CASE("advice run structural audit on random instances") {
  MeteredBitSource bits(60442);
  for (int t = 0; t < 60; ++t) {
    const BipartiteGraph g = random_bipartite(7, 7, 1, 2, bits);
    const ArrivalOrder pi = random_arrival_order(7, bits);
    const auto oracle_out = advice_category_oracle(g, pi);
    AdviceTape tape = oracle_out.tape;
    tape.rewind();
    const Matching final_match = advice_category_online(g, pi, tape);
    const Matching optimum = max_matching(g);
    const TwoCategorySplit s =
        two_category_breakdown(g, oracle_out.baseline, final_match, optimum);

    // No edge of the final matching joins a baseline-unmatched arrival to a
    // baseline-unmatched vertex: the baseline was maximal.
    CHECK(s.m11 == 0);
    // Promoted vertices that the optimum needs get matched at least half the time.
    CHECK(2 * s.m21 >= s.b1_star);
    // Baseline-matched arrivals all stay matched.
    CHECK(s.m21 + s.m22 == s.a2);
    CHECK(5 * static_cast<int>(final_match.size()) >= 3 * static_cast<int>(optimum.size()));
  }
}

TEST_CASE("category experiment hits the published bound on a staircase") {
  const CategoryExperimentStats stats =
      run_category_experiment(semi_complete(8), 1, 2000, 99001);
  CHECK(stats.bits_exact);
  CHECK(stats.ratio.count == 2000);
  CHECK(stats.ratio.mean >= stats.bound - 3.0 * stats.ratio.se);
  REQUIRE(stats.xhat.size() == 2);
  CHECK(stats.xhat[0].mean >= 1.0 - 1.0 / 3.0 - 3.0 * stats.xhat[0].se);
}

TEST_CASE("experiments replay bit-identically from the same seed") {
  const auto one = run_category_experiment(semi_complete(8), 2, 300, 5);
  const auto two = run_category_experiment(semi_complete(8), 2, 300, 5);
  CHECK(one.ratios == two.ratios);
  const auto other = run_category_experiment(semi_complete(8), 2, 300, 6);
  CHECK(one.ratios != other.ratios);
}

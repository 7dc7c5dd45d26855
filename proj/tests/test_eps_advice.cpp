#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "obm/eps_advice.hpp"
#include "obm/generators.hpp"
#include "obm/harness.hpp"
#include "oracle_utils.hpp"

using namespace obm;

namespace {

void expect_scheme_ok(const BipartiteGraph& g, const ArrivalOrder& pi, double eps) {
  const EpsAdviceCheck check = check_eps_advice(g, pi, eps);
  INFO("n=" << g.n() << " m=" << g.m() << " eps=" << eps << " opt=" << check.opt
            << " got=" << check.alg_size);
  REQUIRE(check.ratio_ok);
  REQUIRE(check.replay_ok);
  REQUIRE(check.budget_ok);
}

}  // namespace

TEST_CASE("advice scheme handles degenerate instances") {
  expect_scheme_ok(BipartiteGraph(1, 1, {}), ArrivalOrder::identity(1), 0.3);
  expect_scheme_ok(BipartiteGraph(1, 1, {{1, 1}}), ArrivalOrder::identity(1), 0.3);
  expect_scheme_ok(BipartiteGraph(3, 2, {{1, 1}, {2, 1}, {3, 1}}), ArrivalOrder::identity(3),
                   0.2);
}

TEST_CASE("advice scheme is exact on every tiny instance") {
  for (double eps : {0.1, 0.5}) {
    for (int n = 1; n <= 3; ++n)
      for (int m = 1; m <= 3; ++m)
        for_each_graph(n, m, [&](const BipartiteGraph& g) {
          expect_scheme_ok(g, ArrivalOrder::identity(n), eps);
        });
  }
}

TEST_CASE("advice scheme behaves across arrival orders") {
  for_each_graph(3, 3, [&](const BipartiteGraph& g) {
    for_each_permutation(3, [&](const std::vector<int>& arrivals) {
      expect_scheme_ok(g, ArrivalOrder{std::vector<int>(arrivals)}, 0.3);
    });
  });
}

TEST_CASE("advice scheme reaches its target on random mid-size instances") {
  MeteredBitSource bits(24601);
  for (int t = 0; t < 15; ++t) {
    const BipartiteGraph g = random_bipartite(20, 20, 1, 4, bits);
    const ArrivalOrder pi = random_arrival_order(20, bits);
    expect_scheme_ok(g, pi, 0.25);
  }
}

TEST_CASE("pass plan header mismatch is rejected") {
  const BipartiteGraph g(3, 3, {{1, 1}, {2, 2}, {3, 3}});
  const BipartiteGraph h(4, 4, {{1, 1}, {2, 2}, {3, 3}, {4, 4}});
  const auto oracle_out = eps_oracle(g, ArrivalOrder::identity(3), 0.3);
  AdviceTape tape = oracle_out.tape;
  tape.rewind();
  CHECK_THROWS_AS(eps_online(h, ArrivalOrder::identity(4), tape), AdviceInconsistency);
}

TEST_CASE("truncated advice is an underrun, not a silent fallback") {
  const BipartiteGraph g(3, 3, {{1, 1}, {1, 2}, {2, 2}, {3, 1}, {3, 3}});
  const auto oracle_out = eps_oracle(g, ArrivalOrder::identity(3), 0.2);
  const std::string text = oracle_out.tape.serialize();
  const auto semi = text.find(';');
  REQUIRE(semi != std::string::npos);

  // Rebuild a tape one bit shorter than the real one.
  AdviceTape full = oracle_out.tape;
  full.rewind();
  AdviceTape shorter;
  for (std::uint64_t i = 0; i + 1 < oracle_out.tape.bits_written(); ++i)
    shorter.write_bit(full.read_bit());
  shorter.rewind();
  CHECK_THROWS_AS(eps_online(g, ArrivalOrder::identity(3), shorter),
                  TapeUnderrun);
}

TEST_CASE("pass plan text dump names every pass") {
  const BipartiteGraph g(3, 3, {{1, 1}, {1, 2}, {2, 1}, {3, 3}});
  const auto oracle_out = eps_oracle(g, ArrivalOrder::identity(3), 0.3);
  const std::string text = oracle_out.plan.to_text();
  CHECK(text.find("passes=") != std::string::npos);
  CHECK(text.find("final_index:") != std::string::npos);
}

TEST_CASE("advice budget grows polynomially as eps shrinks") {
  const auto coarse = advice_budget(60, 60, 0.5);
  const auto fine = advice_budget(60, 60, 0.25);
  CHECK(coarse < fine);
  CHECK(static_cast<double>(fine) / static_cast<double>(coarse) <= 32.0);
}

TEST_CASE("online emits one decision per arrival in arrival order") {
  const BipartiteGraph g(4, 4, {{1, 2}, {2, 2}, {2, 3}, {3, 1}, {4, 4}});
  const ArrivalOrder pi({3, 1, 4, 2});
  const auto oracle_out = eps_oracle(g, pi, 0.2);
  AdviceTape tape = oracle_out.tape;
  tape.rewind();
  const auto run = eps_online(g, pi, tape);
  REQUIRE(run.emitted.size() == 4);
  for (int t = 1; t <= 4; ++t) CHECK(run.emitted[static_cast<std::size_t>(t - 1)].a ==
                                     pi.vertex_at(t));
  CHECK(run.matching == oracle_out.matching);
}

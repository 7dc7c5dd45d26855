// Acceptance gate: every criterion below prints exactly one PASS/FAIL line
// with the scale it actually ran at, then asserts. Tolerances are pinned in
// the checks themselves; statistical checks use mean >= bound - 3*SE at
// >= 10^4 trials.

#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "obm/obm.hpp"

using namespace obm;

namespace {

void report(int criterion, bool pass, const std::string& detail) {
  std::cout << "[criterion " << criterion << "] " << (pass ? "PASS" : "FAIL") << " - "
            << detail << std::endl;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct AdviceSweep {
  std::uint64_t cases = 0;
  std::uint64_t failures = 0;
  bool sampled_5x5 = false;
  std::string first_failure;

  void check_one(const BipartiteGraph& g, const ArrivalOrder& pi, int opt,
                 const std::string& tag) {
    const auto oracle_out = advice_category_oracle(g, pi);
    AdviceTape tape = oracle_out.tape;
    tape.rewind();
    const Matching online = advice_category_online(g, pi, tape);
    ++cases;
    const bool ok = oracle_out.tape.bits_written() == static_cast<std::uint64_t>(g.m()) &&
                    tape.bits_read() == static_cast<std::uint64_t>(g.m()) &&
                    5 * static_cast<int>(online.size()) >= 3 * opt &&
                    online.size() >= oracle_out.baseline.size();
    if (!ok) {
      ++failures;
      if (first_failure.empty()) first_failure = tag;
    }
  }
};

// Criteria 2 and 3 share their runs: compute once, read twice.
struct CategoryRuns {
  std::vector<CategoryExperimentStats> semi;              // per k on semi_complete(30)
  std::vector<std::vector<CategoryExperimentStats>> fam;  // [k][graph] on perfect graphs
};

const CategoryRuns& category_runs() {
  static const CategoryRuns runs = [] {
    CategoryRuns r;
    const BipartiteGraph staircase = semi_complete(30);
    std::vector<BipartiteGraph> family;
    for (int i = 0; i < 50; ++i) {
      MeteredBitSource bits(mix_seed(777000, static_cast<std::uint64_t>(i)));
      family.push_back(perfect_random(30, bits));
    }
    for (int k = 1; k <= 3; ++k) {
      r.semi.push_back(run_category_experiment(staircase, k, 10000,
                                               mix_seed(31000, static_cast<std::uint64_t>(k))));
      std::vector<CategoryExperimentStats> per_graph;
      for (int i = 0; i < 50; ++i)
        per_graph.push_back(run_category_experiment(
            family[static_cast<std::size_t>(i)], k, 10000,
            mix_seed(32000 + 100 * k, static_cast<std::uint64_t>(i))));
      r.fam.push_back(std::move(per_graph));
    }
    return r;
  }();
  return runs;
}

}  // namespace

TEST_CASE("criterion 1: one-bit-per-vertex advice achieves 3/5 exhaustively") {
  const auto start = std::chrono::steady_clock::now();
  AdviceSweep sweep;

  // all graphs with n <= 4, m <= 5, under every arrival order
  for (int n = 1; n <= 4; ++n)
    for (int m = 1; m <= 5; ++m)
      for_each_graph(n, m, [&](const BipartiteGraph& g) {
        const int opt = static_cast<int>(max_matching(g).size());
        for_each_permutation(n, [&](const std::vector<int>& order) {
          sweep.check_one(g, ArrivalOrder(std::vector<int>(order)), opt,
                          "n=" + std::to_string(n) + " m=" + std::to_string(m));
        });
      });

  // all graphs with n = 5, identity arrival; 5x5 falls back to >= 10^6
  // sampled masks if full enumeration would blow the 5-minute envelope
  for (int m = 1; m <= 4; ++m)
    for_each_graph(5, m, [&](const BipartiteGraph& g) {
      sweep.check_one(g, ArrivalOrder::identity(5),
                      static_cast<int>(max_matching(g).size()), "n=5 sweep");
    });
  {
    const ArrivalOrder pi = ArrivalOrder::identity(5);
    const std::uint64_t total = 1ull << 25;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      if ((mask & 0xFFFFF) == 0 && seconds_since(start) > 240.0) {
        sweep.sampled_5x5 = true;
        break;
      }
      const BipartiteGraph g = graph_from_mask(5, 5, mask);
      sweep.check_one(g, pi, static_cast<int>(max_matching(g).size()), "5x5 full");
    }
    if (sweep.sampled_5x5) {
      for (std::uint64_t t = 0; t < 1000000; ++t) {
        const std::uint64_t mask = splitmix64(mix_seed(55055, t)) & (total - 1);
        const BipartiteGraph g = graph_from_mask(5, 5, mask);
        sweep.check_one(g, pi, static_cast<int>(max_matching(g).size()), "5x5 sampled");
      }
    }
  }

  std::ostringstream detail;
  detail << "5*|M| >= 3*|M*|, advice = m bits, zero tolerance: " << sweep.cases
         << " instance/order cases, " << sweep.failures << " failures ("
         << (sweep.sampled_5x5 ? "5x5 sampled at 10^6 by time guard" : "5x5 fully enumerated")
         << ", " << static_cast<int>(seconds_since(start)) << "s)";
  report(1, sweep.failures == 0, detail.str() +
                                     (sweep.failures ? ", first: " + sweep.first_failure : ""));
  REQUIRE(sweep.failures == 0);
}

TEST_CASE("criterion 2: randomized category ratio meets its bound at 3 SE") {
  const auto start = std::chrono::steady_clock::now();
  const CategoryRuns& runs = category_runs();
  std::uint64_t checks = 0, failures = 0;
  bool bits_exact = true;
  double worst_margin = 1e9;

  for (int k = 1; k <= 3; ++k) {
    const auto eval = [&](const CategoryExperimentStats& stats) {
      ++checks;
      bits_exact = bits_exact && stats.bits_exact;
      const double margin =
          stats.ratio.mean - (stats.bound - 3.0 * stats.ratio.se);
      worst_margin = std::min(worst_margin, margin);
      if (margin < 0.0 || !stats.bits_exact) ++failures;
    };
    eval(runs.semi[static_cast<std::size_t>(k - 1)]);
    for (const auto& stats : runs.fam[static_cast<std::size_t>(k - 1)]) eval(stats);
  }

  std::ostringstream detail;
  detail << "semi_complete(30) + 50 perfect graphs, k in {1,2,3}, 10^4 trials per "
            "(graph,k): mean >= 1-(2^k/(2^k+1))^(2^k) - 3*SE on " << checks
         << "/153 configs, worst margin " << worst_margin << ", bits = k*m exactly: "
         << (bits_exact ? "yes" : "NO") << " (" << static_cast<int>(seconds_since(start))
         << "s)";
  report(2, failures == 0, detail.str());
  REQUIRE(failures == 0);
}

TEST_CASE("criterion 3: first-category fraction and recurrence residuals") {
  const CategoryRuns& runs = category_runs();
  std::uint64_t failures = 0;
  double worst_x1 = 1e9, worst_resid = -1e9;

  const auto eval = [&](const CategoryExperimentStats& stats, int k) {
    const double q = std::ldexp(1.0, k);
    const Aggregate& x1 = stats.xhat.front();
    const double x1_margin = x1.mean - (1.0 - 1.0 / (q + 1.0) - 3.0 * x1.se);
    worst_x1 = std::min(worst_x1, x1_margin);
    if (x1_margin < 0.0) ++failures;
    for (const Aggregate& r : stats.residual) {
      if (r.count == 0) continue;  // categories empty in every trial never occur here
      const double slack = r.mean - 3.0 * r.se;  // residual must be <= 3*SE
      worst_resid = std::max(worst_resid, slack);
      if (slack > 0.0) ++failures;
    }
  };
  for (int k = 1; k <= 3; ++k) {
    eval(runs.semi[static_cast<std::size_t>(k - 1)], k);
    for (const auto& stats : runs.fam[static_cast<std::size_t>(k - 1)]) eval(stats, k);
  }

  std::ostringstream detail;
  detail << "same runs as criterion 2: x1 >= 1 - 1/(2^k+1) - 3*SE (worst margin " << worst_x1
         << "), residual (1-x_i) - (1/2^k)*sum_{j<=i} x_j <= 3*SE for every i "
            "(worst slack " << worst_resid << "), empty categories skipped per trial";
  report(3, failures == 0, detail.str());
  REQUIRE(failures == 0);
}

TEST_CASE("criterion 4: closed-form ratio bounds") {
  const double at1 = category_ratio_bound(1);
  const double gap10 = (1.0 - 1.0 / std::exp(1.0)) - category_ratio_bound(10);
  bool increasing = true;
  for (int k = 1; k < 20; ++k)
    increasing = increasing && category_ratio_bound(k) < category_ratio_bound(k + 1);
  const bool pass =
      std::abs(at1 - 5.0 / 9.0) < 1e-15 && gap10 > 0.0 && gap10 < 0.0002 && increasing;

  std::ostringstream detail;
  detail << "bound(1) = " << double_repr(at1) << " (|diff 5/9| < 1e-15), (1-1/e) - bound(10) = "
         << double_repr(gap10) << " < 0.0002, strictly increasing k <= 20: "
         << (increasing ? "yes" : "NO");
  report(4, pass, detail.str());
  REQUIRE(pass);
}

TEST_CASE("criterion 5: (1-eps) advice scheme, exhaustive and random") {
  const auto start = std::chrono::steady_clock::now();
  std::uint64_t cases = 0, failures = 0;
  std::string first;

  const auto run_one = [&](const BipartiteGraph& g, const ArrivalOrder& pi, double eps,
                           const std::string& tag) {
    ++cases;
    const EpsAdviceCheck check = check_eps_advice(g, pi, eps);
    if (!(check.ratio_ok && check.replay_ok && check.budget_ok)) {
      ++failures;
      if (first.empty()) first = tag;
    }
  };

  for (double eps : {0.1, 0.3, 0.6})
    for (int n = 1; n <= 4; ++n)
      for (int m = 1; m <= 4; ++m)
        for_each_graph(n, m, [&](const BipartiteGraph& g) {
          run_one(g, ArrivalOrder::identity(n), eps,
                  "exhaustive n=" + std::to_string(n) + " m=" + std::to_string(m) +
                      " eps=" + std::to_string(eps));
        });

  for (int t = 0; t < 100; ++t) {
    MeteredBitSource bits(mix_seed(606060, static_cast<std::uint64_t>(t)));
    const BipartiteGraph g = random_bipartite(60, 60, 1, 4, bits);
    const ArrivalOrder pi = random_arrival_order(60, bits);
    run_one(g, pi, 0.2, "random 60x60 t=" + std::to_string(t));
  }

  std::ostringstream detail;
  detail << "|M| >= ceil((1-eps)|M*|), bit-identical replay, bits <= budget: " << cases
         << " cases (exhaustive n,m<=4 x eps {0.1,0.3,0.6} + 100 random 60x60 eps=0.2), "
         << failures << " failures (" << static_cast<int>(seconds_since(start)) << "s)";
  report(5, failures == 0, detail.str() + (failures ? ", first: " + first : ""));
  REQUIRE(failures == 0);
}

TEST_CASE("criterion 6: gadget sizes are exact for all even z <= 64") {
  std::uint64_t failures = 0;
  for (int z = 4; z <= 64; z += 2) {
    const BipartiteGraph g = h_gadget(z);
    const ArrivalOrder pi = ArrivalOrder::identity(z);
    const auto inc = ranking_run(g, pi, RankingPermutation::identity(z));
    const auto dec = ranking_run(g, pi, RankingPermutation::reverse(z));
    const Matching witness = h_gadget_perfect_matching(z);
    const bool ok = static_cast<int>(inc.size()) == z / 2 &&
                    static_cast<int>(dec.size()) == z / 2 + 1 &&
                    static_cast<int>(witness.size()) == z &&
                    static_cast<int>(max_matching(g).size()) == z;
    if (!ok) ++failures;
  }
  report(6, failures == 0,
         "increasing ranks -> z/2, decreasing -> z/2+1, perfect matching exists: exact for "
         "all even z in [4,64], three engine runs per z, zero tolerance");
  REQUIRE(failures == 0);
}

TEST_CASE("criterion 7: hard instance bounds the online rule at (1/2+eps)n + o(n)") {
  std::uint64_t failures = 0;
  std::ostringstream rows;
  for (int n : {64, 256}) {
    for (double eps : {0.5, 0.25}) {
      const std::vector<RankingPermutation> perms = {RankingPermutation::identity(n),
                                                     RankingPermutation::reverse(n)};
      const ArrivalOrder pi = ArrivalOrder::identity(n);
      const RankingLbInstance inst = ranking_lb_instance(perms, pi, eps);
      const bool perfect = static_cast<int>(max_matching(inst.graph).size()) == n;
      const double bound = n / 2.0 + eps * n + std::sqrt(n) +
                           2.0 * static_cast<double>(inst.blocks.blocks.size());
      int worst = 0;
      for (const auto& sigma : perms)
        worst = std::max(worst, static_cast<int>(ranking_run(inst.graph, pi, sigma).size()));
      if (!perfect || static_cast<double>(worst) > bound) ++failures;
      rows << " [n=" << n << " eps=" << eps << ": worst=" << worst << " <= " << bound
           << ", opt=" << (perfect ? "n" : "BROKEN") << "]";
    }
  }
  report(7, failures == 0,
         "k=1 family {identity, reverse}: |Ranking| <= n/2 + eps*n + sqrt(n) + 2*blocks and "
         "max_matching = n, exact;" + rows.str());
  REQUIRE(failures == 0);
}

TEST_CASE("criterion 8: string-guessing reduction equivalence") {
  const int c = 3;
  const int n_s = 50;
  std::uint64_t blocks_checked = 0, equivalence_failures = 0;
  std::uint64_t optimal_failures = 0;

  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const GuessingInstance inst = random_guessing_instance(6, n_s, seed);

    const auto greedy_factory = [&]() -> std::unique_ptr<OnlineMatcher> {
      return std::make_unique<GreedyLowIdMatcher>(c * n_s);
    };
    const SgkhRunResult greedy = sgkh_reduction_run(greedy_factory, inst, c);
    for (int j = 0; j < n_s; ++j) {
      ++blocks_checked;
      const bool correct =
          greedy.predictions[static_cast<std::size_t>(j)] == inst.target[static_cast<std::size_t>(j)];
      if (greedy.block_perfect[static_cast<std::size_t>(j)] != correct ||
          !greedy.sim_complete[static_cast<std::size_t>(j)])
        ++equivalence_failures;
    }

    const AdviceTape tape = make_optimal_matcher_tape(inst, c);
    const auto optimal_factory = [&]() -> std::unique_ptr<OnlineMatcher> {
      return std::make_unique<FullAdviceMatcher>(tape);
    };
    const SgkhRunResult optimal = sgkh_reduction_run(optimal_factory, inst, c);
    if (optimal.correct != n_s ||
        static_cast<int>(optimal.matching.size()) != c * n_s)
      ++optimal_failures;
  }

  std::ostringstream detail;
  detail << "c=3, n_s=50, 5 seeded targets: perfect block <=> correct prediction on "
         << blocks_checked << " blocks (" << equivalence_failures
         << " violations); full-advice matcher (rho=1) all-correct on every target: "
         << (optimal_failures == 0 ? "yes" : "NO");
  report(8, equivalence_failures == 0 && optimal_failures == 0, detail.str());
  REQUIRE(equivalence_failures == 0);
  REQUIRE(optimal_failures == 0);
}

TEST_CASE("criterion 9: covering-set derandomization on the staircase family") {
  std::vector<DerandInput> inputs;
  for_each_permutation(3, [&](const std::vector<int>& pi) {
    inputs.push_back({semi_complete(3), ArrivalOrder(std::vector<int>(pi))});
  });
  const auto alg = [](const BipartiteGraph& g, const ArrivalOrder& pi,
                      const std::vector<bool>& bits) {
    FixedBitSource source(bits);
    return randomized_category(g, pi, 1, source).matching;
  };
  const RatioMatrix mat = build_ratio_matrix(inputs, 3, alg);
  const CoveringSet cover = build_covering_set(mat, 0.2);

  std::uint64_t failures = 0;
  const std::uint64_t header = 2 * AdviceTape::self_delimited_length(3);
  const int index_bits = covering_index_width(cover.columns.size());
  for (const auto& input : inputs) {
    const DerandResult run =
        derandomized_run(inputs, mat, cover, alg, input.graph, input.arrival);
    const int opt = static_cast<int>(max_matching(input.graph).size());
    const double ratio = static_cast<double>(run.matching.size()) / opt;
    // exact check against the replayed matrix entry for the advised string
    std::size_t which = 0;
    for (std::size_t i = 0; i < inputs.size(); ++i)
      if (inputs[i].arrival.sequence() == input.arrival.sequence()) which = i;
    const double matrix_entry =
        mat.ratios[which][cover.columns[static_cast<std::size_t>(cover.assignment[which])]];
    if (ratio != matrix_entry) ++failures;
    if (ratio < (1.0 - 0.2) * mat.guaranteed_expectation) ++failures;
    if (run.tape.bits_written() != header + static_cast<std::uint64_t>(index_bits)) ++failures;
  }

  std::ostringstream detail;
  detail << "semi_complete(3) x 6 arrival orders, k=1, eps=0.2: E = "
         << mat.guaranteed_expectation << ", |W| = " << cover.columns.size()
         << ", every input covered at >= (1-eps)*E with replayed ratios equal to the matrix, "
            "advice = header + ceil(log2|W|) = "
         << header << "+" << index_bits << " bits; " << failures << " failures";
  report(9, failures == 0, detail.str());
  REQUIRE(failures == 0);
}

TEST_CASE("criterion 10: structural invariant sweeps") {
  const auto start = std::chrono::steady_clock::now();

  // The stated exhaustive n,m <= 5 sweep is ~10^13 engine runs; substituted
  // scale (recorded in the acceptance line): exhaustive n,m <= 3, a fixed
  // order panel over all 4x4 graphs, and 10^6 seeded random cases at 5x5.
  std::uint64_t removal_cases = 0, promo_cases = 0, greedy_cases = 0, failures = 0;
  std::string first;
  const auto absorb = [&](const SweepReport& rep, std::uint64_t& counter) {
    counter += rep.cases;
    failures += rep.failures;
    if (!rep.first_failure.empty() && first.empty()) first = rep.first_failure;
  };

  for (int n = 1; n <= 3; ++n)
    for (int m = 1; m <= 3; ++m) {
      absorb(removal_sweep_exhaustive(n, m), removal_cases);
      absorb(promotion_sweep_exhaustive(n, m), promo_cases);
      absorb(greedy_half_sweep_exhaustive(n, m), greedy_cases);
    }

  {
    MeteredBitSource bits(424242);
    const std::vector<ArrivalOrder> arrivals = {
        ArrivalOrder::identity(4), ArrivalOrder({4, 3, 2, 1}), random_arrival_order(4, bits),
        random_arrival_order(4, bits)};
    const std::vector<RankingPermutation> rankings = {
        RankingPermutation::identity(4), RankingPermutation::reverse(4),
        random_ranking(4, bits), random_ranking(4, bits)};
    absorb(removal_sweep_panel(4, 4, arrivals, rankings), removal_cases);
  }

  absorb(removal_sweep_random(5, 5, 1000000, 51515), removal_cases);
  absorb(promotion_sweep_random(5, 5, 1000000, 61616), promo_cases);
  absorb(greedy_half_sweep_random(6, 6, 1000000, 71717), greedy_cases);

  std::ostringstream detail;
  detail << "single-alternating-path removal diffs (" << removal_cases
         << " cases), promotion keeps matched arrivals matched at no-worse rank (" << promo_cases
         << " cases), 2*|greedy| >= |M*| (" << greedy_cases
         << " cases); exhaustive n,m<=3 + 4x4 panel + 10^6 random 5x5 each "
            "(substituted for the ~10^13-run literal n,m<=5 sweep), "
         << failures << " failures (" << static_cast<int>(seconds_since(start)) << "s)";
  report(10, failures == 0, detail.str() + (failures ? ", first: " + first : ""));
  REQUIRE(failures == 0);
}

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "obm/category.hpp"
#include "obm/derandomize.hpp"
#include "obm/generators.hpp"
#include "obm/lower_bounds.hpp"

using namespace obm;

namespace {

// The toy family: one staircase, every arrival order.
std::vector<DerandInput> staircase_family(int c) {
  std::vector<DerandInput> inputs;
  for_each_permutation(c, [&](const std::vector<int>& pi) {
    inputs.push_back({semi_complete(c), ArrivalOrder(std::vector<int>(pi))});
  });
  return inputs;
}

// One-bit-per-vertex category run driven by an explicit bit string.
Matching category_from_bits(const BipartiteGraph& g, const ArrivalOrder& pi,
                            const std::vector<bool>& bits) {
  FixedBitSource source(bits);
  return randomized_category(g, pi, 1, source).matching;
}

}  // namespace

TEST_CASE("ratio matrix enumerates every bit string") {
  const auto inputs = staircase_family(3);
  const RatioMatrix mat = build_ratio_matrix(inputs, 3, category_from_bits);
  REQUIRE(mat.ratios.size() == 6);
  for (const auto& row : mat.ratios) REQUIRE(row.size() == 8);
  CHECK(mat.guaranteed_expectation > 0.5);
  CHECK(mat.guaranteed_expectation <= 1.0);

  // ratios are achievable matching fractions on a 3-vertex optimum
  for (const auto& row : mat.ratios)
    for (double r : row) {
      CHECK(r >= 1.0 / 3.0);
      CHECK(r <= 1.0);
    }
}

TEST_CASE("covering set covers every input at the promised threshold") {
  const auto inputs = staircase_family(3);
  const RatioMatrix mat = build_ratio_matrix(inputs, 3, category_from_bits);
  const CoveringSet cover = build_covering_set(mat, 0.2);

  REQUIRE(!cover.columns.empty());
  REQUIRE(cover.assignment.size() == inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const int w = cover.assignment[i];
    REQUIRE(w >= 0);
    REQUIRE(w < static_cast<int>(cover.columns.size()));
    CHECK(mat.ratios[i][cover.columns[static_cast<std::size_t>(w)]] >= cover.threshold);
  }

  // the log accounts for every input exactly once
  std::size_t logged = 0;
  for (const auto& step : cover.log) logged += step.covered.size();
  CHECK(logged == inputs.size());
}

TEST_CASE("manifest lists every chosen string with its inputs") {
  const auto inputs = staircase_family(3);
  const RatioMatrix mat = build_ratio_matrix(inputs, 3, category_from_bits);
  const CoveringSet cover = build_covering_set(mat, 0.2);
  const std::string manifest = cover.manifest();
  CHECK(manifest.find("string 0 bits=") != std::string::npos);
  CHECK(manifest.find("covers") != std::string::npos);
}

TEST_CASE("derandomized run replays the advised string and meets the threshold") {
  const auto inputs = staircase_family(3);
  const RatioMatrix mat = build_ratio_matrix(inputs, 3, category_from_bits);
  const CoveringSet cover = build_covering_set(mat, 0.2);

  for (const auto& input : inputs) {
    const DerandResult run =
        derandomized_run(inputs, mat, cover, category_from_bits, input.graph, input.arrival);
    const int opt = static_cast<int>(max_matching(input.graph).size());
    CHECK(static_cast<double>(run.matching.size()) / opt >= cover.threshold - 1e-12);

    const int expect_index_bits = covering_index_width(cover.columns.size());
    CHECK(run.index_bits == expect_index_bits);
    const std::uint64_t header = AdviceTape::self_delimited_length(3) * 2;
    CHECK(run.tape.bits_written() == header + static_cast<std::uint64_t>(expect_index_bits));
  }
}

TEST_CASE("inputs outside the prepared family are rejected") {
  const auto inputs = staircase_family(3);
  const RatioMatrix mat = build_ratio_matrix(inputs, 3, category_from_bits);
  const CoveringSet cover = build_covering_set(mat, 0.2);
  const BipartiteGraph stranger(3, 3, {{1, 1}, {2, 2}, {3, 3}});
  CHECK_THROWS_AS(derandomized_run(inputs, mat, cover, category_from_bits, stranger,
                                   ArrivalOrder::identity(3)),
                  std::invalid_argument);
}

TEST_CASE("oversized tables are refused before they allocate") {
  const auto inputs = staircase_family(3);
  CHECK_THROWS_AS(build_ratio_matrix(inputs, 23, category_from_bits),
                  std::invalid_argument);
}

TEST_CASE("single-string covers need zero index bits") {
  CHECK(covering_index_width(1) == 0);
  CHECK(covering_index_width(2) == 1);
  CHECK(covering_index_width(3) == 2);
  CHECK(covering_index_width(4) == 2);
}

#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

#include "obm/advice_tape.hpp"
#include "obm/graph.hpp"
#include "obm/lower_bounds.hpp"

namespace obm {

struct ProtocolViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// String guessing with known history: q-ary characters guessed before they
// are revealed, cost = Hamming distance.
struct GuessingInstance {
  int q = 0;
  std::vector<int> target;  // characters in [0, q)
};

inline GuessingInstance random_guessing_instance(int q, int length,
                                                 std::uint64_t seed) {
  if (q < 2 || length < 1) throw std::invalid_argument("random_guessing_instance: bad shape");
  GuessingInstance inst;
  inst.q = q;
  MeteredBitSource bits(seed);
  for (int i = 0; i < length; ++i)
    inst.target.push_back(static_cast<int>(bits.uniform_below(static_cast<std::uint64_t>(q))));
  return inst;
}

// An online matcher: vertices arrive with their neighbor list; the matcher
// answers with a chosen neighbor or 0. Implementations must be deterministic
// functions of the arrival sequence (plus whatever advice they carry).
class OnlineMatcher {
 public:
  virtual ~OnlineMatcher() = default;
  virtual int on_arrival(int a_id, const std::vector<int>& neighbors) = 0;
};

using MatcherFactory = std::function<std::unique_ptr<OnlineMatcher>()>;

// The matching instance a guessing string maps to: one c-semi-complete block
// per character, with block-local B-indices permuted by the character's
// permutation (Lehmer order, g(x) = x + 1).
inline std::vector<std::vector<int>> sgkh_block_perms(const GuessingInstance& inst,
                                                      int c) {
  const PermutationIndex pidx(c);
  if (inst.q != static_cast<int>(pidx.count()))
    throw std::invalid_argument("sgkh: alphabet must have size c!");
  std::vector<std::vector<int>> taus;
  taus.reserve(inst.target.size());
  for (int ch : inst.target) {
    if (ch < 0 || ch >= inst.q)
      throw std::invalid_argument("sgkh: character out of range");
    taus.push_back(pidx.unrank(static_cast<std::uint64_t>(ch)));
  }
  return taus;
}

// Block-local neighbor roles: arrival i of a block sees {tau(l) : l >= i}.
inline std::vector<int> sgkh_block_neighbors(const std::vector<int>& tau, int i,
                                             int base) {
  std::vector<int> nbrs;
  for (std::size_t l = static_cast<std::size_t>(i - 1); l < tau.size(); ++l)
    nbrs.push_back(base + tau[l]);
  std::sort(nbrs.begin(), nbrs.end());
  return nbrs;
}

inline BipartiteGraph sgkh_graph(const GuessingInstance& inst, int c) {
  const auto taus = sgkh_block_perms(inst, c);
  const int n = c * static_cast<int>(inst.target.size());
  std::vector<Edge> edges;
  for (std::size_t j = 0; j < taus.size(); ++j) {
    const int base = static_cast<int>(j) * c;
    for (int i = 1; i <= c; ++i)
      for (int b : sgkh_block_neighbors(taus[j], i, base)) edges.push_back({base + i, b});
  }
  return BipartiteGraph(n, n, std::move(edges));
}

struct SgkhRunResult {
  std::vector<int> predictions;      // one character per request
  std::vector<bool> block_perfect;   // real run matched the whole block
  std::vector<bool> sim_complete;    // prediction came from a perfect simulated block
  int correct = 0;
  Matching matching;                 // the real run's matching on the full instance
};

// Turns an online matcher into a string guesser: before request j is
// revealed, simulate a fresh matcher over the already-revealed blocks plus
// one adaptive block whose arrivals see exactly the currently unmatched
// B-vertices; a perfect simulated block spells out a permutation, whose
// index is the guess. Then the real block (the target's permutation) is fed
// to the persistent run. A deterministic matcher matches block j perfectly
// iff the guess was right.
inline SgkhRunResult sgkh_reduction_run(const MatcherFactory& factory,
                                        const GuessingInstance& inst, int c) {
  const PermutationIndex pidx(c);
  const auto taus = sgkh_block_perms(inst, c);
  const int n_s = static_cast<int>(inst.target.size());
  const int n = c * n_s;

  SgkhRunResult result;
  result.matching = Matching(n, n);
  auto real = factory();

  auto feed = [&](OnlineMatcher& alg, int a_id, const std::vector<int>& nbrs,
                  Matching* record) {
    const int choice = alg.on_arrival(a_id, nbrs);
    if (choice == 0) return 0;
    if (!std::binary_search(nbrs.begin(), nbrs.end(), choice))
      throw ProtocolViolation("sgkh: matcher answered with a non-neighbor");
    if (record != nullptr) {
      if (record->covers_b(choice))
        throw ProtocolViolation("sgkh: matcher reused a matched vertex");
      record->add(a_id, choice);
    }
    return choice;
  };

  for (int j = 0; j < n_s; ++j) {
    const int base = j * c;

    // guess: fresh matcher over revealed blocks, then the adaptive block
    auto sim = factory();
    Matching sim_match(n, n);
    for (int jj = 0; jj < j; ++jj) {
      const int b2 = jj * c;
      for (int i = 1; i <= c; ++i)
        feed(*sim, b2 + i, sgkh_block_neighbors(taus[static_cast<std::size_t>(jj)], i, b2),
             &sim_match);
    }
    std::vector<int> tau_hat;
    bool complete = true;
    std::vector<bool> taken(static_cast<std::size_t>(c) + 1, false);
    for (int i = 1; i <= c && complete; ++i) {
      std::vector<int> nbrs;
      for (int v = 1; v <= c; ++v)
        if (!taken[static_cast<std::size_t>(v)]) nbrs.push_back(base + v);
      const int choice = feed(*sim, base + i, nbrs, nullptr);
      if (choice == 0) {
        complete = false;
      } else {
        taken[static_cast<std::size_t>(choice - base)] = true;
        tau_hat.push_back(choice - base);
      }
    }
    const int guess = complete ? static_cast<int>(pidx.rank(tau_hat)) : 0;
    result.predictions.push_back(guess);
    result.sim_complete.push_back(complete);
    if (guess == inst.target[static_cast<std::size_t>(j)]) ++result.correct;

    // reveal: the real block goes to the persistent run
    int matched_here = 0;
    for (int i = 1; i <= c; ++i) {
      const int choice =
          feed(*real, base + i,
               sgkh_block_neighbors(taus[static_cast<std::size_t>(j)], i, base),
               &result.matching);
      if (choice != 0) ++matched_here;
    }
    result.block_perfect.push_back(matched_here == c);
  }
  return result;
}

// Reference matcher: lowest-id free neighbor, no advice.
class GreedyLowIdMatcher final : public OnlineMatcher {
 public:
  explicit GreedyLowIdMatcher(int m) : taken_(static_cast<std::size_t>(m) + 1, false) {}

  int on_arrival(int, const std::vector<int>& neighbors) override {
    for (int b : neighbors)
      if (!taken_[static_cast<std::size_t>(b)]) {
        taken_[static_cast<std::size_t>(b)] = true;
        return b;
      }
    return 0;
  }

 private:
  std::vector<bool> taken_;
};

// Reference matcher with full advice: the tape spells out the partner of
// every arrival (fixed width, 0 = leave unmatched) behind an m header.
inline AdviceTape make_optimal_matcher_tape(const GuessingInstance& inst, int c) {
  const auto taus = sgkh_block_perms(inst, c);
  const int n = c * static_cast<int>(inst.target.size());
  AdviceTape tape;
  tape.write_self_delimited(static_cast<std::uint64_t>(n));
  const int width = std::bit_width(static_cast<unsigned>(n));
  for (std::size_t j = 0; j < taus.size(); ++j) {
    const int base = static_cast<int>(j) * c;
    for (int i = 1; i <= c; ++i)
      tape.write_fixed(static_cast<std::uint64_t>(base + taus[j][static_cast<std::size_t>(i - 1)]),
                       width);
  }
  return tape;
}

class FullAdviceMatcher final : public OnlineMatcher {
 public:
  explicit FullAdviceMatcher(AdviceTape tape) : tape_(std::move(tape)) {
    tape_.rewind();
    const auto m = tape_.read_self_delimited();
    width_ = std::bit_width(m);
  }

  int on_arrival(int, const std::vector<int>&) override {
    return static_cast<int>(tape_.read_fixed(width_));
  }

 private:
  AdviceTape tape_;
  int width_ = 0;
};

}  // namespace obm

#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "obm/advice_tape.hpp"
#include "obm/graph.hpp"
#include "obm/online.hpp"

namespace obm {

// One input an algorithm may face: a graph together with its arrival order.
struct DerandInput {
  BipartiteGraph graph;
  ArrivalOrder arrival;
};

// A randomized online algorithm presented as a deterministic function of a
// fixed-length bit string.
using BitStringAlgorithm =
    std::function<Matching(const BipartiteGraph&, const ArrivalOrder&, const std::vector<bool>&)>;

// Competitive-ratio table: one row per input, one column per bit string.
struct RatioMatrix {
  int bit_length = 0;
  std::vector<std::vector<double>> ratios;  // [input][bit string]
  double guaranteed_expectation = 0.0;      // min over inputs of the row mean
};

inline std::vector<bool> index_to_bits(std::uint64_t index, int r) {
  std::vector<bool> bits(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i)
    bits[static_cast<std::size_t>(i)] = ((index >> (r - 1 - i)) & 1ULL) != 0ULL;
  return bits;
}

inline RatioMatrix build_ratio_matrix(const std::vector<DerandInput>& inputs,
                                      int bit_length, const BitStringAlgorithm& alg) {
  if (inputs.empty()) throw std::invalid_argument("build_ratio_matrix: no inputs");
  if (bit_length < 0 || bit_length > 22)
    throw std::invalid_argument("build_ratio_matrix: bit length out of range");
  const std::uint64_t cols = 1ULL << bit_length;
  if (inputs.size() * cols > (1ULL << 22))
    throw std::invalid_argument("build_ratio_matrix: table too large to enumerate");

  RatioMatrix mat;
  mat.bit_length = bit_length;
  mat.guaranteed_expectation = 1.0;
  for (const auto& input : inputs) {
    const int opt = static_cast<int>(max_matching(input.graph).size());
    std::vector<double> row;
    row.reserve(cols);
    double sum = 0.0;
    for (std::uint64_t s = 0; s < cols; ++s) {
      const Matching got = alg(input.graph, input.arrival, index_to_bits(s, bit_length));
      const double ratio = opt == 0 ? 1.0 : static_cast<double>(got.size()) / opt;
      row.push_back(ratio);
      sum += ratio;
    }
    const double mean = sum / static_cast<double>(cols);
    mat.guaranteed_expectation = std::min(mat.guaranteed_expectation, mean);
    mat.ratios.push_back(std::move(row));
  }
  return mat;
}

struct CoveringStep {
  std::uint64_t column = 0;
  std::vector<int> covered;  // inputs newly covered by this column
};

// A small set of bit strings such that every input has at least one string
// achieving ratio >= (1 - eps) * guaranteed expectation, plus the assignment
// of inputs to strings.
struct CoveringSet {
  int bit_length = 0;
  double threshold = 0.0;
  std::vector<std::uint64_t> columns;
  std::vector<int> assignment;  // input index -> position in columns
  std::vector<CoveringStep> log;

  std::string manifest() const {
    std::ostringstream out;
    for (std::size_t w = 0; w < columns.size(); ++w) {
      std::ostringstream hex;
      const int nibbles = std::max(1, (bit_length + 3) / 4);
      hex << std::hex;
      for (int i = nibbles - 1; i >= 0; --i)
        hex << ((columns[w] >> (4 * i)) & 0xFULL);
      out << "string " << w << " bits=" << hex.str() << " covers";
      for (std::size_t idx = 0; idx < assignment.size(); ++idx)
        if (assignment[idx] == static_cast<int>(w)) out << ' ' << idx;
      out << '\n';
    }
    return out.str();
  }
};

// Greedy set cover over the thresholded matrix. When the guaranteed
// expectation E is positive, each chosen column must cover at least a
// eps*E / (1 - E + eps*E) fraction of the still-uncovered inputs; the loop
// enforces that invariant and fails loudly if the matrix cannot sustain it.
inline CoveringSet build_covering_set(const RatioMatrix& mat, double eps) {
  if (!(eps > 0.0) || !(eps < 1.0))
    throw std::invalid_argument("build_covering_set: eps must lie in (0,1)");
  const double e = mat.guaranteed_expectation;
  const double threshold = (1.0 - eps) * e;
  const std::size_t rows = mat.ratios.size();
  const std::uint64_t cols = 1ULL << mat.bit_length;

  CoveringSet cover;
  cover.bit_length = mat.bit_length;
  cover.threshold = threshold;
  cover.assignment.assign(rows, -1);

  std::size_t uncovered = rows;
  while (uncovered > 0) {
    std::uint64_t best = 0;
    std::size_t best_count = 0;
    for (std::uint64_t s = 0; s < cols; ++s) {
      std::size_t count = 0;
      for (std::size_t i = 0; i < rows; ++i)
        if (cover.assignment[i] < 0 && mat.ratios[i][s] >= threshold) ++count;
      if (count > best_count) {
        best_count = count;
        best = s;
      }
    }
    if (best_count == 0)
      throw std::runtime_error("build_covering_set: no column clears the threshold");
    if (e > 0.0) {
      const double min_frac = eps * e / (1.0 - e + eps * e);
      if (static_cast<double>(best_count) + 1e-9 < min_frac * static_cast<double>(uncovered))
        throw std::runtime_error("build_covering_set: column progress below guarantee");
    }
    CoveringStep step;
    step.column = best;
    for (std::size_t i = 0; i < rows; ++i)
      if (cover.assignment[i] < 0 && mat.ratios[i][best] >= threshold) {
        cover.assignment[i] = static_cast<int>(cover.columns.size());
        step.covered.push_back(static_cast<int>(i));
      }
    uncovered -= step.covered.size();
    cover.columns.push_back(best);
    cover.log.push_back(std::move(step));
  }
  return cover;
}

struct DerandResult {
  Matching matching;
  AdviceTape tape;
  int index_bits = 0;
};

// Advice header layout shared by writer and reader: self-delimited n and m,
// then a fixed-width index into the covering set's string list.
inline int covering_index_width(std::size_t num_columns) {
  if (num_columns <= 1) return 0;
  return std::bit_width(num_columns - 1);
}

// Deterministic advice algorithm: the oracle looks the input up in the
// family, writes which covering string to use, and the online side replays
// the randomized algorithm on exactly that string.
inline DerandResult derandomized_run(const std::vector<DerandInput>& inputs,
                                     const RatioMatrix& mat, const CoveringSet& cover,
                                     const BitStringAlgorithm& alg,
                                     const BipartiteGraph& g, const ArrivalOrder& pi) {
  std::size_t which = inputs.size();
  for (std::size_t i = 0; i < inputs.size(); ++i)
    if (inputs[i].graph == g && inputs[i].arrival.sequence() == pi.sequence()) {
      which = i;
      break;
    }
  if (which == inputs.size())
    throw std::invalid_argument("derandomized_run: input not in the prepared family");

  const int pos = cover.assignment[which];
  const int width = covering_index_width(cover.columns.size());

  DerandResult result;
  result.index_bits = width;
  result.tape.write_self_delimited(static_cast<std::uint64_t>(g.n()));
  result.tape.write_self_delimited(static_cast<std::uint64_t>(g.m()));
  if (width > 0) result.tape.write_fixed(static_cast<std::uint64_t>(pos), width);

  AdviceTape replay = result.tape;
  replay.rewind();
  const auto n_read = replay.read_self_delimited();
  const auto m_read = replay.read_self_delimited();
  if (n_read != static_cast<std::uint64_t>(g.n()) || m_read != static_cast<std::uint64_t>(g.m()))
    throw std::runtime_error("derandomized_run: header mismatch");
  const std::uint64_t idx = width > 0 ? replay.read_fixed(width) : 0;
  result.matching =
      alg(g, pi, index_to_bits(cover.columns[static_cast<std::size_t>(idx)], mat.bit_length));

  const int opt = static_cast<int>(max_matching(g).size());
  const double ratio = opt == 0 ? 1.0 : static_cast<double>(result.matching.size()) / opt;
  if (ratio + 1e-12 < cover.threshold)
    throw std::runtime_error("derandomized_run: chosen string misses the covering threshold");
  return result;
}

}  // namespace obm

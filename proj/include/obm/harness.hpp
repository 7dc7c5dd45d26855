#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "obm/bits.hpp"
#include "obm/category.hpp"
#include "obm/eps_advice.hpp"
#include "obm/generators.hpp"
#include "obm/graph.hpp"
#include "obm/lower_bounds.hpp"
#include "obm/online.hpp"

namespace obm {

// ---------------------------------------------------------------------------
// statistics

struct Aggregate {
  std::uint64_t count = 0;
  double mean = 0.0;
  double se = 0.0;  // standard error of the mean
  double min = 0.0;
  double max = 0.0;
};

inline Aggregate aggregate(const std::vector<double>& xs) {
  Aggregate agg;
  agg.count = xs.size();
  if (xs.empty()) return agg;
  double sum = 0.0;
  agg.min = xs.front();
  agg.max = xs.front();
  for (double x : xs) {
    sum += x;
    agg.min = std::min(agg.min, x);
    agg.max = std::max(agg.max, x);
  }
  agg.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - agg.mean) * (x - agg.mean);
    const double var = ss / static_cast<double>(xs.size() - 1);
    agg.se = std::sqrt(var / static_cast<double>(xs.size()));
  }
  return agg;
}

inline std::string double_repr(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// ---------------------------------------------------------------------------
// category-algorithm experiments

struct CategoryExperimentStats {
  int k = 0;
  std::uint64_t trials = 0;
  Aggregate ratio;
  bool bits_exact = true;               // every trial consumed exactly k*m bits
  double bound = 0.0;                   // 1 - (q/(q+1))^q for q = 2^k
  std::vector<Aggregate> xhat;          // [i-1]: matched fraction of category i
  std::vector<Aggregate> residual;      // [i-1]: (1 - xhat_i) - (1/2^k) * sum_{j<=i} xhat_j
  std::vector<double> ratios;           // per-trial, in trial order
};

// Repeated runs of the k-bit category algorithm on one graph with a fresh
// uniform arrival order per trial. Arrival randomness and algorithm
// randomness use separate seeded streams so either can be replayed alone.
inline CategoryExperimentStats run_category_experiment(const BipartiteGraph& g, int k,
                                                       std::uint64_t trials,
                                                       std::uint64_t base_seed,
                                                       bool randomize_arrival = true) {
  const int opt = static_cast<int>(max_matching(g).size());
  const int q = 1 << k;
  CategoryExperimentStats stats;
  stats.k = k;
  stats.trials = trials;
  stats.bound = category_ratio_bound(k);

  std::vector<std::vector<double>> xhat_samples(static_cast<std::size_t>(q));
  std::vector<std::vector<double>> residual_samples(static_cast<std::size_t>(q));

  for (std::uint64_t t = 0; t < trials; ++t) {
    const std::uint64_t trial_seed = mix_seed(base_seed, t);
    MeteredBitSource arrival_bits(mix_seed(trial_seed, 0));
    MeteredBitSource alg_bits(mix_seed(trial_seed, 1));
    const ArrivalOrder pi = randomize_arrival ? random_arrival_order(g.n(), arrival_bits)
                                              : ArrivalOrder::identity(g.n());
    const CategoryRunResult run = randomized_category(g, pi, k, alg_bits);
    if (run.bits_used != static_cast<std::uint64_t>(k) * static_cast<std::uint64_t>(g.m()) ||
        alg_bits.bits_consumed() != run.bits_used)
      stats.bits_exact = false;

    const double ratio =
        opt == 0 ? 1.0 : static_cast<double>(run.matching.size()) / static_cast<double>(opt);
    stats.ratios.push_back(ratio);

    std::vector<int> total(static_cast<std::size_t>(q), 0);
    std::vector<int> matched(static_cast<std::size_t>(q), 0);
    for (int b = 1; b <= g.m(); ++b) {
      const int cat = run.category[static_cast<std::size_t>(b - 1)];
      ++total[static_cast<std::size_t>(cat - 1)];
      if (run.matching.covers_b(b)) ++matched[static_cast<std::size_t>(cat - 1)];
    }
    double prefix = 0.0;
    bool prefix_complete = true;
    for (int i = 1; i <= q; ++i) {
      if (total[static_cast<std::size_t>(i - 1)] == 0) {
        prefix_complete = false;
        continue;
      }
      const double xi = static_cast<double>(matched[static_cast<std::size_t>(i - 1)]) /
                        static_cast<double>(total[static_cast<std::size_t>(i - 1)]);
      xhat_samples[static_cast<std::size_t>(i - 1)].push_back(xi);
      prefix += xi;
      if (prefix_complete)
        residual_samples[static_cast<std::size_t>(i - 1)].push_back(
            (1.0 - xi) - prefix / static_cast<double>(q));
    }
  }

  stats.ratio = aggregate(stats.ratios);
  for (int i = 0; i < q; ++i) {
    stats.xhat.push_back(aggregate(xhat_samples[static_cast<std::size_t>(i)]));
    stats.residual.push_back(aggregate(residual_samples[static_cast<std::size_t>(i)]));
  }
  return stats;
}

struct KvvExperimentStats {
  std::uint64_t trials = 0;
  Aggregate ratio;
  Aggregate bits;
};

inline KvvExperimentStats run_kvv_experiment(const BipartiteGraph& g, std::uint64_t trials,
                                             std::uint64_t base_seed,
                                             bool randomize_arrival = true) {
  const int opt = static_cast<int>(max_matching(g).size());
  std::vector<double> ratios;
  std::vector<double> bit_counts;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const std::uint64_t trial_seed = mix_seed(base_seed, t);
    MeteredBitSource arrival_bits(mix_seed(trial_seed, 0));
    MeteredBitSource alg_bits(mix_seed(trial_seed, 1));
    const ArrivalOrder pi = randomize_arrival ? random_arrival_order(g.n(), arrival_bits)
                                              : ArrivalOrder::identity(g.n());
    const KvvResult run = kvv_run(g, pi, alg_bits);
    ratios.push_back(opt == 0 ? 1.0
                              : static_cast<double>(run.matching.size()) /
                                    static_cast<double>(opt));
    bit_counts.push_back(static_cast<double>(run.bits_used));
  }
  KvvExperimentStats stats;
  stats.trials = trials;
  stats.ratio = aggregate(ratios);
  stats.bits = aggregate(bit_counts);
  return stats;
}

// ---------------------------------------------------------------------------
// single-instance advice checks

struct AdviceCategoryCheck {
  int alg_size = 0;
  int baseline_size = 0;
  int opt = 0;
  std::uint64_t bits_written = 0;
  std::uint64_t bits_read = 0;
  bool three_fifths_ok = false;  // 5*|M| >= 3*|M*|
  bool no_loss_ok = false;       // |M| >= |baseline|
  bool bits_ok = false;          // exactly m bits, all read
};

inline AdviceCategoryCheck check_advice_category(const BipartiteGraph& g,
                                                 const ArrivalOrder& pi) {
  const auto oracle = advice_category_oracle(g, pi);
  AdviceTape tape = oracle.tape;
  tape.rewind();
  const Matching run = advice_category_online(g, pi, tape);

  AdviceCategoryCheck check;
  check.alg_size = static_cast<int>(run.size());
  check.baseline_size = static_cast<int>(oracle.baseline.size());
  check.opt = static_cast<int>(max_matching(g).size());
  check.bits_written = oracle.tape.bits_written();
  check.bits_read = tape.bits_read();
  check.three_fifths_ok = 5 * check.alg_size >= 3 * check.opt;
  check.no_loss_ok = check.alg_size >= check.baseline_size;
  check.bits_ok = check.bits_written == static_cast<std::uint64_t>(g.m()) &&
                  check.bits_read == check.bits_written;
  return check;
}

struct EpsAdviceCheck {
  int alg_size = 0;
  int opt = 0;
  std::uint64_t bits_written = 0;
  std::uint64_t bits_read = 0;
  std::uint64_t budget = 0;
  bool ratio_ok = false;    // |M| >= ceil((1-eps) * |M*|)
  bool replay_ok = false;   // online reproduces the oracle matching exactly
  bool budget_ok = false;   // bits within the published budget
};

inline EpsAdviceCheck check_eps_advice(const BipartiteGraph& g, const ArrivalOrder& pi,
                                       double eps) {
  const auto oracle = eps_oracle(g, pi, eps);
  AdviceTape tape = oracle.tape;
  tape.rewind();
  const auto run = eps_online(g, pi, tape);

  EpsAdviceCheck check;
  check.alg_size = static_cast<int>(run.matching.size());
  check.opt = static_cast<int>(max_matching(g).size());
  check.bits_written = oracle.tape.bits_written();
  check.bits_read = tape.bits_read();
  check.budget = advice_budget(g.n(), g.m(), eps);
  const auto target =
      static_cast<int>(std::ceil((1.0 - eps) * static_cast<double>(check.opt) - 1e-9));
  check.ratio_ok = check.alg_size >= target;
  check.replay_ok = run.matching == oracle.matching;
  check.budget_ok = check.bits_written <= check.budget && check.bits_read <= check.budget;
  return check;
}

// ---------------------------------------------------------------------------
// experiment configuration (key = value text files)

class ExperimentConfig {
 public:
  static ExperimentConfig parse(std::istream& in) {
    ExperimentConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        if (line.find_first_not_of(" \t\r") != std::string::npos)
          throw std::invalid_argument("config line " + std::to_string(line_no) +
                                      ": expected key = value");
        continue;
      }
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key.empty())
        throw std::invalid_argument("config line " + std::to_string(line_no) + ": empty key");
      cfg.values_[key] = value;
    }
    return cfg;
  }

  static ExperimentConfig parse_text(const std::string& text) {
    std::istringstream in(text);
    return parse(in);
  }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::string get_string(const std::string& key, std::optional<std::string> fallback = {}) const {
    const auto it = values_.find(key);
    if (it != values_.end()) return it->second;
    if (fallback) return *fallback;
    throw std::invalid_argument("config: missing key '" + key + "'");
  }

  std::int64_t get_int(const std::string& key, std::optional<std::int64_t> fallback = {}) const {
    const auto it = values_.find(key);
    if (it == values_.end()) {
      if (fallback) return *fallback;
      throw std::invalid_argument("config: missing key '" + key + "'");
    }
    std::size_t used = 0;
    const std::int64_t parsed = std::stoll(it->second, &used);
    if (used != it->second.size())
      throw std::invalid_argument("config: key '" + key + "' is not an integer");
    return parsed;
  }

  double get_double(const std::string& key, std::optional<double> fallback = {}) const {
    const auto it = values_.find(key);
    if (it == values_.end()) {
      if (fallback) return *fallback;
      throw std::invalid_argument("config: missing key '" + key + "'");
    }
    std::size_t used = 0;
    const double parsed = std::stod(it->second, &used);
    if (used != it->second.size())
      throw std::invalid_argument("config: key '" + key + "' is not a number");
    return parsed;
  }

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  static std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
  }

  std::map<std::string, std::string> values_;
};

// Named graph generators available to config files and the command line.
inline BipartiteGraph make_generator_graph(const std::string& name, int size,
                                           std::uint64_t seed) {
  if (name == "semi_complete") return semi_complete(size);
  if (name == "h_gadget") return h_gadget(size);
  if (name == "perfect_random") {
    MeteredBitSource bits(seed);
    return perfect_random(size, bits);
  }
  if (name == "random_bipartite") {
    MeteredBitSource bits(seed);
    return random_bipartite(size, size, 1, 2, bits);
  }
  throw std::invalid_argument("unknown generator '" + name + "'");
}

}  // namespace obm

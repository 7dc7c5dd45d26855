// Command-line front end: instance generation, single runs, experiment
// sweeps with JSON/CSV artifacts, bound tables, hard-instance builders, the
// string-guessing reduction, the covering-set derandomizer, and a self-test.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "obm/obm.hpp"

using json = nlohmann::ordered_json;
using namespace obm;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spill(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty())
    std::cout << text;
  else
    spill(out_path, text);
}

ArrivalOrder make_arrival(const std::string& kind, int n, std::uint64_t seed) {
  if (kind == "identity") return ArrivalOrder::identity(n);
  if (kind == "reverse") {
    std::vector<int> seq;
    for (int a = n; a >= 1; --a) seq.push_back(a);
    return ArrivalOrder(std::move(seq));
  }
  if (kind == "random") {
    MeteredBitSource bits(mix_seed(seed, 0));
    return random_arrival_order(n, bits);
  }
  throw CLI::ValidationError("--arrival", "unknown arrival order '" + kind + "'");
}

RankingPermutation make_sigma(const std::string& kind, int m, std::uint64_t seed) {
  if (kind == "identity") return RankingPermutation::identity(m);
  if (kind == "reverse") return RankingPermutation::reverse(m);
  if (kind == "random") {
    MeteredBitSource bits(mix_seed(seed, 1));
    return random_ranking(m, bits);
  }
  throw CLI::ValidationError("--sigma", "unknown rank order '" + kind + "'");
}

json aggregate_json(const Aggregate& agg) {
  return json{{"count", agg.count},
              {"mean", agg.mean},
              {"se", agg.se},
              {"min", agg.min},
              {"max", agg.max}};
}

int cmd_gen(const std::string& generator, int size, double eps, int length,
            std::uint64_t seed, const std::string& out_path) {
  std::ostringstream text;
  if (generator == "ranking_lb") {
    const std::vector<RankingPermutation> perms = {RankingPermutation::identity(size),
                                                   RankingPermutation::reverse(size)};
    const RankingLbInstance inst =
        ranking_lb_instance(perms, ArrivalOrder::identity(size), eps);
    write_instance(text, inst.graph);
  } else if (generator == "sgkh") {
    const GuessingInstance inst = random_guessing_instance(6, length, seed);
    write_instance(text, sgkh_graph(inst, 3));
  } else {
    write_instance(text, make_generator_graph(generator, size, seed));
  }
  emit(text.str(), out_path);
  return 0;
}

int cmd_run(const std::string& in_path, const std::string& alg, const std::string& arrival,
            const std::string& sigma_kind, int k, double eps, std::uint64_t seed,
            const std::string& out_path) {
  const BipartiteGraph g = parse_instance(slurp(in_path));
  const ArrivalOrder pi = make_arrival(arrival, g.n(), seed);
  const int opt = static_cast<int>(max_matching(g).size());

  json out;
  out["algorithm"] = alg;
  out["n"] = g.n();
  out["m"] = g.m();
  out["edges"] = g.edge_count();
  out["optimum"] = opt;

  Matching result(g.n(), g.m());
  if (alg == "ranking") {
    result = ranking_run(g, pi, make_sigma(sigma_kind, g.m(), seed));
  } else if (alg == "greedy") {
    result = greedy_edge_run(g, pi_induced_edge_order(g, pi));
  } else if (alg == "kvv") {
    MeteredBitSource bits(mix_seed(seed, 1));
    const KvvResult run = kvv_run(g, pi, bits);
    result = run.matching;
    out["random_bits"] = run.bits_used;
  } else if (alg == "category") {
    MeteredBitSource bits(mix_seed(seed, 1));
    const CategoryRunResult run = randomized_category(g, pi, k, bits);
    result = run.matching;
    out["random_bits"] = run.bits_used;
    out["k"] = k;
  } else if (alg == "advice_category") {
    const auto check = check_advice_category(g, pi);
    out["advice_bits"] = check.bits_written;
    out["baseline"] = check.baseline_size;
    out["three_fifths_ok"] = check.three_fifths_ok;
    const auto oracle_out = advice_category_oracle(g, pi);
    AdviceTape tape = oracle_out.tape;
    tape.rewind();
    result = advice_category_online(g, pi, tape);
    out["advice_tape"] = oracle_out.tape.serialize();
  } else if (alg == "eps_advice") {
    const auto oracle_out = eps_oracle(g, pi, eps);
    AdviceTape tape = oracle_out.tape;
    tape.rewind();
    const auto run = eps_online(g, pi, tape);
    result = run.matching;
    out["eps"] = eps;
    out["advice_bits"] = oracle_out.tape.bits_written();
    out["advice_budget"] = advice_budget(g.n(), g.m(), eps);
    out["passes"] = run.plan.passes.size();
  } else {
    throw CLI::ValidationError("--alg", "unknown algorithm '" + alg + "'");
  }

  out["matched"] = result.size();
  out["ratio"] = opt == 0 ? 1.0 : static_cast<double>(result.size()) / opt;
  json pairs = json::array();
  for (const Edge& e : result.pairs()) pairs.push_back({{"a", e.a}, {"b", e.b}});
  out["pairs"] = pairs;
  emit(out.dump(2) + "\n", out_path);
  return 0;
}

int cmd_experiment(const std::string& config_path, const std::string& out_prefix,
                   const std::string& format) {
  const ExperimentConfig cfg = ExperimentConfig::parse_text(slurp(config_path));
  const std::string kind = cfg.get_string("experiment");
  const std::string generator = cfg.get_string("generator", std::string("semi_complete"));
  const int size = static_cast<int>(cfg.get_int("size", 30));
  const auto trials = static_cast<std::uint64_t>(cfg.get_int("trials", 10000));
  const auto seed = static_cast<std::uint64_t>(cfg.get_int("seed", 1));
  const auto graph_seed = static_cast<std::uint64_t>(cfg.get_int("graph_seed", 1));
  const bool random_arrival = cfg.get_string("arrival", std::string("random")) == "random";
  const BipartiteGraph g = make_generator_graph(generator, size, graph_seed);

  json out;
  out["experiment"] = kind;
  for (const auto& [key, value] : cfg.values()) out["config"][key] = value;

  std::ostringstream csv;
  if (kind == "category_ratio") {
    const int k = static_cast<int>(cfg.get_int("k", 1));
    const CategoryExperimentStats stats =
        run_category_experiment(g, k, trials, seed, random_arrival);
    out["bound"] = stats.bound;
    out["bits_exact"] = stats.bits_exact;
    out["ratio"] = aggregate_json(stats.ratio);
    out["meets_bound_at_3se"] = stats.ratio.mean >= stats.bound - 3.0 * stats.ratio.se;
    json xhat = json::array(), residual = json::array();
    for (const auto& agg : stats.xhat) xhat.push_back(aggregate_json(agg));
    for (const auto& agg : stats.residual) residual.push_back(aggregate_json(agg));
    out["xhat"] = xhat;
    out["residual"] = residual;
    csv << "trial,ratio\n";
    for (std::size_t t = 0; t < stats.ratios.size(); ++t)
      csv << t << ',' << double_repr(stats.ratios[t]) << '\n';
  } else if (kind == "kvv_ratio") {
    const KvvExperimentStats stats = run_kvv_experiment(g, trials, seed, random_arrival);
    out["ratio"] = aggregate_json(stats.ratio);
    out["bits"] = aggregate_json(stats.bits);
    csv << "metric,count,mean,se,min,max\n";
    csv << "ratio," << stats.ratio.count << ',' << double_repr(stats.ratio.mean) << ','
        << double_repr(stats.ratio.se) << ',' << double_repr(stats.ratio.min) << ','
        << double_repr(stats.ratio.max) << '\n';
  } else {
    throw CLI::ValidationError("--config", "unknown experiment '" + kind + "'");
  }

  if (format == "json" || format == "both") spill(out_prefix + ".json", out.dump(2) + "\n");
  if (format == "csv" || format == "both") spill(out_prefix + ".csv", csv.str());
  std::cout << "wrote " << out_prefix << "." << (format == "both" ? "{json,csv}" : format)
            << "\n";
  return 0;
}

int cmd_bounds(int k_max, int c, double rho, const std::string& out_path) {
  json out;
  json table = json::array();
  for (int k = 1; k <= k_max; ++k)
    table.push_back({{"k", k}, {"ratio_bound", category_ratio_bound(k)}});
  out["category_ratio_bounds"] = table;
  json sums = json::array();
  for (int i = 1; i <= (1 << std::min(k_max, 4)); ++i)
    sums.push_back({{"i", i}, {"partial_sum", partial_sum_bound(std::min(k_max, 4), i)}});
  out["partial_sums_at_k"] = std::min(k_max, 4);
  out["partial_sums"] = sums;
  if (c >= 2) {
    out["advice_per_request"] = {{"c", c}, {"rho", rho},
                                 {"bits", advice_lb_per_request(c, rho)}};
  }
  emit(out.dump(2) + "\n", out_path);
  return 0;
}

int cmd_lb_build(int n, double eps, const std::string& out_path) {
  const std::vector<RankingPermutation> perms = {RankingPermutation::identity(n),
                                                 RankingPermutation::reverse(n)};
  const ArrivalOrder pi = ArrivalOrder::identity(n);
  const RankingLbInstance inst = ranking_lb_instance(perms, pi, eps);
  validate_monotone_blocks(perms, n, inst.eps_prime, inst.blocks);

  json out;
  out["n"] = n;
  out["eps"] = eps;
  out["eps_prime"] = inst.eps_prime;
  out["blocks"] = inst.blocks.blocks.size();
  out["leftover"] = inst.blocks.leftover.size();
  out["optimum"] = max_matching(inst.graph).size();
  out["component_bound"] = inst.component_bound();
  out["closed_bound"] = inst.closed_bound();
  json runs = json::array();
  for (const auto& [name, sigma] :
       {std::pair<std::string, RankingPermutation>{"identity", perms[0]},
        std::pair<std::string, RankingPermutation>{"reverse", perms[1]}}) {
    const auto run = ranking_run(inst.graph, pi, sigma);
    runs.push_back({{"sigma", name}, {"matched", run.size()}});
  }
  out["ranking_runs"] = runs;
  std::ostringstream instance_text;
  write_instance(instance_text, inst.graph);
  out["instance"] = instance_text.str();
  emit(out.dump(2) + "\n", out_path);
  return 0;
}

int cmd_sgkh(int length, std::uint64_t seed, const std::string& matcher,
             const std::string& out_path) {
  const int c = 3;
  const GuessingInstance inst = random_guessing_instance(6, length, seed);
  MatcherFactory factory;
  AdviceTape tape;
  if (matcher == "greedy") {
    factory = [&]() -> std::unique_ptr<OnlineMatcher> {
      return std::make_unique<GreedyLowIdMatcher>(c * length);
    };
  } else if (matcher == "optimal") {
    tape = make_optimal_matcher_tape(inst, c);
    factory = [&]() -> std::unique_ptr<OnlineMatcher> {
      return std::make_unique<FullAdviceMatcher>(tape);
    };
  } else {
    throw CLI::ValidationError("--matcher", "unknown matcher '" + matcher + "'");
  }
  const SgkhRunResult run = sgkh_reduction_run(factory, inst, c);

  json out;
  out["c"] = c;
  out["alphabet"] = 6;
  out["length"] = length;
  out["matcher"] = matcher;
  out["correct"] = run.correct;
  out["matched"] = run.matching.size();
  out["per_request_bits_bound"] = advice_lb_per_request(c, 5.0 / 6.0);
  std::uint64_t equivalence_violations = 0;
  for (std::size_t j = 0; j < run.predictions.size(); ++j) {
    const bool correct = run.predictions[j] == inst.target[j];
    if (run.block_perfect[j] != correct) ++equivalence_violations;
  }
  out["equivalence_violations"] = equivalence_violations;
  emit(out.dump(2) + "\n", out_path);
  return 0;
}

int cmd_derand(int c, double eps, const std::string& out_path) {
  std::vector<DerandInput> inputs;
  for_each_permutation(c, [&](const std::vector<int>& pi) {
    inputs.push_back({semi_complete(c), ArrivalOrder(std::vector<int>(pi))});
  });
  const auto alg = [](const BipartiteGraph& g, const ArrivalOrder& pi,
                      const std::vector<bool>& bits) {
    FixedBitSource source(bits);
    return randomized_category(g, pi, 1, source).matching;
  };
  const RatioMatrix mat = build_ratio_matrix(inputs, c, alg);
  const CoveringSet cover = build_covering_set(mat, eps);

  json out;
  out["inputs"] = inputs.size();
  out["bit_length"] = mat.bit_length;
  out["guaranteed_expectation"] = mat.guaranteed_expectation;
  out["threshold"] = cover.threshold;
  out["covering_strings"] = cover.columns.size();
  out["index_bits"] = covering_index_width(cover.columns.size());
  out["manifest"] = cover.manifest();
  emit(out.dump(2) + "\n", out_path);
  return 0;
}

int cmd_selftest() {
  int bad = 0;
  const auto show = [&](const std::string& name, const SweepReport& rep) {
    std::cout << name << ": " << rep.cases << " cases, " << rep.failures << " failures\n";
    if (rep.failures) {
      std::cout << "  first: " << rep.first_failure << "\n";
      ++bad;
    }
  };
  for (int n = 1; n <= 3; ++n)
    for (int m = 1; m <= 3; ++m) {
      show("removal " + std::to_string(n) + "x" + std::to_string(m),
           removal_sweep_exhaustive(n, m));
      show("promotion " + std::to_string(n) + "x" + std::to_string(m),
           promotion_sweep_exhaustive(n, m));
      show("greedy-half " + std::to_string(n) + "x" + std::to_string(m),
           greedy_half_sweep_exhaustive(n, m));
    }
  show("removal random 5x5", removal_sweep_random(5, 5, 20000, 11));
  show("promotion random 5x5", promotion_sweep_random(5, 5, 20000, 12));
  show("greedy-half random 6x6", greedy_half_sweep_random(6, 6, 20000, 13));
  std::cout << (bad == 0 ? "selftest OK\n" : "selftest FAILED\n");
  return bad == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"online bipartite matching laboratory"};
  app.require_subcommand(1);

  std::string generator = "semi_complete", out_path, in_path, alg = "ranking";
  std::string arrival = "identity", sigma = "identity", matcher = "greedy";
  std::string config_path, out_prefix = "experiment", format = "json";
  int size = 8, k = 1, length = 20, k_max = 10, c = 3;
  double eps = 0.25, rho = 5.0 / 6.0;
  std::uint64_t seed = 1;

  auto* gen = app.add_subcommand("gen", "generate an instance file");
  gen->add_option("--generator", generator,
                  "semi_complete|h_gadget|perfect_random|random_bipartite|ranking_lb|sgkh");
  gen->add_option("--size", size, "vertex count per side");
  gen->add_option("--eps", eps, "epsilon for ranking_lb");
  gen->add_option("--length", length, "target length for sgkh");
  gen->add_option("--seed", seed, "generator seed");
  gen->add_option("--out", out_path, "output file (default stdout)");

  auto* run = app.add_subcommand("run", "run one algorithm on an instance file");
  run->add_option("--in", in_path, "instance file")->required();
  run->add_option("--alg", alg, "ranking|greedy|kvv|category|advice_category|eps_advice");
  run->add_option("--arrival", arrival, "identity|reverse|random");
  run->add_option("--sigma", sigma, "identity|reverse|random");
  run->add_option("--k", k, "category bits per vertex");
  run->add_option("--eps", eps, "epsilon for eps_advice");
  run->add_option("--seed", seed, "randomness seed");
  run->add_option("--out", out_path, "output file (default stdout)");

  auto* exp = app.add_subcommand("experiment", "run a config-driven experiment");
  exp->add_option("--config", config_path, "key = value config file")->required();
  exp->add_option("--out", out_prefix, "artifact path prefix");
  exp->add_option("--format", format, "json|csv|both");

  auto* bounds = app.add_subcommand("bounds", "print closed-form bound tables");
  bounds->add_option("--k-max", k_max, "largest k in the ratio table");
  bounds->add_option("--c", c, "block size for the advice lower bound");
  bounds->add_option("--rho", rho, "competitive ratio for the advice lower bound");
  bounds->add_option("--out", out_path, "output file (default stdout)");

  auto* lb = app.add_subcommand("lb-build", "build the hard instance for the k=1 family");
  lb->add_option("--n", size, "side size");
  lb->add_option("--eps", eps, "epsilon");
  lb->add_option("--out", out_path, "output file (default stdout)");

  auto* sg = app.add_subcommand("sgkh", "run the string-guessing reduction");
  sg->add_option("--length", length, "number of requests");
  sg->add_option("--seed", seed, "target seed");
  sg->add_option("--matcher", matcher, "greedy|optimal");
  sg->add_option("--out", out_path, "output file (default stdout)");

  auto* de = app.add_subcommand("derand", "covering-set derandomization demo");
  de->add_option("--c", c, "staircase size (family = all arrival orders)");
  de->add_option("--eps", eps, "covering slack");
  de->add_option("--out", out_path, "output file (default stdout)");

  app.add_subcommand("selftest", "run the structural invariant sweeps");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen(generator, size, eps, length, seed, out_path);
    if (run->parsed()) return cmd_run(in_path, alg, arrival, sigma, k, eps, seed, out_path);
    if (exp->parsed()) return cmd_experiment(config_path, out_prefix, format);
    if (bounds->parsed()) return cmd_bounds(k_max, c, rho, out_path);
    if (lb->parsed()) return cmd_lb_build(size, eps, out_path);
    if (sg->parsed()) return cmd_sgkh(length, seed, matcher, out_path);
    if (de->parsed()) return cmd_derand(c, eps, out_path);
    return cmd_selftest();
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
}

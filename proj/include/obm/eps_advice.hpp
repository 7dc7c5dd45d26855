#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "obm/advice_tape.hpp"
#include "obm/graph.hpp"
#include "obm/online.hpp"

namespace obm {

struct AdviceInconsistency : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One replayable greedy run: the induced subgraph on (a_set, b_set), edges
// ordered by arrival position and ascending B-id within an arrival.
struct EpsPass {
  std::vector<int> a_set;
  std::vector<int> b_set;
};

struct PassPlan {
  int n = 0;
  int m = 0;
  std::vector<EpsPass> passes;
  std::vector<int> final_index;  // final_index[a-1] = j(a), 0 = unmatched

  std::string to_text() const {
    std::ostringstream out;
    out << "passes=" << passes.size() << " n=" << n << " m=" << m << '\n';
    for (std::size_t i = 0; i < passes.size(); ++i) {
      out << "pass " << i + 1 << ": A =";
      for (int a : passes[i].a_set) out << ' ' << a;
      out << " ; B =";
      for (int b : passes[i].b_set) out << ' ' << b;
      out << '\n';
    }
    out << "final_index:";
    for (int j : final_index) out << ' ' << j;
    out << '\n';
    return out.str();
  }
};

// Internal knobs, all functions of epsilon alone so the advice budget stays
// linear in n. Phases stop early once they stop paying for themselves; the
// uncapped full-depth sweep afterwards restores the approximation guarantee
// when the capped machinery under-delivers (it never fires on easy inputs).
struct EpsParams {
  int path_limit;      // max matched edges on an augmenting path
  double stop_frac;    // phase yield below stop_frac * |M| ends the loop
  int max_phases;
  int rounds_per_phase;

  static EpsParams from_epsilon(double eps) {
    if (!(eps > 0.0) || !(eps < 1.0))
      throw std::invalid_argument("eps must be in (0,1)");
    EpsParams p;
    p.path_limit = static_cast<int>(std::ceil(2.0 / eps));
    p.stop_frac = eps * eps / 8.0;
    p.max_phases = static_cast<int>(std::ceil(8.0 / (eps * eps))) + 1;
    p.rounds_per_phase = static_cast<int>(std::ceil(8.0 / (eps * eps * eps)));
    return p;
  }

  // Hard ceiling on recorded passes used by the budget formula: pass 1, the
  // capped phase loop, and one extra full-depth sweep allowance.
  std::uint64_t pass_ceiling() const {
    return 1 + static_cast<std::uint64_t>(max_phases) *
                   static_cast<std::uint64_t>(rounds_per_phase) +
           static_cast<std::uint64_t>(rounds_per_phase);
  }
};

// Upper bound on tape length: self-delimited n, m, P, then P membership
// blocks of n+m bits, then n fixed-width pass indices.
inline std::uint64_t advice_budget(int n, int m, double eps) {
  const EpsParams p = EpsParams::from_epsilon(eps);
  const std::uint64_t cap = p.pass_ceiling();
  return AdviceTape::self_delimited_length(static_cast<std::uint64_t>(n)) +
         AdviceTape::self_delimited_length(static_cast<std::uint64_t>(m)) +
         AdviceTape::self_delimited_length(cap) +
         cap * static_cast<std::uint64_t>(n + m) +
         static_cast<std::uint64_t>(n) *
             static_cast<std::uint64_t>(std::bit_width(cap));
}

struct EpsOracleResult {
  PassPlan plan;
  AdviceTape tape;
  Matching matching;
  std::vector<Matching> pass_matchings;  // what replaying each pass yields
};

namespace detail {

struct EpsStep {
  int b = 0;      // extension edge endpoint
  int a = 0;      // its partner in M, the new tip
  int pass = 0;   // 1-based pass that produced the extension edge
};

struct EpsStub {
  int root = 0;
  std::vector<EpsStep> steps;
  bool extended_this_round = false;
  int tip() const { return steps.empty() ? root : steps.back().a; }
};

struct EpsCompleted {
  int root = 0;
  std::vector<EpsStep> steps;
  int final_b = 0;
  int final_pass = 0;
};

class EpsOracleState {
 public:
  EpsOracleState(const BipartiteGraph& g, const ArrivalOrder& pi)
      : g_(g), pi_(pi), match_(g.n(), g.m()),
        prov_(static_cast<std::size_t>(g.n()) + 1, 0) {}

  // Pass 1: greedy over the whole graph in arrival order.
  void run_first_pass() {
    Matching m1 = greedy_edge_run(g_, pi_induced_edge_order(g_, pi_));
    std::vector<int> all_a(static_cast<std::size_t>(g_.n()));
    std::vector<int> all_b(static_cast<std::size_t>(g_.m()));
    for (int a = 1; a <= g_.n(); ++a) all_a[static_cast<std::size_t>(a - 1)] = a;
    for (int b = 1; b <= g_.m(); ++b) all_b[static_cast<std::size_t>(b - 1)] = b;
    passes_.push_back({std::move(all_a), std::move(all_b)});
    pass_matchings_.push_back(m1);
    for (const Edge& e : m1.pairs()) {
      match_.add(e.a, e.b);
      prov_[static_cast<std::size_t>(e.a)] = 1;
    }
  }

  // One phase of disjoint augmenting-path search. Stubs grow from every free
  // A-vertex via maximal greedy extensions; stuck stubs retreat one edge per
  // round, burying the abandoned B-vertex for the rest of the phase.
  int run_phase(int path_limit, int rounds_cap) {
    const int n = g_.n();
    const int m = g_.m();
    std::vector<EpsStub> stubs;
    std::vector<int> stub_of_tip(static_cast<std::size_t>(n) + 1, -1);
    for (int a = 1; a <= n; ++a)
      if (!match_.covers_a(a)) {
        stub_of_tip[static_cast<std::size_t>(a)] = static_cast<int>(stubs.size());
        stubs.push_back({a, {}, false});
      }
    std::vector<bool> active(stubs.size(), true);
    std::size_t active_count = stubs.size();
    std::vector<bool> used(static_cast<std::size_t>(m) + 1, false);
    std::vector<bool> dead(static_cast<std::size_t>(m) + 1, false);
    std::vector<EpsCompleted> completed;

    auto available = [&](int b, bool free_only) {
      return !used[static_cast<std::size_t>(b)] && !dead[static_cast<std::size_t>(b)] &&
             (!free_only || !match_.covers_b(b));
    };

    for (int round = 0; round < rounds_cap && active_count > 0; ++round) {
      for (std::size_t s = 0; s < stubs.size(); ++s) stubs[s].extended_this_round = false;

      // two tip classes: below the length limit extend anywhere, at the
      // limit only a free B-vertex (a completion) is worth matching
      for (int free_only = 0; free_only <= 1; ++free_only) {
        std::vector<int> tips;
        for (std::size_t s = 0; s < stubs.size(); ++s) {
          if (!active[s]) continue;
          const bool at_limit = static_cast<int>(stubs[s].steps.size()) >= path_limit;
          if (at_limit == static_cast<bool>(free_only)) tips.push_back(stubs[s].tip());
        }
        if (tips.empty()) continue;
        std::vector<int> b_avail;
        for (int b = 1; b <= m; ++b)
          if (available(b, free_only != 0)) b_avail.push_back(b);
        if (b_avail.empty()) continue;
        const RelabeledGraph sub = induced_subgraph(g_, tips, b_avail);
        if (sub.graph.edge_count() == 0) continue;
        const int pass_idx = record_pass(sub, tips, b_avail);
        for (const Edge& e : pass_matchings_.back().pairs()) {
          const int stub_idx = stub_of_tip[static_cast<std::size_t>(e.a)];
          EpsStub& stub = stubs[static_cast<std::size_t>(stub_idx)];
          stub.extended_this_round = true;
          used[static_cast<std::size_t>(e.b)] = true;
          if (!match_.covers_b(e.b)) {
            completed.push_back({stub.root, stub.steps, e.b, pass_idx});
            active[static_cast<std::size_t>(stub_idx)] = false;
            --active_count;
            stub_of_tip[static_cast<std::size_t>(e.a)] = -1;
          } else {
            const int next_a = match_.partner_of_b(e.b);
            stub_of_tip[static_cast<std::size_t>(e.a)] = -1;
            stub_of_tip[static_cast<std::size_t>(next_a)] = stub_idx;
            stub.steps.push_back({e.b, next_a, pass_idx});
          }
        }
      }

      // stubs that neither extended nor have anywhere left to go retreat
      for (std::size_t s = 0; s < stubs.size(); ++s) {
        if (!active[s] || stubs[s].extended_this_round) continue;
        EpsStub& stub = stubs[s];
        const int tip = stub.tip();
        const bool at_limit = static_cast<int>(stub.steps.size()) >= path_limit;
        bool has_move = false;
        for (int b : g_.neighbors(tip))
          if (available(b, at_limit)) {
            has_move = true;
            break;
          }
        if (has_move) continue;  // lost this round's race; try again
        if (stub.steps.empty()) {
          active[s] = false;
          --active_count;
          stub_of_tip[static_cast<std::size_t>(tip)] = -1;
        } else {
          const EpsStep last = stub.steps.back();
          stub.steps.pop_back();
          stub_of_tip[static_cast<std::size_t>(last.a)] = -1;
          stub_of_tip[static_cast<std::size_t>(stub.tip())] = static_cast<int>(s);
          used[static_cast<std::size_t>(last.b)] = false;
          dead[static_cast<std::size_t>(last.b)] = true;
        }
      }
    }

    for (const EpsCompleted& path : completed) augment(path);
    return static_cast<int>(completed.size());
  }

  void finish(PassPlan& plan, std::vector<Matching>& out_passes, Matching& out_match) {
    plan.n = g_.n();
    plan.m = g_.m();
    plan.passes = std::move(passes_);
    plan.final_index.assign(static_cast<std::size_t>(g_.n()), 0);
    for (int a = 1; a <= g_.n(); ++a)
      if (match_.covers_a(a)) {
        const int j = prov_[static_cast<std::size_t>(a)];
        if (j < 1 ||
            pass_matchings_[static_cast<std::size_t>(j - 1)].partner_of_a(a) !=
                match_.partner_of_a(a))
          throw std::logic_error("eps_oracle: provenance does not replay");
        plan.final_index[static_cast<std::size_t>(a - 1)] = j;
      }
    out_passes = std::move(pass_matchings_);
    out_match = std::move(match_);
  }

  int matching_size() const { return match_.size(); }

 private:
  int record_pass(const RelabeledGraph& sub, const std::vector<int>& a_set,
                  const std::vector<int>& b_set) {
    // arrival order restricted to the subgraph, then greedy over its edges
    std::vector<int> sub_arrivals;
    sub_arrivals.reserve(a_set.size());
    for (int t = 1; t <= pi_.n(); ++t) {
      const int na = sub.new_a(pi_.vertex_at(t));
      if (na != 0) sub_arrivals.push_back(na);
    }
    const Matching msub =
        greedy_edge_run(sub.graph, pi_induced_edge_order(sub.graph,
                                                         ArrivalOrder(sub_arrivals)));
    Matching mapped(g_.n(), g_.m());
    for (const Edge& e : msub.pairs()) mapped.add(sub.orig_a(e.a), sub.orig_b(e.b));
    std::vector<int> a_sorted(a_set);
    std::vector<int> b_sorted(b_set);
    std::sort(a_sorted.begin(), a_sorted.end());
    std::sort(b_sorted.begin(), b_sorted.end());
    passes_.push_back({std::move(a_sorted), std::move(b_sorted)});
    pass_matchings_.push_back(std::move(mapped));
    return static_cast<int>(passes_.size());
  }

  void augment(const EpsCompleted& path) {
    for (const EpsStep& st : path.steps) match_.remove(st.a, st.b);
    int tip = path.root;
    for (const EpsStep& st : path.steps) {
      match_.add(tip, st.b);
      prov_[static_cast<std::size_t>(tip)] = st.pass;
      tip = st.a;
    }
    match_.add(tip, path.final_b);
    prov_[static_cast<std::size_t>(tip)] = path.final_pass;
  }

  const BipartiteGraph& g_;
  const ArrivalOrder& pi_;
  Matching match_;
  std::vector<int> prov_;
  std::vector<EpsPass> passes_;
  std::vector<Matching> pass_matchings_;
};

}  // namespace detail

// Tape layout: self-delimited n, m, P; P blocks of n+m membership bits in
// vertex-id order; then one field of width bit_width(P) per arrival holding
// j(a) for the arriving a, in arrival order. j = 0 means "stay unmatched".
inline AdviceTape write_pass_plan(const PassPlan& plan, const ArrivalOrder& pi) {
  AdviceTape tape;
  tape.write_self_delimited(static_cast<std::uint64_t>(plan.n));
  tape.write_self_delimited(static_cast<std::uint64_t>(plan.m));
  tape.write_self_delimited(plan.passes.size());
  for (const EpsPass& p : plan.passes) {
    std::vector<bool> in_a(static_cast<std::size_t>(plan.n) + 1, false);
    std::vector<bool> in_b(static_cast<std::size_t>(plan.m) + 1, false);
    for (int a : p.a_set) in_a[static_cast<std::size_t>(a)] = true;
    for (int b : p.b_set) in_b[static_cast<std::size_t>(b)] = true;
    for (int a = 1; a <= plan.n; ++a) tape.write_bit(in_a[static_cast<std::size_t>(a)]);
    for (int b = 1; b <= plan.m; ++b) tape.write_bit(in_b[static_cast<std::size_t>(b)]);
  }
  const int width = std::bit_width(plan.passes.size());
  for (int t = 1; t <= pi.n(); ++t) {
    const int a = pi.vertex_at(t);
    tape.write_fixed(
        static_cast<std::uint64_t>(plan.final_index[static_cast<std::size_t>(a - 1)]),
        width);
  }
  return tape;
}

// Offline planner. Pass 1 is greedy on everything; capped phases then hunt
// disjoint augmenting paths; if the capped loop leaves the matching short of
// ceil((1-eps) * opt), full-depth sweeps close the gap. Every recorded pass
// is a greedy run the decoder can replay verbatim.
inline EpsOracleResult eps_oracle(const BipartiteGraph& g, const ArrivalOrder& pi,
                                  double eps) {
  const EpsParams params = EpsParams::from_epsilon(eps);
  if (pi.n() != g.n()) throw std::invalid_argument("eps_oracle: order size mismatch");

  const int opt = max_matching(g).size();
  const long double want = (1.0L - static_cast<long double>(eps)) * opt;
  const int target = static_cast<int>(std::ceil(want - 1e-9L));

  detail::EpsOracleState state(g, pi);
  state.run_first_pass();

  for (int phase = 0; phase < params.max_phases; ++phase) {
    if (state.matching_size() >= target) break;
    const int before = state.matching_size();
    const int gained = state.run_phase(params.path_limit, params.rounds_per_phase);
    if (gained == 0) break;
    if (static_cast<double>(gained) < params.stop_frac * static_cast<double>(before))
      break;
  }
  while (state.matching_size() < target) {
    const int gained = state.run_phase(g.n(), 1 << 30);
    if (gained == 0)
      throw std::logic_error("eps_oracle: full-depth sweep found no path below target");
  }

  EpsOracleResult result;
  state.finish(result.plan, result.pass_matchings, result.matching);
  result.tape = write_pass_plan(result.plan, pi);
  return result;
}

struct EpsOnlineResult {
  Matching matching;
  PassPlan plan;                 // decoded back from the tape
  std::vector<Edge> emitted;     // output edge per arrival, a-id with b=0 when none
};

// Online decoder: reads the header and memberships up front, replays every
// pass incrementally as vertices arrive, and commits the advised edge
// (a, M_j(a)) the moment a arrives.
inline EpsOnlineResult eps_online(const BipartiteGraph& g, const ArrivalOrder& pi,
                                  AdviceTape& tape) {
  const int n = static_cast<int>(tape.read_self_delimited());
  const int m = static_cast<int>(tape.read_self_delimited());
  if (n != g.n() || m != g.m())
    throw AdviceInconsistency("eps_online: tape header does not match instance");
  const std::uint64_t pass_count = tape.read_self_delimited();

  EpsOnlineResult out;
  out.plan.n = n;
  out.plan.m = m;
  std::vector<std::vector<bool>> in_a(pass_count);
  std::vector<std::vector<bool>> in_b(pass_count);
  for (std::uint64_t i = 0; i < pass_count; ++i) {
    in_a[i].assign(static_cast<std::size_t>(n) + 1, false);
    in_b[i].assign(static_cast<std::size_t>(m) + 1, false);
    EpsPass pass;
    for (int a = 1; a <= n; ++a)
      if (tape.read_bit()) {
        in_a[i][static_cast<std::size_t>(a)] = true;
        pass.a_set.push_back(a);
      }
    for (int b = 1; b <= m; ++b)
      if (tape.read_bit()) {
        in_b[i][static_cast<std::size_t>(b)] = true;
        pass.b_set.push_back(b);
      }
    out.plan.passes.push_back(std::move(pass));
  }
  out.plan.final_index.assign(static_cast<std::size_t>(n), 0);

  const int width = std::bit_width(pass_count);
  std::vector<Matching> pass_match(pass_count, Matching(n, m));
  out.matching = Matching(n, m);
  for (int t = 1; t <= pi.n(); ++t) {
    const int a = pi.vertex_at(t);
    for (std::uint64_t i = 0; i < pass_count; ++i) {
      if (!in_a[i][static_cast<std::size_t>(a)] || pass_match[i].covers_a(a)) continue;
      for (int b : g.neighbors(a)) {
        if (in_b[i][static_cast<std::size_t>(b)] && !pass_match[i].covers_b(b)) {
          pass_match[i].add(a, b);
          break;
        }
      }
    }
    const auto j = tape.read_fixed(width);
    if (j > pass_count)
      throw AdviceInconsistency("eps_online: pass index out of range");
    out.plan.final_index[static_cast<std::size_t>(a - 1)] = static_cast<int>(j);
    if (j == 0) {
      out.emitted.push_back({a, 0});
      continue;
    }
    const int b = pass_match[j - 1].partner_of_a(a);
    if (b == 0)
      throw AdviceInconsistency("eps_online: advised pass leaves vertex unmatched");
    if (out.matching.covers_b(b))
      throw AdviceInconsistency("eps_online: advised edges collide");
    out.matching.add(a, b);
    out.emitted.push_back({a, b});
  }
  return out;
}

}  // namespace obm

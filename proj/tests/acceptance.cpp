// Acceptance run: one PASS/FAIL line per criterion, with its time budget.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "lexmatch/ipmodel.hpp"
#include "lexmatch/lextree.hpp"
#include "lexmatch/matching.hpp"
#include "lexmatch/solver.hpp"
#include "lexmatch/substitutability.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/random_instances.hpp"

using namespace lexmatch;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  const char* id;
  const char* title;
  double budget_ms;  // 0 = no time bound
  std::function<Outcome()> run;
};

using Allocs = std::set<std::vector<TaskSet>>;

Allocs allocs(const std::vector<Matching>& ms) {
  Allocs out;
  for (const Matching& m : ms) out.insert(m.allocations());
  return out;
}

std::string count(const char* label, std::size_t n) { return std::string(label) + "=" + std::to_string(n); }

// Criterion 4's corpus, also reused by 8, 9 and 10.
const std::vector<Instance>& main_corpus() {
  static const std::vector<Instance> corpus = [] {
    gen::Shape shape;
    shape.max_agents = 3;
    shape.max_tasks = 5;
    shape.oracles = gen::Oracles::kMixed;
    return gen::corpus(20240601, 500, shape);
  }();
  return corpus;
}

std::vector<Instance> small_corpus() {
  gen::Shape shape;
  shape.max_agents = 2;
  shape.max_tasks = 4;
  return gen::corpus(7001, 200, shape);
}

std::vector<Instance> subst_corpus() {
  gen::Shape shape;
  shape.max_agents = 3;
  shape.max_tasks = 6;
  return gen::corpus(9001, 200, shape);
}

// Feasible decoded valuations with one X per agent; any valuation breaking
// c-1 is infeasible, so nothing else needs visiting.
Allocs decoded_feasible(const Instance& inst, const IPModel& model) {
  std::vector<std::vector<std::size_t>> per_agent(inst.num_agents());
  for (std::size_t v = 0; v < model.x_vars.size(); ++v) {
    per_agent[model.x_vars[v].agent.value].push_back(v);
  }
  Allocs out;
  Valuation val(model.num_vars(), 0);
  std::function<void(std::size_t)> go = [&](std::size_t a) {
    if (a == inst.num_agents()) {
      const ValuationReport r = check_valuation(inst, model, val);
      if (r.feasible) out.insert(r.matching->allocations());
      return;
    }
    for (std::size_t v : per_agent[a]) {
      val[v] = 1;
      go(a + 1);
      val[v] = 0;
    }
  };
  go(0);
  return out;
}

bool ranks_coherent(const Instance& inst, const LexTree& tree) {
  std::vector<NodeIndex> order(tree.size());
  for (NodeIndex n = 0; n < tree.size(); ++n) order[n] = n;
  std::sort(order.begin(), order.end(), [&](NodeIndex x, NodeIndex y) {
    return compare_alloc(inst, tree.agent(), tree.node(x).tasks, tree.node(y).tasks) > 0;
  });
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (tree.node(order[i]).rank != i + 1) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

Outcome ac1() {
  Outcome o;
  const Instance inst = fx::ex1();
  const IPModel model = build_ip(inst, Objective::max_tasks());
  const std::vector<std::int64_t> listed{2, 1, 1, 0, 1, 1, 0};
  const bool shape = model.x_vars.size() == 7 && model.rows.size() == 8 && model.objective == listed;
  const SolveResult r = solve(inst, SolverConfig{});
  const Matching expected = fx::pair(inst, {"t2"}, {"t1"});
  const bool solved = r.status == SolveStatus::kOptimal && r.objective_value == 2 &&
                      r.matching && *r.matching == expected;
  const auto stable = enumerate_stable(inst);
  const bool unique = stable.size() == 1 && stable[0] == expected;
  o.pass = shape && solved && unique;
  o.detail = count("X", model.x_vars.size()) + " " + count("rows", model.rows.size()) +
             " objective=" + std::to_string(r.objective_value) + " " +
             count("stable", stable.size());
  return o;
}

Outcome ac2() {
  Outcome o;
  const Instance inst = fx::ex2();
  const auto all = enumerate_matchings(inst);
  const std::uint64_t combos = count_node_combinations(build_trees(inst));
  const bool none_stable = enumerate_stable(inst).empty();
  const bool infeasible = solve(inst, SolverConfig{}).status == SolveStatus::kInfeasible;

  struct Cell {
    std::initializer_list<const char*> a1, a2;
    const char* task;
    const char* agent;
  };
  const std::vector<Cell> table{
      {{"t1", "t2"}, {}, "t1", "a2"}, {{"t1"}, {"t2"}, "t2", "a1"}, {{"t1"}, {}, "t2", "a2"},
      {{"t3"}, {"t2"}, "t1", "a1"},   {{"t3"}, {"t1"}, "t2", "a2"}, {{"t3"}, {}, "t1", "a2"},
      {{"t2"}, {"t1"}, "t3", "a1"},   {{"t2"}, {}, "t1", "a2"},     {{}, {"t2"}, "t1", "a1"},
      {{}, {"t1"}, "t2", "a2"},       {{}, {}, "t1", "a1"}};
  std::size_t verified = 0;
  for (const Cell& c : table) {
    const Matching m = fx::pair(inst, c.a1, c.a2);
    if (is_blocking_pair(inst, m, inst.agent(c.agent), inst.task(c.task))) ++verified;
  }
  o.pass = all.size() == 11 && combos == 15 && none_stable && infeasible && verified == table.size();
  o.detail = count("valid", all.size()) + " " + count("combinations", combos) + " " +
             count("conflicts", combos - all.size()) + " table_pairs=" + std::to_string(verified) +
             "/" + std::to_string(table.size()) + (infeasible ? " solve=infeasible" : " solve=?");
  return o;
}

Outcome ac3() {
  Outcome o;
  const Instance inst = fx::ex3();
  const Matching m1 = fx::pair(inst, {"t1"}, {"t2"});
  const Matching m2 = fx::pair(inst, {"t2", "t3"}, {"t1"});
  const bool both = check_stability(inst, m1).stable && check_stability(inst, m2).stable;
  const SolveResult r = solve(inst, SolverConfig{});
  const bool optimum = r.status == SolveStatus::kOptimal && r.objective_value == 3;
  o.pass = both && optimum && m1.num_assigned_tasks() == 2 && m2.num_assigned_tasks() == 3;
  o.detail = std::string("M1,M2 stable=") + (both ? "yes" : "no") +
             " max_tasks=" + std::to_string(r.objective_value) + " |M1|=" +
             std::to_string(m1.num_assigned_tasks()) + " |M2|=" +
             std::to_string(m2.num_assigned_tasks());
  return o;
}

Outcome ac4() {
  Outcome o;
  std::size_t mismatches = 0, mixed = 0, stable_total = 0;
  for (const Instance& inst : main_corpus()) {
    const Allocs decoded = decoded_feasible(inst, build_ip(inst, Objective::max_tasks()));
    const Allocs expected = allocs(enumerate_stable(inst));
    Allocs brute;
    for (const auto& a : oracle::all_matchings(inst)) {
      if (oracle::stable(inst, a)) brute.insert(a.by_agent);
    }
    if (decoded != expected || expected != brute) ++mismatches;
    stable_total += expected.size();
    std::set<OracleKind> kinds;
    for (AgentId a : inst.agent_ids()) kinds.insert(inst.oracle(a).kind());
    if (kinds.size() > 1) ++mixed;
  }
  o.pass = mismatches == 0;
  o.detail = count("instances", main_corpus().size()) + " " + count("mixed_oracles", mixed) +
             " " + count("stable_matchings", stable_total) + " " + count("mismatches", mismatches);
  return o;
}

Outcome ac5() {
  Outcome o;
  gen::Shape shape;
  shape.max_agents = 1;
  shape.min_tasks = 1;
  shape.max_tasks = 8;
  std::mt19937_64 rng(5005);
  std::size_t pairs = 0, mismatches = 0;
  while (pairs < 1000) {
    const Instance inst = gen::random_instance(rng, shape);
    const AgentId a{0};
    if (inst.acceptable_tasks(a).size() > 8) continue;
    std::vector<TaskId> offered;
    for (TaskId t : inst.task_ids()) {
      if (rng() % 3 != 0) offered.push_back(t);
    }
    const TaskSet s(offered);
    if (choice(inst, a, s) != oracle::best_subset(inst, a, s)) ++mismatches;
    ++pairs;
  }
  o.pass = mismatches == 0;
  o.detail = count("pairs", pairs) + " " + count("mismatches", mismatches);
  return o;
}

Outcome ac6() {
  Outcome o;
  std::size_t pair_checks = 0, pair_mismatches = 0, matchings = 0, coalition_mismatches = 0;
  for (const Instance& inst : small_corpus()) {
    const auto universe = oracle::all_matchings(inst);
    for (const Matching& m : enumerate_matchings(inst)) {
      ++matchings;
      const auto ref = oracle::from_sets(inst, m.allocations());
      for (AgentId a : inst.agent_ids()) {
        for (TaskId t : inst.task_ids()) {
          const bool coalition = oracle::coalition_blocks(inst, ref, {a}, {t}, universe);
          bool pair = false;
          if (inst.accepts(a, t) && !m.contains(a, t)) {
            pair = is_blocking_pair(inst, m, a, t).has_value();
          }
          ++pair_checks;
          if (pair != coalition) ++pair_mismatches;
        }
      }
      const bool any_coalition = oracle::any_coalition_blocks(inst, ref, universe);
      if (any_coalition == check_stability(inst, m).stable) ++coalition_mismatches;
    }
  }
  o.pass = pair_mismatches == 0 && coalition_mismatches == 0;
  o.detail = count("instances", 200) + " " + count("matchings", matchings) + " " +
             count("pair_checks", pair_checks) + " " + count("pair_mismatches", pair_mismatches) +
             " " + count("coalition_mismatches", coalition_mismatches);
  return o;
}

Outcome ac7() {
  Outcome o;
  std::size_t agents = 0, mismatches = 0, small = 0, small_failures = 0, negative = 0;
  std::size_t all_subst = 0, empty_core = 0, full_set_misses = 0;
  for (const Instance& inst : subst_corpus()) {
    bool every = true;
    for (AgentId a : inst.agent_ids()) {
      ++agents;
      const bool def = is_substitutable_def(inst, a).substitutable;
      const bool tree = is_substitutable_tree(inst, a).substitutable;
      if (def != tree) ++mismatches;
      if (inst.acceptable_tasks(a).size() <= 2) {
        ++small;
        if (!def || !tree) ++small_failures;
      }
      if (!tree) ++negative;
      every = every && tree;
      // Observation only: does checking S = T(a) alone miss violations?
      const std::vector<TaskId> all_tasks(inst.acceptable_tasks(a).begin(),
                                          inst.acceptable_tasks(a).end());
      const bool full_only =
          all_tasks.size() < 2 || !tree_condition_violation(build_tree(inst, a), TaskSet(all_tasks));
      if (full_only && !tree) ++full_set_misses;
    }
    if (every) {
      ++all_subst;
      if (enumerate_stable(inst).empty()) ++empty_core;
    }
  }
  o.pass = agents >= 300 && mismatches == 0 && small_failures == 0 && empty_core == 0;
  o.detail = count("agents", agents) + " " + count("not_substitutable", negative) + " " +
             count("def_tree_mismatches", mismatches) + " " + count("two_task_agents", small) +
             " " + count("two_task_failures", small_failures) + " " +
             count("all_subst_instances", all_subst) + " " + count("empty_stable_sets", empty_core) +
             " " + count("missed_by_full_set_only", full_set_misses);
  return o;
}

Outcome ac8() {
  Outcome o;
  std::size_t mismatches = 0, instances = 0, positive = 0;
  for (const Instance& inst : main_corpus()) {
    ++instances;
    const SolveResult r = solve_min_blocking(inst, SolverConfig{});
    const std::size_t expected = oracle::min_blocking_pairs(inst);
    if (r.status != SolveStatus::kOptimal || r.blocking_pairs.size() != expected) ++mismatches;
    if (expected > 0) ++positive;
  }
  // The corpus above is mostly stable, so add instances that need blocking.
  gen::Shape shape;
  shape.min_agents = 2;
  shape.max_agents = 3;
  shape.max_tasks = 5;
  std::mt19937_64 rng(8008);
  std::size_t hard = 0;
  for (int attempt = 0; attempt < 200000 && hard < 100; ++attempt) {
    const Instance inst = gen::random_instance(rng, shape);
    const std::size_t expected = oracle::min_blocking_pairs(inst);
    if (expected == 0) continue;
    ++hard;
    const SolveResult r = solve_min_blocking(inst, SolverConfig{});
    if (r.status != SolveStatus::kOptimal || r.blocking_pairs.size() != expected) ++mismatches;
  }

  const Instance ex2 = fx::ex2();
  const SolveResult r2 = solve_min_blocking(ex2, SolverConfig{});
  const std::size_t ex2_min = oracle::min_blocking_pairs(ex2);
  const bool ex2_ok = r2.status == SolveStatus::kOptimal && r2.blocking_pairs.size() == ex2_min &&
                      ex2_min == 1;
  o.pass = mismatches == 0 && ex2_ok && hard >= 100;
  o.detail = count("instances", instances) + " " + count("with_blocking", positive) + " " +
             count("unstable_instances", hard) + " " +
             count("mismatches", mismatches) + " ex2_sumY=" +
             std::to_string(r2.blocking_pairs.size()) + " ex2_min=" + std::to_string(ex2_min);
  return o;
}

Outcome ac9() {
  Outcome o;
  std::size_t checked = 0, failures = 0;
  for (const Instance& inst : main_corpus()) {
    for (const Matching& m : enumerate_matchings(inst)) {
      ++checked;
      if (!is_individually_rational(inst, m)) ++failures;
    }
  }
  o.pass = failures == 0;
  o.detail = count("matchings", checked) + " " + count("failures", failures);
  return o;
}

Outcome ac10() {
  Outcome o;
  std::size_t trees = 0, failures = 0;
  auto check_all = [&](const std::vector<Instance>& corpus) {
    for (const Instance& inst : corpus) {
      for (const LexTree& tree : build_trees(inst)) {
        ++trees;
        if (!ranks_coherent(inst, tree)) ++failures;
      }
    }
  };
  check_all(main_corpus());
  check_all(small_corpus());
  check_all(subst_corpus());

  const Instance ex1 = fx::ex1();
  const auto ex_trees = build_trees(ex1);
  auto rank_of = [&](std::size_t agent, TaskSet s) {
    for (const LexNode& n : ex_trees[agent].nodes()) {
      if (n.tasks == s) return n.rank;
    }
    return std::size_t{0};
  };
  const bool figure = rank_of(0, fx::ts(ex1, {"t1", "t2"})) == 1 &&
                      rank_of(0, fx::ts(ex1, {"t1"})) == 2 && rank_of(0, fx::ts(ex1, {"t2"})) == 3 &&
                      rank_of(0, {}) == 4 && rank_of(1, fx::ts(ex1, {"t2"})) == 1 &&
                      rank_of(1, fx::ts(ex1, {"t1"})) == 2 && rank_of(1, {}) == 3;
  o.pass = failures == 0 && figure;
  o.detail = count("trees", trees) + " " + count("failures", failures) +
             std::string(" example_numbering=") + (figure ? "ok" : "wrong");
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"AC1", "two-agent example: model, optimum, unique stable matching", 1000, ac1},
      {"AC2", "no-stable-matching example and its blocking pairs", 1000, ac2},
      {"AC3", "two stable matchings of different size", 1000, ac3},
      {"AC4", "feasible valuations equal stable matchings", 60000, ac4},
      {"AC5", "greedy choice equals brute-force argmax", 30000, ac5},
      {"AC6", "pair test equals coalition brute force", 60000, ac6},
      {"AC7", "substitutability: definition vs tree condition", 60000, ac7},
      {"AC8", "relaxed solve attains the minimum blocking count", 0, ac8},
      {"AC9", "enumerated matchings are individually rational", 0, ac9},
      {"AC10", "tree ranks follow the lexicographic order", 0, ac10},
  };

  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.budget_ms == 0 || ms < c.budget_ms;
    const bool pass = o.pass && in_time;
    if (!pass) ++failed;
    char timing[64];
    if (c.budget_ms > 0) {
      std::snprintf(timing, sizeof timing, "%.1f ms < %.0f ms", ms, c.budget_ms);
    } else {
      std::snprintf(timing, sizeof timing, "%.1f ms", ms);
    }
    std::printf("%-4s %s  %s [%s]%s  %s\n", c.id, pass ? "PASS" : "FAIL", c.title, timing,
                in_time ? "" : " over budget", o.detail.c_str());
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

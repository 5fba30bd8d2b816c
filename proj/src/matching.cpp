#include "lexmatch/matching.hpp"

#include <algorithm>
#include <limits>
#include <utility>

#include "lexmatch/error.hpp"

namespace lexmatch {

using nlohmann::json;

Matching::Matching(const Instance& inst)
    : by_agent_(inst.num_agents()), by_task_(inst.num_tasks()) {}

Matching Matching::from_allocations(const Instance& inst,
                                    std::vector<TaskSet> by_agent) {
  if (by_agent.size() != inst.num_agents()) {
    throw Error("matching: expected one allocation per agent");
  }
  Matching m(inst);
  for (AgentId a : inst.agent_ids()) {
    const TaskSet& alloc = by_agent[a.value];
    for (TaskId t : alloc) {
      if (!inst.has_task(t)) throw UnknownTask("#" + std::to_string(t.value));
      if (m.by_task_[t.value]) throw TaskMultiplyAssigned(inst.task_name(t));
      m.by_task_[t.value] = a;
    }
    if (!is_feasible(inst, a, alloc)) {
      throw InfeasibleAgentAllocation(inst.agent_name(a));
    }
  }
  m.by_agent_ = std::move(by_agent);
  return m;
}

std::size_t Matching::num_assigned_tasks() const {
  return static_cast<std::size_t>(
      std::count_if(by_task_.begin(), by_task_.end(),
                    [](const auto& a) { return a.has_value(); }));
}

// ---------------------------------------------------------------------------
// JSON

Matching parse_matching(std::string_view text, const Instance& inst) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("", "expected a JSON object");
  auto it = doc.find("matches");
  if (it == doc.end()) throw SchemaError("", "missing key 'matches'");
  if (!it->is_object()) throw SchemaError("matches", "expected an object");

  std::vector<TaskSet> by_agent(inst.num_agents());
  for (const auto& [name, list] : it->items()) {
    const std::string where = "matches/" + name;
    auto a = inst.find_agent(name);
    if (!a) throw SchemaError(where, "undeclared agent");
    if (!list.is_array()) throw SchemaError(where, "expected an array");
    std::vector<TaskId> tasks;
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (!list[i].is_string()) {
        throw SchemaError(where + "/" + std::to_string(i), "expected a string");
      }
      auto t = inst.find_task(list[i].get<std::string>());
      if (!t) {
        throw SchemaError(where + "/" + std::to_string(i),
                          "undeclared task '" + list[i].get<std::string>() + "'");
      }
      if (std::find(tasks.begin(), tasks.end(), *t) != tasks.end()) {
        throw SchemaError(where, "task '" + inst.task_name(*t) + "' listed twice");
      }
      tasks.push_back(*t);
    }
    by_agent[a->value] = TaskSet(std::move(tasks));
  }
  return Matching::from_allocations(inst, std::move(by_agent));
}

json matching_to_json(const Instance& inst, const Matching& m) {
  json matches = json::object();
  for (AgentId a : inst.agent_ids()) {
    json list = json::array();
    for (TaskId t : inst.preference_sorted(a, m.allocation(a))) {
      list.push_back(inst.task_name(t));
    }
    matches[inst.agent_name(a)] = std::move(list);
  }
  return json{{"matches", std::move(matches)}};
}

json stability_report_to_json(const Instance& inst, const StabilityReport& report) {
  json pairs = json::array();
  for (const BlockingPair& bp : report.blocking_pairs) {
    json witness = json::array();
    for (TaskId t : bp.witness) witness.push_back(inst.task_name(t));
    pairs.push_back(json{{"agent", inst.agent_name(bp.agent)},
                         {"task", inst.task_name(bp.task)},
                         {"witness", std::move(witness)}});
  }
  return json{{"stable", report.stable}, {"blocking_pairs", std::move(pairs)}};
}

// ---------------------------------------------------------------------------
// Stability

bool is_individually_rational(const Instance& inst, const Matching& m) {
  for (AgentId a : inst.agent_ids()) {
    if (choice(inst, a, m.allocation(a)) != m.allocation(a)) return false;
  }
  for (TaskId t : inst.task_ids()) {
    const auto current = m.assignee(t);
    std::vector<AgentId> offered;
    if (current) offered.push_back(*current);
    if (task_choice(inst, t, offered) != current) return false;
  }
  return true;
}

namespace {

// Both sides of the blocking condition, without the precondition checks.
std::optional<BlockingPair> blocking_test(const Instance& inst, const Matching& m,
                                          AgentId a, TaskId t) {
  const auto holder = m.assignee(t);
  if (holder && !inst.task_prefers(t, a, *holder)) return std::nullopt;

  // Prefix of the preference-sorted M(a) ∪ {t} that ends at t.
  std::vector<TaskId> prefix;
  for (TaskId u : inst.preference_sorted(a, m.allocation(a).with(t))) {
    prefix.push_back(u);
    if (u == t) break;
  }
  if (!inst.oracle(a).admits(TaskSet(prefix))) return std::nullopt;
  return BlockingPair{a, t, std::move(prefix)};
}

}  // namespace

std::optional<BlockingPair> is_blocking_pair(const Instance& inst,
                                             const Matching& m, AgentId a,
                                             TaskId t) {
  if (!inst.accepts(a, t)) {
    throw NotAcceptable(inst.agent_name(a), inst.task_name(t));
  }
  if (m.contains(a, t)) throw AlreadyMatched(inst.agent_name(a), inst.task_name(t));
  return blocking_test(inst, m, a, t);
}

StabilityReport check_stability(const Instance& inst, const Matching& m) {
  StabilityReport report;
  for (AgentId a : inst.agent_ids()) {
    for (TaskId t : inst.task_ids()) {
      if (!inst.accepts(a, t) || m.contains(a, t)) continue;
      if (auto bp = blocking_test(inst, m, a, t)) {
        report.blocking_pairs.push_back(std::move(*bp));
      }
    }
  }
  report.stable = report.blocking_pairs.empty();
  return report;
}

// ---------------------------------------------------------------------------
// Enumeration

std::uint64_t count_node_combinations(const std::vector<LexTree>& trees) {
  std::uint64_t total = 1;
  for (const LexTree& tree : trees) {
    if (tree.size() != 0 &&
        total > std::numeric_limits<std::uint64_t>::max() / tree.size()) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    total *= tree.size();
  }
  return total;
}

void for_each_matching(const Instance& inst, const std::vector<LexTree>& trees,
                       const MatchingVisitor& visit) {
  const std::size_t n = trees.size();
  std::vector<char> used(inst.num_tasks(), 0);
  std::vector<NodeIndex> chosen(n);
  std::vector<TaskSet> allocations(n);
  bool stopped = false;

  auto descend = [&](auto&& self, std::size_t k) -> void {
    if (stopped) return;
    if (k == n) {
      const Matching m = Matching::from_allocations(inst, allocations);
      if (!visit(m, chosen)) stopped = true;
      return;
    }
    for (NodeIndex node : trees[k].nodes_by_rank()) {
      const TaskSet& tasks = trees[k].node(node).tasks;
      if (std::any_of(tasks.begin(), tasks.end(),
                      [&](TaskId t) { return used[t.value] != 0; })) {
        continue;
      }
      for (TaskId t : tasks) used[t.value] = 1;
      chosen[k] = node;
      allocations[k] = tasks;
      self(self, k + 1);
      for (TaskId t : tasks) used[t.value] = 0;
      if (stopped) return;
    }
  };
  descend(descend, 0);
}

std::vector<Matching> enumerate_matchings(const Instance& inst,
                                          const TreeLimits& limits) {
  const auto trees = build_trees(inst, limits);
  std::vector<Matching> out;
  for_each_matching(inst, trees, [&](const Matching& m, auto) {
    out.push_back(m);
    return true;
  });
  return out;
}

std::vector<Matching> enumerate_stable(const Instance& inst,
                                       const TreeLimits& limits) {
  const auto trees = build_trees(inst, limits);
  std::vector<Matching> out;
  for_each_matching(inst, trees, [&](const Matching& m, auto) {
    if (check_stability(inst, m).stable) out.push_back(m);
    return true;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Domination

namespace {

// -1: x worse, 0: same, +1: x better, from task t's point of view.
int compare_for_task(const Instance& inst, TaskId t, std::optional<AgentId> x,
                     std::optional<AgentId> y) {
  if (x == y) return 0;
  if (!x) return -1;
  if (!y) return 1;
  return inst.task_prefers(t, *x, *y) ? 1 : -1;
}

int compare_for_agent(const Instance& inst, AgentId a, const TaskSet& x,
                      const TaskSet& y) {
  const auto order = compare_alloc(inst, a, x, y);
  if (order == std::strong_ordering::greater) return 1;
  if (order == std::strong_ordering::less) return -1;
  return 0;
}

}  // namespace

bool task_preferred(const Instance& inst, const Matching& m1, const Matching& m2) {
  for (TaskId t : inst.task_ids()) {
    if (compare_for_task(inst, t, m1.assignee(t), m2.assignee(t)) < 0) return false;
  }
  return true;
}

bool agent_preferred(const Instance& inst, const Matching& m1, const Matching& m2) {
  for (AgentId a : inst.agent_ids()) {
    if (compare_for_agent(inst, a, m1.allocation(a), m2.allocation(a)) < 0) {
      return false;
    }
  }
  return true;
}

bool strongly_task_preferred(const Instance& inst, const Matching& m1,
                             const Matching& m2) {
  if (!task_preferred(inst, m1, m2)) return false;
  for (TaskId t : inst.task_ids()) {
    if (compare_for_task(inst, t, m1.assignee(t), m2.assignee(t)) > 0) return true;
  }
  return false;
}

bool strongly_agent_preferred(const Instance& inst, const Matching& m1,
                              const Matching& m2) {
  if (!agent_preferred(inst, m1, m2)) return false;
  for (AgentId a : inst.agent_ids()) {
    if (compare_for_agent(inst, a, m1.allocation(a), m2.allocation(a)) > 0) {
      return true;
    }
  }
  return false;
}

}  // namespace lexmatch

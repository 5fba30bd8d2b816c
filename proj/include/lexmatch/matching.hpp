#ifndef LEXMATCH_MATCHING_HPP_
#define LEXMATCH_MATCHING_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "lexmatch/ids.hpp"
#include "lexmatch/instance.hpp"
#include "lexmatch/lextree.hpp"

namespace lexmatch {

// Each task has at most one agent, each agent holds a feasible set. The
// factory enforces both; a default-constructed matching is empty.
class Matching {
 public:
  Matching() = default;
  explicit Matching(const Instance& inst);

  // Throws TaskMultiplyAssigned or InfeasibleAgentAllocation.
  static Matching from_allocations(const Instance& inst,
                                   std::vector<TaskSet> by_agent);

  const TaskSet& allocation(AgentId a) const { return by_agent_.at(a.value); }
  std::optional<AgentId> assignee(TaskId t) const { return by_task_.at(t.value); }
  bool contains(AgentId a, TaskId t) const { return assignee(t) == a; }
  const std::vector<TaskSet>& allocations() const { return by_agent_; }
  std::size_t num_assigned_tasks() const;

  friend bool operator==(const Matching& x, const Matching& y) {
    return x.by_agent_ == y.by_agent_;
  }

 private:
  std::vector<TaskSet> by_agent_;
  std::vector<std::optional<AgentId>> by_task_;
};

struct BlockingPair {
  AgentId agent;
  TaskId task;
  // Preference-sorted prefix of M(a) ∪ {t} ending at t; feasible for a.
  std::vector<TaskId> witness;
};

struct StabilityReport {
  bool stable = true;
  std::vector<BlockingPair> blocking_pairs;
};

Matching parse_matching(std::string_view text, const Instance& inst);
// {"matches": {agent: [task, ...]}}; every agent listed, tasks best first.
nlohmann::json matching_to_json(const Instance& inst, const Matching& m);
nlohmann::json stability_report_to_json(const Instance& inst,
                                        const StabilityReport& report);

// Ch(x, M(x)) = M(x) for every agent and task. Always true for a valid
// matching; kept as an executable check.
bool is_individually_rational(const Instance& inst, const Matching& m);

// The pair blocks iff t prefers a to its current match (or is unassigned) and
// the prefix of M(a) ∪ {t} ending at t is feasible for a.
// Throws NotAcceptable if t ∉ T(a), AlreadyMatched if (a,t) ∈ M.
std::optional<BlockingPair> is_blocking_pair(const Instance& inst,
                                             const Matching& m, AgentId a,
                                             TaskId t);

// Scans E \ M, agents then tasks in declaration order, and lists every
// blocking pair.
StabilityReport check_stability(const Instance& inst, const Matching& m);

// Product of tree sizes (saturating).
std::uint64_t count_node_combinations(const std::vector<LexTree>& trees);

// Visits every valid matching once: one node per tree, task-disjoint. Agent 0
// varies slowest; within an agent, nodes go in rank order. The callback also
// receives the chosen node per agent and returns false to stop early.
using MatchingVisitor =
    std::function<bool(const Matching&, std::span<const NodeIndex>)>;
void for_each_matching(const Instance& inst, const std::vector<LexTree>& trees,
                       const MatchingVisitor& visit);

std::vector<Matching> enumerate_matchings(const Instance& inst,
                                          const TreeLimits& limits = {});
std::vector<Matching> enumerate_stable(const Instance& inst,
                                       const TreeLimits& limits = {});

// Matching domination orders. Weak forms allow equality everywhere, strong
// forms additionally need one strict improvement.
bool task_preferred(const Instance& inst, const Matching& m1, const Matching& m2);
bool agent_preferred(const Instance& inst, const Matching& m1, const Matching& m2);
bool strongly_task_preferred(const Instance& inst, const Matching& m1,
                             const Matching& m2);
bool strongly_agent_preferred(const Instance& inst, const Matching& m1,
                              const Matching& m2);

}  // namespace lexmatch

#endif  // LEXMATCH_MATCHING_HPP_

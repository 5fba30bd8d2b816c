#ifndef LEXMATCH_SUBSTITUTABILITY_HPP_
#define LEXMATCH_SUBSTITUTABILITY_HPP_

#include <cstddef>
#include <optional>
#include <vector>

#include "json.hpp"
#include "lexmatch/ids.hpp"
#include "lexmatch/instance.hpp"
#include "lexmatch/lextree.hpp"

namespace lexmatch {

inline constexpr std::size_t kDefaultMaxTasks = 12;

// t ∈ Ch(a,S) but t ∉ Ch(a, S ∖ {t'}).
struct DefWitness {
  TaskSet offered;
  TaskId kept;
  TaskId removed;
};

// In D(a;S), node n and its closest right sibling n̂ with
// T(l(n;S)) ∖ T(n) ⊄ T(l(n̂;S)). Paths are best task first.
struct TreeWitness {
  TaskSet offered;
  std::vector<TaskId> node;
  std::vector<TaskId> sibling;
  TaskSet node_leaf;
  TaskSet sibling_leaf;
};

struct SubstReport {
  AgentId agent;
  bool substitutable = true;
  std::optional<DefWitness> def_witness;
  std::optional<TreeWitness> tree_witness;
};

// Subsets of T(a) with at least two tasks, by size and then lexicographically
// in declaration order. Throws TooLarge if |T(a)| > max_tasks.
std::vector<TaskSet> canonical_subsets(const Instance& inst, AgentId a,
                                       std::size_t max_tasks = kDefaultMaxTasks);

// Checks the choice-function definition over every S and every t ∈ Ch(a,S),
// t' ∈ S ∖ {t}, both in declaration order. The first violation is the
// witness.
SubstReport is_substitutable_def(const Instance& inst, AgentId a,
                                 std::size_t max_tasks = kDefaultMaxTasks);

// Sibling-leaf containment on D(a;S) for every S; nodes are visited in
// pre-order and nodes without a right sibling pass.
SubstReport is_substitutable_tree(const Instance& inst, AgentId a,
                                  std::size_t max_tasks = kDefaultMaxTasks);

// The tree condition for one offered set; `tree` is the full D(a).
std::optional<TreeWitness> tree_condition_violation(const LexTree& tree,
                                                    const TaskSet& offered);

struct SubstSummary {
  std::vector<SubstReport> reports;  // one per agent, declaration order
  bool all_substitutable = true;
};

// Tree check for every agent.
SubstSummary check_all_agents(const Instance& inst,
                              std::size_t max_tasks = kDefaultMaxTasks);

// Re-checks a witness against its defining condition.
bool verify_witness(const Instance& inst, AgentId a, const DefWitness& w);
bool verify_witness(const Instance& inst, AgentId a, const TreeWitness& w);

nlohmann::json subst_report_to_json(const Instance& inst, const SubstReport& report);

}  // namespace lexmatch

#endif  // LEXMATCH_SUBSTITUTABILITY_HPP_

#ifndef LEXMATCH_INSTANCE_HPP_
#define LEXMATCH_INSTANCE_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lexmatch/ids.hpp"

namespace lexmatch {

enum class OracleKind { kMaximalSets, kKnapsack };

std::string_view to_string(OracleKind kind);

// Membership test for the feasibility family F(a) of one agent. The family is
// downward closed by construction: a maximal_sets oracle admits every subset
// of a listed set, a knapsack oracle admits every set whose total size fits.
//
// Oracles are immutable. Answers are memoized in a cache shared between
// copies, which is sound because copies share the same definition.
class FeasibilityOracle {
 public:
  // Dominated and duplicate sets are dropped; the surviving sets keep their
  // input order.
  static FeasibilityOracle maximal_sets(std::vector<TaskSet> sets);
  static FeasibilityOracle knapsack(std::int64_t capacity,
                                    std::map<TaskId, std::int64_t> sizes);

  OracleKind kind() const { return kind_; }
  const std::vector<TaskSet>& sets() const { return sets_; }
  std::int64_t capacity() const { return capacity_; }
  const std::map<TaskId, std::int64_t>& sizes() const { return sizes_; }

  // Raw membership of `s` in the represented family. Does not consult the
  // agent's acceptable set; see is_feasible() for the full query.
  bool admits(const TaskSet& s) const;

  friend bool operator==(const FeasibilityOracle& a,
                         const FeasibilityOracle& b) {
    return a.kind_ == b.kind_ && a.sets_ == b.sets_ &&
           a.capacity_ == b.capacity_ && a.sizes_ == b.sizes_;
  }

 private:
  struct Memo;

  FeasibilityOracle();
  bool evaluate(const TaskSet& s) const;

  OracleKind kind_ = OracleKind::kMaximalSets;
  std::vector<TaskSet> sets_;
  std::int64_t capacity_ = 0;
  std::map<TaskId, std::int64_t> sizes_;
  std::shared_ptr<Memo> memo_;
};

// The problem datum: agents, tasks, both sides' strict preference lists and
// one feasibility oracle per agent. Identifiers are opaque strings; AgentId
// and TaskId index their declaration order.
//
// Construction only checks structural shape (list sizes, index ranges used for
// lookup tables). Semantic invariants are checked by validate().
class Instance {
 public:
  Instance() = default;
  Instance(std::vector<std::string> agents, std::vector<std::string> tasks,
           std::vector<std::vector<AgentId>> task_prefs,
           std::vector<std::vector<TaskId>> agent_prefs,
           std::vector<FeasibilityOracle> feasibility);

  std::size_t num_agents() const { return agents_.size(); }
  std::size_t num_tasks() const { return tasks_.size(); }
  std::vector<AgentId> agent_ids() const;
  std::vector<TaskId> task_ids() const;

  const std::string& agent_name(AgentId a) const;
  const std::string& task_name(TaskId t) const;
  const std::vector<std::string>& agent_names() const { return agents_; }
  const std::vector<std::string>& task_names() const { return tasks_; }

  std::optional<AgentId> find_agent(std::string_view name) const;
  std::optional<TaskId> find_task(std::string_view name) const;
  // Throwing lookups (UnknownAgent / UnknownTask).
  AgentId agent(std::string_view name) const;
  TaskId task(std::string_view name) const;
  bool has_agent(AgentId a) const { return a.value < agents_.size(); }
  bool has_task(TaskId t) const { return t.value < tasks_.size(); }

  // T(a) and A(t), most preferred first.
  std::span<const TaskId> acceptable_tasks(AgentId a) const;
  std::span<const AgentId> acceptable_agents(TaskId t) const;
  const FeasibilityOracle& oracle(AgentId a) const;

  // Position of t in T(a) (0 = most preferred); nullopt if not acceptable.
  std::optional<std::size_t> task_position(AgentId a, TaskId t) const;
  std::optional<std::size_t> agent_position(TaskId t, AgentId a) const;
  bool accepts(AgentId a, TaskId t) const {
    return task_position(a, t).has_value();
  }

  // t1 >_a t2 (both must be acceptable to a).
  bool agent_prefers(AgentId a, TaskId t1, TaskId t2) const;
  // a1 >_t a2 (both must be acceptable to t).
  bool task_prefers(TaskId t, AgentId a1, AgentId a2) const;

  // Tasks of `s` that are acceptable to `a`, in decreasing preference.
  std::vector<TaskId> preference_sorted(AgentId a, const TaskSet& s) const;

  friend bool operator==(const Instance& x, const Instance& y) {
    return x.agents_ == y.agents_ && x.tasks_ == y.tasks_ &&
           x.task_prefs_ == y.task_prefs_ && x.agent_prefs_ == y.agent_prefs_ &&
           x.feasibility_ == y.feasibility_;
  }

  const std::vector<std::vector<AgentId>>& task_prefs() const {
    return task_prefs_;
  }
  const std::vector<std::vector<TaskId>>& agent_prefs() const {
    return agent_prefs_;
  }
  const std::vector<FeasibilityOracle>& feasibility() const {
    return feasibility_;
  }

 private:
  static constexpr std::uint32_t kNoPosition = UINT32_MAX;

  std::vector<std::string> agents_;
  std::vector<std::string> tasks_;
  std::vector<std::vector<AgentId>> task_prefs_;
  std::vector<std::vector<TaskId>> agent_prefs_;
  std::vector<FeasibilityOracle> feasibility_;

  std::unordered_map<std::string, AgentId> agent_lookup_;
  std::unordered_map<std::string, TaskId> task_lookup_;
  // task_position_[a][t], agent_position_[t][a]; first occurrence wins when a
  // list (invalidly) repeats an entry.
  std::vector<std::vector<std::uint32_t>> task_position_;
  std::vector<std::vector<std::uint32_t>> agent_position_;
};

enum class Severity { kWarning, kError };

struct ValidationIssue {
  Severity severity = Severity::kError;
  std::string location;
  std::string message;
};

struct ValidationReport {
  bool ok = true;
  std::vector<ValidationIssue> issues;
};

// Parses the JSON instance format. Only the document shape and identifier
// references are checked; run validate() for the semantic invariants.
Instance parse_instance(std::string_view text);
// Canonical JSON: keys sorted, arrays in declaration order, two-space indent.
std::string serialize_instance(const Instance& inst);

ValidationReport validate(const Instance& inst);

// S ∈ F(a). Sets containing a task outside T(a) are infeasible.
bool is_feasible(const Instance& inst, AgentId a, const TaskSet& s);

// E = {(a,t) : t ∈ T(a)}, agents then tasks in preference order.
std::vector<std::pair<AgentId, TaskId>> acceptable_pairs(const Instance& inst);

enum class GeneratedOracle { kMaximalSets, kKnapsack, kMixed };

struct GeneratorParams {
  std::size_t n_agents = 2;
  std::size_t n_tasks = 2;
  GeneratedOracle oracle = GeneratedOracle::kMaximalSets;
  // Probability that a given (agent, task) pair is acceptable.
  double density = 1.0;
  std::size_t max_set_size = 3;
  std::int64_t capacity_min = 1;
  std::int64_t capacity_max = 4;
};

// Deterministic for a fixed seed; the result always passes validate().
Instance generate_random(const GeneratorParams& params, std::uint64_t seed);

}  // namespace lexmatch

#endif  // LEXMATCH_INSTANCE_HPP_

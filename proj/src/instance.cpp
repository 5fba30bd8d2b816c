#include "lexmatch/instance.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <shared_mutex>
#include <unordered_set>

#include "lexmatch/error.hpp"

namespace lexmatch {

std::string_view to_string(OracleKind kind) {
  switch (kind) {
    case OracleKind::kMaximalSets:
      return "maximal_sets";
    case OracleKind::kKnapsack:
      return "knapsack";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// FeasibilityOracle

struct FeasibilityOracle::Memo {
  std::shared_mutex mutex;
  std::unordered_map<TaskSet, bool, TaskSetHash> answers;
};

FeasibilityOracle::FeasibilityOracle() : memo_(std::make_shared<Memo>()) {}

FeasibilityOracle FeasibilityOracle::maximal_sets(std::vector<TaskSet> sets) {
  FeasibilityOracle oracle;
  oracle.kind_ = OracleKind::kMaximalSets;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < sets.size() && !dominated; ++j) {
      if (i == j || !sets[i].is_subset_of(sets[j])) continue;
      // Strictly contained, or an equal set listed earlier.
      dominated = sets[i].size() < sets[j].size() || j < i;
    }
    if (!dominated) oracle.sets_.push_back(sets[i]);
  }
  return oracle;
}

FeasibilityOracle FeasibilityOracle::knapsack(
    std::int64_t capacity, std::map<TaskId, std::int64_t> sizes) {
  FeasibilityOracle oracle;
  oracle.kind_ = OracleKind::kKnapsack;
  oracle.capacity_ = capacity;
  oracle.sizes_ = std::move(sizes);
  return oracle;
}

bool FeasibilityOracle::evaluate(const TaskSet& s) const {
  if (s.empty()) return true;
  switch (kind_) {
    case OracleKind::kMaximalSets:
      return std::any_of(sets_.begin(), sets_.end(),
                         [&](const TaskSet& m) { return s.is_subset_of(m); });
    case OracleKind::kKnapsack: {
      std::int64_t total = 0;
      for (TaskId t : s) {
        auto it = sizes_.find(t);
        if (it == sizes_.end()) return false;
        total += it->second;
        if (total > capacity_) return false;
      }
      return true;
    }
  }
  return false;
}

bool FeasibilityOracle::admits(const TaskSet& s) const {
  {
    std::shared_lock lock(memo_->mutex);
    auto it = memo_->answers.find(s);
    if (it != memo_->answers.end()) return it->second;
  }
  const bool answer = evaluate(s);
  std::unique_lock lock(memo_->mutex);
  memo_->answers.emplace(s, answer);
  return answer;
}

// ---------------------------------------------------------------------------
// Instance

Instance::Instance(std::vector<std::string> agents,
                   std::vector<std::string> tasks,
                   std::vector<std::vector<AgentId>> task_prefs,
                   std::vector<std::vector<TaskId>> agent_prefs,
                   std::vector<FeasibilityOracle> feasibility)
    : agents_(std::move(agents)),
      tasks_(std::move(tasks)),
      task_prefs_(std::move(task_prefs)),
      agent_prefs_(std::move(agent_prefs)),
      feasibility_(std::move(feasibility)) {
  if (task_prefs_.size() != tasks_.size() ||
      agent_prefs_.size() != agents_.size() ||
      feasibility_.size() != agents_.size()) {
    throw Error("instance: per-agent/per-task tables do not match declarations");
  }
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    if (!agent_lookup_.emplace(agents_[i], AgentId{static_cast<std::uint32_t>(i)})
             .second) {
      throw Error("instance: duplicate agent '" + agents_[i] + "'");
    }
  }
  for (std::size_t i = 0; i < tasks_.size(); ++i) {
    if (!task_lookup_.emplace(tasks_[i], TaskId{static_cast<std::uint32_t>(i)})
             .second) {
      throw Error("instance: duplicate task '" + tasks_[i] + "'");
    }
  }

  task_position_.assign(agents_.size(),
                        std::vector<std::uint32_t>(tasks_.size(), kNoPosition));
  agent_position_.assign(tasks_.size(),
                         std::vector<std::uint32_t>(agents_.size(), kNoPosition));
  for (std::size_t a = 0; a < agents_.size(); ++a) {
    const auto& prefs = agent_prefs_[a];
    for (std::size_t k = 0; k < prefs.size(); ++k) {
      if (!has_task(prefs[k])) throw Error("instance: task index out of range");
      auto& slot = task_position_[a][prefs[k].value];
      if (slot == kNoPosition) slot = static_cast<std::uint32_t>(k);
    }
  }
  for (std::size_t t = 0; t < tasks_.size(); ++t) {
    const auto& prefs = task_prefs_[t];
    for (std::size_t k = 0; k < prefs.size(); ++k) {
      if (!has_agent(prefs[k])) throw Error("instance: agent index out of range");
      auto& slot = agent_position_[t][prefs[k].value];
      if (slot == kNoPosition) slot = static_cast<std::uint32_t>(k);
    }
  }
}

std::vector<AgentId> Instance::agent_ids() const {
  std::vector<AgentId> ids(agents_.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    ids[i] = AgentId{static_cast<std::uint32_t>(i)};
  }
  return ids;
}

std::vector<TaskId> Instance::task_ids() const {
  std::vector<TaskId> ids(tasks_.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    ids[i] = TaskId{static_cast<std::uint32_t>(i)};
  }
  return ids;
}

const std::string& Instance::agent_name(AgentId a) const {
  if (!has_agent(a)) throw UnknownAgent("#" + std::to_string(a.value));
  return agents_[a.value];
}

const std::string& Instance::task_name(TaskId t) const {
  if (!has_task(t)) throw UnknownTask("#" + std::to_string(t.value));
  return tasks_[t.value];
}

std::optional<AgentId> Instance::find_agent(std::string_view name) const {
  auto it = agent_lookup_.find(std::string(name));
  if (it == agent_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<TaskId> Instance::find_task(std::string_view name) const {
  auto it = task_lookup_.find(std::string(name));
  if (it == task_lookup_.end()) return std::nullopt;
  return it->second;
}

AgentId Instance::agent(std::string_view name) const {
  auto a = find_agent(name);
  if (!a) throw UnknownAgent(std::string(name));
  return *a;
}

TaskId Instance::task(std::string_view name) const {
  auto t = find_task(name);
  if (!t) throw UnknownTask(std::string(name));
  return *t;
}

std::span<const TaskId> Instance::acceptable_tasks(AgentId a) const {
  if (!has_agent(a)) throw UnknownAgent("#" + std::to_string(a.value));
  return agent_prefs_[a.value];
}

std::span<const AgentId> Instance::acceptable_agents(TaskId t) const {
  if (!has_task(t)) throw UnknownTask("#" + std::to_string(t.value));
  return task_prefs_[t.value];
}

const FeasibilityOracle& Instance::oracle(AgentId a) const {
  if (!has_agent(a)) throw UnknownAgent("#" + std::to_string(a.value));
  return feasibility_[a.value];
}

std::optional<std::size_t> Instance::task_position(AgentId a, TaskId t) const {
  if (!has_agent(a) || !has_task(t)) return std::nullopt;
  const std::uint32_t p = task_position_[a.value][t.value];
  if (p == kNoPosition) return std::nullopt;
  return p;
}

std::optional<std::size_t> Instance::agent_position(TaskId t, AgentId a) const {
  if (!has_agent(a) || !has_task(t)) return std::nullopt;
  const std::uint32_t p = agent_position_[t.value][a.value];
  if (p == kNoPosition) return std::nullopt;
  return p;
}

bool Instance::agent_prefers(AgentId a, TaskId t1, TaskId t2) const {
  return task_position_[a.value][t1.value] < task_position_[a.value][t2.value];
}

bool Instance::task_prefers(TaskId t, AgentId a1, AgentId a2) const {
  return agent_position_[t.value][a1.value] < agent_position_[t.value][a2.value];
}

std::vector<TaskId> Instance::preference_sorted(AgentId a,
                                                const TaskSet& s) const {
  std::vector<TaskId> out;
  out.reserve(s.size());
  for (TaskId t : s) {
    if (accepts(a, t)) out.push_back(t);
  }
  const auto& pos = task_position_[a.value];
  std::sort(out.begin(), out.end(), [&](TaskId x, TaskId y) {
    return pos[x.value] < pos[y.value];
  });
  return out;
}

// ---------------------------------------------------------------------------
// Queries

bool is_feasible(const Instance& inst, AgentId a, const TaskSet& s) {
  if (!inst.has_agent(a)) throw UnknownAgent("#" + std::to_string(a.value));
  for (TaskId t : s) {
    if (!inst.accepts(a, t)) return false;
  }
  return inst.oracle(a).admits(s);
}

std::vector<std::pair<AgentId, TaskId>> acceptable_pairs(const Instance& inst) {
  std::vector<std::pair<AgentId, TaskId>> pairs;
  for (AgentId a : inst.agent_ids()) {
    for (TaskId t : inst.acceptable_tasks(a)) pairs.emplace_back(a, t);
  }
  return pairs;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

class ReportBuilder {
 public:
  void error(std::string location, std::string message) {
    report_.ok = false;
    report_.issues.push_back(
        {Severity::kError, std::move(location), std::move(message)});
  }
  void warning(std::string location, std::string message) {
    report_.issues.push_back(
        {Severity::kWarning, std::move(location), std::move(message)});
  }
  ValidationReport take() { return std::move(report_); }

 private:
  ValidationReport report_;
};

}  // namespace

ValidationReport validate(const Instance& inst) {
  ReportBuilder report;

  for (AgentId a : inst.agent_ids()) {
    const std::string where = "agent_prefs/" + inst.agent_name(a);
    std::unordered_set<TaskId> seen;
    for (TaskId t : inst.acceptable_tasks(a)) {
      if (!seen.insert(t).second) {
        report.error(where, "duplicate task '" + inst.task_name(t) +
                                "' in preference list");
        continue;
      }
      if (!inst.agent_position(t, a)) {
        report.error(where, "mutual consistency: '" + inst.task_name(t) +
                                "' is in T(" + inst.agent_name(a) + ") but '" +
                                inst.agent_name(a) + "' is not in A(" +
                                inst.task_name(t) + ")");
      }
    }
  }

  for (TaskId t : inst.task_ids()) {
    const std::string where = "task_prefs/" + inst.task_name(t);
    std::unordered_set<AgentId> seen;
    for (AgentId a : inst.acceptable_agents(t)) {
      if (!seen.insert(a).second) {
        report.error(where, "duplicate agent '" + inst.agent_name(a) +
                                "' in preference list");
        continue;
      }
      if (!inst.task_position(a, t)) {
        report.error(where, "mutual consistency: '" + inst.agent_name(a) +
                                "' is in A(" + inst.task_name(t) + ") but '" +
                                inst.task_name(t) + "' is not in T(" +
                                inst.agent_name(a) + ")");
      }
    }
  }

  for (AgentId a : inst.agent_ids()) {
    const std::string where = "feasibility/" + inst.agent_name(a);
    const FeasibilityOracle& oracle = inst.oracle(a);
    switch (oracle.kind()) {
      case OracleKind::kMaximalSets:
        for (const TaskSet& set : oracle.sets()) {
          for (TaskId t : set) {
            if (!inst.accepts(a, t)) {
              report.error(where, "maximal set contains task '" +
                                      inst.task_name(t) +
                                      "' outside the acceptable set");
            }
          }
        }
        break;
      case OracleKind::kKnapsack:
        if (oracle.capacity() < 0) {
          report.error(where, "negative capacity");
        }
        for (const auto& [t, size] : oracle.sizes()) {
          if (size <= 0) {
            report.error(where, "size of task '" + inst.task_name(t) +
                                    "' must be positive");
          }
          if (!inst.accepts(a, t)) {
            report.warning(where, "size given for task '" + inst.task_name(t) +
                                      "' outside the acceptable set");
          }
        }
        for (TaskId t : inst.acceptable_tasks(a)) {
          if (!oracle.sizes().contains(t)) {
            report.error(where, "missing size for task '" + inst.task_name(t) +
                                    "'");
          }
        }
        break;
    }
    if (!oracle.admits(TaskSet{})) {
      report.error(where, "empty allocation is not feasible");
    }
    for (TaskId t : inst.acceptable_tasks(a)) {
      if (!oracle.admits(TaskSet{t})) {
        report.error(where, "infeasible singleton: {" + inst.task_name(t) +
                                "} is not a feasible allocation");
      }
    }
  }
  return report.take();
}

}  // namespace lexmatch

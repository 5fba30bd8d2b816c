#ifndef LEXMATCH_IDS_HPP_
#define LEXMATCH_IDS_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <vector>

namespace lexmatch {

// Agents and tasks are referred to by their position in the declaration order
// of the instance. The wrappers keep the two index spaces from mixing.
struct AgentId {
  std::uint32_t value = 0;
  friend auto operator<=>(AgentId, AgentId) = default;
};

struct TaskId {
  std::uint32_t value = 0;
  friend auto operator<=>(TaskId, TaskId) = default;
};

// A set of tasks, kept sorted by declaration index and duplicate free. This is
// the canonical encoding used for equality, hashing and memoization. Agent
// preference order is a separate concern (see Instance::preference_sorted).
class TaskSet {
 public:
  TaskSet() = default;
  TaskSet(std::initializer_list<TaskId> tasks);
  explicit TaskSet(std::vector<TaskId> tasks);

  bool empty() const { return tasks_.empty(); }
  std::size_t size() const { return tasks_.size(); }
  bool contains(TaskId t) const;
  bool is_subset_of(const TaskSet& other) const;
  bool intersects(const TaskSet& other) const;

  TaskSet with(TaskId t) const;
  TaskSet without(TaskId t) const;
  TaskSet united(const TaskSet& other) const;
  TaskSet minus(const TaskSet& other) const;

  auto begin() const { return tasks_.begin(); }
  auto end() const { return tasks_.end(); }
  const std::vector<TaskId>& items() const { return tasks_; }

  friend bool operator==(const TaskSet&, const TaskSet&) = default;
  friend auto operator<=>(const TaskSet& a, const TaskSet& b) {
    return a.tasks_ <=> b.tasks_;
  }

 private:
  std::vector<TaskId> tasks_;
};

struct TaskSetHash {
  std::size_t operator()(const TaskSet& s) const noexcept;
};

}  // namespace lexmatch

template <>
struct std::hash<lexmatch::AgentId> {
  std::size_t operator()(lexmatch::AgentId a) const noexcept {
    return std::hash<std::uint32_t>{}(a.value);
  }
};

template <>
struct std::hash<lexmatch::TaskId> {
  std::size_t operator()(lexmatch::TaskId t) const noexcept {
    return std::hash<std::uint32_t>{}(t.value);
  }
};

#endif  // LEXMATCH_IDS_HPP_

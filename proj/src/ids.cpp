#include "lexmatch/ids.hpp"

#include <algorithm>
#include <iterator>
#include <utility>

namespace lexmatch {

TaskSet::TaskSet(std::initializer_list<TaskId> tasks)
    : TaskSet(std::vector<TaskId>(tasks)) {}

TaskSet::TaskSet(std::vector<TaskId> tasks) : tasks_(std::move(tasks)) {
  std::sort(tasks_.begin(), tasks_.end());
  tasks_.erase(std::unique(tasks_.begin(), tasks_.end()), tasks_.end());
}

bool TaskSet::contains(TaskId t) const {
  return std::binary_search(tasks_.begin(), tasks_.end(), t);
}

bool TaskSet::is_subset_of(const TaskSet& other) const {
  return std::includes(other.tasks_.begin(), other.tasks_.end(),
                       tasks_.begin(), tasks_.end());
}

bool TaskSet::intersects(const TaskSet& other) const {
  auto i = tasks_.begin();
  auto j = other.tasks_.begin();
  while (i != tasks_.end() && j != other.tasks_.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      return true;
    }
  }
  return false;
}

TaskSet TaskSet::with(TaskId t) const {
  TaskSet out;
  out.tasks_.reserve(tasks_.size() + 1);
  auto pos = std::lower_bound(tasks_.begin(), tasks_.end(), t);
  out.tasks_.assign(tasks_.begin(), pos);
  if (pos == tasks_.end() || *pos != t) out.tasks_.push_back(t);
  out.tasks_.insert(out.tasks_.end(), pos, tasks_.end());
  return out;
}

TaskSet TaskSet::without(TaskId t) const {
  TaskSet out;
  out.tasks_.reserve(tasks_.size());
  for (TaskId u : tasks_) {
    if (u != t) out.tasks_.push_back(u);
  }
  return out;
}

TaskSet TaskSet::united(const TaskSet& other) const {
  TaskSet out;
  std::set_union(tasks_.begin(), tasks_.end(), other.tasks_.begin(),
                 other.tasks_.end(), std::back_inserter(out.tasks_));
  return out;
}

TaskSet TaskSet::minus(const TaskSet& other) const {
  TaskSet out;
  std::set_difference(tasks_.begin(), tasks_.end(), other.tasks_.begin(),
                      other.tasks_.end(), std::back_inserter(out.tasks_));
  return out;
}

std::size_t TaskSetHash::operator()(const TaskSet& s) const noexcept {
  // FNV-1a over the sorted indices.
  std::size_t h = 1469598103934665603ull;
  for (TaskId t : s) {
    h ^= t.value;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace lexmatch

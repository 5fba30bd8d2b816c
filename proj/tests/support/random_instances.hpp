#ifndef LEXMATCH_TESTS_RANDOM_INSTANCES_HPP_
#define LEXMATCH_TESTS_RANDOM_INSTANCES_HPP_

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "lexmatch/instance.hpp"

namespace gen {

using lexmatch::AgentId;
using lexmatch::FeasibilityOracle;
using lexmatch::Instance;
using lexmatch::TaskId;
using lexmatch::TaskSet;

enum class Oracles { kSets, kKnapsack, kMixed };

struct Shape {
  std::size_t min_agents = 1;
  std::size_t max_agents = 3;
  std::size_t min_tasks = 1;
  std::size_t max_tasks = 5;
  Oracles oracles = Oracles::kMixed;
  // Density is drawn from these choices per instance.
  std::vector<double> densities{0.5, 0.75, 1.0};
};

inline std::size_t uniform(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline FeasibilityOracle random_sets(std::mt19937_64& rng, const std::vector<TaskId>& pool) {
  std::vector<TaskSet> sets;
  if (!pool.empty()) {
    const std::size_t count = uniform(rng, 1, 3);
    for (std::size_t i = 0; i < count; ++i) {
      std::vector<TaskId> s;
      for (TaskId t : pool) {
        if (uniform(rng, 0, 1) == 1) s.push_back(t);
      }
      if (s.empty()) s.push_back(pool[uniform(rng, 0, pool.size() - 1)]);
      sets.emplace_back(std::move(s));
    }
  }
  for (TaskId t : pool) {
    if (std::none_of(sets.begin(), sets.end(), [&](const TaskSet& s) { return s.contains(t); })) {
      sets.push_back(TaskSet{t});
    }
  }
  return FeasibilityOracle::maximal_sets(std::move(sets));
}

inline FeasibilityOracle random_knapsack(std::mt19937_64& rng, const std::vector<TaskId>& pool) {
  const auto capacity = static_cast<std::int64_t>(uniform(rng, 1, 5));
  std::map<TaskId, std::int64_t> sizes;
  for (TaskId t : pool) {
    sizes[t] = static_cast<std::int64_t>(uniform(rng, 1, static_cast<std::size_t>(capacity)));
  }
  return FeasibilityOracle::knapsack(capacity, std::move(sizes));
}

inline Instance random_instance(std::mt19937_64& rng, const Shape& shape) {
  const std::size_t na = uniform(rng, shape.min_agents, shape.max_agents);
  const std::size_t nt = uniform(rng, shape.min_tasks, shape.max_tasks);
  const double density = shape.densities[uniform(rng, 0, shape.densities.size() - 1)];
  std::bernoulli_distribution accept(density);

  std::vector<std::string> agents, tasks;
  for (std::size_t i = 0; i < na; ++i) agents.push_back("a" + std::to_string(i + 1));
  for (std::size_t i = 0; i < nt; ++i) tasks.push_back("t" + std::to_string(i + 1));

  std::vector<std::vector<TaskId>> agent_prefs(na);
  std::vector<std::vector<AgentId>> task_prefs(nt);
  for (std::uint32_t a = 0; a < na; ++a) {
    for (std::uint32_t t = 0; t < nt; ++t) {
      if (accept(rng)) {
        agent_prefs[a].push_back(TaskId{t});
        task_prefs[t].push_back(AgentId{a});
      }
    }
  }
  for (auto& list : agent_prefs) std::shuffle(list.begin(), list.end(), rng);
  for (auto& list : task_prefs) std::shuffle(list.begin(), list.end(), rng);

  std::vector<FeasibilityOracle> feasibility;
  for (std::size_t a = 0; a < na; ++a) {
    bool sets = shape.oracles == Oracles::kSets;
    if (shape.oracles == Oracles::kMixed) sets = uniform(rng, 0, 1) == 0;
    feasibility.push_back(sets ? random_sets(rng, agent_prefs[a])
                               : random_knapsack(rng, agent_prefs[a]));
  }
  return Instance(std::move(agents), std::move(tasks), std::move(task_prefs),
                  std::move(agent_prefs), std::move(feasibility));
}

// A corpus that is the same on every run.
inline std::vector<Instance> corpus(std::uint64_t seed, std::size_t count, const Shape& shape) {
  std::mt19937_64 rng(seed);
  std::vector<Instance> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_instance(rng, shape));
  return out;
}

}  // namespace gen

#endif  // LEXMATCH_TESTS_RANDOM_INSTANCES_HPP_

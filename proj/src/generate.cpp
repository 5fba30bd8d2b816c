#include <algorithm>
#include <random>
#include <string>

#include "lexmatch/error.hpp"
#include "lexmatch/instance.hpp"

namespace lexmatch {

namespace {

std::size_t uniform(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

FeasibilityOracle random_maximal_sets(const std::vector<TaskId>& acceptable,
                                      std::size_t max_set_size,
                                      std::mt19937_64& rng) {
  std::vector<TaskSet> sets;
  if (!acceptable.empty()) {
    const std::size_t count = uniform(rng, 1, acceptable.size());
    const std::size_t cap = std::min(max_set_size, acceptable.size());
    for (std::size_t k = 0; k < count; ++k) {
      std::vector<TaskId> pool = acceptable;
      std::shuffle(pool.begin(), pool.end(), rng);
      pool.resize(uniform(rng, 1, cap));
      sets.emplace_back(std::move(pool));
    }
  }
  // Every acceptable task must be allocable on its own.
  for (TaskId t : acceptable) {
    const bool covered = std::any_of(sets.begin(), sets.end(),
                                     [&](const TaskSet& s) { return s.contains(t); });
    if (!covered) sets.push_back(TaskSet{t});
  }
  return FeasibilityOracle::maximal_sets(std::move(sets));
}

FeasibilityOracle random_knapsack(const std::vector<TaskId>& acceptable,
                                  std::int64_t capacity_min,
                                  std::int64_t capacity_max,
                                  std::mt19937_64& rng) {
  const std::int64_t capacity =
      std::uniform_int_distribution<std::int64_t>(capacity_min, capacity_max)(rng);
  std::map<TaskId, std::int64_t> sizes;
  for (TaskId t : acceptable) {
    sizes[t] = std::uniform_int_distribution<std::int64_t>(1, capacity)(rng);
  }
  return FeasibilityOracle::knapsack(capacity, std::move(sizes));
}

}  // namespace

Instance generate_random(const GeneratorParams& params, std::uint64_t seed) {
  if (params.n_agents == 0 || params.n_tasks == 0) {
    throw InvalidParams("agent and task counts must be positive");
  }
  if (!(params.density > 0.0 && params.density <= 1.0)) {
    throw InvalidParams("density must lie in (0, 1]");
  }
  if (params.max_set_size == 0) {
    throw InvalidParams("max_set_size must be positive");
  }
  if (params.capacity_min < 1 || params.capacity_max < params.capacity_min) {
    throw InvalidParams("capacity range must satisfy 1 <= min <= max");
  }

  std::mt19937_64 rng(seed);
  std::bernoulli_distribution acceptable_coin(params.density);

  std::vector<std::string> agents;
  std::vector<std::string> tasks;
  for (std::size_t i = 0; i < params.n_agents; ++i) {
    agents.push_back("a" + std::to_string(i + 1));
  }
  for (std::size_t j = 0; j < params.n_tasks; ++j) {
    tasks.push_back("t" + std::to_string(j + 1));
  }

  std::vector<std::vector<TaskId>> agent_prefs(params.n_agents);
  std::vector<std::vector<AgentId>> task_prefs(params.n_tasks);
  for (std::size_t i = 0; i < params.n_agents; ++i) {
    for (std::size_t j = 0; j < params.n_tasks; ++j) {
      if (params.density >= 1.0 || acceptable_coin(rng)) {
        agent_prefs[i].push_back(TaskId{static_cast<std::uint32_t>(j)});
        task_prefs[j].push_back(AgentId{static_cast<std::uint32_t>(i)});
      }
    }
  }

  std::vector<FeasibilityOracle> feasibility;
  for (std::size_t i = 0; i < params.n_agents; ++i) {
    const std::vector<TaskId> acceptable = agent_prefs[i];
    bool knapsack = params.oracle == GeneratedOracle::kKnapsack;
    if (params.oracle == GeneratedOracle::kMixed) {
      knapsack = std::bernoulli_distribution(0.5)(rng);
    }
    feasibility.push_back(
        knapsack ? random_knapsack(acceptable, params.capacity_min,
                                   params.capacity_max, rng)
                 : random_maximal_sets(acceptable, params.max_set_size, rng));
  }

  // Uniformly random strict orders over each acceptable set.
  for (auto& prefs : agent_prefs) std::shuffle(prefs.begin(), prefs.end(), rng);
  for (auto& prefs : task_prefs) std::shuffle(prefs.begin(), prefs.end(), rng);

  return Instance(std::move(agents), std::move(tasks), std::move(task_prefs),
                  std::move(agent_prefs), std::move(feasibility));
}

}  // namespace lexmatch

#include "lexmatch/solver.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <set>
#include <thread>

#include "lexmatch/error.hpp"

namespace lexmatch {

namespace {

using Clock = std::chrono::steady_clock;

// Row and variable incidence derived once from the model and shared by all
// workers.
struct SearchProblem {
  SearchProblem(const Instance& inst, const IPModel& model, SolveMode mode)
      : model(model), strict(mode == SolveMode::kStrict),
        penalty(model.blocking_penalty) {
    const std::size_t num_agents = inst.num_agents();
    agent_vars.resize(num_agents);
    lhs_rows_of_agent.resize(num_agents);
    rhs_rows_of_agent.resize(num_agents);
    rows_of_task.resize(inst.num_tasks());
    lhs_rows_of_var.resize(model.x_vars.size());
    rhs_rows_of_var.resize(model.x_vars.size());

    for (const LinearRow& row : model.rows) {
      if (row.kind == RowKind::kAgentAssignment) {
        for (const Term& term : row.terms) agent_vars[row.agent->value].push_back(term.var);
      }
    }
    for (const LinearRow& row : model.rows) {
      if (row.kind != RowKind::kStability) continue;
      const std::size_t r = stab_task.size();
      stab_task.push_back(*row.task);
      stab_agent.push_back(*row.agent);
      lhs_rows_of_agent[row.agent->value].push_back(r);
      rows_of_task[row.task->value].push_back(r);
      std::set<std::uint32_t> rhs_agents;
      for (const Term& term : row.terms) {
        if (model.is_y(term.var)) continue;
        if (term.coefficient > 0) {
          lhs_rows_of_var[term.var].push_back(r);
        } else {
          rhs_rows_of_var[term.var].push_back(r);
          rhs_agents.insert(model.x_vars[term.var].agent.value);
        }
      }
      for (std::uint32_t a : rhs_agents) rhs_rows_of_agent[a].push_back(r);
      rhs_agent_count.push_back(rhs_agents.size());
    }

    suffix_best.assign(num_agents + 1, 0);
    for (std::size_t k = num_agents; k-- > 0;) {
      std::int64_t best = 0;
      for (std::size_t v : agent_vars[k]) best = std::max(best, model.objective[v]);
      suffix_best[k] = suffix_best[k + 1] + best;
    }
  }

  std::size_t num_agents() const { return agent_vars.size(); }
  std::size_t num_rows() const { return stab_task.size(); }

  const IPModel& model;
  bool strict;
  std::int64_t penalty;
  std::vector<std::vector<std::size_t>> agent_vars;  // c-1 rows, rank order
  std::vector<TaskId> stab_task;
  std::vector<AgentId> stab_agent;
  std::vector<std::size_t> rhs_agent_count;
  std::vector<std::vector<std::size_t>> lhs_rows_of_agent;
  std::vector<std::vector<std::size_t>> rhs_rows_of_agent;
  std::vector<std::vector<std::size_t>> rows_of_task;
  std::vector<std::vector<std::size_t>> lhs_rows_of_var;
  std::vector<std::vector<std::size_t>> rhs_rows_of_var;
  std::vector<std::int64_t> suffix_best;
};

struct SharedControl {
  std::uint64_t node_limit = 0;
  Clock::time_point deadline;
  std::atomic<std::uint64_t> nodes{0};
  std::atomic<std::uint64_t> prunes{0};
  std::atomic<bool> stop{false};
  std::atomic<int> reason{static_cast<int>(AbortReason::kNone)};
  std::atomic<bool> found{false};
  std::atomic<std::int64_t> best{0};

  void abort(AbortReason why) {
    int expected = static_cast<int>(AbortReason::kNone);
    reason.compare_exchange_strong(expected, static_cast<int>(why));
    stop = true;
  }

  // Incumbent values only ever increase.
  void offer(std::int64_t value) {
    std::lock_guard<std::mutex> lock(offer_mutex);
    if (!found.load() || value > best.load()) {
      best.store(value);
      found.store(true);
    }
  }

  std::mutex offer_mutex;
};

struct Incumbent {
  std::int64_t value = 0;
  std::vector<std::size_t> selection;
  std::vector<std::size_t> violated_rows;
};

class Search {
 public:
  Search(const SearchProblem& problem, SharedControl& control)
      : p_(problem), control_(control),
        taken_(problem.rows_of_task.size(), 0),
        lhs_value_(problem.num_rows(), -1),
        rhs_fixed_(problem.num_rows(), 0),
        rhs_unfixed_(problem.rhs_agent_count),
        violated_(problem.num_rows(), 0),
        selection_(problem.num_agents()) {}

  // Explores the subtree where agent 0 takes `first_var` (or the empty
  // selection when there are no agents).
  void explore(std::optional<std::size_t> first_var) {
    if (p_.num_agents() == 0) {
      record_leaf();
      return;
    }
    branch(0, *first_var);
  }

  void forget_incumbent() { has_best_ = false; }
  std::optional<Incumbent> best() const {
    return has_best_ ? std::optional<Incumbent>(best_) : std::nullopt;
  }
  std::uint64_t local_prunes() const { return prunes_; }

 private:
  void descend(std::size_t k) {
    for (std::size_t v : p_.agent_vars[k]) {
      if (control_.stop) return;
      branch(k, v);
    }
  }

  void branch(std::size_t k, std::size_t v) {
    const TaskSet& tasks = p_.model.x_vars[v].tasks;
    if (std::any_of(tasks.begin(), tasks.end(),
                    [&](TaskId t) { return taken_[t.value] != 0; })) {
      return;
    }
    if (!count_node()) return;
    std::vector<std::size_t> newly = apply(k, v);
    if (p_.strict && !newly.empty()) {
      ++prunes_;
    } else if (k + 1 == p_.num_agents()) {
      record_leaf();
    } else if (bound_prunes(k + 1)) {
      ++prunes_;
    } else {
      descend(k + 1);
    }
    undo(k, v, newly);
  }

  bool count_node() {
    const std::uint64_t n = ++control_.nodes;
    if (n > control_.node_limit) {
      control_.abort(AbortReason::kNodeLimit);
      return false;
    }
    if ((n & 1023u) == 0 && Clock::now() > control_.deadline) {
      control_.abort(AbortReason::kTimeLimit);
      return false;
    }
    return !control_.stop;
  }

  // A row is forced violated once its LHS is 1 and nothing can put t with an
  // agent t likes at least as much: either t went to a worse agent, or every
  // eligible agent has already been fixed elsewhere.
  bool forced_violation(std::size_t r) const {
    if (lhs_value_[r] != 1) return false;
    const bool task_taken = taken_[p_.stab_task[r].value] != 0;
    const std::size_t rhs_max = task_taken ? rhs_fixed_[r] : rhs_unfixed_[r];
    return rhs_max == 0;
  }

  std::vector<std::size_t> apply(std::size_t k, std::size_t v) {
    selection_[k] = v;
    value_ += p_.model.objective[v];
    for (TaskId t : p_.model.x_vars[v].tasks) taken_[t.value] = 1;
    for (std::size_t r : p_.rhs_rows_of_agent[k]) --rhs_unfixed_[r];
    for (std::size_t r : p_.rhs_rows_of_var[v]) ++rhs_fixed_[r];
    for (std::size_t r : p_.lhs_rows_of_agent[k]) lhs_value_[r] = 0;
    for (std::size_t r : p_.lhs_rows_of_var[v]) lhs_value_[r] = 1;

    std::vector<std::size_t> newly;
    auto check = [&](std::size_t r) {
      if (!violated_[r] && forced_violation(r)) {
        violated_[r] = 1;
        newly.push_back(r);
      }
    };
    for (std::size_t r : p_.lhs_rows_of_agent[k]) check(r);
    for (std::size_t r : p_.rhs_rows_of_agent[k]) check(r);
    for (TaskId t : p_.model.x_vars[v].tasks) {
      for (std::size_t r : p_.rows_of_task[t.value]) check(r);
    }
    violated_count_ += newly.size();
    return newly;
  }

  void undo(std::size_t k, std::size_t v, const std::vector<std::size_t>& newly) {
    for (std::size_t r : newly) violated_[r] = 0;
    violated_count_ -= newly.size();
    for (std::size_t r : p_.lhs_rows_of_agent[k]) lhs_value_[r] = -1;
    for (std::size_t r : p_.rhs_rows_of_var[v]) --rhs_fixed_[r];
    for (std::size_t r : p_.rhs_rows_of_agent[k]) ++rhs_unfixed_[r];
    for (TaskId t : p_.model.x_vars[v].tasks) taken_[t.value] = 0;
    value_ -= p_.model.objective[v];
  }

  std::int64_t current_value() const {
    return value_ - p_.penalty * static_cast<std::int64_t>(violated_count_);
  }

  bool dominated(std::int64_t bound) const {
    if (has_best_ && bound <= best_.value) return true;
    return control_.found && bound < control_.best.load();
  }

  // Optimistic completion from agent `next` on: each remaining agent takes
  // its most valuable node among those free of taken tasks.
  bool bound_prunes(std::size_t next) const {
    const std::int64_t base = current_value();
    if (dominated(base + p_.suffix_best[next])) return true;
    std::int64_t rest = 0;
    for (std::size_t j = next; j < p_.num_agents(); ++j) {
      std::int64_t best = 0;
      for (std::size_t v : p_.agent_vars[j]) {
        if (p_.model.objective[v] <= best) continue;
        const TaskSet& tasks = p_.model.x_vars[v].tasks;
        if (std::none_of(tasks.begin(), tasks.end(),
                         [&](TaskId t) { return taken_[t.value] != 0; })) {
          best = p_.model.objective[v];
        }
      }
      rest += best;
    }
    return dominated(base + rest);
  }

  void record_leaf() {
    const std::int64_t value = current_value();
    if (has_best_ && value <= best_.value) return;
    if (control_.found && value < control_.best.load()) return;
    Incumbent inc;
    inc.value = value;
    inc.selection = selection_;
    for (std::size_t r = 0; r < p_.num_rows(); ++r) {
      if (violated_[r]) inc.violated_rows.push_back(r);
    }
    best_ = std::move(inc);
    has_best_ = true;
    control_.offer(value);
  }

  const SearchProblem& p_;
  SharedControl& control_;
  std::vector<char> taken_;
  std::vector<signed char> lhs_value_;
  std::vector<std::size_t> rhs_fixed_;
  std::vector<std::size_t> rhs_unfixed_;
  std::vector<char> violated_;
  std::size_t violated_count_ = 0;
  std::vector<std::size_t> selection_;
  std::int64_t value_ = 0;
  Incumbent best_;
  bool has_best_ = false;
  std::uint64_t prunes_ = 0;
};

}  // namespace

SolveResult solve(const Instance& inst, const SolverConfig& cfg) {
  if (cfg.node_limit == 0) throw InvalidParams("node limit must be positive");
  if (cfg.time_limit.count() <= 0) throw InvalidParams("time limit must be positive");
  if (cfg.threads == 0) throw InvalidParams("thread count must be positive");

  const auto start = Clock::now();
  const IPModel model = cfg.mode == SolveMode::kRelaxed
                            ? build_relaxed_ip(inst, cfg.objective, cfg.tree_limits)
                            : build_ip(inst, cfg.objective, cfg.tree_limits);
  const SearchProblem problem(inst, model, cfg.mode);

  SharedControl control;
  control.node_limit = cfg.node_limit;
  control.deadline = start + cfg.time_limit;

  // One slot per subtree of agent 0; the reduction takes the best value and,
  // among ties, the earliest subtree.
  std::vector<std::optional<std::size_t>> roots;
  if (problem.num_agents() == 0) {
    roots.push_back(std::nullopt);
  } else {
    for (std::size_t v : problem.agent_vars[0]) roots.push_back(v);
  }
  std::vector<std::optional<Incumbent>> results(roots.size());

  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(cfg.threads, roots.size()));
  if (workers <= 1) {
    // Sequential: the incumbent carries across subtrees, which only prunes
    // more; the winner is unchanged because later ties never replace it.
    Search search(problem, control);
    for (std::size_t i = 0; i < roots.size() && !control.stop; ++i) {
      search.explore(roots[i]);
    }
    results[0] = search.best();
    control.prunes += search.local_prunes();
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        Search search(problem, control);
        for (std::size_t i = next++; i < roots.size(); i = next++) {
          if (control.stop) break;
          search.forget_incumbent();
          search.explore(roots[i]);
          results[i] = search.best();
        }
        control.prunes += search.local_prunes();
      });
    }
    for (auto& t : pool) t.join();
  }

  const Incumbent* winner = nullptr;
  for (const auto& r : results) {
    if (r && (!winner || r->value > winner->value)) winner = &*r;
  }

  SolveResult result;
  result.mode = cfg.mode;
  result.abort_reason = static_cast<AbortReason>(control.reason.load());
  if (winner) {
    std::vector<TaskSet> by_agent(inst.num_agents());
    for (std::size_t k = 0; k < winner->selection.size(); ++k) {
      const XVar& x = model.x_vars[winner->selection[k]];
      by_agent[x.agent.value] = x.tasks;
      result.allocation_value += model.objective[winner->selection[k]];
    }
    result.matching = Matching::from_allocations(inst, std::move(by_agent));
    result.objective_value = winner->value;
    for (std::size_t r : winner->violated_rows) {
      result.blocking_pairs.emplace_back(problem.stab_task[r], problem.stab_agent[r]);
    }
  }
  if (result.abort_reason != AbortReason::kNone) {
    result.status = SolveStatus::kAborted;
  } else {
    result.status = winner ? SolveStatus::kOptimal : SolveStatus::kInfeasible;
  }
  result.stats.nodes = control.nodes.load();
  result.stats.prunes = control.prunes.load();
  result.stats.wall_ms =
      std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return result;
}

SolveResult solve_min_blocking(const Instance& inst, SolverConfig cfg) {
  cfg.mode = SolveMode::kRelaxed;
  return solve(inst, cfg);
}

// ---------------------------------------------------------------------------
// Verification

VerifyReport verify_result(const Instance& inst, const SolverConfig& cfg,
                           const SolveResult& res, std::uint64_t max_enumeration) {
  VerifyReport report;
  auto fail = [&](std::string problem) {
    report.ok = false;
    report.problems.push_back(std::move(problem));
  };
  if (res.status != SolveStatus::kOptimal) {
    fail("result is not optimal");
    return report;
  }
  if (!res.matching) {
    fail("optimal result carries no matching");
    return report;
  }

  Matching m;
  try {
    m = Matching::from_allocations(inst, res.matching->allocations());
  } catch (const Error& e) {
    fail(std::string("invalid matching: ") + e.what());
    return report;
  }

  const StabilityReport stability = check_stability(inst, m);
  std::set<std::pair<TaskId, AgentId>> actual;
  for (const BlockingPair& bp : stability.blocking_pairs) actual.emplace(bp.task, bp.agent);
  const std::set<std::pair<TaskId, AgentId>> claimed(res.blocking_pairs.begin(),
                                                     res.blocking_pairs.end());
  if (res.mode == SolveMode::kStrict && !stability.stable) {
    fail("matching is not stable");
  }
  if (actual != claimed) fail("reported blocking pairs differ from the actual ones");

  const std::vector<LexTree> trees = build_trees(inst, cfg.tree_limits);
  std::int64_t penalty = 0;
  if (res.mode == SolveMode::kRelaxed) {
    for (const LexTree& tree : trees) {
      std::int64_t best = 0;
      for (const LexNode& node : tree.nodes()) {
        best = std::max(best, cfg.objective.value(tree.agent(), node.tasks));
      }
      penalty += best;
    }
    penalty += 1;
  }
  auto score = [&](const Matching& x, std::size_t blocking) {
    std::int64_t total = 0;
    for (AgentId a : inst.agent_ids()) total += cfg.objective.value(a, x.allocation(a));
    return total - penalty * static_cast<std::int64_t>(blocking);
  };
  const std::int64_t value = score(m, actual.size());
  if (value != res.objective_value) {
    fail("objective value " + std::to_string(res.objective_value) +
         " does not match recomputed " + std::to_string(value));
  }

  if (count_node_combinations(trees) <= max_enumeration) {
    std::optional<std::int64_t> best;
    for_each_matching(inst, trees, [&](const Matching& x, auto) {
      const StabilityReport s = check_stability(inst, x);
      if (res.mode == SolveMode::kStrict && !s.stable) return true;
      const std::int64_t v = score(x, s.blocking_pairs.size());
      if (!best || v > *best) best = v;
      return true;
    });
    if (!best || *best != value) {
      fail("enumeration finds a better objective");
    }
  }
  return report;
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kInfeasible:
      return "infeasible";
    case SolveStatus::kAborted:
      return "aborted";
  }
  return "?";
}

nlohmann::json solve_result_to_json(const Instance& inst, const SolveResult& res,
                                    bool include_timing) {
  using nlohmann::json;
  json doc;
  doc["status"] = to_string(res.status);
  doc["mode"] = res.mode == SolveMode::kStrict ? "strict" : "relaxed";
  if (res.status == SolveStatus::kAborted) {
    doc["limit"] = res.abort_reason == AbortReason::kTimeLimit ? "time" : "node";
  }
  doc["objective_value"] = res.objective_value;
  doc["allocation_value"] = res.allocation_value;
  doc["matching"] = res.matching ? matching_to_json(inst, *res.matching)["matches"]
                                 : json(nullptr);
  json pairs = json::array();
  for (const auto& [t, a] : res.blocking_pairs) {
    pairs.push_back(json{{"task", inst.task_name(t)}, {"agent", inst.agent_name(a)}});
  }
  doc["blocking_pairs"] = std::move(pairs);
  json stats{{"nodes", res.stats.nodes}, {"prunes", res.stats.prunes}};
  if (include_timing) stats["wall_time_ms"] = res.stats.wall_ms;
  doc["stats"] = std::move(stats);
  return doc;
}

}  // namespace lexmatch

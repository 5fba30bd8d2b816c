#ifndef LEXMATCH_SOLVER_HPP_
#define LEXMATCH_SOLVER_HPP_

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "lexmatch/instance.hpp"
#include "lexmatch/ipmodel.hpp"
#include "lexmatch/lextree.hpp"
#include "lexmatch/matching.hpp"

namespace lexmatch {

enum class SolveMode { kStrict, kRelaxed };
enum class SolveStatus { kOptimal, kInfeasible, kAborted };
enum class AbortReason { kNone, kNodeLimit, kTimeLimit };

struct SolverConfig {
  std::uint64_t node_limit = 100'000'000;
  std::chrono::milliseconds time_limit{std::chrono::minutes(10)};
  SolveMode mode = SolveMode::kStrict;
  Objective objective = Objective::max_tasks();
  // Worker threads over the first agent's subtrees; results do not depend on
  // this value unless a limit is hit.
  unsigned threads = 1;
  TreeLimits tree_limits;
};

struct SolveStats {
  std::uint64_t nodes = 0;
  std::uint64_t prunes = 0;
  double wall_ms = 0.0;
};

struct SolveResult {
  SolveStatus status = SolveStatus::kInfeasible;
  AbortReason abort_reason = AbortReason::kNone;
  SolveMode mode = SolveMode::kStrict;
  // Set when optimal, and for an aborted search that found an incumbent.
  std::optional<Matching> matching;
  // Model objective: sum of c_an minus c_y per tolerated blocking pair.
  std::int64_t objective_value = 0;
  // The sum of c_an alone.
  std::int64_t allocation_value = 0;
  // (task, agent) pairs with Y = 1; empty in strict mode.
  std::vector<std::pair<TaskId, AgentId>> blocking_pairs;
  SolveStats stats;
};

// Depth-first branch and bound over one tree node per agent (agents in
// declaration order, nodes in rank order). Prunes on task conflicts, on
// stability rows whose violation is already forced, and on an optimistic
// bound. Among equal objectives the first solution in that order wins.
SolveResult solve(const Instance& inst, const SolverConfig& cfg);

// Relaxed-mode solve: fewest blocking pairs first, then the largest value.
SolveResult solve_min_blocking(const Instance& inst, SolverConfig cfg);

struct VerifyReport {
  bool ok = true;
  std::vector<std::string> problems;
};

// Recomputes validity, stability (or the blocking set), the objective, and,
// when the search space has at most `max_enumeration` node combinations,
// optimality against full enumeration.
VerifyReport verify_result(const Instance& inst, const SolverConfig& cfg,
                           const SolveResult& res,
                           std::uint64_t max_enumeration = 1'000'000);

std::string to_string(SolveStatus status);
// `include_timing` = false drops wall time so output is reproducible.
nlohmann::json solve_result_to_json(const Instance& inst, const SolveResult& res,
                                    bool include_timing = true);

}  // namespace lexmatch

#endif  // LEXMATCH_SOLVER_HPP_

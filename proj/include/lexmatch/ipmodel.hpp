#ifndef LEXMATCH_IPMODEL_HPP_
#define LEXMATCH_IPMODEL_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lexmatch/ids.hpp"
#include "lexmatch/instance.hpp"
#include "lexmatch/lextree.hpp"
#include "lexmatch/matching.hpp"

namespace lexmatch {

// Value c_an of giving allocation T(n) to agent a. Values are non-negative
// integers; unlisted allocations take `default_value`.
class WeightTable {
 public:
  explicit WeightTable(std::size_t num_agents, std::int64_t default_value = 0)
      : default_value_(default_value), per_agent_(num_agents) {}

  void set(AgentId a, const TaskSet& allocation, std::int64_t value);
  std::int64_t value(AgentId a, const TaskSet& allocation) const;
  std::int64_t default_value() const { return default_value_; }

 private:
  std::int64_t default_value_;
  std::vector<std::unordered_map<TaskSet, std::int64_t, TaskSetHash>> per_agent_;
};

// {"default": int, "weights": {agent: [{"tasks": [task, ...], "value": int}]}}
WeightTable parse_weights(std::string_view text, const Instance& inst);

class Objective {
 public:
  // c_an = |T(n)|.
  static Objective max_tasks();
  static Objective weighted(WeightTable table);

  bool is_max_tasks() const { return weights_ == nullptr; }
  std::int64_t value(AgentId a, const TaskSet& allocation) const;

 private:
  std::shared_ptr<const WeightTable> weights_;
};

struct XVar {
  AgentId agent;
  std::size_t rank = 0;  // rank of the node in D(a)
  NodeIndex node = 0;
  TaskSet tasks;  // T(n)
};

struct YVar {
  TaskId task;
  AgentId agent;
};

enum class RowKind { kAgentAssignment, kTaskCapacity, kStability };
enum class Relation { kLessEqual, kEqual };

struct Term {
  std::size_t var = 0;
  int coefficient = 1;  // always +1 or -1
};

// sum(terms) <relation> rhs. Stability rows are stored with everything on the
// left: LHS nodes at +1, RHS nodes (and Y) at -1, rhs 0.
struct LinearRow {
  RowKind kind = RowKind::kAgentAssignment;
  std::vector<Term> terms;
  Relation relation = Relation::kLessEqual;
  std::int64_t rhs = 0;
  std::optional<AgentId> agent;
  std::optional<TaskId> task;
};

// Binary program over X_an (one per agent and tree node) and, in the relaxed
// variant, Y_ta (one per acceptable pair). Variables are indexed X first, in
// agent then rank order, followed by Y in stability-row order.
struct IPModel {
  std::vector<XVar> x_vars;
  std::vector<YVar> y_vars;
  std::vector<LinearRow> rows;
  std::vector<std::int64_t> objective;  // per variable; Y carry -c_y
  std::int64_t blocking_penalty = 0;    // c_y, 0 for the strict model
  bool relaxed = false;

  std::size_t num_vars() const { return x_vars.size() + y_vars.size(); }
  bool is_y(std::size_t var) const { return var >= x_vars.size(); }
};

// Tree-structural membership in the stability LHS of (t, a): t ∉ T(n) and the
// node holding the prefix {t' ∈ T(n) : t' >_a t} has a child holding t.
bool in_stability_lhs(const Instance& inst, const LexTree& tree, NodeIndex n,
                      TaskId t);

IPModel build_ip(const Instance& inst, const Objective& objective,
                 const TreeLimits& limits = {});
// Adds Y_ta to the right-hand side of every stability row and charges
// c_y = sum_a max_n c_an + 1 per unit of Y in the objective.
IPModel build_relaxed_ip(const Instance& inst, const Objective& objective,
                         const TreeLimits& limits = {});

using Valuation = std::vector<int>;

struct ValuationReport {
  std::vector<bool> row_satisfied;
  // c-1, c-2 and binarity all hold; `matching` is then set.
  bool assignment_valid = false;
  std::optional<Matching> matching;
  std::vector<std::size_t> violated_rows;
  bool feasible = false;  // every row satisfied and binary
  std::int64_t objective_value = 0;
  // Pairs (t, a) whose Y variable is 1.
  std::vector<std::pair<TaskId, AgentId>> tolerated_blocking;
};

// Throws PartialValuation unless `v` has one entry per variable.
ValuationReport check_valuation(const Instance& inst, const IPModel& model,
                                const Valuation& v);

// Encodes a matching as a valuation of the X variables (Y set to the
// violated stability rows in the relaxed model). nullopt if some agent's
// allocation has no node.
std::optional<Valuation> encode_matching(const IPModel& model, const Matching& m);

std::string variable_name(const Instance& inst, const IPModel& model,
                          std::size_t var);
std::string row_name(const Instance& inst, const LinearRow& row);

// CPLEX-style LP text: Maximize / Subject To / Binary / End.
std::string export_lp(const Instance& inst, const IPModel& model);

}  // namespace lexmatch

#endif  // LEXMATCH_IPMODEL_HPP_

#include "lexmatch/ipmodel.hpp"

#include <algorithm>

#include "json.hpp"
#include "lexmatch/error.hpp"

namespace lexmatch {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Objective

void WeightTable::set(AgentId a, const TaskSet& allocation, std::int64_t value) {
  if (value < 0) throw InvalidParams("allocation values must be non-negative");
  per_agent_.at(a.value)[allocation] = value;
}

std::int64_t WeightTable::value(AgentId a, const TaskSet& allocation) const {
  const auto& table = per_agent_.at(a.value);
  auto it = table.find(allocation);
  return it == table.end() ? default_value_ : it->second;
}

WeightTable parse_weights(std::string_view text, const Instance& inst) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("", "expected a JSON object");

  std::int64_t default_value = 0;
  if (auto it = doc.find("default"); it != doc.end()) {
    if (!it->is_number_integer() || it->get<std::int64_t>() < 0) {
      throw SchemaError("default", "expected a non-negative integer");
    }
    default_value = it->get<std::int64_t>();
  }
  WeightTable table(inst.num_agents(), default_value);

  auto weights = doc.find("weights");
  if (weights == doc.end()) return table;
  if (!weights->is_object()) throw SchemaError("weights", "expected an object");
  for (const auto& [name, entries] : weights->items()) {
    const std::string where = "weights/" + name;
    auto a = inst.find_agent(name);
    if (!a) throw SchemaError(where, "undeclared agent");
    if (!entries.is_array()) throw SchemaError(where, "expected an array");
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const std::string at = where + "/" + std::to_string(i);
      const json& entry = entries[i];
      if (!entry.is_object() || !entry.contains("tasks") || !entry.contains("value")) {
        throw SchemaError(at, "expected {\"tasks\": [...], \"value\": int}");
      }
      if (!entry["tasks"].is_array()) throw SchemaError(at + "/tasks", "expected an array");
      std::vector<TaskId> tasks;
      for (const json& name_doc : entry["tasks"]) {
        if (!name_doc.is_string()) throw SchemaError(at + "/tasks", "expected strings");
        auto t = inst.find_task(name_doc.get<std::string>());
        if (!t) {
          throw SchemaError(at + "/tasks",
                            "undeclared task '" + name_doc.get<std::string>() + "'");
        }
        tasks.push_back(*t);
      }
      const json& value = entry["value"];
      if (!value.is_number_integer() || value.get<std::int64_t>() < 0) {
        throw SchemaError(at + "/value", "expected a non-negative integer");
      }
      table.set(*a, TaskSet(std::move(tasks)), value.get<std::int64_t>());
    }
  }
  return table;
}

Objective Objective::max_tasks() { return Objective{}; }

Objective Objective::weighted(WeightTable table) {
  Objective objective;
  objective.weights_ = std::make_shared<const WeightTable>(std::move(table));
  return objective;
}

std::int64_t Objective::value(AgentId a, const TaskSet& allocation) const {
  if (!weights_) return static_cast<std::int64_t>(allocation.size());
  return weights_->value(a, allocation);
}

// ---------------------------------------------------------------------------
// Model construction

bool in_stability_lhs(const Instance& inst, const LexTree& tree, NodeIndex n,
                      TaskId t) {
  const LexNode& node = tree.node(n);
  if (node.tasks.contains(t)) return false;
  const AgentId a = tree.agent();
  const auto better = static_cast<std::size_t>(
      std::count_if(node.path.begin(), node.path.end(),
                    [&](TaskId u) { return inst.agent_prefers(a, u, t); }));
  // The path is preference sorted, so the better tasks form its prefix.
  const NodeIndex prefix_node = tree.ancestor_at_depth(n, better);
  return tree.child_holding(prefix_node, t).has_value();
}

namespace {

IPModel build_model(const Instance& inst, const Objective& objective,
                    const TreeLimits& limits, bool relaxed) {
  const std::vector<LexTree> trees = build_trees(inst, limits);
  IPModel model;
  model.relaxed = relaxed;

  std::vector<std::size_t> first_var(inst.num_agents());
  for (AgentId a : inst.agent_ids()) {
    const LexTree& tree = trees[a.value];
    first_var[a.value] = model.x_vars.size();
    for (NodeIndex n : tree.nodes_by_rank()) {
      model.x_vars.push_back(XVar{a, tree.node(n).rank, n, tree.node(n).tasks});
    }
  }
  auto var_of = [&](AgentId a, NodeIndex n) {
    return first_var[a.value] + trees[a.value].node(n).rank - 1;
  };

  for (AgentId a : inst.agent_ids()) {
    LinearRow row{RowKind::kAgentAssignment, {}, Relation::kEqual, 1, a, std::nullopt};
    for (NodeIndex n : trees[a.value].nodes_by_rank()) row.terms.push_back({var_of(a, n), 1});
    model.rows.push_back(std::move(row));
  }

  for (TaskId t : inst.task_ids()) {
    LinearRow row{RowKind::kTaskCapacity, {}, Relation::kLessEqual, 1, std::nullopt, t};
    for (AgentId a : inst.agent_ids()) {
      for (NodeIndex n : trees[a.value].nodes_by_rank()) {
        if (trees[a.value].node(n).tasks.contains(t)) row.terms.push_back({var_of(a, n), 1});
      }
    }
    model.rows.push_back(std::move(row));
  }

  for (TaskId t : inst.task_ids()) {
    for (AgentId a : inst.agent_ids()) {
      if (!inst.agent_position(t, a)) continue;
      LinearRow row{RowKind::kStability, {}, Relation::kLessEqual, 0, a, t};
      const LexTree& tree = trees[a.value];
      for (NodeIndex n : tree.nodes_by_rank()) {
        if (in_stability_lhs(inst, tree, n, t)) row.terms.push_back({var_of(a, n), 1});
      }
      // Agents t ranks at least as high as a, including a itself.
      for (AgentId other : inst.agent_ids()) {
        if (!inst.agent_position(t, other)) continue;
        if (other != a && !inst.task_prefers(t, other, a)) continue;
        for (NodeIndex n : trees[other.value].nodes_by_rank()) {
          if (trees[other.value].node(n).tasks.contains(t)) {
            row.terms.push_back({var_of(other, n), -1});
          }
        }
      }
      model.rows.push_back(std::move(row));
    }
  }

  for (const XVar& x : model.x_vars) {
    model.objective.push_back(objective.value(x.agent, x.tasks));
  }

  if (relaxed) {
    // c-1 picks one node per agent, so the per-agent maxima bound the X part.
    std::int64_t bound = 0;
    for (AgentId a : inst.agent_ids()) {
      std::int64_t best = 0;
      for (std::size_t v = first_var[a.value];
           v < first_var[a.value] + trees[a.value].size(); ++v) {
        best = std::max(best, model.objective[v]);
      }
      bound += best;
    }
    model.blocking_penalty = bound + 1;
    for (LinearRow& row : model.rows) {
      if (row.kind != RowKind::kStability) continue;
      const std::size_t y = model.x_vars.size() + model.y_vars.size();
      model.y_vars.push_back(YVar{*row.task, *row.agent});
      row.terms.push_back({y, -1});
      model.objective.push_back(-model.blocking_penalty);
    }
  }
  return model;
}

}  // namespace

IPModel build_ip(const Instance& inst, const Objective& objective,
                 const TreeLimits& limits) {
  return build_model(inst, objective, limits, false);
}

IPModel build_relaxed_ip(const Instance& inst, const Objective& objective,
                         const TreeLimits& limits) {
  return build_model(inst, objective, limits, true);
}

// ---------------------------------------------------------------------------
// Valuations

namespace {

bool row_holds(const LinearRow& row, const Valuation& v) {
  std::int64_t lhs = 0;
  for (const Term& term : row.terms) lhs += term.coefficient * v[term.var];
  return row.relation == Relation::kEqual ? lhs == row.rhs : lhs <= row.rhs;
}

}  // namespace

ValuationReport check_valuation(const Instance& inst, const IPModel& model,
                                const Valuation& v) {
  if (v.size() != model.num_vars()) {
    throw PartialValuation("valuation has " + std::to_string(v.size()) +
                           " entries, model has " +
                           std::to_string(model.num_vars()) + " variables");
  }
  ValuationReport report;
  const bool binary =
      std::all_of(v.begin(), v.end(), [](int x) { return x == 0 || x == 1; });

  bool assignment_rows_ok = true;
  for (std::size_t r = 0; r < model.rows.size(); ++r) {
    const bool holds = row_holds(model.rows[r], v);
    report.row_satisfied.push_back(holds);
    if (!holds) {
      report.violated_rows.push_back(r);
      if (model.rows[r].kind != RowKind::kStability) assignment_rows_ok = false;
    }
  }
  report.assignment_valid = binary && assignment_rows_ok;
  report.feasible = binary && report.violated_rows.empty();

  for (std::size_t var = 0; var < model.num_vars(); ++var) {
    report.objective_value += model.objective[var] * v[var];
  }

  if (report.assignment_valid) {
    std::vector<TaskSet> by_agent(inst.num_agents());
    for (std::size_t var = 0; var < model.x_vars.size(); ++var) {
      if (v[var] == 1) by_agent[model.x_vars[var].agent.value] = model.x_vars[var].tasks;
    }
    report.matching = Matching::from_allocations(inst, std::move(by_agent));
    for (std::size_t y = 0; y < model.y_vars.size(); ++y) {
      if (v[model.x_vars.size() + y] == 1) {
        report.tolerated_blocking.emplace_back(model.y_vars[y].task,
                                               model.y_vars[y].agent);
      }
    }
  }
  return report;
}

std::optional<Valuation> encode_matching(const IPModel& model, const Matching& m) {
  Valuation v(model.num_vars(), 0);
  std::vector<bool> placed(m.allocations().size(), false);
  for (std::size_t var = 0; var < model.x_vars.size(); ++var) {
    const XVar& x = model.x_vars[var];
    if (m.allocation(x.agent) == x.tasks) {
      v[var] = 1;
      placed[x.agent.value] = true;
    }
  }
  if (std::find(placed.begin(), placed.end(), false) != placed.end()) return std::nullopt;

  if (model.relaxed) {
    std::size_t y = model.x_vars.size();
    for (const LinearRow& row : model.rows) {
      if (row.kind != RowKind::kStability) continue;
      std::int64_t lhs = 0;
      for (const Term& term : row.terms) {
        if (!model.is_y(term.var)) lhs += term.coefficient * v[term.var];
      }
      v[y++] = lhs > row.rhs ? 1 : 0;
    }
  }
  return v;
}

}  // namespace lexmatch

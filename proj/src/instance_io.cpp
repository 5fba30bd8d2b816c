#include <string>

#include "json.hpp"
#include "lexmatch/error.hpp"
#include "lexmatch/instance.hpp"

namespace lexmatch {

using nlohmann::json;

namespace {

const json& require(const json& doc, const char* key, const std::string& where) {
  auto it = doc.find(key);
  if (it == doc.end()) {
    throw SchemaError(where, std::string("missing key '") + key + "'");
  }
  return *it;
}

std::vector<std::string> parse_names(const json& node, const std::string& where) {
  if (!node.is_array()) throw SchemaError(where, "expected an array");
  std::vector<std::string> names;
  for (std::size_t i = 0; i < node.size(); ++i) {
    if (!node[i].is_string()) {
      throw SchemaError(where + "/" + std::to_string(i), "expected a string");
    }
    names.push_back(node[i].get<std::string>());
  }
  return names;
}

std::int64_t parse_int(const json& node, const std::string& where) {
  if (!node.is_number_integer()) throw SchemaError(where, "expected an integer");
  return node.get<std::int64_t>();
}

template <typename Id, typename Lookup>
std::vector<Id> resolve(const json& node, const std::string& where,
                        Lookup&& lookup, const char* what) {
  std::vector<Id> ids;
  const auto names = parse_names(node, where);
  for (std::size_t i = 0; i < names.size(); ++i) {
    auto id = lookup(names[i]);
    if (!id) {
      throw SchemaError(where + "/" + std::to_string(i),
                        std::string("undeclared ") + what + " '" + names[i] +
                            "'");
    }
    ids.push_back(*id);
  }
  return ids;
}

}  // namespace

Instance parse_instance(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("", "expected a JSON object");

  auto agents = parse_names(require(doc, "agents", ""), "agents");
  auto tasks = parse_names(require(doc, "tasks", ""), "tasks");

  // Name tables for resolution; duplicates are a shape error.
  std::unordered_map<std::string, AgentId> agent_index;
  std::unordered_map<std::string, TaskId> task_index;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    if (!agent_index.emplace(agents[i], AgentId{static_cast<std::uint32_t>(i)})
             .second) {
      throw SchemaError("agents/" + std::to_string(i),
                        "duplicate agent '" + agents[i] + "'");
    }
  }
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (!task_index.emplace(tasks[i], TaskId{static_cast<std::uint32_t>(i)})
             .second) {
      throw SchemaError("tasks/" + std::to_string(i),
                        "duplicate task '" + tasks[i] + "'");
    }
  }
  auto find_agent = [&](const std::string& n) -> std::optional<AgentId> {
    auto it = agent_index.find(n);
    if (it == agent_index.end()) return std::nullopt;
    return it->second;
  };
  auto find_task = [&](const std::string& n) -> std::optional<TaskId> {
    auto it = task_index.find(n);
    if (it == task_index.end()) return std::nullopt;
    return it->second;
  };

  const json& task_prefs_doc = require(doc, "task_prefs", "");
  const json& agent_prefs_doc = require(doc, "agent_prefs", "");
  const json& feas_doc = require(doc, "feasibility", "");
  if (!task_prefs_doc.is_object()) {
    throw SchemaError("task_prefs", "expected an object");
  }
  if (!agent_prefs_doc.is_object()) {
    throw SchemaError("agent_prefs", "expected an object");
  }
  if (!feas_doc.is_object()) throw SchemaError("feasibility", "expected an object");

  // A missing preference entry means an empty acceptable set.
  std::vector<std::vector<AgentId>> task_prefs(tasks.size());
  for (const auto& [name, list] : task_prefs_doc.items()) {
    auto t = find_task(name);
    if (!t) throw SchemaError("task_prefs/" + name, "undeclared task");
    task_prefs[t->value] =
        resolve<AgentId>(list, "task_prefs/" + name, find_agent, "agent");
  }
  std::vector<std::vector<TaskId>> agent_prefs(agents.size());
  for (const auto& [name, list] : agent_prefs_doc.items()) {
    auto a = find_agent(name);
    if (!a) throw SchemaError("agent_prefs/" + name, "undeclared agent");
    agent_prefs[a->value] =
        resolve<TaskId>(list, "agent_prefs/" + name, find_task, "task");
  }

  std::vector<std::optional<FeasibilityOracle>> oracles(agents.size());
  for (const auto& [name, spec] : feas_doc.items()) {
    const std::string where = "feasibility/" + name;
    auto a = find_agent(name);
    if (!a) throw SchemaError(where, "undeclared agent");
    if (!spec.is_object()) throw SchemaError(where, "expected an object");
    const json& kind = require(spec, "kind", where);
    if (!kind.is_string()) throw SchemaError(where + "/kind", "expected a string");
    const auto kind_name = kind.get<std::string>();
    if (kind_name == "maximal_sets") {
      const json& sets_doc = require(spec, "sets", where);
      if (!sets_doc.is_array()) throw SchemaError(where + "/sets", "expected an array");
      std::vector<TaskSet> sets;
      for (std::size_t i = 0; i < sets_doc.size(); ++i) {
        sets.emplace_back(resolve<TaskId>(
            sets_doc[i], where + "/sets/" + std::to_string(i), find_task, "task"));
      }
      oracles[a->value] = FeasibilityOracle::maximal_sets(std::move(sets));
    } else if (kind_name == "knapsack") {
      const std::int64_t capacity =
          parse_int(require(spec, "capacity", where), where + "/capacity");
      const json& sizes_doc = require(spec, "sizes", where);
      if (!sizes_doc.is_object()) {
        throw SchemaError(where + "/sizes", "expected an object");
      }
      std::map<TaskId, std::int64_t> sizes;
      for (const auto& [task_name, size] : sizes_doc.items()) {
        auto t = find_task(task_name);
        if (!t) throw SchemaError(where + "/sizes/" + task_name, "undeclared task");
        sizes[*t] = parse_int(size, where + "/sizes/" + task_name);
      }
      oracles[a->value] = FeasibilityOracle::knapsack(capacity, std::move(sizes));
    } else {
      throw UnknownFeasibilityKind(where + "/kind", kind_name);
    }
  }

  std::vector<FeasibilityOracle> feasibility;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    if (!oracles[i]) {
      throw SchemaError("feasibility", "missing oracle for agent '" + agents[i] + "'");
    }
    feasibility.push_back(std::move(*oracles[i]));
  }

  return Instance(std::move(agents), std::move(tasks), std::move(task_prefs),
                  std::move(agent_prefs), std::move(feasibility));
}

std::string serialize_instance(const Instance& inst) {
  json doc = json::object();
  doc["agents"] = inst.agent_names();
  doc["tasks"] = inst.task_names();

  json task_prefs = json::object();
  for (TaskId t : inst.task_ids()) {
    json list = json::array();
    for (AgentId a : inst.acceptable_agents(t)) list.push_back(inst.agent_name(a));
    task_prefs[inst.task_name(t)] = std::move(list);
  }
  doc["task_prefs"] = std::move(task_prefs);

  json agent_prefs = json::object();
  json feasibility = json::object();
  for (AgentId a : inst.agent_ids()) {
    json list = json::array();
    for (TaskId t : inst.acceptable_tasks(a)) list.push_back(inst.task_name(t));
    agent_prefs[inst.agent_name(a)] = std::move(list);

    const FeasibilityOracle& oracle = inst.oracle(a);
    json spec = json::object();
    spec["kind"] = std::string(to_string(oracle.kind()));
    if (oracle.kind() == OracleKind::kMaximalSets) {
      json sets = json::array();
      for (const TaskSet& s : oracle.sets()) {
        json members = json::array();
        for (TaskId t : s) members.push_back(inst.task_name(t));
        sets.push_back(std::move(members));
      }
      spec["sets"] = std::move(sets);
    } else {
      spec["capacity"] = oracle.capacity();
      json sizes = json::object();
      for (const auto& [t, size] : oracle.sizes()) sizes[inst.task_name(t)] = size;
      spec["sizes"] = std::move(sizes);
    }
    feasibility[inst.agent_name(a)] = std::move(spec);
  }
  doc["agent_prefs"] = std::move(agent_prefs);
  doc["feasibility"] = std::move(feasibility);
  return doc.dump(2) + "\n";
}

}  // namespace lexmatch

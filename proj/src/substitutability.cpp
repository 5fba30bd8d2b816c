#include "lexmatch/substitutability.hpp"

#include <algorithm>

#include "lexmatch/error.hpp"

namespace lexmatch {

namespace {

std::vector<TaskId> declared_order(const Instance& inst, AgentId a) {
  std::vector<TaskId> tasks(inst.acceptable_tasks(a).begin(),
                            inst.acceptable_tasks(a).end());
  std::sort(tasks.begin(), tasks.end());
  return tasks;
}

void check_size(const Instance& inst, AgentId a, std::size_t max_tasks) {
  const std::size_t size = inst.acceptable_tasks(a).size();
  if (size > max_tasks) throw TooLarge(inst.agent_name(a), size, max_tasks);
}

std::optional<NodeIndex> find_path(const LexTree& tree, const std::vector<TaskId>& path) {
  for (NodeIndex n = 0; n < tree.size(); ++n) {
    if (tree.node(n).path == path) return n;
  }
  return std::nullopt;
}

nlohmann::json names(const Instance& inst, const std::vector<TaskId>& tasks) {
  nlohmann::json out = nlohmann::json::array();
  for (TaskId t : tasks) out.push_back(inst.task_name(t));
  return out;
}

nlohmann::json names(const Instance& inst, const TaskSet& tasks) {
  return names(inst, tasks.items());
}

}  // namespace

std::vector<TaskSet> canonical_subsets(const Instance& inst, AgentId a,
                                       std::size_t max_tasks) {
  check_size(inst, a, max_tasks);
  const std::vector<TaskId> tasks = declared_order(inst, a);
  const std::size_t n = tasks.size();
  std::vector<TaskSet> out;
  for (std::size_t k = 2; k <= n; ++k) {
    std::vector<std::size_t> pick(k);
    for (std::size_t i = 0; i < k; ++i) pick[i] = i;
    while (true) {
      std::vector<TaskId> subset;
      for (std::size_t i : pick) subset.push_back(tasks[i]);
      out.emplace_back(std::move(subset));
      std::size_t i = k;
      while (i > 0 && pick[i - 1] == n - k + (i - 1)) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return out;
}

SubstReport is_substitutable_def(const Instance& inst, AgentId a, std::size_t max_tasks) {
  SubstReport report;
  report.agent = a;
  for (const TaskSet& s : canonical_subsets(inst, a, max_tasks)) {
    const TaskSet chosen = choice(inst, a, s);
    for (TaskId t : chosen) {
      for (TaskId removed : s) {
        if (removed == t) continue;
        if (!choice(inst, a, s.without(removed)).contains(t)) {
          report.substitutable = false;
          report.def_witness = DefWitness{s, t, removed};
          return report;
        }
      }
    }
  }
  return report;
}

std::optional<TreeWitness> tree_condition_violation(const LexTree& tree,
                                                    const TaskSet& offered) {
  const LexTree sub = restricted_subtree(tree, offered);
  for (NodeIndex n = 1; n < sub.size(); ++n) {
    const auto sibling = sub.right_sibling(n);
    if (!sibling) continue;
    const TaskSet& leaf = sub.node(sub.leftmost_leaf(n)).tasks;
    const TaskSet& sibling_leaf = sub.node(sub.leftmost_leaf(*sibling)).tasks;
    if (!leaf.minus(sub.node(n).tasks).is_subset_of(sibling_leaf)) {
      return TreeWitness{offered, sub.node(n).path, sub.node(*sibling).path, leaf,
                         sibling_leaf};
    }
  }
  return std::nullopt;
}

SubstReport is_substitutable_tree(const Instance& inst, AgentId a, std::size_t max_tasks) {
  SubstReport report;
  report.agent = a;
  const std::vector<TaskSet> subsets = canonical_subsets(inst, a, max_tasks);
  const LexTree tree = build_tree(inst, a);
  for (const TaskSet& s : subsets) {
    if (auto w = tree_condition_violation(tree, s)) {
      report.substitutable = false;
      report.tree_witness = std::move(w);
      return report;
    }
  }
  return report;
}

SubstSummary check_all_agents(const Instance& inst, std::size_t max_tasks) {
  SubstSummary summary;
  for (AgentId a : inst.agent_ids()) {
    summary.reports.push_back(is_substitutable_tree(inst, a, max_tasks));
    summary.all_substitutable = summary.all_substitutable && summary.reports.back().substitutable;
  }
  return summary;
}

bool verify_witness(const Instance& inst, AgentId a, const DefWitness& w) {
  if (w.kept == w.removed || !w.offered.contains(w.kept) || !w.offered.contains(w.removed)) {
    return false;
  }
  return choice(inst, a, w.offered).contains(w.kept) &&
         !choice(inst, a, w.offered.without(w.removed)).contains(w.kept);
}

bool verify_witness(const Instance& inst, AgentId a, const TreeWitness& w) {
  const LexTree sub = restricted_subtree(build_tree(inst, a), w.offered);
  const auto n = find_path(sub, w.node);
  if (!n || *n == sub.root()) return false;
  const auto sibling = sub.right_sibling(*n);
  if (!sibling || sub.node(*sibling).path != w.sibling) return false;
  const TaskSet& leaf = sub.node(sub.leftmost_leaf(*n)).tasks;
  const TaskSet& sibling_leaf = sub.node(sub.leftmost_leaf(*sibling)).tasks;
  return leaf == w.node_leaf && sibling_leaf == w.sibling_leaf &&
         !leaf.minus(sub.node(*n).tasks).is_subset_of(sibling_leaf);
}

nlohmann::json subst_report_to_json(const Instance& inst, const SubstReport& report) {
  nlohmann::json doc;
  doc["agent"] = inst.agent_name(report.agent);
  doc["substitutable"] = report.substitutable;
  if (report.def_witness) {
    const DefWitness& w = *report.def_witness;
    doc["def_witness"] = {{"S", names(inst, w.offered)},
                          {"t", inst.task_name(w.kept)},
                          {"t_removed", inst.task_name(w.removed)}};
  }
  if (report.tree_witness) {
    const TreeWitness& w = *report.tree_witness;
    doc["tree_witness"] = {{"S", names(inst, w.offered)},
                           {"n", names(inst, w.node)},
                           {"n_hat", names(inst, w.sibling)},
                           {"leaf_n", names(inst, w.node_leaf)},
                           {"leaf_n_hat", names(inst, w.sibling_leaf)}};
  }
  return doc;
}

}  // namespace lexmatch

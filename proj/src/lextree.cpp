#include "lexmatch/lextree.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include "lexmatch/error.hpp"

namespace lexmatch {

LexTree::LexTree(AgentId agent, std::vector<LexNode> nodes)
    : agent_(agent), nodes_(std::move(nodes)) {
  by_rank_.reserve(nodes_.size());
  if (nodes_.empty()) return;
  // Iterative post-order, children left to right.
  std::vector<std::pair<NodeIndex, std::size_t>> stack{{root(), 0}};
  while (!stack.empty()) {
    auto& [n, next_child] = stack.back();
    if (next_child < nodes_[n].children.size()) {
      const NodeIndex child = nodes_[n].children[next_child++];
      stack.emplace_back(child, 0);
    } else {
      by_rank_.push_back(n);
      nodes_[n].rank = by_rank_.size();
      stack.pop_back();
    }
  }
}

NodeIndex LexTree::leftmost_leaf(NodeIndex from) const {
  NodeIndex n = from;
  while (!nodes_.at(n).children.empty()) n = nodes_[n].children.front();
  return n;
}

std::optional<NodeIndex> LexTree::right_sibling(NodeIndex n) const {
  const auto& parent = nodes_.at(n).parent;
  if (!parent) return std::nullopt;
  const auto& siblings = nodes_[*parent].children;
  auto it = std::find(siblings.begin(), siblings.end(), n);
  if (it == siblings.end() || std::next(it) == siblings.end()) return std::nullopt;
  return *std::next(it);
}

NodeIndex LexTree::ancestor_at_depth(NodeIndex n, std::size_t depth) const {
  while (nodes_.at(n).path.size() > depth) n = *nodes_[n].parent;
  return n;
}

std::optional<NodeIndex> LexTree::child_holding(NodeIndex n, TaskId t) const {
  for (NodeIndex c : nodes_.at(n).children) {
    if (nodes_[c].held_task == t) return c;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

namespace {

class TreeBuilder {
 public:
  TreeBuilder(const Instance& inst, AgentId a, const TreeLimits& limits)
      : inst_(inst), agent_(a), limits_(limits), prefs_(inst.acceptable_tasks(a)) {}

  std::vector<LexNode> build() {
    nodes_.push_back(LexNode{});
    expand(0, 0);
    return std::move(nodes_);
  }

 private:
  // Children of a node hold tasks ranked strictly after its own held task, so
  // every feasible set shows up once, as its preference-sorted sequence.
  void expand(NodeIndex n, std::size_t first_candidate) {
    for (std::size_t k = first_candidate; k < prefs_.size(); ++k) {
      const TaskId t = prefs_[k];
      TaskSet extended = nodes_[n].tasks.with(t);
      if (!is_feasible(inst_, agent_, extended)) continue;

      const std::size_t depth = nodes_[n].path.size() + 1;
      if (limits_.max_depth && depth > *limits_.max_depth) {
        throw TreeTooLarge(inst_.agent_name(agent_), *limits_.max_depth, "depth");
      }
      if (nodes_.size() >= limits_.max_nodes) {
        throw TreeTooLarge(inst_.agent_name(agent_), limits_.max_nodes, "node");
      }
      LexNode child;
      child.held_task = t;
      child.parent = n;
      child.path = nodes_[n].path;
      child.path.push_back(t);
      child.tasks = std::move(extended);
      const NodeIndex c = nodes_.size();
      nodes_.push_back(std::move(child));
      nodes_[n].children.push_back(c);
      expand(c, k + 1);
    }
  }

  const Instance& inst_;
  AgentId agent_;
  TreeLimits limits_;
  std::span<const TaskId> prefs_;
  std::vector<LexNode> nodes_;
};

}  // namespace

LexTree build_tree(const Instance& inst, AgentId a, const TreeLimits& limits) {
  if (!inst.has_agent(a)) throw UnknownAgent("#" + std::to_string(a.value));
  return LexTree(a, TreeBuilder(inst, a, limits).build());
}

std::vector<LexTree> build_trees(const Instance& inst, const TreeLimits& limits) {
  std::vector<LexTree> trees;
  trees.reserve(inst.num_agents());
  for (AgentId a : inst.agent_ids()) trees.push_back(build_tree(inst, a, limits));
  return trees;
}

std::vector<NodeIndex> rank_nodes(const LexTree& tree) {
  return tree.nodes_by_rank();
}

std::strong_ordering compare_alloc(const Instance& inst, AgentId a,
                                   const TaskSet& s1, const TaskSet& s2) {
  if (!is_feasible(inst, a, s1) || !is_feasible(inst, a, s2)) {
    throw InfeasibleAllocation("allocation is not feasible for agent '" +
                               inst.agent_name(a) + "'");
  }
  const auto seq1 = inst.preference_sorted(a, s1);
  const auto seq2 = inst.preference_sorted(a, s2);
  const std::size_t common = std::min(seq1.size(), seq2.size());
  for (std::size_t i = 0; i < common; ++i) {
    if (seq1[i] == seq2[i]) continue;
    return inst.agent_prefers(a, seq1[i], seq2[i]) ? std::strong_ordering::greater
                                                   : std::strong_ordering::less;
  }
  // A sequence beats each of its proper prefixes.
  return seq1.size() <=> seq2.size();
}

TaskSet choice(const Instance& inst, AgentId a, const TaskSet& offered) {
  if (!inst.has_agent(a)) throw UnknownAgent("#" + std::to_string(a.value));
  TaskSet chosen;
  for (TaskId t : inst.preference_sorted(a, offered)) {
    TaskSet extended = chosen.with(t);
    if (inst.oracle(a).admits(extended)) chosen = std::move(extended);
  }
  return chosen;
}

std::optional<AgentId> task_choice(const Instance& inst, TaskId t,
                                   std::span<const AgentId> offered) {
  if (!inst.has_task(t)) throw UnknownTask("#" + std::to_string(t.value));
  std::optional<AgentId> best;
  for (AgentId a : offered) {
    if (!inst.agent_position(t, a)) continue;
    if (!best || inst.task_prefers(t, a, *best)) best = a;
  }
  return best;
}

LexTree restricted_subtree(const LexTree& tree, const TaskSet& allowed) {
  std::vector<LexNode> nodes;
  if (tree.size() == 0) return LexTree(tree.agent(), std::move(nodes));

  // Recursive copy in pre-order.
  auto copy = [&](auto&& self, NodeIndex from, std::optional<NodeIndex> parent)
      -> NodeIndex {
    LexNode n;
    const LexNode& src = tree.node(from);
    n.held_task = src.held_task;
    n.parent = parent;
    n.path = src.path;
    n.tasks = src.tasks;
    const NodeIndex idx = nodes.size();
    nodes.push_back(std::move(n));
    for (NodeIndex c : src.children) {
      if (!allowed.contains(*tree.node(c).held_task)) continue;
      const NodeIndex child = self(self, c, idx);
      nodes[idx].children.push_back(child);
    }
    return idx;
  };
  copy(copy, tree.root(), std::nullopt);
  return LexTree(tree.agent(), std::move(nodes));
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

std::string set_label(const Instance& inst, const LexNode& node) {
  std::string out = "{";
  for (std::size_t i = 0; i < node.path.size(); ++i) {
    if (i) out += ",";
    out += inst.task_name(node.path[i]);
  }
  return out + "}";
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string render_tree_text(const Instance& inst, const LexTree& tree) {
  std::ostringstream out;
  out << "D(" << inst.agent_name(tree.agent()) << "): " << tree.size()
      << " nodes\n";
  auto visit = [&](auto&& self, NodeIndex n) -> void {
    const LexNode& node = tree.node(n);
    out << std::string(2 * node.path.size(), ' ')
        << (node.held_task ? inst.task_name(*node.held_task) : std::string("o"))
        << " [rank " << node.rank << "] " << set_label(inst, node) << "\n";
    for (NodeIndex c : node.children) self(self, c);
  };
  if (tree.size() > 0) visit(visit, tree.root());
  return out.str();
}

std::string render_tree_dot(const Instance& inst, const LexTree& tree) {
  std::ostringstream out;
  out << "digraph \"D(" << dot_escape(inst.agent_name(tree.agent())) << ")\" {\n";
  for (NodeIndex n = 0; n < tree.size(); ++n) {
    const LexNode& node = tree.node(n);
    const std::string held =
        node.held_task ? inst.task_name(*node.held_task) : std::string("o");
    out << "  n" << n << " [label=\"" << dot_escape(held) << "\\nrank "
        << node.rank << "\\n" << dot_escape(set_label(inst, node)) << "\"];\n";
  }
  for (NodeIndex n = 0; n < tree.size(); ++n) {
    for (NodeIndex c : tree.node(n).children) {
      out << "  n" << n << " -> n" << c << ";\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace lexmatch

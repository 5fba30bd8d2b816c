#ifndef LEXMATCH_LEXTREE_HPP_
#define LEXMATCH_LEXTREE_HPP_

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lexmatch/ids.hpp"
#include "lexmatch/instance.hpp"

namespace lexmatch {

using NodeIndex = std::size_t;

struct LexNode {
  std::optional<TaskId> held_task;  // empty for the root
  std::optional<NodeIndex> parent;
  std::vector<NodeIndex> children;  // decreasing preference of held task
  std::vector<TaskId> path;         // T(q) along the root path, best first
  TaskSet tasks;                    // T(q), canonical form
  std::size_t rank = 0;             // 1 = most preferred allocation
};

struct TreeLimits {
  std::size_t max_nodes = 1'000'000;
  std::optional<std::size_t> max_depth;
};

// The lexicographic tree D(a): every feasible allocation of one agent appears
// exactly once as a root path, with each path listed best task first.
// Preference between allocations is the post-order position of their nodes
// (children visited left to right), which is what `rank` stores.
class LexTree {
 public:
  LexTree() = default;
  // `nodes` must be in pre-order with the root at index 0. Ranks are
  // (re)computed here.
  LexTree(AgentId agent, std::vector<LexNode> nodes);

  AgentId agent() const { return agent_; }
  std::size_t size() const { return nodes_.size(); }
  NodeIndex root() const { return 0; }
  std::span<const LexNode> nodes() const { return nodes_; }
  const LexNode& node(NodeIndex n) const { return nodes_.at(n); }
  std::size_t depth(NodeIndex n) const { return nodes_.at(n).path.size(); }

  // Node holding rank r, for r in 1..size().
  NodeIndex node_with_rank(std::size_t rank) const { return by_rank_.at(rank - 1); }
  const std::vector<NodeIndex>& nodes_by_rank() const { return by_rank_; }

  NodeIndex leftmost_leaf(NodeIndex from) const;
  // Closest sibling to the right, if any.
  std::optional<NodeIndex> right_sibling(NodeIndex n) const;
  // Ancestor of `n` (or `n` itself) at the given depth.
  NodeIndex ancestor_at_depth(NodeIndex n, std::size_t depth) const;
  // Child of `n` holding `t`, if any.
  std::optional<NodeIndex> child_holding(NodeIndex n, TaskId t) const;

 private:
  AgentId agent_;
  std::vector<LexNode> nodes_;
  std::vector<NodeIndex> by_rank_;
};

LexTree build_tree(const Instance& inst, AgentId a, const TreeLimits& limits = {});
// One tree per agent, in declaration order.
std::vector<LexTree> build_trees(const Instance& inst, const TreeLimits& limits = {});

// Nodes in increasing rank (most preferred first).
std::vector<NodeIndex> rank_nodes(const LexTree& tree);

// Lexicographic comparison of two feasible allocations of `a`;
// `greater` means s1 is preferred. Throws InfeasibleAllocation.
std::strong_ordering compare_alloc(const Instance& inst, AgentId a,
                                   const TaskSet& s1, const TaskSet& s2);

// Ch(a, S): the most preferred feasible subset of S. Tasks outside T(a) are
// ignored.
TaskSet choice(const Instance& inst, AgentId a, const TaskSet& offered);

// Ch(t, S): the most preferred acceptable agent among `offered`.
std::optional<AgentId> task_choice(const Instance& inst, TaskId t,
                                   std::span<const AgentId> offered);

// D(a;S): nodes whose whole root path holds tasks of S only.
LexTree restricted_subtree(const LexTree& tree, const TaskSet& allowed);

// Indented text, one node per line: "<task> [rank r] {T(q)}".
std::string render_tree_text(const Instance& inst, const LexTree& tree);
std::string render_tree_dot(const Instance& inst, const LexTree& tree);

}  // namespace lexmatch

#endif  // LEXMATCH_LEXTREE_HPP_

#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "lexmatch/error.hpp"
#include "lexmatch/lextree.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/random_instances.hpp"

using namespace lexmatch;

namespace {

// rank -> allocation, most preferred first.
std::vector<TaskSet> by_rank(const LexTree& tree) {
  std::vector<TaskSet> out;
  for (NodeIndex n : tree.nodes_by_rank()) out.push_back(tree.node(n).tasks);
  return out;
}

std::vector<TaskId> child_tasks(const LexTree& tree, NodeIndex n) {
  std::vector<TaskId> out;
  for (NodeIndex c : tree.node(n).children) out.push_back(*tree.node(c).held_task);
  return out;
}

}  // namespace

TEST_CASE("trees of the two-agent, two-task example") {
  const Instance inst = fx::ex1();
  const auto trees = build_trees(inst);
  REQUIRE(trees.size() == 2);
  CHECK(by_rank(trees[0]) == std::vector<TaskSet>{fx::ts(inst, {"t1", "t2"}), fx::ts(inst, {"t1"}),
                                                  fx::ts(inst, {"t2"}), TaskSet{}});
  CHECK(by_rank(trees[1]) ==
        std::vector<TaskSet>{fx::ts(inst, {"t2"}), fx::ts(inst, {"t1"}), TaskSet{}});
  CHECK(trees[0].node(trees[0].root()).rank == 4);
  CHECK(trees[1].node(trees[1].root()).rank == 3);
  CHECK(trees[0].node(trees[0].leftmost_leaf(0)).rank == 1);
}

TEST_CASE("tree shape of the no-stable-matching example") {
  const Instance inst = fx::ex2();
  const LexTree d = build_tree(inst, inst.agent("a1"));
  CHECK(d.size() == 5);
  CHECK(child_tasks(d, d.root()) == fx::seq(inst, {"t1", "t3", "t2"}));
  const NodeIndex t1 = d.node(d.root()).children[0];
  CHECK(child_tasks(d, t1) == fx::seq(inst, {"t2"}));
  CHECK(by_rank(d) == std::vector<TaskSet>{fx::ts(inst, {"t1", "t2"}), fx::ts(inst, {"t1"}),
                                           fx::ts(inst, {"t3"}), fx::ts(inst, {"t2"}), TaskSet{}});
  CHECK(d.right_sibling(t1) == d.node(d.root()).children[1]);
  CHECK_FALSE(d.right_sibling(d.node(d.root()).children[2]).has_value());
  CHECK(d.child_holding(d.root(), inst.task("t3")).has_value());
  CHECK_FALSE(d.child_holding(t1, inst.task("t3")).has_value());
}

TEST_CASE("tree of the unequal-stable-matchings example") {
  const Instance inst = fx::ex3();
  const LexTree d = build_tree(inst, inst.agent("a1"));
  CHECK(by_rank(d) == std::vector<TaskSet>{fx::ts(inst, {"t1"}), fx::ts(inst, {"t2", "t3"}),
                                           fx::ts(inst, {"t2"}), fx::ts(inst, {"t3"}), TaskSet{}});
}

TEST_CASE("single agent, single task") {
  const Instance inst = parse_instance(R"({
    "agents": ["a"], "tasks": ["t"], "task_prefs": {"t": ["a"]}, "agent_prefs": {"a": ["t"]},
    "feasibility": {"a": {"kind": "maximal_sets", "sets": [["t"]]}}})");
  const LexTree d = build_tree(inst, AgentId{0});
  CHECK(d.size() == 2);
  CHECK(d.node(d.node_with_rank(1)).tasks == TaskSet{TaskId{0}});
}

TEST_CASE("tree size guards") {
  const Instance inst = fx::ex2();
  TreeLimits limits;
  limits.max_nodes = 3;
  CHECK_THROWS_AS(build_tree(inst, inst.agent("a1"), limits), TreeTooLarge);
  limits = TreeLimits{};
  limits.max_depth = 1;
  CHECK_THROWS_AS(build_tree(inst, inst.agent("a1"), limits), TreeTooLarge);
  CHECK_NOTHROW(build_tree(inst, inst.agent("a2"), limits));
}

TEST_CASE("compare_alloc") {
  const Instance inst = fx::ex1();
  const AgentId a1 = inst.agent("a1");
  CHECK(compare_alloc(inst, a1, fx::ts(inst, {"t1", "t2"}), fx::ts(inst, {"t1"})) ==
        std::strong_ordering::greater);
  CHECK(compare_alloc(inst, a1, fx::ts(inst, {"t2"}), fx::ts(inst, {"t1"})) ==
        std::strong_ordering::less);
  CHECK(compare_alloc(inst, a1, TaskSet{}, TaskSet{}) == std::strong_ordering::equal);
  const Instance inst2 = fx::ex2();
  CHECK_THROWS_AS(compare_alloc(inst2, inst2.agent("a1"), fx::ts(inst2, {"t1", "t3"}), TaskSet{}),
                  InfeasibleAllocation);
}

TEST_CASE("choice functions") {
  const Instance inst = fx::ex2();
  const AgentId a1 = inst.agent("a1");
  CHECK(choice(inst, a1, fx::ts(inst, {"t1", "t3"})) == fx::ts(inst, {"t1"}));
  CHECK(choice(inst, a1, fx::ts(inst, {"t1", "t2", "t3"})) == fx::ts(inst, {"t1", "t2"}));
  CHECK(choice(inst, a1, fx::ts(inst, {"t2", "t3"})) == fx::ts(inst, {"t3"}));
  CHECK(choice(inst, a1, TaskSet{}) == TaskSet{});
  // t3 is not acceptable to a2 and is ignored.
  CHECK(choice(inst, inst.agent("a2"), fx::ts(inst, {"t3"})) == TaskSet{});

  const std::vector<AgentId> only_a2{inst.agent("a2")};
  CHECK_FALSE(task_choice(inst, inst.task("t3"), only_a2).has_value());
  const std::vector<AgentId> both{inst.agent("a1"), inst.agent("a2")};
  CHECK(task_choice(inst, inst.task("t1"), both) == inst.agent("a2"));
  CHECK(task_choice(inst, inst.task("t2"), both) == inst.agent("a1"));
}

TEST_CASE("restricted subtree") {
  const Instance inst = fx::ex2();
  const LexTree d = build_tree(inst, inst.agent("a1"));
  const LexTree all = restricted_subtree(d, fx::ts(inst, {"t1", "t2", "t3"}));
  CHECK(by_rank(all) == by_rank(d));
  const LexTree s = restricted_subtree(d, fx::ts(inst, {"t3", "t2"}));
  CHECK(s.size() == 3);
  CHECK(child_tasks(s, s.root()) == fx::seq(inst, {"t3", "t2"}));
  CHECK(s.node(s.node_with_rank(1)).tasks == fx::ts(inst, {"t3"}));
}

TEST_CASE("rendering") {
  const Instance inst = fx::ex1();
  const LexTree d = build_tree(inst, inst.agent("a1"));
  const std::string text = render_tree_text(inst, d);
  CHECK(text.find("rank 1") != std::string::npos);
  CHECK(text.find("{t1,t2}") != std::string::npos);
  const std::string dot = render_tree_dot(inst, d);
  CHECK(dot.rfind("digraph", 0) == 0);
}

TEST_CASE("property: trees list each feasible set once in lexicographic rank order") {
  std::mt19937_64 rng(5);
  gen::Shape shape;
  shape.max_tasks = 6;
  for (int i = 0; i < 300; ++i) {
    const Instance inst = gen::random_instance(rng, shape);
    for (AgentId a : inst.agent_ids()) {
      const LexTree d = build_tree(inst, a);
      std::set<TaskSet> nodes;
      for (const LexNode& n : d.nodes()) nodes.insert(n.tasks);
      const auto feasible = oracle::feasible_sets(inst, a);
      CHECK(nodes.size() == d.size());
      CHECK(nodes == std::set<TaskSet>(feasible.begin(), feasible.end()));

      const auto ranked = by_rank(d);
      for (std::size_t k = 1; k < ranked.size(); ++k) {
        CHECK(oracle::lex_better(inst, a, ranked[k - 1], ranked[k]));
      }
      CHECK(d.node(d.leftmost_leaf(d.root())).rank == 1);
      CHECK(d.node(d.root()).rank == d.size());
    }
  }
}

TEST_CASE("property: choice agrees with brute force on random offers") {
  std::mt19937_64 rng(6);
  gen::Shape shape;
  shape.max_agents = 2;
  shape.max_tasks = 7;
  for (int i = 0; i < 200; ++i) {
    const Instance inst = gen::random_instance(rng, shape);
    for (AgentId a : inst.agent_ids()) {
      std::vector<TaskId> offered;
      for (TaskId t : inst.task_ids()) {
        if (rng() % 2) offered.push_back(t);
      }
      const TaskSet s(offered);
      CHECK(choice(inst, a, s) == oracle::best_subset(inst, a, s));

      const LexTree sub = restricted_subtree(build_tree(inst, a), s);
      std::set<TaskSet> nodes;
      for (const LexNode& n : sub.nodes()) nodes.insert(n.tasks);
      std::set<TaskSet> expected;
      for (const TaskSet& f : oracle::feasible_sets(inst, a)) {
        if (f.is_subset_of(s)) expected.insert(f);
      }
      CHECK(nodes == expected);
      CHECK(sub.node(sub.node_with_rank(1)).tasks == choice(inst, a, s));
    }
  }
}

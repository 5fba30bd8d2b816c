#include "cli.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "lexmatch/error.hpp"
#include "lexmatch/instance.hpp"
#include "lexmatch/ipmodel.hpp"
#include "lexmatch/lextree.hpp"
#include "lexmatch/matching.hpp"
#include "lexmatch/solver.hpp"
#include "lexmatch/substitutability.hpp"

namespace lexmatch::cli {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Globals {
  bool json = false;
  unsigned threads = 1;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << text;
}

Instance load_instance(const std::string& path) { return parse_instance(read_file(path)); }

AgentId lookup_agent(const Instance& inst, const std::string& name) {
  auto a = inst.find_agent(name);
  if (!a) throw UsageError("unknown agent '" + name + "'");
  return *a;
}

std::string braces(const Instance& inst, const std::vector<TaskId>& tasks) {
  std::string out = "{";
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (i > 0) out += ",";
    out += inst.task_name(tasks[i]);
  }
  return out + "}";
}

std::string braces(const Instance& inst, AgentId a, const TaskSet& tasks) {
  return braces(inst, inst.preference_sorted(a, tasks));
}

std::string braces(const Instance& inst, const TaskSet& tasks) {
  return braces(inst, tasks.items());
}

Objective parse_objective(const std::string& spec, const Instance& inst) {
  if (spec == "max-tasks") return Objective::max_tasks();
  const std::string prefix = "weights=";
  if (spec.rfind(prefix, 0) == 0) {
    return Objective::weighted(parse_weights(read_file(spec.substr(prefix.size())), inst));
  }
  throw UsageError("unknown objective '" + spec + "' (expected max-tasks or weights=<file>)");
}

void print_matching(std::ostream& out, const Instance& inst, const Matching& m) {
  for (AgentId a : inst.agent_ids()) {
    out << "  " << inst.agent_name(a) << ": " << braces(inst, a, m.allocation(a)) << "\n";
  }
}

// ---------------------------------------------------------------------------

struct ValidateArgs {
  std::string instance;
};

int cmd_validate(const ValidateArgs& args, const Globals& g, std::ostream& out) {
  const Instance inst = load_instance(args.instance);
  const ValidationReport report = validate(inst);
  if (g.json) {
    json issues = json::array();
    for (const ValidationIssue& issue : report.issues) {
      issues.push_back({{"severity", issue.severity == Severity::kError ? "error" : "warning"},
                        {"location", issue.location},
                        {"message", issue.message}});
    }
    out << json{{"ok", report.ok}, {"issues", issues}}.dump() << "\n";
  } else {
    out << (report.ok ? "ok" : "invalid") << "\n";
    for (const ValidationIssue& issue : report.issues) {
      out << "  " << (issue.severity == Severity::kError ? "error" : "warning") << " at "
          << (issue.location.empty() ? "<root>" : issue.location) << ": " << issue.message
          << "\n";
    }
  }
  return report.ok ? kOk : kNegative;
}

struct TreeArgs {
  std::string instance;
  std::string agent;
  bool dot = false;
};

int cmd_tree(const TreeArgs& args, const Globals& g, std::ostream& out) {
  const Instance inst = load_instance(args.instance);
  std::vector<AgentId> agents = inst.agent_ids();
  if (!args.agent.empty()) agents = {lookup_agent(inst, args.agent)};
  json trees = json::array();
  for (AgentId a : agents) {
    const LexTree tree = build_tree(inst, a);
    if (g.json) {
      json nodes = json::array();
      for (const LexNode& node : tree.nodes()) {
        json entry{{"rank", node.rank}, {"tasks", json::array()}};
        for (TaskId t : node.path) entry["tasks"].push_back(inst.task_name(t));
        entry["parent_rank"] = node.parent ? json(tree.node(*node.parent).rank) : json(nullptr);
        nodes.push_back(std::move(entry));
      }
      trees.push_back({{"agent", inst.agent_name(a)}, {"nodes", std::move(nodes)}});
    } else if (args.dot) {
      out << render_tree_dot(inst, tree);
    } else {
      out << render_tree_text(inst, tree);
    }
  }
  if (g.json) out << json{{"trees", trees}}.dump() << "\n";
  return kOk;
}

struct ChoiceArgs {
  std::string instance;
  std::string agent;
  std::vector<std::string> tasks;
};

int cmd_choice(const ChoiceArgs& args, const Globals& g, std::ostream& out) {
  const Instance inst = load_instance(args.instance);
  const AgentId a = lookup_agent(inst, args.agent);
  std::vector<TaskId> offered;
  for (const std::string& name : args.tasks) {
    auto t = inst.find_task(name);
    if (!t) throw UsageError("unknown task '" + name + "'");
    offered.push_back(*t);
  }
  const TaskSet offered_set(offered);
  const TaskSet chosen = choice(inst, a, offered_set);
  if (g.json) {
    json picked = json::array();
    for (TaskId t : inst.preference_sorted(a, chosen)) picked.push_back(inst.task_name(t));
    json given = json::array();
    for (TaskId t : offered_set) given.push_back(inst.task_name(t));
    out << json{{"agent", args.agent}, {"offered", given}, {"choice", picked}}.dump() << "\n";
  } else {
    out << "Ch(" << args.agent << ", " << braces(inst, offered_set) << ") = "
        << braces(inst, a, chosen) << "\n";
  }
  return kOk;
}

struct CheckArgs {
  std::string instance;
  std::string matching;
};

int cmd_check(const CheckArgs& args, const Globals& g, std::ostream& out) {
  const Instance inst = load_instance(args.instance);
  const Matching m = parse_matching(read_file(args.matching), inst);
  const StabilityReport report = check_stability(inst, m);
  if (g.json) {
    out << stability_report_to_json(inst, report).dump() << "\n";
  } else if (report.stable) {
    out << "stable\n";
  } else {
    out << "unstable: " << report.blocking_pairs.size() << " blocking pair"
        << (report.blocking_pairs.size() == 1 ? "" : "s") << "\n";
    for (const BlockingPair& bp : report.blocking_pairs) {
      out << "  (" << inst.task_name(bp.task) << "," << inst.agent_name(bp.agent)
          << ") witness " << braces(inst, bp.witness) << "\n";
    }
  }
  return report.stable ? kOk : kNegative;
}

struct EnumerateArgs {
  std::string instance;
  bool stable_only = false;
};

// One JSON document per line regardless of --json.
int cmd_enumerate(const EnumerateArgs& args, const Globals&, std::ostream& out) {
  const Instance inst = load_instance(args.instance);
  const std::vector<LexTree> trees = build_trees(inst);
  for_each_matching(inst, trees, [&](const Matching& m, auto) {
    const bool stable = check_stability(inst, m).stable;
    if (args.stable_only && !stable) return true;
    json line = matching_to_json(inst, m);
    line["stable"] = stable;
    out << line.dump() << "\n";
    return true;
  });
  return kOk;
}

struct SolveArgs {
  std::string instance;
  std::string objective = "max-tasks";
  bool allow_blocking = false;
  std::uint64_t node_limit = SolverConfig{}.node_limit;
  double time_limit = 600.0;
};

int cmd_solve(const SolveArgs& args, const Globals& g, std::ostream& out) {
  const Instance inst = load_instance(args.instance);
  SolverConfig cfg;
  cfg.objective = parse_objective(args.objective, inst);
  cfg.mode = args.allow_blocking ? SolveMode::kRelaxed : SolveMode::kStrict;
  cfg.node_limit = args.node_limit;
  cfg.time_limit = std::chrono::milliseconds(static_cast<std::int64_t>(args.time_limit * 1000.0));
  cfg.threads = g.threads;
  const SolveResult res = solve(inst, cfg);

  if (g.json) {
    out << solve_result_to_json(inst, res).dump() << "\n";
  } else {
    switch (res.status) {
      case SolveStatus::kOptimal:
        out << "optimal: objective " << res.objective_value << "\n";
        break;
      case SolveStatus::kInfeasible:
        out << "infeasible: no stable matching\n";
        break;
      case SolveStatus::kAborted:
        out << "aborted: " << (res.abort_reason == AbortReason::kTimeLimit ? "time" : "node")
            << " limit reached";
        if (res.matching) out << ", incumbent objective " << res.objective_value;
        out << "\n";
        break;
    }
    if (res.matching) {
      if (res.mode == SolveMode::kRelaxed) {
        out << "allocation value " << res.allocation_value << ", blocking pairs "
            << res.blocking_pairs.size() << "\n";
        for (const auto& [t, a] : res.blocking_pairs) {
          out << "  (" << inst.task_name(t) << "," << inst.agent_name(a) << ")\n";
        }
      }
      out << "matching:\n";
      print_matching(out, inst, *res.matching);
    }
  }
  return res.status == SolveStatus::kOptimal ? kOk : kNegative;
}

struct ExportArgs {
  std::string instance;
  bool relaxed = false;
  std::string output;
  std::string objective = "max-tasks";
};

int cmd_export_ip(const ExportArgs& args, const Globals& g, std::ostream& out) {
  const Instance inst = load_instance(args.instance);
  const Objective objective = parse_objective(args.objective, inst);
  const IPModel model =
      args.relaxed ? build_relaxed_ip(inst, objective) : build_ip(inst, objective);
  const std::string text = export_lp(inst, model);
  if (args.output.empty()) {
    out << text;
    return kOk;
  }
  write_file(args.output, text);
  if (g.json) {
    out << json{{"path", args.output},
                {"variables", model.num_vars()},
                {"rows", model.rows.size()}}
               .dump()
        << "\n";
  } else {
    out << "wrote " << args.output << ": " << model.num_vars() << " variables, "
        << model.rows.size() << " rows\n";
  }
  return kOk;
}

struct SubstArgs {
  std::string instance;
  std::string agent;
  std::string method = "both";
  std::size_t max_tasks = kDefaultMaxTasks;
};

int cmd_substitutable(const SubstArgs& args, const Globals& g, std::ostream& out) {
  const Instance inst = load_instance(args.instance);
  std::vector<AgentId> agents = inst.agent_ids();
  if (!args.agent.empty()) agents = {lookup_agent(inst, args.agent)};

  bool all = true;
  json reports = json::array();
  for (AgentId a : agents) {
    SubstReport report;
    report.agent = a;
    std::optional<bool> def_ok;
    std::optional<bool> tree_ok;
    if (args.method != "tree") {
      SubstReport def = is_substitutable_def(inst, a, args.max_tasks);
      def_ok = def.substitutable;
      report.def_witness = def.def_witness;
    }
    if (args.method != "def") {
      SubstReport tree = is_substitutable_tree(inst, a, args.max_tasks);
      tree_ok = tree.substitutable;
      report.tree_witness = tree.tree_witness;
    }
    report.substitutable = def_ok.value_or(true) && tree_ok.value_or(true);
    all = all && report.substitutable;

    if (g.json) {
      json entry = subst_report_to_json(inst, report);
      if (def_ok && tree_ok) entry["methods_agree"] = *def_ok == *tree_ok;
      reports.push_back(std::move(entry));
      continue;
    }
    out << inst.agent_name(a) << ": "
        << (report.substitutable ? "substitutable" : "not substitutable") << "\n";
    if (def_ok && tree_ok && *def_ok != *tree_ok) out << "  methods disagree\n";
    if (const auto& w = report.def_witness) {
      out << "  S=" << braces(inst, a, w->offered) << ": " << inst.task_name(w->kept)
          << " is chosen from S but not from S without " << inst.task_name(w->removed) << "\n";
    }
    if (const auto& w = report.tree_witness) {
      out << "  S=" << braces(inst, a, w->offered) << ": n=" << braces(inst, w->node)
          << ", n_hat=" << braces(inst, w->sibling) << ", leaves "
          << braces(inst, a, w->node_leaf) << " and " << braces(inst, a, w->sibling_leaf)
          << "\n";
    }
  }
  if (g.json) {
    out << json{{"method", args.method}, {"reports", reports}, {"all_substitutable", all}}.dump()
        << "\n";
  }
  return all ? kOk : kNegative;
}

struct GenArgs {
  GeneratorParams params;
  std::string oracle = "maximal_sets";
  std::uint64_t seed = 0;
  std::string output;
};

int cmd_gen(GenArgs args, const Globals& g, std::ostream& out) {
  if (args.oracle == "maximal_sets") {
    args.params.oracle = GeneratedOracle::kMaximalSets;
  } else if (args.oracle == "knapsack") {
    args.params.oracle = GeneratedOracle::kKnapsack;
  } else if (args.oracle == "mixed") {
    args.params.oracle = GeneratedOracle::kMixed;
  } else {
    throw UsageError("unknown oracle '" + args.oracle + "'");
  }
  const std::string text = serialize_instance(generate_random(args.params, args.seed));
  if (args.output.empty()) {
    out << text;
  } else {
    write_file(args.output, text);
    if (g.json) {
      out << json{{"path", args.output}}.dump() << "\n";
    } else {
      out << "wrote " << args.output << "\n";
    }
  }
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stable task allocation with lexicographic preferences", "lexmatch"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_flag("--json", g.json, "Emit JSON");
  app.add_option("--threads", g.threads, "Solver worker threads")->check(CLI::PositiveNumber);

  ValidateArgs validate_args;
  auto* validate_cmd = app.add_subcommand("validate", "Validate an instance file");
  validate_cmd->add_option("instance", validate_args.instance)->required();

  TreeArgs tree_args;
  auto* tree_cmd = app.add_subcommand("tree", "Print lexicographic trees");
  tree_cmd->add_option("instance", tree_args.instance)->required();
  tree_cmd->add_option("--agent", tree_args.agent, "Only this agent");
  tree_cmd->add_flag("--dot", tree_args.dot, "Graphviz output");

  ChoiceArgs choice_args;
  auto* choice_cmd = app.add_subcommand("choice", "Evaluate an agent's choice function");
  choice_cmd->add_option("instance", choice_args.instance)->required();
  choice_cmd->add_option("--agent", choice_args.agent)->required();
  choice_cmd->add_option("--tasks", choice_args.tasks, "Offered tasks")->delimiter(',');

  CheckArgs check_args;
  auto* check_cmd = app.add_subcommand("check", "Check the stability of a matching");
  check_cmd->add_option("instance", check_args.instance)->required();
  check_cmd->add_option("matching", check_args.matching)->required();

  EnumerateArgs enum_args;
  auto* enum_cmd = app.add_subcommand("enumerate", "List valid matchings as JSON lines");
  enum_cmd->add_option("instance", enum_args.instance)->required();
  enum_cmd->add_flag("--stable-only", enum_args.stable_only);

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "Find an optimal stable matching");
  solve_cmd->add_option("instance", solve_args.instance)->required();
  solve_cmd->add_option("--objective", solve_args.objective, "max-tasks or weights=<file>");
  solve_cmd->add_flag("--allow-blocking", solve_args.allow_blocking,
                      "Minimize blocking pairs instead of requiring stability");
  solve_cmd->add_option("--node-limit", solve_args.node_limit)->check(CLI::PositiveNumber);
  solve_cmd->add_option("--time-limit", solve_args.time_limit, "Seconds")
      ->check(CLI::PositiveNumber);

  ExportArgs export_args;
  auto* export_cmd = app.add_subcommand("export-ip", "Write the binary program in LP format");
  export_cmd->add_option("instance", export_args.instance)->required();
  export_cmd->add_flag("--relaxed", export_args.relaxed);
  export_cmd->add_option("-o,--output", export_args.output);
  export_cmd->add_option("--objective", export_args.objective);

  SubstArgs subst_args;
  auto* subst_cmd = app.add_subcommand("substitutable", "Test substitutability");
  subst_cmd->add_option("instance", subst_args.instance)->required();
  subst_cmd->add_option("--agent", subst_args.agent);
  subst_cmd->add_option("--method", subst_args.method)
      ->check(CLI::IsMember({"def", "tree", "both"}));
  subst_cmd->add_option("--max-tasks", subst_args.max_tasks);

  GenArgs gen_args;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a random instance");
  gen_cmd->add_option("--agents", gen_args.params.n_agents);
  gen_cmd->add_option("--tasks", gen_args.params.n_tasks);
  gen_cmd->add_option("--oracle", gen_args.oracle)
      ->check(CLI::IsMember({"maximal_sets", "knapsack", "mixed"}));
  gen_cmd->add_option("--density", gen_args.params.density);
  gen_cmd->add_option("--max-set-size", gen_args.params.max_set_size);
  gen_cmd->add_option("--capacity-min", gen_args.params.capacity_min);
  gen_cmd->add_option("--capacity-max", gen_args.params.capacity_max);
  gen_cmd->add_option("--seed", gen_args.seed);
  gen_cmd->add_option("-o,--output", gen_args.output);

  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (validate_cmd->parsed()) return cmd_validate(validate_args, g, out);
    if (tree_cmd->parsed()) return cmd_tree(tree_args, g, out);
    if (choice_cmd->parsed()) return cmd_choice(choice_args, g, out);
    if (check_cmd->parsed()) return cmd_check(check_args, g, out);
    if (enum_cmd->parsed()) return cmd_enumerate(enum_args, g, out);
    if (solve_cmd->parsed()) return cmd_solve(solve_args, g, out);
    if (export_cmd->parsed()) return cmd_export_ip(export_args, g, out);
    if (subst_cmd->parsed()) return cmd_substitutable(subst_args, g, out);
    if (gen_cmd->parsed()) return cmd_gen(gen_args, g, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace lexmatch::cli

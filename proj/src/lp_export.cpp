#include <cctype>
#include <cstdio>
#include <sstream>

#include "lexmatch/ipmodel.hpp"

namespace lexmatch {

namespace {

// LP names allow far more punctuation, but readers disagree on the details.
// Letters, digits and '_' are portable; anything else is hex-escaped.
std::string lp_identifier(const std::string& name) {
  std::string out;
  for (unsigned char c : name) {
    if (std::isalnum(c) || c == '_') {
      out += static_cast<char>(c);
    } else {
      char buf[8];
      std::snprintf(buf, sizeof buf, "_x%02X_", c);
      out += buf;
    }
  }
  return out;
}

constexpr std::size_t kTermsPerLine = 8;

// Writes "c1 v1 + c2 v2 - v3 ..." wrapped every few terms.
void write_linear(std::ostream& out, const Instance& inst, const IPModel& model,
                  const std::vector<std::pair<std::size_t, std::int64_t>>& terms) {
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto& [var, coef] = terms[i];
    if (i > 0 && i % kTermsPerLine == 0) out << "\n   ";
    if (i == 0) {
      if (coef < 0) out << " -";
    } else {
      out << (coef < 0 ? " -" : " +");
    }
    const std::int64_t magnitude = coef < 0 ? -coef : coef;
    out << ' ';
    if (magnitude != 1) out << magnitude << ' ';
    out << variable_name(inst, model, var);
  }
}

}  // namespace

std::string variable_name(const Instance& inst, const IPModel& model,
                          std::size_t var) {
  if (!model.is_y(var)) {
    const XVar& x = model.x_vars.at(var);
    return "X_" + lp_identifier(inst.agent_name(x.agent)) + "_" +
           std::to_string(x.rank);
  }
  const YVar& y = model.y_vars.at(var - model.x_vars.size());
  return "Y_" + lp_identifier(inst.task_name(y.task)) + "_" +
         lp_identifier(inst.agent_name(y.agent));
}

std::string row_name(const Instance& inst, const LinearRow& row) {
  switch (row.kind) {
    case RowKind::kAgentAssignment:
      return "r_agent_" + lp_identifier(inst.agent_name(*row.agent));
    case RowKind::kTaskCapacity:
      return "r_task_" + lp_identifier(inst.task_name(*row.task));
    case RowKind::kStability:
      return "r_stab_" + lp_identifier(inst.task_name(*row.task)) + "_" +
             lp_identifier(inst.agent_name(*row.agent));
  }
  return "r";
}

std::string export_lp(const Instance& inst, const IPModel& model) {
  std::ostringstream out;
  out << "\\ stable allocation model: " << model.x_vars.size() << " X, "
      << model.y_vars.size() << " Y, " << model.rows.size() << " rows\n";

  out << "Maximize\n obj:";
  std::vector<std::pair<std::size_t, std::int64_t>> objective;
  for (std::size_t var = 0; var < model.num_vars(); ++var) {
    objective.emplace_back(var, model.objective[var]);
  }
  if (objective.empty()) {
    out << " 0";
  } else {
    write_linear(out, inst, model, objective);
  }
  out << "\nSubject To\n";

  for (const LinearRow& row : model.rows) {
    if (row.terms.empty()) {
      // No variable can appear; the row is trivially satisfied.
      out << "\\ " << row_name(inst, row) << ": empty\n";
      continue;
    }
    std::vector<std::pair<std::size_t, std::int64_t>> terms;
    for (const Term& term : row.terms) terms.emplace_back(term.var, term.coefficient);
    out << ' ' << row_name(inst, row) << ':';
    write_linear(out, inst, model, terms);
    out << (row.relation == Relation::kEqual ? " = " : " <= ") << row.rhs << "\n";
  }

  out << "Binary\n";
  for (std::size_t var = 0; var < model.num_vars(); ++var) {
    out << ' ' << variable_name(inst, model, var) << "\n";
  }
  out << "End\n";
  return out.str();
}

}  // namespace lexmatch

#pragma once

#include <qknow/classical.hpp>
#include <qknow/formula.hpp>
#include <qknow/knowledge.hpp>
#include <qknow/model_io.hpp>
#include <qknow/multi_question.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace qknow::cli {

enum ExitCode : int { success = 0, invalid_model = 1, query_error = 2 };

namespace detail {

/// Raised for user-facing query problems; maps to exit code 2.
struct QueryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw QueryError("cannot read model file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void print_subspace(std::ostream& out, const Subspace& s, const std::string& indent = "") {
  out << indent << "rank: " << s.rank() << "\n";
  for (const auto& row : s.basis()) out << indent << to_string(row) << "\n";
}

inline std::string set_name(const StateSet& e) {
  std::string out = "{";
  for (auto it = e.begin(); it != e.end(); ++it) out += (it == e.begin() ? "" : ",") + std::to_string(*it);
  return out + "}";
}

inline int compare_classical(const ClassicalModel& classical, std::ostream& out) {
  const Model quantum = embed(classical);
  const std::size_t n = classical.omega_size();

  std::vector<std::pair<std::string, StateSet>> events(classical.events().begin(), classical.events().end());
  auto add_generated = [&](const StateSet& e) {
    for (const auto& [name, existing] : events)
      if (existing == e) return;
    events.emplace_back(set_name(e), e);
  };
  if (n <= 5) {
    for (std::size_t w = 0; w < n; ++w) add_generated({w});
    for (const auto& p : classical.partitions())
      for (const auto& block : p.blocks()) add_generated(block);
  }

  std::size_t total = 0;
  std::size_t failed = 0;
  auto row = [&](const std::string& check, const std::string& agent, const std::string& event, bool pass) {
    ++total;
    if (!pass) ++failed;
    out << std::left << std::setw(8) << check << std::setw(7) << agent << std::setw(16) << event
        << (pass ? "PASS" : "FAIL") << "\n";
  };

  out << std::left << std::setw(8) << "check" << std::setw(7) << "agent" << std::setw(16) << "event"
      << "result\n";
  const ClassicalPartition coarsest = meet_partition(classical.partitions());
  for (const auto& [name, e] : events) {
    const Subspace embedded = subspace_of(n, e);
    for (std::size_t i = 0; i < classical.partitions().size(); ++i) {
      const ClassicalPartition& p = classical.partitions()[i];
      const SpectralFamily& f = quantum.agents()[i].questions.front();
      const std::string agent = std::to_string(i + 1);
      row("K", agent, name, knowledge_operator(f, embedded) == subspace_of(n, classical_K(p, e)));
      bool knows_agree = true;
      for (std::size_t w = 0; w < n; ++w)
        knows_agree = knows_agree && classical_knows(p, w, e) == knows(f, Vector::unit(n, w), embedded);
      row("knows", agent, name, knows_agree);
    }
    const StateSet ck = classical_common_knowledge(classical, e);
    row("meet", "*", name, ck == classical_K(coarsest, e));
    row("common", "*", name, common_knowledge(quantum, embedded).fixed_point == subspace_of(n, ck));
  }
  out << "summary: " << total << " checks, " << failed << " failed\n";
  return failed == 0 ? success : invalid_model;
}

}  // namespace detail

/// Runs one CLI invocation. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact knowledge and common-knowledge queries over finite-dimensional Hilbert space models", "qknow"};
  app.require_subcommand(1);

  std::string model_path;
  std::string formula_text;
  std::string state_name;
  std::string event_name;
  std::string scheme = "single";
  std::size_t agent_index = 0;
  bool trace = false;

  auto* validate_cmd = app.add_subcommand("validate", "Validate a model file");
  validate_cmd->add_option("model", model_path, "Model JSON file")->required();

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a formula to a subspace");
  eval_cmd->add_option("model", model_path, "Model JSON file")->required();
  eval_cmd->add_option("--formula", formula_text, "Formula")->required();
  eval_cmd->add_option("--state", state_name, "Named state: report membership and probability");

  auto* knows_cmd = app.add_subcommand("knows", "Does an agent know an event at a state?");
  knows_cmd->add_option("model", model_path, "Model JSON file")->required();
  knows_cmd->add_option("--agent", agent_index, "1-based agent index")->required();
  knows_cmd->add_option("--state", state_name, "Named state")->required();
  knows_cmd->add_option("--event", event_name, "Named event")->required();
  knows_cmd->add_option("--scheme", scheme, "single | von-neumann | either-or")
      ->check(CLI::IsMember({"single", "von-neumann", "either-or"}));

  auto* common_cmd = app.add_subcommand("common", "Common knowledge of a formula's event");
  common_cmd->add_option("model", model_path, "Model JSON file")->required();
  common_cmd->add_option("--formula", formula_text, "Formula")->required();
  common_cmd->add_flag("--trace", trace, "Print every level of the mutual-knowledge hierarchy");

  auto* compare_cmd = app.add_subcommand("compare-classical", "Cross-check a classical model against its embedding");
  compare_cmd->add_option("model", model_path, "Classical model JSON file")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? success : query_error;
  }

  try {
    const std::string text = detail::read_file(model_path);

    if (validate_cmd->parsed()) {
      ValidationReport report;
      try {
        report = validate(parse_document(text));
      } catch (const ModelError& e) {
        report = e.report();
      }
      if (report.empty()) {
        out << "valid\n";
        return success;
      }
      for (const auto& issue : report.issues) out << to_string(issue) << "\n";
      return invalid_model;
    }

    if (compare_cmd->parsed()) {
      const auto classical = load_classical_model(text);
      if (!classical) throw detail::QueryError("'" + model_path + "' is not a classical model document");
      return detail::compare_classical(*classical, out);
    }

    const Model model = load_model(text);

    if (eval_cmd->parsed()) {
      const Subspace result = evaluate(model, parse(formula_text));
      detail::print_subspace(out, result);
      if (!state_name.empty()) {
        const Vector& psi = model.state(state_name);
        out << "member: " << (contains(result, psi) ? "true" : "false") << "\n";
        out << "probability: " << to_string(probability(psi, result)) << "\n";
      }
      return success;
    }

    if (knows_cmd->parsed()) {
      const Agent& agent = model.agent(agent_index);
      const Vector& psi = model.state(state_name);
      const Subspace& event = model.event(event_name);
      bool result = false;
      if (scheme == "single") {
        if (!agent.single_question())
          throw detail::QueryError("agent " + std::to_string(agent_index) + " declares " +
                                   std::to_string(agent.questions.size()) +
                                   " question families; use --scheme von-neumann or --scheme either-or");
        result = knows(agent.questions.front(), psi, event);
      } else {
        if (agent.single_question())
          throw detail::QueryError("--scheme " + scheme + " needs an agent with several question families; agent " +
                                   std::to_string(agent_index) + " declares one");
        result = scheme == "von-neumann" ? knows_von_neumann(agent.questions, psi, event)
                                         : knows_either_or(agent.questions, psi, event);
      }
      out << (result ? "true" : "false") << "\n";
      return success;
    }

    if (common_cmd->parsed()) {
      if (!model.all_single_question())
        throw detail::QueryError("common knowledge is undefined for models with multi-question agents");
      const CommonKnowledge ck = common_knowledge(model, evaluate(model, parse(formula_text)));
      if (trace) {
        for (std::size_t n = 0; n < ck.trace.size(); ++n) {
          out << "M" << n << "\n";
          detail::print_subspace(out, ck.trace[n], "  ");
        }
        out << "stabilized at n = " << ck.stabilization_index() << "\n";
      }
      detail::print_subspace(out, ck.fixed_point);
      return success;
    }
  } catch (const ModelError& e) {
    err << e.what() << "\n";
    return invalid_model;
  } catch (const ParseError& e) {
    err << "formula " << e.what() << "\n";
    return query_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return query_error;
  }
  return query_error;
}

}  // namespace qknow::cli

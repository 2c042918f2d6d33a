// cfgalg: simulate configuration change under drift, then try to undo it.
//
// Subcommands map one-to-one onto the library's operations: sim drives the
// automaton, rollback tries the four reversal remedies, converge runs the
// desired-state repair, report prints the journal/history counting facts.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cfgalg/engine.hpp"
#include "cfgalg/policy.hpp"
#include "cfgalg/serialize.hpp"

namespace {

using namespace cfgalg;

int exit_code_for(ErrorCode code) {
  return (code == ErrorCode::io_error || code == ErrorCode::format_error) ? 2 : 1;
}

std::string render_state(const SchemaFile& schema, const StateVec& state) {
  std::string out;
  for (std::size_t i = 0; i < schema.arity(); ++i) {
    if (i > 0)
      out += " ";
    const auto decoded = schema.parameter(i).decode(state[i]);
    out += schema.parameter(i).name();
    out += "=";
    out += decoded.extended() ? "extended(" + decoded.value.str() + ")"
                              : raw_to_display(*decoded.raw);
  }
  return out;
}

struct SimArgs {
  std::string schema_path;
  std::string journal_path;
  std::uint64_t ticks = 0;
  std::string drift_rate = "0";
  std::string drift_style = "set-random";
  std::uint64_t seed = 0;
  std::string out_path;
};

int cmd_sim(const SimArgs& args) {
  const SchemaFile schema = schema_from_json(load_json_file(args.schema_path));
  const Journal journal = journal_from_json(load_json_file(args.journal_path), schema);

  DriftModel drift;
  drift.rate = Rational::parse(args.drift_rate);
  drift.seed = args.seed;
  if (args.drift_style == "set-random")
    drift.style = DriftStyle::set_random;
  else if (args.drift_style == "add-random")
    drift.style = DriftStyle::add_random;
  else
    throw FormatError("unknown drift style '" + args.drift_style + "'");

  const Trace trace = run_sim(schema, schema.initial(), journal, args.ticks, drift);
  write_json_file(args.out_path, trace_to_json(trace));

  std::cout << "ticks: " << trace.ticks << "\n"
            << "journal entries: " << trace.journal.size() << "\n"
            << "drift events: " << trace.drift_count << "\n"
            << "final: " << render_state(trace.schema, trace.final_state) << "\n"
            << "wrote " << args.out_path << "\n";
  return 0;
}

struct RollbackArgs {
  std::string trace_path;
  std::string mode = "strict";
  std::string policy_path;
};

int cmd_rollback(const RollbackArgs& args) {
  const Trace trace = trace_from_json(load_json_file(args.trace_path));

  RollbackMode mode = RollbackMode::strict();
  if (args.mode == "strict") {
    mode = RollbackMode::strict();
  } else if (args.mode == "meadow") {
    mode = RollbackMode::meadow();
  } else if (args.mode == "snapshot") {
    mode = RollbackMode::snapshot();
  } else if (args.mode == "policy") {
    const Policy policy =
        policy_from_json(load_json_file(args.policy_path), trace.schema);
    mode = RollbackMode::policy(policy.as_op());
  } else {
    throw FormatError("unknown rollback mode '" + args.mode + "'");
  }

  const RollbackResult result = rollback(trace, mode);

  std::cout << "mode: " << args.mode << "\n";
  for (const EntryStatus& status : result.statuses) {
    std::cout << "entry " << status.journal_index << ": ";
    if (status.outcome == EntryStatus::Outcome::inverted) {
      std::cout << "inverted\n";
    } else {
      std::cout << "NOT_INVERTIBLE (components:";
      for (std::size_t c : status.failed_components)
        std::cout << " " << c;
      std::cout << ")\n";
    }
  }
  if (!result.ok()) {
    std::cerr << "NOT_INVERTIBLE: journal entry " << *result.failed_entry
              << " has no strict inverse\n";
    return 1;
  }
  std::cout << "state: " << render_state(trace.schema, result.state) << "\n";
  return 0;
}

int cmd_converge(const std::string& trace_path, const std::string& policy_path) {
  const Trace trace = trace_from_json(load_json_file(trace_path));
  const Policy policy = policy_from_json(load_json_file(policy_path), trace.schema);

  const RepairReport report = converge(policy, trace.final_state);
  std::cout << "pre:  " << render_state(trace.schema, report.pre) << "\n"
            << "post: " << render_state(trace.schema, report.post) << "\n";
  std::cout << "changed:";
  if (report.changed_indices.empty()) {
    std::cout << " none";
  } else {
    for (std::size_t i : report.changed_indices)
      std::cout << " " << trace.schema.parameter(i).name();
  }
  std::cout << "\niterations_to_fixpoint: " << report.iterations_to_fixpoint << "\n";
  return 0;
}

int cmd_report(const std::string& trace_path) {
  const Trace trace = trace_from_json(load_json_file(trace_path));
  const LemmaReport report = lemma_report(trace);

  std::cout << "journal length: " << report.journal_len << "\n"
            << "history transitions: " << report.history_transitions << "\n"
            << "drift events: " << report.drift_count << "\n"
            << "verdict: " << (report.counts_equal ? "|H| = |J|, closed" : "|H| > |J|, open")
            << "\n"
            << "strict rollback feasible: " << (report.strict_rollback_feasible ? "yes" : "no")
            << "\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"algebra of configuration change: simulate, roll back, converge, report"};
  app.require_subcommand(1);

  SimArgs sim_args;
  CLI::App* sim = app.add_subcommand("sim", "run a journal under a drift model");
  sim->add_option("schema", sim_args.schema_path, "schema file")->required();
  sim->add_option("journal", sim_args.journal_path, "journal file")->required();
  sim->add_option("--ticks", sim_args.ticks, "simulation horizon")->required();
  sim->add_option("--drift-rate", sim_args.drift_rate,
                  "drift probability per tick per parameter (rational, default 0)");
  sim->add_option("--drift-style", sim_args.drift_style, "set-random or add-random");
  sim->add_option("--seed", sim_args.seed, "drift seed (default 0)");
  sim->add_option("--out", sim_args.out_path, "trace output path")->required();

  RollbackArgs rollback_args;
  CLI::App* rb = app.add_subcommand("rollback", "undo a trace's journal");
  rb->add_option("trace", rollback_args.trace_path, "trace file")->required();
  rb->add_option("--mode", rollback_args.mode, "strict, meadow, policy or snapshot")
      ->required();
  CLI::Option* rb_policy =
      rb->add_option("--policy", rollback_args.policy_path, "policy file (policy mode)");

  std::string conv_trace, conv_policy;
  CLI::App* conv = app.add_subcommand("converge", "repair a trace's final state to a policy");
  conv->add_option("trace", conv_trace, "trace file")->required();
  conv->add_option("policy", conv_policy, "policy file")->required();

  std::string report_trace;
  CLI::App* rep = app.add_subcommand("report", "journal/history counting report");
  rep->add_option("trace", report_trace, "trace file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "USAGE: " << e.what() << "\n";
    return 2;
  }

  try {
    if (app.got_subcommand(sim))
      return cmd_sim(sim_args);
    if (app.got_subcommand(rb)) {
      const bool needs_policy = rollback_args.mode == "policy";
      if (needs_policy != (rb_policy->count() > 0)) {
        std::cerr << "USAGE: --policy is required for policy mode and not accepted otherwise\n";
        return 2;
      }
      return cmd_rollback(rollback_args);
    }
    if (app.got_subcommand(conv))
      return cmd_converge(conv_trace, conv_policy);
    return cmd_report(report_trace);
  } catch (const Error& e) {
    std::cerr << to_string(e.code()) << ": " << e.what() << "\n";
    return exit_code_for(e.code());
  }
}

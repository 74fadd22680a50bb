#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "crnext/crnext.hpp"

namespace {

enum ExitCode { kCompleted = 0, kError = 1, kExtinction = 10, kNoVerdict = 20, kNotSubconservative = 30 };

int exit_code(crnext::Verdict v) {
  switch (v) {
    case crnext::Verdict::GuaranteedExtinction: return kExtinction;
    case crnext::Verdict::NoVerdict: return kNoVerdict;
    case crnext::Verdict::NotSubconservative: return kNotSubconservative;
  }
  return kError;
}

std::string component_list(const crnext::ReactionNetwork& net, const crnext::ComplexSet& set) {
  std::string out;
  for (auto i : set) out += (out.empty() ? "" : ", ") + crnext::render_complex(net, i);
  return out.empty() ? "{}" : "{" + out + "}";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structural extinction analysis for chemical reaction networks"};
  app.require_subcommand(1);

  std::string epsilon_text = "1/1000";
  std::string out_path;
  std::string dump_path;
  std::size_t forest_budget = 1'000'000;
  int oracle_bound = 6;
  std::size_t max_reactions = 50;
  std::size_t workers = 0;
  bool verify = false, compat = false, trace = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", out_path, "Report file (analyze) or report directory (batch)");
    sub->add_option("--epsilon", epsilon_text, "Rational epsilon p/q")->capture_default_str();
    sub->add_option("--forest-budget", forest_budget, "Maximum forest candidates per iteration")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_option("--oracle-bound", oracle_bound, "Conserved-total bound for --verify")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--max-reactions", max_reactions, "Skip larger models in batch mode")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_flag("--verify", verify, "Cross-check with LPs and confirm verdicts by state-space search");
    sub->add_flag("--compat-lp", compat, "Use the max-sum balancing objective");
    sub->add_option("--dump-lp", dump_path, "Write every balancing LP in text form to this file");
  };

  std::string model_path;
  auto* analyze_cmd = app.add_subcommand("analyze", "Analyze one .crn file");
  analyze_cmd->add_option("file", model_path, "Network file")->required()->check(CLI::ExistingFile);
  analyze_cmd->add_flag("--trace", trace, "Print per-iteration details to stderr");
  add_common(analyze_cmd);

  std::string batch_dir;
  auto* batch_cmd = app.add_subcommand("batch", "Analyze every .crn file in a directory");
  batch_cmd->add_option("dir", batch_dir, "Directory of .crn files")->required()->check(CLI::ExistingDirectory);
  batch_cmd->add_option("--workers", workers, "Worker threads (0: hardware concurrency)");
  add_common(batch_cmd);

  std::string states_path, initial_text;
  std::size_t max_states = 1'000'000;
  auto* states_cmd = app.add_subcommand("states", "Dump the reachable state graph from an initial state");
  states_cmd->add_option("file", states_path, "Network file")->required()->check(CLI::ExistingFile);
  states_cmd->add_option("--initial", initial_text, "Comma-separated species counts")->required();
  states_cmd->add_option("--max-states", max_states)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    crnext::AnalysisConfig cfg;
    try {
      cfg.epsilon = crnext::parse_rational(epsilon_text);
    } catch (const std::invalid_argument& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kError;
    }
    if (cfg.epsilon <= 0) {
      std::cerr << "error: epsilon must be positive\n";
      return kError;
    }
    cfg.forest_budget = forest_budget;
    cfg.oracle_bound = oracle_bound;
    cfg.max_reactions = max_reactions;
    cfg.verify = verify;
    cfg.compatibility_lp_mode = compat;
    cfg.workers = workers;
    std::ofstream dump;
    if (!dump_path.empty()) {
      dump.open(dump_path);
      if (!dump) throw crnext::IoError("cannot write " + dump_path);
      cfg.lp_dump = &dump;
    }

    if (*analyze_cmd) {
      auto doc = crnext::read_document(model_path);
      auto net = crnext::parse_document(doc);
      auto rep = crnext::analyze(net, cfg, doc.name);
      std::string text = crnext::format_report(rep);
      if (out_path.empty()) std::cout << text;
      else crnext::write_report(rep, out_path);
      if (trace) {
        for (std::size_t i = 0; i < rep.trace.size(); ++i) {
          const auto& r = rep.trace[i];
          std::cerr << "iteration " << i + 1 << ": Y = " << component_list(net, r.absorbing) << ", |D| = "
                    << r.dom_edges.size() << ", candidates " << r.candidates << ", forests " << r.forests;
          if (r.unbalanced) std::cerr << ", unbalanced forest found";
          else if (r.certificate) std::cerr << ", expansion " << component_list(net, r.expansion);
          std::cerr << "\n";
        }
      }
      if (rep.oracle)
        std::cerr << "oracle (bound " << rep.oracle->bound << ", " << rep.oracle->states
                  << " states): " << (rep.oracle->holds ? "confirmed" : "REFUTED") << "\n";
      std::cerr << "elapsed: " << rep.seconds << " s\n";
      if (rep.oracle && !rep.oracle->holds) return kError;
      return exit_code(rep.verdict);
    }

    if (*batch_cmd) {
      auto sum = crnext::run_batch(batch_dir, cfg);
      if (!out_path.empty()) {
        std::filesystem::create_directories(out_path);
        for (const auto& e : sum.entries)
          if (e.report) crnext::write_report(*e.report, std::filesystem::path(out_path) / (e.name + ".dat"));
      }
      std::cout << crnext::format_summary(sum);
      return kCompleted;
    }

    if (*states_cmd) {
      auto net = crnext::parse_document(crnext::read_document(states_path));
      crnext::DiscreteState x;
      std::size_t pos = 0;
      while (pos <= initial_text.size()) {
        auto comma = initial_text.find(',', pos);
        x.counts.push_back(std::stoi(initial_text.substr(pos, comma - pos)));
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
      crnext::write_state_graph(crnext::explore(net, x, max_states), std::cout);
      return kCompleted;
    }
  } catch (const crnext::SyntaxError& e) {
    std::cerr << "syntax error: " << e.what() << "\n";
    return kError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kCompleted;
}

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "commands.hpp"
#include "ecps/error.hpp"

using namespace ecps;
using namespace ecps::cli;

int main(int argc, char** argv) {
  CLI::App app{"ecps: experiments on extended chain systems"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  std::string out;
  RunOptions opt;

  using Command = int (*)(const ExperimentConfig&, const RunOptions&);
  const std::vector<std::tuple<std::string, std::string, Command>> commands = {
      {"verify", "run the exact identity suites", cmd_verify},
      {"phi-decay", "write phi_n traces", cmd_phi_decay},
      {"entropy", "estimate the entropy rate", cmd_entropy},
      {"ergodic", "write ergodic averages", cmd_ergodic},
      {"recurrence", "search translates for recurrence", cmd_recurrence},
  };
  Command chosen = nullptr;
  for (const auto& [name, help, fn] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "experiment config (JSON)")->required();
    sub->add_option("--seed", seed, "override the config seed")->check(CLI::PositiveNumber);
    sub->add_option("--workers", opt.workers, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", out, "output directory");
    sub->callback([&chosen, f = fn] { chosen = f; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : config_error;
  }

  ExperimentConfig config;
  try {
    std::ifstream in(config_path);
    if (!in) throw Error(ErrorCode::config, "cannot read config file " + config_path);
    std::stringstream text;
    text << in.rdbuf();
    config = parse_config(text.str());
    if (seed != 0) config.seed = seed;
    if (!out.empty()) config.output = out;
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return config_error;
  }

  try {
    return chosen(config, opt);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    if (e.code() == ErrorCode::config) return config_error;
    return e.code() == ErrorCode::budget_exceeded ? budget_exceeded : verification_failed;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return verification_failed;
  }
}

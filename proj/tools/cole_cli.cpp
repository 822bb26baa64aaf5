// Experiment front end: run full learning loops, resume them from
// checkpoints, analyze payoff logs and solve single incompatibility
// distributions from the command line.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cole/errors.hpp"
#include "cole/experiment.hpp"
#include "cole/payoff_matrix.hpp"

namespace {

cole::PayoffMatrix load_payoff_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw cole::ParseError("cannot open payoff CSV: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return cole::PayoffMatrix::from_csv(buf.str());
}

cole::TieRule tie_rule_of(const std::string& ties) {
  return ties == "highest" ? cole::TieRule::kHighestIndex
                           : cole::TieRule::kLowestIndex;
}

// Input-side problems exit 1; anything failing mid-run exits 2 with partial
// logs left in place.
template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    return 0;
  } catch (const cole::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const cole::InvalidParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cooperative open-ended learning on matrix games"};
  app.require_subcommand(1);

  std::string config_path, out_dir, payoff_path, checkpoint_path;
  std::string ties = "lowest";
  std::uint64_t seed = 0;
  long mc_samples = 10000;
  long generations = 0;
  bool seed_set = false, generations_set = false, out_set = false;

  CLI::App* run = app.add_subcommand("run", "run a configured experiment");
  run->add_option("--config", config_path, "experiment config file")->required();
  run->add_option("--out", out_dir, "output directory override");
  run->add_option("--seed", seed, "seed override");
  run->add_option("--generations", generations, "generation budget override");

  CLI::App* analyze =
      app.add_subcommand("analyze", "learning-process analysis of a payoff CSV");
  analyze->add_option("payoff", payoff_path, "payoff CSV file")->required();
  analyze->add_option("--ties", ties, "argmax tie rule: lowest|highest")
      ->check(CLI::IsMember({"lowest", "highest"}));
  analyze->add_option("--out", out_dir, "output directory");

  CLI::App* solve = app.add_subcommand("solve", "incompatibility distribution "
                                                "of a payoff CSV");
  solve->add_option("payoff", payoff_path, "payoff CSV file")->required();
  solve->add_option("--mc-samples", mc_samples, "Monte Carlo sample count");
  solve->add_option("--seed", seed, "Monte Carlo seed");
  solve->add_option("--out", out_dir, "output directory");

  CLI::App* resume = app.add_subcommand("resume", "continue a checkpointed run");
  resume->add_option("checkpoint", checkpoint_path, "checkpoint.json")->required();
  resume->add_option("--generations", generations, "extra generations");
  resume->add_option("--out", out_dir, "output directory override");

  CLI11_PARSE(app, argc, argv);
  seed_set = app.count_all() && (run->count("--seed") || solve->count("--seed"));
  generations_set = run->count("--generations") > 0;
  out_set = run->count("--out") > 0;

  if (run->parsed()) {
    return guarded([&] {
      cole::ExperimentConfig cfg = cole::ExperimentConfig::from_file(config_path);
      if (seed_set) cfg.seed = seed;
      if (generations_set) cfg.generations = generations;
      if (out_set) cfg.out_dir = out_dir;
      cole::run_experiment(cfg, std::cout);
    });
  }
  if (analyze->parsed()) {
    return guarded([&] {
      const cole::PayoffMatrix m = load_payoff_csv(payoff_path);
      cole::write_analysis(m, tie_rule_of(ties), out_dir.empty() ? "." : out_dir);
    });
  }
  if (solve->parsed()) {
    return guarded([&] {
      const cole::PayoffMatrix m = load_payoff_csv(payoff_path);
      cole::write_solve(m, mc_samples, seed, out_dir.empty() ? "." : out_dir,
                        std::cout);
    });
  }
  if (resume->parsed()) {
    return guarded([&] {
      cole::resume_experiment(checkpoint_path, generations, out_dir, std::cout);
    });
  }
  return 1;
}

#ifndef COLE_EXPERIMENT_HPP_
#define COLE_EXPERIMENT_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>

#include "cole/engine.hpp"
#include "cole/matrix_game.hpp"

namespace cole {

/// Flat key = value experiment description. Every hyperparameter is explicit
/// so the copy written next to the results fully determines the run.
struct ExperimentConfig {
  // game spec, inline or external JSON
  std::string game_kind = "dominant";  // dominant | convention | file
  std::string game_file;
  int game_m = 4;
  double game_bonus = 1.0;
  int game_blocks = 2;
  int game_actions_per_block = 2;
  double game_intra = 1.0;
  double game_inter = 0.0;
  double game_jitter = 0.0;
  std::uint64_t game_seed = 0;
  std::string game_noise = "exact";  // exact | episodes
  long game_episodes = 100;

  long generations = 10;
  int ratio_a = 1;
  int ratio_b = 3;
  double alpha = 1.0;
  double c = 1.0;
  int k = 3;
  long mc_samples = 10000;
  int exact_limit = 10;
  double damping = 0.85;
  double pagerank_tol = 1e-12;
  int pagerank_max_iter = 100000;
  int population_cap = 50;
  int evict_window = 10;
  std::string oracle = "exact";  // exact | local
  int oracle_steps = 10;
  double oracle_step_size = 1.0;
  std::string ties = "lowest";  // lowest | highest
  std::string sigma_weighting = "popularity";  // popularity | unpopularity
  std::uint64_t seed = 0;
  std::string out_dir = "out";

  static ExperimentConfig from_string(const std::string& text);
  static ExperimentConfig from_file(const std::string& path);
  std::string to_string() const;

  MatrixCoopGame build_game() const;
  EngineConfig engine_config() const;
  TieRule tie_rule() const;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Runs the configured generation budget, writing generations.jsonl,
/// checkpoint.json, payoff.csv, eta_history.csv and the config copy under
/// out_dir. One summary line per generation goes to `progress`.
void run_experiment(const ExperimentConfig& config, std::ostream& progress);

/// Continues a checkpointed run for `extra` generations, appending to the
/// existing generation log. With extra == 0 nothing is touched. Empty
/// out_override keeps the checkpoint's own directory.
void resume_experiment(const std::string& checkpoint_path, long extra,
                       const std::string& out_override, std::ostream& progress);

/// Learning-process analysis of a payoff table: preference_edges.csv,
/// eta_history.csv and wpg.csv under out_dir.
void write_analysis(const PayoffMatrix& m, TieRule ties,
                    const std::string& out_dir);

/// One-shot solver run; writes shapley.json and prints the efficiency check
/// when the exact path was taken.
void write_solve(const PayoffMatrix& m, long mc_samples, std::uint64_t seed,
                 const std::string& out_dir, std::ostream& progress);

}  // namespace cole

#endif  // COLE_EXPERIMENT_HPP_

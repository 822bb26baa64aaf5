#ifndef COLE_ENGINE_HPP_
#define COLE_ENGINE_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cole/matrix_game.hpp"
#include "cole/payoff_matrix.hpp"
#include "cole/shapley.hpp"
#include "cole/trainer.hpp"

namespace cole {

enum class OracleKind { kExact, kLocal };

struct EngineConfig {
  SolverConfig solver;
  OracleConfig oracle;
  OracleKind oracle_kind = OracleKind::kExact;
  int population_cap = 50;
  int evict_window = 10;
};

/// Generation-ordered strategy population with its complete payoff table.
/// Member ids are birth generations and survive evictions unchanged.
struct Population {
  std::vector<Strategy> members;
  std::vector<long> member_ids;
  PayoffMatrix payoff;
  VisitCounter visits;
  long next_id = 1;
  bool payoff_filled = false;

  static Population initial(Strategy first);
  int size() const { return static_cast<int>(members.size()); }
};

struct GenerationRecord {
  long generation = 0;
  std::string payoff_hash;
  ShapleyVector shapley;
  IncompatibilityDistribution phi;
  OracleResult oracle;
  std::vector<double> eta_row;        // centrality of the post-generation population
  std::vector<int> preference_edges;  // out-edges matching eta_row
  std::optional<long> evicted;        // member id removed this generation
  std::uint64_t seed = 0;             // master seed the run derives streams from

  std::string to_json_string() const;
};

/// Payoff matrix extended by one row and column for `candidate`. Noisy games
/// draw per-pair substreams keyed by member ids, so entries do not depend on
/// evaluation order.
PayoffMatrix simulate_payoffs(const Population& pop, const Strategy& candidate,
                              const MatrixCoopGame& game,
                              std::uint64_t master_seed);

/// One full generation: complete the payoff table, solve the
/// incompatibility distribution, train a candidate against it, expand the
/// population and evict past the cap. Bit-reproducible for a fixed
/// (config, seed, game) triple.
GenerationRecord run_generation(Population& pop, const MatrixCoopGame& game,
                                const EngineConfig& config,
                                std::uint64_t master_seed, long generation);

/// Removes a uniformly random member among the earliest evict_window
/// members when the population exceeds the cap. Returns the removed id.
std::optional<long> evict(Population& pop, const EngineConfig& config,
                          std::uint64_t master_seed, long generation);

struct ConvergenceDiagnostics {
  std::vector<double> eta_sequence;    // eta of the newest strategy, per generation
  std::vector<double> ratio_sequence;  // eta_{t+1} / eta_t where eta_t > 0
  std::optional<long> converged_at;    // first generation with eta == 0
  bool centrality_formula_verified = false;
};

/// Per-generation centrality trajectory plus a recount of the in-degree
/// formula from the recorded preference edges.
ConvergenceDiagnostics diagnostics(std::span<const GenerationRecord> records);

/// Everything needed to continue a run bit-identically.
struct Checkpoint {
  int version = 1;
  Population pop;
  long next_generation = 1;
  std::uint64_t master_seed = 0;
  std::string game_json;
  std::string config_text;  // canonical experiment config

  std::string to_json_string() const;
  static Checkpoint from_json_string(const std::string& text);
};

}  // namespace cole

#endif  // COLE_ENGINE_HPP_

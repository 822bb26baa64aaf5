#ifndef COLE_TRAINER_HPP_
#define COLE_TRAINER_HPP_

#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "cole/matrix_game.hpp"
#include "cole/preference_graph.hpp"
#include "cole/shapley.hpp"

namespace cole {

/// Times each population member has been drawn as a training partner.
struct VisitCounter {
  std::vector<long> counts;

  explicit VisitCounter(int n = 0) : counts(n, 0) {}
  long total() const;
};

/// Mixture objective: expected payoff against phi-weighted partners plus
/// alpha times the self-play return, evaluated in closed form.
double objective_value(const MatrixCoopGame& game,
                       std::span<const Strategy> members,
                       const std::vector<double>& phi, double alpha,
                       const Strategy& s);

/// Sampling weights combining phi with a visit-count exploration bonus
/// c * sqrt(total visits) / (1 + visits(u)), renormalized to a distribution.
/// With c == 0 or no visits recorded the result is exactly phi.
std::vector<double> sucg_weights(const std::vector<double>& phi,
                                 const VisitCounter& visits, double c);

struct PartnerDraw {
  bool self_play = false;
  int index = -1;  // population index, -1 for self-play slots
};

/// `a` self-play slots followed by `b` sequential draws from sucg_weights,
/// recomputing the weights and bumping the visit count after every draw.
std::vector<PartnerDraw> sample_partners(const std::vector<double>& phi,
                                         VisitCounter& visits, double c, int b,
                                         int a, std::uint64_t seed);
std::vector<PartnerDraw> sample_partners(const std::vector<double>& phi,
                                         VisitCounter& visits, double c, int b,
                                         int a, std::mt19937_64& gen);

struct AcceptanceOutcome {
  int rank = 0;
  bool accepted = false;
};

/// Rank of the candidate's centrality inside the expanded population:
/// 1 + number of strictly smaller values. Accepted when rank <= k.
AcceptanceOutcome acceptance_test(std::span<const double> eta, int new_index,
                                  int k);

struct OracleResult {
  Strategy strategy = Strategy({1.0});  // placeholder until the oracle fills it
  double objective_value = 0.0;
  double eta_new = 1.0;
  int rank = 0;
  bool accepted = false;
  std::vector<std::pair<int, double>> trace;  // (step, objective value)
};

struct OracleConfig {
  double alpha = 1.0;
  int k = 3;
  double c = 1.0;        // exploration constant for partner sampling
  int ratio_a = 1;       // self-play slots per update
  int ratio_b = 3;       // sampled partners per update
  int steps = 10;        // local oracle updates
  double step_size = 1.0;
  TieRule ties = TieRule::kLowestIndex;
};

/// Exact best response to the mixture objective over the action simplex.
/// Enumerates the vertices; when alpha != 0 makes the objective quadratic it
/// additionally refines by projected gradient ascent from every vertex and
/// keeps the best point found. Ties go to the lowest-index vertex. The
/// returned centrality and rank are measured against the population expanded
/// with the candidate.
OracleResult oracle_exact(const MatrixCoopGame& game,
                          std::span<const Strategy> members,
                          const std::vector<double>& phi,
                          const OracleConfig& config);

/// Stochastic approximation of the best response: multiplicative-weights
/// ascent from the newest member, with partners resampled through
/// sample_partners before every step. Returns the best iterate seen, so the
/// result never scores below the start point.
OracleResult oracle_local(const MatrixCoopGame& game,
                          std::span<const Strategy> members,
                          const std::vector<double>& phi,
                          const OracleConfig& config, std::uint64_t seed,
                          VisitCounter& visits);

}  // namespace cole

#endif  // COLE_TRAINER_HPP_

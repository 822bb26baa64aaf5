#ifndef COLE_SHAPLEY_HPP_
#define COLE_SHAPLEY_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cole/pagerank.hpp"
#include "cole/payoff_matrix.hpp"
#include "cole/preference_graph.hpp"

namespace cole {

/// Coalition game over the population: v(C) is the expected sigma-weighted
/// pairwise payoff when both seats are drawn uniformly (and independently)
/// from C. sigma is a per-strategy weight, strictly positive.
class CharacteristicFunction {
 public:
  CharacteristicFunction(std::vector<double> sigma, PayoffMatrix m);

  int size() const { return m_.size(); }
  const std::vector<double>& sigma() const { return sigma_; }
  const PayoffMatrix& payoff() const { return m_; }

  /// sigma(i) * sigma(j) * w(i, j)
  double weighted_pair(int i, int j) const {
    return sigma_[i] * sigma_[j] * m_.at(i, j);
  }

 private:
  std::vector<double> sigma_;
  PayoffMatrix m_;
};

/// v(C): 0 for the empty coalition, otherwise the full double sum over C
/// divided by |C|^2. Single elements give sigma(i)^2 * w(i,i).
double characteristic_value(const CharacteristicFunction& cf,
                            std::span<const int> coalition);

enum class ShapleyMethod { kExact, kMonteCarlo };

struct ShapleyVector {
  std::vector<double> sv;
  ShapleyMethod method = ShapleyMethod::kExact;
  long samples = 0;             // 0 for exact
  std::uint64_t seed = 0;       // meaningful for Monte Carlo only
  std::vector<double> std_err;  // per-coordinate Monte Carlo standard error
};

inline constexpr int kDefaultExactLimit = 10;

/// Average marginal contribution over every join order, computed through the
/// equivalent subset-weighted sum with coalition values built incrementally
/// over bitmasks. Refuses populations beyond `exact_limit` (TooLargeError).
ShapleyVector exact_shapley(const CharacteristicFunction& cf,
                            int exact_limit = kDefaultExactLimit);

/// Monte Carlo permutation sampling: draws `samples` uniform join orders and
/// averages each player's marginal contribution. Deterministic per seed.
ShapleyVector mc_shapley(const CharacteristicFunction& cf, long samples,
                         std::uint64_t seed);

struct IncompatibilityDistribution {
  std::vector<double> phi;
  /// True when every (shifted) Shapley value was zero and the distribution
  /// fell back to uniform.
  bool uniform_fallback = false;
};

/// Normalize-and-invert: shift values so the minimum is zero, divide by the
/// total, then renormalize the complements. Lower Shapley value means higher
/// probability mass; equal values mean uniform.
IncompatibilityDistribution incompatibility_distribution(
    const std::vector<double>& sv);

/// How the coalition weight sigma is derived from the PageRank scores.
/// kPopularity uses sigma = pr, which makes the inverted distribution load
/// onto strategies the population fails to coordinate with. kUnpopularity
/// uses sigma = 1/pr; under that weighting the self-play term of an
/// unpreferred strategy dominates every coalition it joins and the final
/// distribution loads onto well-coordinated strategies instead, so it is
/// kept only for comparison runs.
enum class SigmaWeighting { kPopularity, kUnpopularity };

struct SolverConfig {
  double damping = kDefaultDamping;
  double pagerank_tol = kDefaultPagerankTol;
  int pagerank_max_iter = kDefaultPagerankMaxIter;
  int exact_limit = kDefaultExactLimit;
  long mc_samples = 10000;
  std::uint64_t seed = 0;
  TieRule ties = TieRule::kLowestIndex;
  SigmaWeighting sigma_weighting = SigmaWeighting::kPopularity;
};

struct SolveResult {
  ShapleyVector shapley;
  IncompatibilityDistribution phi;
  PageRankVector pagerank;
  std::vector<double> sigma;
};

/// Full pipeline: preference graph -> weighted PageRank -> sigma ->
/// characteristic function -> Shapley (exact when n <= exact_limit, Monte
/// Carlo otherwise) -> inverted distribution.
SolveResult solve(const PayoffMatrix& m, const SolverConfig& config = {});

/// {"sv": ..., "phi": ..., "method": ..., "samples": ..., "seed": ...}
std::string to_json_string(const ShapleyVector& sv,
                           const IncompatibilityDistribution& phi);

}  // namespace cole

#endif  // COLE_SHAPLEY_HPP_

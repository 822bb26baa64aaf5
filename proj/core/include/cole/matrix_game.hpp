#ifndef COLE_MATRIX_GAME_HPP_
#define COLE_MATRIX_GAME_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace cole {

/// Point on the action simplex. Entries nonnegative, summing to one within
/// 1e-12.
class Strategy {
 public:
  explicit Strategy(std::vector<double> probs);
  static Strategy uniform(int actions);
  static Strategy pure(int actions, int action);

  int actions() const { return static_cast<int>(probs_.size()); }
  double prob(int a) const { return probs_[a]; }
  const std::vector<double>& probs() const { return probs_; }

  bool operator==(const Strategy& other) const = default;

 private:
  std::vector<double> probs_;
};

enum class NoiseMode { kExact, kEpisodes };

/// Two-player common-payoff matrix game. The core is symmetrized on
/// construction so payoff(s, p) == payoff(p, s) holds for every pair.
class MatrixCoopGame {
 public:
  MatrixCoopGame(std::vector<std::vector<double>> payoff_core,
                 NoiseMode noise_mode = NoiseMode::kExact, long episodes = 100);

  int actions() const { return actions_; }
  double core(int a, int b) const { return a_[static_cast<std::size_t>(a) * actions_ + b]; }
  NoiseMode noise_mode() const { return noise_mode_; }
  long episodes() const { return episodes_; }

  /// Exact bilinear value s' A p.
  double payoff_exact(const Strategy& s, const Strategy& p) const;

  /// Mean of `episodes` joint-action draws from s x p. Exact mode ignores
  /// the seed and returns the closed form.
  double payoff(const Strategy& s, const Strategy& p, std::uint64_t seed) const;

  std::string to_json_string() const;
  static MatrixCoopGame from_json_string(const std::string& text);

 private:
  int actions_;
  std::vector<double> a_;  // symmetrized, row-major
  NoiseMode noise_mode_;
  long episodes_;
};

/// Block-diagonal-dominant coordination game: actions split into `blocks`
/// groups of `actions_per_block`; payoff `intra` inside a group, `inter`
/// across groups, plus optional seeded symmetric jitter. Jitter must stay
/// under (intra - inter) / 10 so the block structure stays strict.
MatrixCoopGame gen_convention_game(int blocks, double intra, double inter,
                                   std::uint64_t seed, int actions_per_block = 2,
                                   double jitter = 0.0,
                                   NoiseMode noise_mode = NoiseMode::kExact,
                                   long episodes = 100);

/// Identity payoff with one boosted action: diag(1, ..., 1, 1 + bonus).
MatrixCoopGame gen_dominant_game(int actions, double bonus,
                                 NoiseMode noise_mode = NoiseMode::kExact,
                                 long episodes = 100);

}  // namespace cole

#endif  // COLE_MATRIX_GAME_HPP_

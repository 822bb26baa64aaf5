#include "cole/matrix_game.hpp"

#include <cmath>

#include <json.hpp>

#include "cole/errors.hpp"
#include "cole/rng.hpp"

namespace cole {

Strategy::Strategy(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw InvalidParameterError("strategy needs >= 1 action");
  double total = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0)) throw InvalidParameterError("strategy probabilities must be >= 0");
    total += p;
  }
  if (std::fabs(total - 1.0) > 1e-12) {
    throw InvalidParameterError("strategy probabilities must sum to 1");
  }
}

Strategy Strategy::uniform(int actions) {
  std::vector<double> p(actions, 1.0 / actions);
  // make the sum exactly representable-safe
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) total += p[i];
  p.back() = 1.0 - total;
  return Strategy(std::move(p));
}

Strategy Strategy::pure(int actions, int action) {
  if (action < 0 || action >= actions) throw OutOfRangeError("pure action out of range");
  std::vector<double> p(actions, 0.0);
  p[action] = 1.0;
  return Strategy(std::move(p));
}

MatrixCoopGame::MatrixCoopGame(std::vector<std::vector<double>> payoff_core,
                               NoiseMode noise_mode, long episodes)
    : actions_(static_cast<int>(payoff_core.size())),
      noise_mode_(noise_mode),
      episodes_(episodes) {
  if (actions_ < 1) throw InvalidParameterError("game needs >= 1 action");
  if (episodes_ < 1) throw InvalidParameterError("episodes must be >= 1");
  a_.resize(static_cast<std::size_t>(actions_) * actions_);
  for (const auto& row : payoff_core) {
    if (static_cast<int>(row.size()) != actions_) {
      throw DimensionMismatchError("payoff core is not square");
    }
  }
  for (int i = 0; i < actions_; ++i) {
    for (int j = 0; j < actions_; ++j) {
      const double v = 0.5 * (payoff_core[i][j] + payoff_core[j][i]);
      if (!std::isfinite(v)) throw InvalidParameterError("payoff core entry not finite");
      a_[static_cast<std::size_t>(i) * actions_ + j] = v;
    }
  }
}

double MatrixCoopGame::payoff_exact(const Strategy& s, const Strategy& p) const {
  if (s.actions() != actions_ || p.actions() != actions_) {
    throw DimensionMismatchError("strategy dimension does not match game");
  }
  double total = 0.0;
  for (int i = 0; i < actions_; ++i) {
    if (s.prob(i) == 0.0) continue;
    double row = 0.0;
    for (int j = 0; j < actions_; ++j) row += core(i, j) * p.prob(j);
    total += s.prob(i) * row;
  }
  return total;
}

double MatrixCoopGame::payoff(const Strategy& s, const Strategy& p,
                              std::uint64_t seed) const {
  if (noise_mode_ == NoiseMode::kExact) return payoff_exact(s, p);
  if (s.actions() != actions_ || p.actions() != actions_) {
    throw DimensionMismatchError("strategy dimension does not match game");
  }
  std::mt19937_64 gen(seed);
  auto draw = [&](const Strategy& st) {
    const double u = uniform_double(gen);
    double acc = 0.0;
    for (int a = 0; a < actions_; ++a) {
      acc += st.prob(a);
      if (u < acc) return a;
    }
    return actions_ - 1;
  };
  double total = 0.0;
  for (long e = 0; e < episodes_; ++e) {
    const int a = draw(s);
    const int b = draw(p);
    total += core(a, b);
  }
  return total / static_cast<double>(episodes_);
}

std::string MatrixCoopGame::to_json_string() const {
  nlohmann::json j;
  j["actions"] = actions_;
  j["payoff_core"] = a_;
  j["noise_mode"] = noise_mode_ == NoiseMode::kExact ? "exact" : "episodes";
  j["episodes"] = episodes_;
  return j.dump();
}

MatrixCoopGame MatrixCoopGame::from_json_string(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.contains("actions") || !j.contains("payoff_core")) {
    throw ParseError("bad game JSON");
  }
  const int actions = j.at("actions").get<int>();
  const auto flat = j.at("payoff_core").get<std::vector<double>>();
  if (static_cast<int>(flat.size()) != actions * actions) {
    throw ParseError("game JSON: payoff_core size mismatch");
  }
  std::vector<std::vector<double>> core(actions, std::vector<double>(actions));
  for (int i = 0; i < actions; ++i)
    for (int j2 = 0; j2 < actions; ++j2)
      core[i][j2] = flat[static_cast<std::size_t>(i) * actions + j2];
  NoiseMode mode = NoiseMode::kExact;
  if (j.contains("noise_mode") && j.at("noise_mode").get<std::string>() == "episodes") {
    mode = NoiseMode::kEpisodes;
  }
  const long episodes = j.value("episodes", 100L);
  return MatrixCoopGame(std::move(core), mode, episodes);
}

MatrixCoopGame gen_convention_game(int blocks, double intra, double inter,
                                   std::uint64_t seed, int actions_per_block,
                                   double jitter, NoiseMode noise_mode,
                                   long episodes) {
  if (blocks < 2) throw InvalidParameterError("convention game needs >= 2 blocks");
  if (actions_per_block < 1) throw InvalidParameterError("need >= 1 action per block");
  if (!(intra > inter) || inter < 0.0) {
    throw InvalidParameterError("convention game needs intra > inter >= 0");
  }
  if (jitter < 0.0 || jitter >= (intra - inter) / 10.0) {
    throw InvalidParameterError("jitter must lie in [0, (intra - inter) / 10)");
  }
  const int m = blocks * actions_per_block;
  std::mt19937_64 gen(seed);
  std::vector<std::vector<double>> core(m, std::vector<double>(m));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const bool same_block = i / actions_per_block == j / actions_per_block;
      double v = same_block ? intra : inter;
      if (jitter > 0.0) v += jitter * (2.0 * uniform_double(gen) - 1.0);
      core[i][j] = v;
    }
  }
  return MatrixCoopGame(std::move(core), noise_mode, episodes);
}

MatrixCoopGame gen_dominant_game(int actions, double bonus, NoiseMode noise_mode,
                                 long episodes) {
  if (actions < 2) throw InvalidParameterError("dominant game needs >= 2 actions");
  if (!(bonus > 0.0)) throw InvalidParameterError("bonus must be positive");
  std::vector<std::vector<double>> core(actions, std::vector<double>(actions, 0.0));
  for (int i = 0; i < actions; ++i) core[i][i] = 1.0;
  core[actions - 1][actions - 1] = 1.0 + bonus;
  return MatrixCoopGame(std::move(core), noise_mode, episodes);
}

}  // namespace cole

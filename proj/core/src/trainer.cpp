#include "cole/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "cole/errors.hpp"
#include "cole/payoff_matrix.hpp"
#include "cole/rng.hpp"

namespace cole {

long VisitCounter::total() const {
  return std::accumulate(counts.begin(), counts.end(), 0L);
}

double objective_value(const MatrixCoopGame& game,
                       std::span<const Strategy> members,
                       const std::vector<double>& phi, double alpha,
                       const Strategy& s) {
  if (members.size() != phi.size()) {
    throw DimensionMismatchError("phi length does not match population");
  }
  double coop = 0.0;
  for (std::size_t p = 0; p < members.size(); ++p) {
    if (phi[p] == 0.0) continue;
    coop += phi[p] * game.payoff_exact(s, members[p]);
  }
  return coop + alpha * game.payoff_exact(s, s);
}

std::vector<double> sucg_weights(const std::vector<double>& phi,
                                 const VisitCounter& visits, double c) {
  if (phi.size() != visits.counts.size()) {
    throw DimensionMismatchError("visit counts do not match phi");
  }
  if (c < 0.0) throw InvalidParameterError("exploration constant must be >= 0");
  const long total = visits.total();
  if (c == 0.0 || total == 0) return phi;  // bonus is identically zero

  const double root = std::sqrt(static_cast<double>(total));
  std::vector<double> raw(phi.size());
  double sum = 0.0;
  for (std::size_t u = 0; u < phi.size(); ++u) {
    raw[u] = phi[u] + c * root / (1.0 + static_cast<double>(visits.counts[u]));
    sum += raw[u];
  }
  for (double& r : raw) r /= sum;
  return raw;
}

std::vector<PartnerDraw> sample_partners(const std::vector<double>& phi,
                                         VisitCounter& visits, double c, int b,
                                         int a, std::mt19937_64& gen) {
  if (a < 0 || b < 0 || a + b < 1) {
    throw InvalidParameterError("need at least one self-play or partner slot");
  }
  std::vector<PartnerDraw> out;
  out.reserve(static_cast<std::size_t>(a) + b);
  for (int i = 0; i < a; ++i) out.push_back(PartnerDraw{true, -1});
  for (int i = 0; i < b; ++i) {
    const std::vector<double> weights = sucg_weights(phi, visits, c);
    const int idx = static_cast<int>(sample_weighted(weights, gen));
    ++visits.counts[idx];
    out.push_back(PartnerDraw{false, idx});
  }
  return out;
}

std::vector<PartnerDraw> sample_partners(const std::vector<double>& phi,
                                         VisitCounter& visits, double c, int b,
                                         int a, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  return sample_partners(phi, visits, c, b, a, gen);
}

AcceptanceOutcome acceptance_test(std::span<const double> eta, int new_index,
                                  int k) {
  if (new_index < 0 || new_index >= static_cast<int>(eta.size())) {
    throw OutOfRangeError("candidate index out of range");
  }
  const double mine = eta[new_index];
  int smaller = 0;
  for (double e : eta) {
    if (e < mine) ++smaller;
  }
  const int rank = 1 + smaller;
  return AcceptanceOutcome{rank, rank <= k};
}

namespace {

// Euclidean projection onto the probability simplex.
std::vector<double> project_simplex(std::vector<double> v) {
  std::vector<double> u = v;
  std::sort(u.begin(), u.end(), std::greater<>());
  double css = 0.0, theta = 0.0;
  int rho = 0;
  double running = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    running += u[i];
    if (u[i] * static_cast<double>(i + 1) > running - 1.0) {
      rho = static_cast<int>(i);
      css = running;
    }
  }
  theta = (css - 1.0) / (rho + 1.0);
  for (double& x : v) x = std::max(x - theta, 0.0);
  return v;
}

Strategy normalized_strategy(std::vector<double> x) {
  double total = std::accumulate(x.begin(), x.end(), 0.0);
  for (double& p : x) p /= total;
  // pin the sum exactly to 1 against accumulated rounding
  double rest = 0.0;
  std::size_t top = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] > x[top]) top = i;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (i != top) rest += x[i];
  x[top] = 1.0 - rest;
  return Strategy(std::move(x));
}

// phi-weighted partner mixture as one strategy vector.
std::vector<double> mixture_vector(std::span<const Strategy> members,
                                   const std::vector<double>& phi) {
  std::vector<double> mix(members[0].actions(), 0.0);
  for (std::size_t p = 0; p < members.size(); ++p)
    for (int a = 0; a < members[p].actions(); ++a)
      mix[a] += phi[p] * members[p].prob(a);
  return mix;
}

std::vector<double> mat_vec(const MatrixCoopGame& game,
                            const std::vector<double>& x) {
  std::vector<double> out(game.actions(), 0.0);
  for (int i = 0; i < game.actions(); ++i) {
    double acc = 0.0;
    for (int j = 0; j < game.actions(); ++j) acc += game.core(i, j) * x[j];
    out[i] = acc;
  }
  return out;
}

double quadratic_objective(const MatrixCoopGame& game,
                           const std::vector<double>& mix, double alpha,
                           const std::vector<double>& s) {
  double lin = 0.0, quad = 0.0;
  const std::vector<double> as = mat_vec(game, s);
  for (int i = 0; i < game.actions(); ++i) {
    double row_mix = 0.0;
    for (int j = 0; j < game.actions(); ++j) row_mix += game.core(i, j) * mix[j];
    lin += s[i] * row_mix;
    quad += s[i] * as[i];
  }
  return lin + alpha * quad;
}

// Centrality, rank and acceptance of the candidate against the population
// expanded with it, using exact payoffs.
void finish_result(const MatrixCoopGame& game, std::span<const Strategy> members,
                   const OracleConfig& config, OracleResult& result) {
  const int n = static_cast<int>(members.size()) + 1;
  PayoffMatrix extended = PayoffMatrix::zeros(n);
  for (int i = 0; i < n - 1; ++i) {
    for (int j = 0; j < n - 1; ++j) {
      extended.set(i, j, game.payoff_exact(members[i], members[j]));
    }
    const double cross = game.payoff_exact(members[i], result.strategy);
    extended.set(i, n - 1, cross);
    extended.set(n - 1, i, cross);
  }
  extended.set(n - 1, n - 1, game.payoff_exact(result.strategy, result.strategy));

  const std::vector<double> eta =
      preference_centrality(build_preference_graph(extended, config.ties));
  result.eta_new = eta.back();
  const AcceptanceOutcome outcome = acceptance_test(eta, n - 1, config.k);
  result.rank = outcome.rank;
  result.accepted = outcome.accepted;
}

}  // namespace

OracleResult oracle_exact(const MatrixCoopGame& game,
                          std::span<const Strategy> members,
                          const std::vector<double>& phi,
                          const OracleConfig& config) {
  if (members.empty()) throw InvalidParameterError("population is empty");
  const int m = game.actions();
  const std::vector<double> mix = mixture_vector(members, phi);

  std::vector<double> best(m, 0.0);
  double best_value = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < m; ++a) {
    std::vector<double> vertex(m, 0.0);
    vertex[a] = 1.0;
    const double value = quadratic_objective(game, mix, config.alpha, vertex);
    if (value > best_value) {
      best_value = value;
      best = vertex;
    }
  }

  if (config.alpha != 0.0) {
    // projected ascent from every vertex; replaces the incumbent only on a
    // strict improvement, so vertex ties keep the lowest index
    double max_abs = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) max_abs = std::max(max_abs, std::fabs(game.core(i, j)));
    const double step =
        0.5 / (max_abs * (1.0 + 2.0 * std::fabs(config.alpha)) + 1e-12);
    for (int a = 0; a < m; ++a) {
      std::vector<double> x(m, 0.0);
      x[a] = 1.0;
      for (int it = 0; it < 200; ++it) {
        const std::vector<double> ax = mat_vec(game, x);
        std::vector<double> g(m);
        for (int i = 0; i < m; ++i) {
          double row_mix = 0.0;
          for (int j = 0; j < m; ++j) row_mix += game.core(i, j) * mix[j];
          g[i] = row_mix + 2.0 * config.alpha * ax[i];
        }
        for (int i = 0; i < m; ++i) x[i] += step * g[i];
        x = project_simplex(std::move(x));
      }
      const double value = quadratic_objective(game, mix, config.alpha, x);
      if (value > best_value + 1e-12) {
        best_value = value;
        best = x;
      }
    }
  }

  OracleResult result{normalized_strategy(std::move(best))};
  result.objective_value =
      objective_value(game, members, phi, config.alpha, result.strategy);
  result.trace.emplace_back(0, result.objective_value);
  finish_result(game, members, config, result);
  return result;
}

OracleResult oracle_local(const MatrixCoopGame& game,
                          std::span<const Strategy> members,
                          const std::vector<double>& phi,
                          const OracleConfig& config, std::uint64_t seed,
                          VisitCounter& visits) {
  if (members.empty()) throw InvalidParameterError("population is empty");
  if (config.steps < 1) throw InvalidParameterError("local oracle needs steps >= 1");
  const int m = game.actions();
  std::mt19937_64 gen(seed);

  std::vector<double> x = members.back().probs();
  Strategy incumbent = members.back();
  double incumbent_value =
      objective_value(game, members, phi, config.alpha, incumbent);

  OracleResult result{incumbent};
  result.trace.emplace_back(0, incumbent_value);

  for (int t = 0; t < config.steps; ++t) {
    const std::vector<PartnerDraw> draws = sample_partners(
        phi, visits, config.c, config.ratio_b, config.ratio_a, gen);

    std::vector<double> grad(m, 0.0);
    int sampled = 0;
    for (const PartnerDraw& d : draws) {
      if (d.self_play) continue;
      const std::vector<double> ap = mat_vec(game, members[d.index].probs());
      for (int i = 0; i < m; ++i) grad[i] += ap[i];
      ++sampled;
    }
    if (sampled > 0) {
      for (double& g : grad) g /= static_cast<double>(sampled);
    }
    if (config.ratio_a > 0) {
      const std::vector<double> ax = mat_vec(game, x);
      for (int i = 0; i < m; ++i) grad[i] += 2.0 * config.alpha * ax[i];
    }

    const double rate = config.step_size / std::sqrt(1.0 + t / 10.0);
    double zmax = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) zmax = std::max(zmax, rate * grad[i]);
    double total = 0.0;
    for (int i = 0; i < m; ++i) {
      x[i] *= std::exp(rate * grad[i] - zmax);
      total += x[i];
    }
    for (double& xi : x) xi /= total;

    // fixed-share mixing, annealed away: keeps early iterates able to leave
    // a basin the exponential weights would otherwise lock in
    const double share = 0.5 / (1.0 + t);
    for (double& xi : x) xi = (1.0 - share) * xi + share / m;

    const Strategy iterate = normalized_strategy(x);
    const double value =
        objective_value(game, members, phi, config.alpha, iterate);
    result.trace.emplace_back(t + 1, value);
    if (value > incumbent_value) {
      incumbent_value = value;
      incumbent = iterate;
    }
  }

  result.strategy = incumbent;
  result.objective_value = incumbent_value;
  finish_result(game, members, config, result);
  return result;
}

}  // namespace cole

#include "cole/shapley.hpp"

#include <bit>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "cole/errors.hpp"
#include "cole/rng.hpp"

namespace cole {

CharacteristicFunction::CharacteristicFunction(std::vector<double> sigma,
                                               PayoffMatrix m)
    : sigma_(std::move(sigma)), m_(std::move(m)) {
  if (static_cast<int>(sigma_.size()) != m_.size()) {
    throw DimensionMismatchError("sigma length does not match payoff size");
  }
  for (double s : sigma_) {
    if (!(s > 0.0)) throw InvalidParameterError("sigma entries must be positive");
  }
}

double characteristic_value(const CharacteristicFunction& cf,
                            std::span<const int> coalition) {
  if (coalition.empty()) return 0.0;
  double sum = 0.0;
  for (int i : coalition)
    for (int j : coalition) sum += cf.weighted_pair(i, j);
  const double c = static_cast<double>(coalition.size());
  return sum / (c * c);
}

namespace {

// Pairwise sums for every coalition bitmask, built by peeling the lowest
// set bit. Q[mask] = sum over i,j in mask of sigma_i sigma_j w(i,j).
std::vector<double> coalition_pair_sums(const CharacteristicFunction& cf) {
  const int n = cf.size();
  std::vector<double> q(std::size_t{1} << n, 0.0);
  for (std::uint32_t mask = 1; mask < q.size(); ++mask) {
    const int k = std::countr_zero(mask);
    const std::uint32_t rest = mask & (mask - 1);
    double acc = q[rest] + cf.weighted_pair(k, k);
    for (std::uint32_t r = rest; r != 0; r &= r - 1) {
      const int j = std::countr_zero(r);
      acc += cf.weighted_pair(k, j) + cf.weighted_pair(j, k);
    }
    q[mask] = acc;
  }
  return q;
}

double value_of_mask(const std::vector<double>& q, std::uint32_t mask) {
  if (mask == 0) return 0.0;
  const double c = static_cast<double>(std::popcount(mask));
  return q[mask] / (c * c);
}

}  // namespace

ShapleyVector exact_shapley(const CharacteristicFunction& cf, int exact_limit) {
  const int n = cf.size();
  if (n > exact_limit || n > 20) {
    throw TooLargeError("population exceeds the exact Shapley limit");
  }
  const std::vector<double> q = coalition_pair_sums(cf);

  // weight(s) = s! (n-1-s)! / n! for a predecessor set of size s
  std::vector<double> weight(n);
  for (int s = 0; s < n; ++s) {
    double w = 1.0 / n;
    for (int t = 1; t <= s; ++t) w *= static_cast<double>(t) / (n - t);
    weight[s] = w;
  }

  ShapleyVector out;
  out.sv.assign(n, 0.0);
  out.method = ShapleyMethod::kExact;
  const std::uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1u);
  for (int i = 0; i < n; ++i) {
    const std::uint32_t others = full & ~(1u << i);
    // iterate all subsets of the other players, including the empty one
    std::uint32_t sub = 0;
    while (true) {
      const double marginal =
          value_of_mask(q, sub | (1u << i)) - value_of_mask(q, sub);
      out.sv[i] += weight[std::popcount(sub)] * marginal;
      if (sub == others) break;
      sub = (sub - others) & others;
    }
  }
  return out;
}

ShapleyVector mc_shapley(const CharacteristicFunction& cf, long samples,
                         std::uint64_t seed) {
  if (samples < 1) throw InvalidParameterError("samples must be >= 1");
  const int n = cf.size();
  std::mt19937_64 gen(seed);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);

  std::vector<double> sum(n, 0.0), sum_sq(n, 0.0);
  for (long s = 0; s < samples; ++s) {
    fisher_yates_shuffle(perm, gen);
    double pair_sum = 0.0;
    double v_prev = 0.0;
    for (int pos = 0; pos < n; ++pos) {
      const int p = perm[pos];
      pair_sum += cf.weighted_pair(p, p);
      for (int earlier = 0; earlier < pos; ++earlier) {
        const int j = perm[earlier];
        pair_sum += cf.weighted_pair(p, j) + cf.weighted_pair(j, p);
      }
      const double c = static_cast<double>(pos + 1);
      const double v_new = pair_sum / (c * c);
      const double marginal = v_new - v_prev;
      sum[p] += marginal;
      sum_sq[p] += marginal * marginal;
      v_prev = v_new;
    }
  }

  ShapleyVector out;
  out.method = ShapleyMethod::kMonteCarlo;
  out.samples = samples;
  out.seed = seed;
  out.sv.resize(n);
  out.std_err.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    out.sv[i] = sum[i] / samples;
    if (samples > 1) {
      const double var =
          (sum_sq[i] - sum[i] * sum[i] / samples) / (samples - 1);
      out.std_err[i] = std::sqrt(std::max(var, 0.0) / samples);
    }
  }
  return out;
}

IncompatibilityDistribution incompatibility_distribution(
    const std::vector<double>& sv) {
  const int n = static_cast<int>(sv.size());
  if (n < 2) throw InvalidParameterError("distribution needs n >= 2");

  double mn = sv[0];
  for (double v : sv) mn = std::min(mn, v);
  const double shift = mn < 0.0 ? -mn : 0.0;

  double total = 0.0;
  for (double v : sv) total += v + shift;

  IncompatibilityDistribution out;
  if (total == 0.0) {
    out.phi.assign(n, 1.0 / n);
    out.uniform_fallback = true;
    return out;
  }

  out.phi.resize(n);
  double inv_total = 0.0;
  for (int i = 0; i < n; ++i) {
    out.phi[i] = 1.0 - (sv[i] + shift) / total;
    inv_total += out.phi[i];
  }
  for (double& p : out.phi) p /= inv_total;
  return out;
}

SolveResult solve(const PayoffMatrix& m, const SolverConfig& config) {
  SolveResult result;
  result.pagerank =
      weighted_pagerank(m, config.damping, config.pagerank_tol,
                        config.pagerank_max_iter, config.ties);
  result.sigma = result.pagerank.pr;
  if (config.sigma_weighting == SigmaWeighting::kUnpopularity) {
    for (double& s : result.sigma) s = 1.0 / s;
  }
  CharacteristicFunction cf(result.sigma, m);
  if (m.size() <= config.exact_limit) {
    result.shapley = exact_shapley(cf, config.exact_limit);
  } else {
    result.shapley = mc_shapley(cf, config.mc_samples, config.seed);
  }
  result.phi = incompatibility_distribution(result.shapley.sv);
  return result;
}

std::string to_json_string(const ShapleyVector& sv,
                           const IncompatibilityDistribution& phi) {
  nlohmann::json j;
  j["sv"] = sv.sv;
  j["phi"] = phi.phi;
  j["method"] =
      sv.method == ShapleyMethod::kExact ? "exact" : "monte_carlo";
  j["samples"] = sv.samples;
  j["seed"] = sv.seed;
  return j.dump();
}

}  // namespace cole

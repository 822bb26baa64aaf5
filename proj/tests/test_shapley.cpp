#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "cole/errors.hpp"
#include "cole/rng.hpp"
#include "cole/shapley.hpp"

using namespace cole;

namespace {

PayoffMatrix random_matrix(int n, std::mt19937_64& gen, double lo = 0.0,
                           double hi = 10.0) {
  std::vector<double> w(static_cast<std::size_t>(n) * n);
  for (double& v : w) v = lo + (hi - lo) * uniform_double(gen);
  return PayoffMatrix(n, std::move(w));
}

std::vector<double> random_sigma(int n, std::mt19937_64& gen) {
  std::vector<double> s(n);
  for (double& v : s) v = 0.2 + 3.0 * uniform_double(gen);
  return s;
}

double oracle_value(const CharacteristicFunction& cf,
                    const std::vector<int>& coalition) {
  if (coalition.empty()) return 0.0;
  double sum = 0.0;
  for (int i : coalition)
    for (int j : coalition)
      sum += cf.sigma()[i] * cf.sigma()[j] * cf.payoff().at(i, j);
  return sum / (static_cast<double>(coalition.size()) * coalition.size());
}

// Brute-force Shapley by enumerating every permutation, the other algebraic
// route from the one the library takes.
std::vector<double> permutation_oracle(const CharacteristicFunction& cf) {
  const int n = cf.size();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<double> sv(n, 0.0);
  long count = 0;
  do {
    std::vector<int> placed;
    double v_prev = 0.0;
    for (int p : perm) {
      placed.push_back(p);
      const double v_new = oracle_value(cf, placed);
      sv[p] += v_new - v_prev;
      v_prev = v_new;
    }
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  for (double& v : sv) v /= static_cast<double>(count);
  return sv;
}

}  // namespace

TEST_CASE("characteristic value: base cases and the worked double sum") {
  const CharacteristicFunction cf({1.0, 1.0}, PayoffMatrix(2, {2, 4, 4, 2}));
  CHECK(characteristic_value(cf, std::vector<int>{}) == 0.0);
  const std::vector<int> single{0};
  CHECK(characteristic_value(cf, single) == 2.0);  // sigma^2 * w(0,0)
  const std::vector<int> both{0, 1};
  CHECK(characteristic_value(cf, both) == doctest::Approx(3.0).epsilon(1e-15));

  const CharacteristicFunction weighted({2.0, 0.5},
                                        PayoffMatrix(2, {3, 1, 1, 5}));
  const std::vector<int> s1{1};
  CHECK(characteristic_value(weighted, s1) == doctest::Approx(0.25 * 5));
}

TEST_CASE("characteristic function validates inputs") {
  CHECK_THROWS_AS(CharacteristicFunction({1.0}, PayoffMatrix(2, {1, 2, 3, 4})),
                  DimensionMismatchError);
  CHECK_THROWS_AS(CharacteristicFunction({0.0}, PayoffMatrix(1, {1.0})),
                  InvalidParameterError);
  CHECK_THROWS_AS(CharacteristicFunction({-1.0}, PayoffMatrix(1, {1.0})),
                  InvalidParameterError);
}

TEST_CASE("exact Shapley of a single player is its own coalition value") {
  const CharacteristicFunction cf({1.5}, PayoffMatrix(1, {4.0}));
  const ShapleyVector sv = exact_shapley(cf);
  REQUIRE(sv.sv.size() == 1);
  CHECK(sv.sv[0] == doctest::Approx(1.5 * 1.5 * 4.0));
  CHECK(sv.method == ShapleyMethod::kExact);
  CHECK(sv.samples == 0);
}

TEST_CASE("fully symmetric games split the grand value evenly") {
  const int n = 4;
  const CharacteristicFunction cf(std::vector<double>(n, 2.0),
                                  PayoffMatrix(n, std::vector<double>(n * n, 3.0)));
  const ShapleyVector sv = exact_shapley(cf);
  std::vector<int> everyone(n);
  std::iota(everyone.begin(), everyone.end(), 0);
  const double grand = characteristic_value(cf, everyone);
  for (double v : sv.sv) CHECK(v == doctest::Approx(grand / n).epsilon(1e-12));
}

TEST_CASE("exact Shapley matches permutation enumeration and is efficient") {
  std::mt19937_64 gen(41);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 6;
    const CharacteristicFunction cf(random_sigma(n, gen), random_matrix(n, gen));
    const ShapleyVector sv = exact_shapley(cf);
    const std::vector<double> expect = permutation_oracle(cf);
    for (int i = 0; i < n; ++i) {
      CHECK(sv.sv[i] == doctest::Approx(expect[i]).epsilon(1e-10));
    }
    std::vector<int> everyone(n);
    std::iota(everyone.begin(), everyone.end(), 0);
    const double grand = characteristic_value(cf, everyone);
    const double total = std::accumulate(sv.sv.begin(), sv.sv.end(), 0.0);
    CHECK(std::fabs(total - grand) <= 1e-9);
  }
}

TEST_CASE("symmetric players receive equal exact values") {
  // players 1 and 2 are interchangeable by construction
  PayoffMatrix m(3, {5, 2, 2,
                     3, 4, 7,
                     3, 7, 4});
  const CharacteristicFunction cf({1.0, 2.0, 2.0}, m);
  const ShapleyVector sv = exact_shapley(cf);
  CHECK(sv.sv[1] == doctest::Approx(sv.sv[2]).epsilon(1e-12));
}

TEST_CASE("exact enumeration refuses oversized populations") {
  const int n = 11;
  const CharacteristicFunction cf(std::vector<double>(n, 1.0),
                                  PayoffMatrix(n, std::vector<double>(n * n, 1.0)));
  CHECK_THROWS_AS(exact_shapley(cf), TooLargeError);
}

TEST_CASE("sigma rescaling scales values quadratically, phi not at all") {
  std::mt19937_64 gen(42);
  const int n = 5;
  const PayoffMatrix m = random_matrix(n, gen);
  const std::vector<double> sigma = random_sigma(n, gen);
  std::vector<double> scaled = sigma;
  const double t = 2.5;
  for (double& s : scaled) s *= t;

  const ShapleyVector base = exact_shapley(CharacteristicFunction(sigma, m));
  const ShapleyVector big = exact_shapley(CharacteristicFunction(scaled, m));
  for (int i = 0; i < n; ++i) {
    CHECK(big.sv[i] == doctest::Approx(t * t * base.sv[i]).epsilon(1e-10));
  }
  const IncompatibilityDistribution pa = incompatibility_distribution(base.sv);
  const IncompatibilityDistribution pb = incompatibility_distribution(big.sv);
  for (int i = 0; i < n; ++i) {
    CHECK(pa.phi[i] == doctest::Approx(pb.phi[i]).epsilon(1e-12));
  }
}

TEST_CASE("Monte Carlo sampling") {
  std::mt19937_64 gen(43);

  SUBCASE("single player is exact regardless of samples") {
    const CharacteristicFunction cf({2.0}, PayoffMatrix(1, {3.0}));
    const ShapleyVector sv = mc_shapley(cf, 5, 123);
    CHECK(sv.sv[0] == doctest::Approx(12.0));
  }

  SUBCASE("marginals telescope to the grand value for any sample count") {
    const int n = 6;
    const CharacteristicFunction cf(random_sigma(n, gen), random_matrix(n, gen));
    std::vector<int> everyone(n);
    std::iota(everyone.begin(), everyone.end(), 0);
    const double grand = characteristic_value(cf, everyone);
    for (long samples : {1L, 7L}) {
      const ShapleyVector sv = mc_shapley(cf, samples, 99);
      const double total = std::accumulate(sv.sv.begin(), sv.sv.end(), 0.0);
      CHECK(total == doctest::Approx(grand).epsilon(1e-10));
    }
  }

  SUBCASE("fixed seeds reproduce, different seeds differ") {
    const int n = 5;
    const CharacteristicFunction cf(random_sigma(n, gen), random_matrix(n, gen));
    const ShapleyVector a = mc_shapley(cf, 50, 7);
    const ShapleyVector b = mc_shapley(cf, 50, 7);
    const ShapleyVector c = mc_shapley(cf, 50, 8);
    CHECK(a.sv == b.sv);
    CHECK(a.sv != c.sv);
  }

  SUBCASE("estimates land within three standard errors of exact") {
    const int n = 6;
    const CharacteristicFunction cf(random_sigma(n, gen), random_matrix(n, gen));
    const ShapleyVector exact = exact_shapley(cf);
    const ShapleyVector mc = mc_shapley(cf, 20000, 4242);
    for (int i = 0; i < n; ++i) {
      CHECK(std::fabs(mc.sv[i] - exact.sv[i]) <= 3.0 * mc.std_err[i]);
    }
  }
}

TEST_CASE("incompatibility distribution") {
  SUBCASE("equal values collapse to uniform") {
    const IncompatibilityDistribution d =
        incompatibility_distribution({4.0, 4.0, 4.0});
    for (double p : d.phi) CHECK(p == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK_FALSE(d.uniform_fallback);
  }

  SUBCASE("worked two-player inversion") {
    const IncompatibilityDistribution d = incompatibility_distribution({3.0, 1.0});
    CHECK(d.phi[0] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(d.phi[1] == doctest::Approx(0.75).epsilon(1e-15));
  }

  SUBCASE("ordering inverts for any nonnegative input") {
    std::mt19937_64 gen(44);
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 2 + static_cast<int>(uniform_index(gen, 7));
      std::vector<double> sv(n);
      for (double& v : sv) v = 5.0 * uniform_double(gen);
      const IncompatibilityDistribution d = incompatibility_distribution(sv);
      double total = 0.0;
      for (double p : d.phi) {
        CHECK(p >= 0.0);
        total += p;
      }
      CHECK(std::fabs(total - 1.0) <= 1e-12);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (sv[i] < sv[j]) CHECK(d.phi[i] > d.phi[j]);
    }
  }

  SUBCASE("negative values are shifted, order preserved") {
    const IncompatibilityDistribution d =
        incompatibility_distribution({-2.0, 0.0, 2.0});
    CHECK(d.phi[0] > d.phi[1]);
    CHECK(d.phi[1] > d.phi[2]);
    CHECK_FALSE(d.uniform_fallback);
  }

  SUBCASE("all-equal-after-shift falls back to uniform with a flag") {
    const IncompatibilityDistribution d =
        incompatibility_distribution({-3.0, -3.0});
    CHECK(d.uniform_fallback);
    CHECK(d.phi == std::vector<double>{0.5, 0.5});
  }

  SUBCASE("permuting the input permutes the output identically") {
    const std::vector<double> sv{0.5, 3.0, 1.25, 0.0};
    const std::vector<int> perm{2, 0, 3, 1};
    std::vector<double> permuted(sv.size());
    for (std::size_t i = 0; i < sv.size(); ++i) permuted[perm[i]] = sv[i];
    const IncompatibilityDistribution a = incompatibility_distribution(sv);
    const IncompatibilityDistribution b = incompatibility_distribution(permuted);
    for (std::size_t i = 0; i < sv.size(); ++i) {
      CHECK(a.phi[i] == doctest::Approx(b.phi[perm[i]]).epsilon(1e-15));
    }
  }

  SUBCASE("argmax of phi is argmin of the values") {
    std::mt19937_64 gen(45);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<double> sv(6);
      for (double& v : sv) v = 10.0 * uniform_double(gen);
      const IncompatibilityDistribution d = incompatibility_distribution(sv);
      const auto max_phi = std::max_element(d.phi.begin(), d.phi.end());
      const auto min_sv = std::min_element(sv.begin(), sv.end());
      CHECK(max_phi - d.phi.begin() == min_sv - sv.begin());
    }
  }
}

TEST_CASE("solver pipeline") {
  SUBCASE("two symmetric strategies share the mass evenly") {
    const PayoffMatrix m(2, {1, 5, 5, 1});
    const SolveResult r = solve(m);
    CHECK(r.phi.phi[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.phi.phi[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.shapley.method == ShapleyMethod::kExact);
  }

  SUBCASE("exact path keeps argmin(sv) = argmax(phi)") {
    std::mt19937_64 gen(46);
    for (int trial = 0; trial < 5; ++trial) {
      const SolveResult r = solve(random_matrix(6, gen));
      const auto max_phi = std::max_element(r.phi.phi.begin(), r.phi.phi.end());
      const auto min_sv =
          std::min_element(r.shapley.sv.begin(), r.shapley.sv.end());
      CHECK(max_phi - r.phi.phi.begin() == min_sv - r.shapley.sv.begin());
    }
  }

  SUBCASE("strategies preferred by many get low mass") {
    // stagnating population: everyone's argmax is one of the first two
    // strategies, the later three are nobody's best partner
    const PayoffMatrix m(5, {5, 9, 6, 6, 6,
                             9, 5, 6, 6, 6,
                             8, 8, 5, 4, 4,
                             8, 8, 7, 5, 4,
                             8, 8, 7, 6, 5});
    const SolveResult r = solve(m);
    for (int popular : {0, 1}) {
      for (int ignored : {2, 3, 4}) {
        CHECK(r.phi.phi[popular] < r.phi.phi[ignored]);
      }
    }
  }

  SUBCASE("large populations switch to Monte Carlo") {
    std::mt19937_64 gen(47);
    SolverConfig cfg;
    cfg.mc_samples = 500;
    cfg.seed = 5;
    const SolveResult r = solve(random_matrix(12, gen), cfg);
    CHECK(r.shapley.method == ShapleyMethod::kMonteCarlo);
    CHECK(r.shapley.samples == 500);
  }

  SUBCASE("sigma weighting modes expose opposite orderings") {
    // one isolated specialist: fails with everyone but itself
    const PayoffMatrix m(4, {1, 0, 1, 1,
                             0, 1, 0, 0,
                             1, 0, 1, 1,
                             1, 0, 1, 1});
    SolverConfig popularity;
    const SolveResult a = solve(m, popularity);
    const auto max_a = std::max_element(a.phi.phi.begin(), a.phi.phi.end());
    CHECK(max_a - a.phi.phi.begin() == 1);  // mass on the failed strategy

    SolverConfig unpop;
    unpop.sigma_weighting = SigmaWeighting::kUnpopularity;
    const SolveResult b = solve(m, unpop);
    const auto max_b = std::max_element(b.phi.phi.begin(), b.phi.phi.end());
    CHECK(max_b - b.phi.phi.begin() != 1);
  }

  SUBCASE("shapley JSON carries the documented fields") {
    const SolveResult r = solve(PayoffMatrix(2, {1, 5, 5, 1}));
    const std::string json = to_json_string(r.shapley, r.phi);
    CHECK(json.find("\"sv\"") != std::string::npos);
    CHECK(json.find("\"phi\"") != std::string::npos);
    CHECK(json.find("\"method\":\"exact\"") != std::string::npos);
    CHECK(json.find("\"samples\"") != std::string::npos);
    CHECK(json.find("\"seed\"") != std::string::npos);
  }
}

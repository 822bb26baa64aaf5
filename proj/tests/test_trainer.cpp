#include <doctest.h>

#include <cmath>
#include <random>

#include "cole/errors.hpp"
#include "cole/rng.hpp"
#include "cole/trainer.hpp"

using namespace cole;

namespace {

Strategy random_strategy(int m, std::mt19937_64& gen) {
  std::vector<double> p(m);
  double total = 0.0;
  for (double& x : p) {
    x = 0.05 + uniform_double(gen);
    total += x;
  }
  for (double& x : p) x /= total;
  double rest = 0.0;
  for (int i = 0; i + 1 < m; ++i) rest += p[i];
  p.back() = 1.0 - rest;
  return Strategy(p);
}

MatrixCoopGame random_game(int m, std::mt19937_64& gen) {
  std::vector<std::vector<double>> core(m, std::vector<double>(m));
  for (auto& row : core)
    for (double& v : row) v = uniform_double(gen);
  return MatrixCoopGame(std::move(core));
}

}  // namespace

TEST_CASE("objective value") {
  const MatrixCoopGame id3 = MatrixCoopGame({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  const std::vector<Strategy> members{Strategy::pure(3, 0), Strategy::pure(3, 1),
                                      Strategy::pure(3, 2)};

  SUBCASE("point mass reduces to a single pairing plus self-play") {
    const std::vector<double> phi{0.0, 1.0, 0.0};
    const Strategy s = Strategy::pure(3, 1);
    CHECK(objective_value(id3, members, phi, 0.5, s) ==
          doctest::Approx(1.0 + 0.5 * 1.0));
  }

  SUBCASE("alpha zero keeps only the cooperative term") {
    const std::vector<double> phi{0.25, 0.25, 0.5};
    const Strategy s = Strategy::pure(3, 2);
    CHECK(objective_value(id3, members, phi, 0.0, s) == doctest::Approx(0.5));
  }

  SUBCASE("worked identity-game mixture") {
    const std::vector<double> phi{1.0 / 3, 1.0 / 3, 1.0 / 3};
    const Strategy s = Strategy::pure(3, 0);
    CHECK(objective_value(id3, members, phi, 1.0, s) ==
          doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  }

  SUBCASE("linear in phi") {
    std::mt19937_64 gen(61);
    const MatrixCoopGame g = random_game(3, gen);
    const std::vector<Strategy> pop{random_strategy(3, gen),
                                    random_strategy(3, gen)};
    const Strategy s = random_strategy(3, gen);
    const std::vector<double> p1{0.3, 0.7}, p2{0.9, 0.1};
    const double lambda = 0.4;
    std::vector<double> mix(2);
    for (int i = 0; i < 2; ++i) mix[i] = lambda * p1[i] + (1 - lambda) * p2[i];
    CHECK(objective_value(g, pop, mix, 1.5, s) ==
          doctest::Approx(lambda * objective_value(g, pop, p1, 1.5, s) +
                          (1 - lambda) * objective_value(g, pop, p2, 1.5, s))
              .epsilon(1e-12));
  }

  SUBCASE("phi and population must agree in size") {
    CHECK_THROWS_AS(
        objective_value(id3, members, {0.5, 0.5}, 1.0, Strategy::pure(3, 0)),
        DimensionMismatchError);
  }
}

TEST_CASE("sucg weights") {
  SUBCASE("c = 0 returns phi bit for bit") {
    const std::vector<double> phi{0.31, 0.29, 0.4};
    VisitCounter visits(3);
    visits.counts = {5, 0, 2};
    CHECK(sucg_weights(phi, visits, 0.0) == phi);
  }

  SUBCASE("untouched counters return phi bit for bit") {
    const std::vector<double> phi{0.6, 0.4};
    VisitCounter visits(2);
    CHECK(sucg_weights(phi, visits, 3.0) == phi);
  }

  SUBCASE("worked normalization example") {
    const std::vector<double> phi{0.5, 0.5};
    VisitCounter visits(2);
    visits.counts = {4, 0};
    const std::vector<double> w = sucg_weights(phi, visits, 1.0);
    CHECK(std::fabs(w[0] - 9.0 / 34.0) <= 1e-12);
    CHECK(std::fabs(w[1] - 25.0 / 34.0) <= 1e-12);
  }

  SUBCASE("bonus strictly decreases in the visit count") {
    std::mt19937_64 gen(62);
    for (int trial = 0; trial < 10; ++trial) {
      const double c = 0.1 + 2.0 * uniform_double(gen);
      const long total = 10 + static_cast<long>(uniform_index(gen, 90));
      auto bonus = [&](long visits_u) {
        return c * std::sqrt(static_cast<double>(total)) / (1.0 + visits_u);
      };
      for (long v = 0; v < 20; ++v) CHECK(bonus(v) > bonus(v + 1));
    }
  }

  SUBCASE("rejects negative exploration") {
    VisitCounter visits(2);
    CHECK_THROWS_AS(sucg_weights({0.5, 0.5}, visits, -1.0), InvalidParameterError);
  }
}

TEST_CASE("partner sampling") {
  SUBCASE("pure self-play draws nothing") {
    const std::vector<double> phi{0.5, 0.5};
    VisitCounter visits(2);
    const std::vector<PartnerDraw> draws = sample_partners(phi, visits, 1.0, 0, 4, 7ULL);
    CHECK(draws.size() == 4);
    for (const PartnerDraw& d : draws) CHECK(d.self_play);
    CHECK(visits.total() == 0);
  }

  SUBCASE("the 1:3 split yields one self slot and three sequential draws") {
    const std::vector<double> phi{0.5, 0.5};
    VisitCounter visits(2);
    const std::vector<PartnerDraw> draws = sample_partners(phi, visits, 1.0, 3, 1, 7ULL);
    CHECK(draws.size() == 4);
    CHECK(draws[0].self_play);
    for (int i = 1; i < 4; ++i) {
      CHECK_FALSE(draws[i].self_play);
      CHECK(draws[i].index >= 0);
      CHECK(draws[i].index < 2);
    }
    CHECK(visits.total() == 3);
  }

  SUBCASE("strong exploration pushes the second draw to the unvisited member") {
    const std::vector<double> phi{0.5, 0.5};
    VisitCounter visits(2);
    visits.counts = {1, 0};
    // after one visit to member 0 the bonus term dominates member 1
    const std::vector<double> w = sucg_weights(phi, visits, 100.0);
    CHECK(w[1] > 0.6);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      VisitCounter fresh(2);
      const std::vector<PartnerDraw> draws =
          sample_partners(phi, fresh, 100.0, 2, 0, seed);
      // first draw is plain phi; the second must flee its visit count
      CHECK(draws[1].index != draws[0].index);
    }
  }

  SUBCASE("deterministic per seed") {
    const std::vector<double> phi{0.2, 0.3, 0.5};
    VisitCounter v1(3), v2(3);
    const auto a = sample_partners(phi, v1, 1.0, 5, 1, 99ULL);
    const auto b = sample_partners(phi, v2, 1.0, 5, 1, 99ULL);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].index == b[i].index);
    CHECK(v1.counts == v2.counts);
  }

  SUBCASE("needs at least one slot") {
    VisitCounter visits(2);
    CHECK_THROWS_AS(sample_partners({0.5, 0.5}, visits, 1.0, 0, 0, 1ULL),
                    InvalidParameterError);
  }
}

TEST_CASE("acceptance test") {
  SUBCASE("zero centrality always ranks first") {
    const std::vector<double> eta{0.5, 0.0, 1.0};
    const AcceptanceOutcome o = acceptance_test(eta, 1, 1);
    CHECK(o.rank == 1);
    CHECK(o.accepted);
  }

  SUBCASE("all-equal centrality ranks first") {
    const std::vector<double> eta{0.5, 0.5, 0.5};
    const AcceptanceOutcome o = acceptance_test(eta, 2, 1);
    CHECK(o.rank == 1);
    CHECK(o.accepted);
  }

  SUBCASE("counting strictly smaller values") {
    const std::vector<double> eta{0.2, 0.0, 0.6};
    const AcceptanceOutcome o = acceptance_test(eta, 2, 2);
    CHECK(o.rank == 3);
    CHECK_FALSE(o.accepted);
  }

  SUBCASE("invariant under monotone transforms") {
    std::mt19937_64 gen(63);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<double> eta(5);
      for (double& e : eta) e = uniform_double(gen);
      std::vector<double> squashed(5);
      for (int i = 0; i < 5; ++i) squashed[i] = std::tanh(2.0 * eta[i]) + 3.0;
      for (int idx = 0; idx < 5; ++idx) {
        CHECK(acceptance_test(eta, idx, 2).rank ==
              acceptance_test(squashed, idx, 2).rank);
      }
    }
  }
}

TEST_CASE("exact oracle") {
  SUBCASE("point mass on the specialist recovers it") {
    const MatrixCoopGame g = MatrixCoopGame({{1, 0, 0}, {0, 1, 0}, {0, 0, 2}});
    const std::vector<Strategy> members{Strategy::pure(3, 2)};
    OracleConfig cfg;
    cfg.alpha = 0.0;
    const OracleResult r = oracle_exact(g, members, {1.0}, cfg);
    CHECK(r.strategy == Strategy::pure(3, 2));
    CHECK(r.objective_value == doctest::Approx(2.0));
  }

  SUBCASE("alpha zero always lands on a simplex vertex") {
    std::mt19937_64 gen(64);
    OracleConfig cfg;
    cfg.alpha = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const int m = 3 + static_cast<int>(uniform_index(gen, 3));
      const MatrixCoopGame g = random_game(m, gen);
      const std::vector<Strategy> members{random_strategy(m, gen),
                                          random_strategy(m, gen)};
      const OracleResult r = oracle_exact(g, members, {0.4, 0.6}, cfg);
      int ones = 0;
      for (int a = 0; a < m; ++a) {
        if (r.strategy.prob(a) == 1.0) ++ones;
        else CHECK(r.strategy.prob(a) == 0.0);
      }
      CHECK(ones == 1);
    }
  }

  SUBCASE("vertex ties break toward the lowest index") {
    const MatrixCoopGame g = MatrixCoopGame({{1, 0}, {0, 1}});
    const std::vector<Strategy> members{Strategy::pure(2, 0), Strategy::pure(2, 1)};
    OracleConfig cfg;
    cfg.alpha = 1.0;
    const OracleResult r = oracle_exact(g, members, {0.5, 0.5}, cfg);
    CHECK(r.strategy == Strategy::pure(2, 0));
    CHECK(r.objective_value == doctest::Approx(1.5));
  }

  SUBCASE("acceptance bookkeeping against the expanded population") {
    const MatrixCoopGame g = MatrixCoopGame({{1, 0, 0}, {0, 1, 0}, {0, 0, 2}});
    const std::vector<Strategy> members{Strategy::uniform(3)};
    OracleConfig cfg;
    const OracleResult r = oracle_exact(g, members, {1.0}, cfg);
    // uniform member prefers the specialist and vice versa: both eta zero
    CHECK(r.strategy == Strategy::pure(3, 2));
    CHECK(r.eta_new == 0.0);
    CHECK(r.rank == 1);
    CHECK(r.accepted);
  }
}

TEST_CASE("local oracle") {
  SUBCASE("constant payoffs leave the start strategy untouched") {
    const MatrixCoopGame g = MatrixCoopGame({{2, 2}, {2, 2}});
    const std::vector<Strategy> members{Strategy({0.25, 0.75})};
    OracleConfig cfg;
    cfg.steps = 20;
    VisitCounter visits(1);
    const OracleResult r = oracle_local(g, members, {1.0}, cfg, 1, visits);
    CHECK(r.strategy == members[0]);
  }

  SUBCASE("climbs toward the dominant action from the previous member") {
    const MatrixCoopGame g = MatrixCoopGame({{1, 0, 0}, {0, 1, 0}, {0, 0, 2}});
    const std::vector<Strategy> members{Strategy::pure(3, 0), Strategy::pure(3, 1),
                                        Strategy::uniform(3)};
    const std::vector<double> phi{1.0 / 3, 1.0 / 3, 1.0 / 3};
    OracleConfig cfg;
    cfg.steps = 200;
    cfg.step_size = 2.0;
    VisitCounter visits(3);
    const OracleResult r = oracle_local(g, members, phi, cfg, 3, visits);
    const double start_value = objective_value(g, members, phi, cfg.alpha, members.back());
    CHECK(r.objective_value >= start_value);
    CHECK(r.strategy.prob(2) > 0.9);
    // trace keeps every step's raw objective, starting at step 0
    CHECK(r.trace.size() == 201);
    CHECK(r.trace.front().second == doctest::Approx(start_value));
  }

  SUBCASE("never returns below the start point") {
    std::mt19937_64 gen(65);
    OracleConfig cfg;
    cfg.steps = 30;
    cfg.step_size = 5.0;  // deliberately unstable
    for (int trial = 0; trial < 10; ++trial) {
      const MatrixCoopGame g = random_game(4, gen);
      const std::vector<Strategy> members{random_strategy(4, gen),
                                          random_strategy(4, gen)};
      const std::vector<double> phi{0.5, 0.5};
      VisitCounter visits(2);
      const OracleResult r =
          oracle_local(g, members, phi, cfg, 100 + trial, visits);
      const double start_value =
          objective_value(g, members, phi, cfg.alpha, members.back());
      CHECK(r.objective_value >= start_value - 1e-15);
    }
  }

  SUBCASE("final objective lands within 5% of the exact oracle") {
    std::mt19937_64 gen(0);
    OracleConfig cfg;
    cfg.steps = 300;
    cfg.step_size = 3.0;
    for (int trial = 0; trial < 10; ++trial) {
      const int m = 4;
      const MatrixCoopGame g = random_game(m, gen);
      const int pop_size = 2 + static_cast<int>(uniform_index(gen, 3));
      std::vector<Strategy> members;
      std::vector<double> phi(pop_size);
      double total = 0.0;
      for (int i = 0; i < pop_size; ++i) {
        members.push_back(random_strategy(m, gen));
        phi[i] = 0.1 + uniform_double(gen);
        total += phi[i];
      }
      for (double& p : phi) p /= total;
      const OracleResult exact = oracle_exact(g, members, phi, cfg);
      VisitCounter visits(pop_size);
      const OracleResult local =
          oracle_local(g, members, phi, cfg, 500 + trial, visits);
      CHECK(local.objective_value >= 0.95 * exact.objective_value - 1e-12);
    }
  }
}

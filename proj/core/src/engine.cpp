#include "cole/engine.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "cole/errors.hpp"
#include "cole/preference_graph.hpp"
#include "cole/rng.hpp"

namespace cole {

namespace {

std::uint64_t pair_key(long id_a, long id_b) {
  const std::uint64_t lo = static_cast<std::uint64_t>(std::min(id_a, id_b));
  const std::uint64_t hi = static_cast<std::uint64_t>(std::max(id_a, id_b));
  return (hi << 32) ^ lo;
}

double pair_payoff(const MatrixCoopGame& game, const Strategy& s,
                   const Strategy& p, long id_s, long id_p,
                   std::uint64_t master_seed) {
  if (game.noise_mode() == NoiseMode::kExact) return game.payoff_exact(s, p);
  const std::uint64_t seed =
      sub_seed(master_seed, static_cast<std::uint64_t>(SeedPurpose::kSimulate),
               pair_key(id_s, id_p));
  return game.payoff(s, p, seed);
}

void fill_initial_payoff(Population& pop, const MatrixCoopGame& game,
                         std::uint64_t master_seed) {
  const int n = pop.size();
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double w = pair_payoff(game, pop.members[i], pop.members[j],
                                   pop.member_ids[i], pop.member_ids[j],
                                   master_seed);
      pop.payoff.set(i, j, w);
      pop.payoff.set(j, i, w);
    }
  }
  pop.payoff_filled = true;
}

}  // namespace

Population Population::initial(Strategy first) {
  Population pop;
  pop.members.push_back(std::move(first));
  pop.member_ids.push_back(0);
  pop.payoff = PayoffMatrix::zeros(1);
  pop.visits = VisitCounter(1);
  pop.next_id = 1;
  return pop;
}

PayoffMatrix simulate_payoffs(const Population& pop, const Strategy& candidate,
                              const MatrixCoopGame& game,
                              std::uint64_t master_seed) {
  PayoffMatrix extended = pop.payoff;
  const int idx = extended.grow();
  const long candidate_id = pop.next_id;
  for (int j = 0; j < pop.size(); ++j) {
    const double w = pair_payoff(game, candidate, pop.members[j], candidate_id,
                                 pop.member_ids[j], master_seed);
    extended.set(idx, j, w);
    extended.set(j, idx, w);
  }
  extended.set(idx, idx,
               pair_payoff(game, candidate, candidate, candidate_id,
                           candidate_id, master_seed));
  return extended;
}

std::optional<long> evict(Population& pop, const EngineConfig& config,
                          std::uint64_t master_seed, long generation) {
  if (pop.size() <= config.population_cap) return std::nullopt;
  // the newest member is never in the window
  const int window = std::min(config.evict_window, pop.size() - 1);
  std::mt19937_64 gen(sub_seed(master_seed, static_cast<std::uint64_t>(generation),
                               SeedPurpose::kEvict));
  const int idx = static_cast<int>(uniform_index(gen, window));
  const long removed = pop.member_ids[idx];
  pop.members.erase(pop.members.begin() + idx);
  pop.member_ids.erase(pop.member_ids.begin() + idx);
  pop.visits.counts.erase(pop.visits.counts.begin() + idx);
  pop.payoff.remove(idx);
  return removed;
}

GenerationRecord run_generation(Population& pop, const MatrixCoopGame& game,
                                const EngineConfig& config,
                                std::uint64_t master_seed, long generation) {
  if (pop.size() < 1) throw InvalidParameterError("population is empty");

  GenerationRecord record;
  record.generation = generation;
  record.seed = master_seed;

  // step 1: complete the payoff table
  if (!pop.payoff_filled) fill_initial_payoff(pop, game, master_seed);

  // step 2: incompatibility distribution
  if (pop.size() == 1) {
    // singleton bootstrap: nothing to rank yet
    record.shapley.sv = {0.0};
    record.phi.phi = {1.0};
  } else {
    SolverConfig solver = config.solver;
    solver.seed = sub_seed(master_seed, static_cast<std::uint64_t>(generation),
                           SeedPurpose::kSolver);
    SolveResult solved = solve(pop.payoff, solver);
    record.shapley = std::move(solved.shapley);
    record.phi = std::move(solved.phi);
  }

  // step 3: approximate the best-preferred strategy
  if (config.oracle_kind == OracleKind::kExact) {
    record.oracle = oracle_exact(game, pop.members, record.phi.phi, config.oracle);
  } else {
    pop.visits = VisitCounter(pop.size());  // fresh counts each generation
    const std::uint64_t oracle_seed = sub_seed(
        master_seed, static_cast<std::uint64_t>(generation), SeedPurpose::kOracle);
    record.oracle = oracle_local(game, pop.members, record.phi.phi,
                                 config.oracle, oracle_seed, pop.visits);
  }

  // step 4: expand, then trim past the cap
  pop.payoff = simulate_payoffs(pop, record.oracle.strategy, game, master_seed);
  pop.members.push_back(record.oracle.strategy);
  pop.member_ids.push_back(pop.next_id++);
  pop.visits.counts.push_back(0);
  record.evicted = evict(pop, config, master_seed, generation);

  // the record's centrality comes from the stored snapshot, so it stays
  // consistent with the persisted matrix even under simulation noise
  const PreferenceGraph pg =
      build_preference_graph(pop.payoff, config.solver.ties);
  record.eta_row = preference_centrality(pg);
  record.preference_edges = pg.out_edge;
  record.oracle.eta_new = record.eta_row.back();
  const AcceptanceOutcome outcome = acceptance_test(
      record.eta_row, pop.size() - 1, config.oracle.k);
  record.oracle.rank = outcome.rank;
  record.oracle.accepted = outcome.accepted;
  record.payoff_hash = pop.payoff.content_hash();
  return record;
}

ConvergenceDiagnostics diagnostics(std::span<const GenerationRecord> records) {
  if (records.size() < 2) {
    throw InvalidParameterError("diagnostics needs >= 2 records");
  }
  ConvergenceDiagnostics d;
  d.centrality_formula_verified = true;
  for (const GenerationRecord& r : records) {
    d.eta_sequence.push_back(r.oracle.eta_new);
    if (!d.converged_at && r.oracle.eta_new == 0.0) {
      d.converged_at = r.generation;
    }
    // recount the in-degree formula from the stored edges
    const int n = static_cast<int>(r.eta_row.size());
    std::vector<int> indeg(n, 0);
    for (int target : r.preference_edges) ++indeg[target];
    for (int i = 0; i < n; ++i) {
      if (r.eta_row[i] != 1.0 - static_cast<double>(indeg[i]) / (n - 1)) {
        d.centrality_formula_verified = false;
      }
    }
  }
  for (std::size_t t = 0; t + 1 < d.eta_sequence.size(); ++t) {
    if (d.eta_sequence[t] > 0.0) {
      d.ratio_sequence.push_back(d.eta_sequence[t + 1] / d.eta_sequence[t]);
    }
  }
  return d;
}

namespace {

nlohmann::json shapley_json(const ShapleyVector& sv) {
  nlohmann::json j;
  j["sv"] = sv.sv;
  j["method"] = sv.method == ShapleyMethod::kExact ? "exact" : "monte_carlo";
  j["samples"] = sv.samples;
  j["seed"] = sv.seed;
  return j;
}

}  // namespace

std::string GenerationRecord::to_json_string() const {
  nlohmann::json j;
  j["generation"] = generation;
  j["payoff_hash"] = payoff_hash;
  j["shapley"] = shapley_json(shapley);
  j["phi"] = phi.phi;
  j["uniform_fallback"] = phi.uniform_fallback;
  nlohmann::json o;
  o["strategy"] = oracle.strategy.probs();
  o["objective_value"] = oracle.objective_value;
  o["eta_new"] = oracle.eta_new;
  o["rank"] = oracle.rank;
  o["accepted"] = oracle.accepted;
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& [step, value] : oracle.trace) {
    trace.push_back(nlohmann::json::array({step, value}));
  }
  o["trace"] = trace;
  j["oracle"] = o;
  j["eta_row"] = eta_row;
  j["preference_edges"] = preference_edges;
  if (evicted) {
    j["evicted"] = *evicted;
  } else {
    j["evicted"] = nullptr;
  }
  j["seed"] = seed;
  return j.dump();
}

std::string Checkpoint::to_json_string() const {
  nlohmann::json j;
  j["version"] = version;
  nlohmann::json p;
  nlohmann::json members = nlohmann::json::array();
  for (const Strategy& s : pop.members) members.push_back(s.probs());
  p["members"] = members;
  p["member_ids"] = pop.member_ids;
  p["payoff_n"] = pop.payoff.size();
  p["payoff_w"] = pop.payoff.data();
  p["visits"] = pop.visits.counts;
  p["next_id"] = pop.next_id;
  p["payoff_filled"] = pop.payoff_filled;
  j["population"] = p;
  j["next_generation"] = next_generation;
  j["master_seed"] = master_seed;
  j["game"] = nlohmann::json::parse(game_json);
  j["config"] = config_text;
  return j.dump();
}

Checkpoint Checkpoint::from_json_string(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ParseError("bad checkpoint JSON");
  if (!j.contains("version") || j.at("version").get<int>() != 1) {
    throw ParseError("incompatible checkpoint version");
  }
  Checkpoint c;
  const nlohmann::json& p = j.at("population");
  for (const auto& probs : p.at("members")) {
    c.pop.members.emplace_back(probs.get<std::vector<double>>());
  }
  c.pop.member_ids = p.at("member_ids").get<std::vector<long>>();
  c.pop.payoff = PayoffMatrix(p.at("payoff_n").get<int>(),
                              p.at("payoff_w").get<std::vector<double>>());
  c.pop.visits.counts = p.at("visits").get<std::vector<long>>();
  c.pop.next_id = p.at("next_id").get<long>();
  c.pop.payoff_filled = p.at("payoff_filled").get<bool>();
  c.next_generation = j.at("next_generation").get<long>();
  c.master_seed = j.at("master_seed").get<std::uint64_t>();
  c.game_json = j.at("game").dump();
  c.config_text = j.at("config").get<std::string>();
  return c;
}

}  // namespace cole

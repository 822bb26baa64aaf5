#include "cole/experiment.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "cole/errors.hpp"
#include "cole/numeric_io.hpp"
#include "cole/pagerank.hpp"
#include "cole/preference_graph.hpp"

namespace fs = std::filesystem;

namespace cole {

namespace {

std::uint64_t parse_u64(std::string_view s) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("bad unsigned field: '" + std::string(s) + "'");
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ColeError("cannot write file: " + path.string());
  out << content;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_string(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::string_view v = trim(line);
    if (v.empty() || v.front() == '#') continue;
    const std::size_t eq = v.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("config line without '=': " + std::string(v));
    }
    const std::string key(trim(v.substr(0, eq)));
    const std::string value(trim(v.substr(eq + 1)));
    if (key == "game") cfg.game_kind = value;
    else if (key == "game.file") cfg.game_file = value;
    else if (key == "game.m") cfg.game_m = static_cast<int>(parse_long(value));
    else if (key == "game.bonus") cfg.game_bonus = parse_double(value);
    else if (key == "game.blocks") cfg.game_blocks = static_cast<int>(parse_long(value));
    else if (key == "game.actions_per_block")
      cfg.game_actions_per_block = static_cast<int>(parse_long(value));
    else if (key == "game.intra") cfg.game_intra = parse_double(value);
    else if (key == "game.inter") cfg.game_inter = parse_double(value);
    else if (key == "game.jitter") cfg.game_jitter = parse_double(value);
    else if (key == "game.seed") cfg.game_seed = parse_u64(value);
    else if (key == "game.noise") cfg.game_noise = value;
    else if (key == "game.episodes") cfg.game_episodes = parse_long(value);
    else if (key == "generations") cfg.generations = parse_long(value);
    else if (key == "ratio_a") cfg.ratio_a = static_cast<int>(parse_long(value));
    else if (key == "ratio_b") cfg.ratio_b = static_cast<int>(parse_long(value));
    else if (key == "alpha") cfg.alpha = parse_double(value);
    else if (key == "c") cfg.c = parse_double(value);
    else if (key == "k") cfg.k = static_cast<int>(parse_long(value));
    else if (key == "mc_samples") cfg.mc_samples = parse_long(value);
    else if (key == "exact_limit") cfg.exact_limit = static_cast<int>(parse_long(value));
    else if (key == "damping") cfg.damping = parse_double(value);
    else if (key == "pagerank_tol") cfg.pagerank_tol = parse_double(value);
    else if (key == "pagerank_max_iter")
      cfg.pagerank_max_iter = static_cast<int>(parse_long(value));
    else if (key == "population_cap")
      cfg.population_cap = static_cast<int>(parse_long(value));
    else if (key == "evict_window")
      cfg.evict_window = static_cast<int>(parse_long(value));
    else if (key == "oracle") cfg.oracle = value;
    else if (key == "oracle_steps") cfg.oracle_steps = static_cast<int>(parse_long(value));
    else if (key == "oracle_step_size") cfg.oracle_step_size = parse_double(value);
    else if (key == "ties") cfg.ties = value;
    else if (key == "sigma_weighting") cfg.sigma_weighting = value;
    else if (key == "seed") cfg.seed = parse_u64(value);
    else if (key == "out") cfg.out_dir = value;
    else throw ParseError("unknown config key: " + key);
  }

  if (cfg.game_kind != "dominant" && cfg.game_kind != "convention" &&
      cfg.game_kind != "file") {
    throw ParseError("game must be dominant, convention or file");
  }
  if (cfg.oracle != "exact" && cfg.oracle != "local") {
    throw ParseError("oracle must be exact or local");
  }
  if (cfg.ties != "lowest" && cfg.ties != "highest") {
    throw ParseError("ties must be lowest or highest");
  }
  if (cfg.sigma_weighting != "popularity" && cfg.sigma_weighting != "unpopularity") {
    throw ParseError("sigma_weighting must be popularity or unpopularity");
  }
  if (cfg.game_noise != "exact" && cfg.game_noise != "episodes") {
    throw ParseError("game.noise must be exact or episodes");
  }
  if (cfg.generations < 0) throw ParseError("generations must be >= 0");
  if (cfg.ratio_a + cfg.ratio_b < 1) throw ParseError("ratio a + b must be >= 1");
  if (cfg.population_cap < 1) throw ParseError("population_cap must be >= 1");
  if (cfg.evict_window < 1) throw ParseError("evict_window must be >= 1");
  return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  return from_string(read_file(path));
}

std::string ExperimentConfig::to_string() const {
  std::string out;
  auto put = [&out](const std::string& key, const std::string& value) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  };
  put("game", game_kind);
  if (!game_file.empty()) put("game.file", game_file);
  put("game.m", std::to_string(game_m));
  put("game.bonus", format_double(game_bonus));
  put("game.blocks", std::to_string(game_blocks));
  put("game.actions_per_block", std::to_string(game_actions_per_block));
  put("game.intra", format_double(game_intra));
  put("game.inter", format_double(game_inter));
  put("game.jitter", format_double(game_jitter));
  put("game.seed", std::to_string(game_seed));
  put("game.noise", game_noise);
  put("game.episodes", std::to_string(game_episodes));
  put("generations", std::to_string(generations));
  put("ratio_a", std::to_string(ratio_a));
  put("ratio_b", std::to_string(ratio_b));
  put("alpha", format_double(alpha));
  put("c", format_double(c));
  put("k", std::to_string(k));
  put("mc_samples", std::to_string(mc_samples));
  put("exact_limit", std::to_string(exact_limit));
  put("damping", format_double(damping));
  put("pagerank_tol", format_double(pagerank_tol));
  put("pagerank_max_iter", std::to_string(pagerank_max_iter));
  put("population_cap", std::to_string(population_cap));
  put("evict_window", std::to_string(evict_window));
  put("oracle", oracle);
  put("oracle_steps", std::to_string(oracle_steps));
  put("oracle_step_size", format_double(oracle_step_size));
  put("ties", ties);
  put("sigma_weighting", sigma_weighting);
  put("seed", std::to_string(seed));
  put("out", out_dir);
  return out;
}

TieRule ExperimentConfig::tie_rule() const {
  return ties == "highest" ? TieRule::kHighestIndex : TieRule::kLowestIndex;
}

MatrixCoopGame ExperimentConfig::build_game() const {
  const NoiseMode mode =
      game_noise == "episodes" ? NoiseMode::kEpisodes : NoiseMode::kExact;
  if (game_kind == "dominant") {
    return gen_dominant_game(game_m, game_bonus, mode, game_episodes);
  }
  if (game_kind == "convention") {
    return gen_convention_game(game_blocks, game_intra, game_inter, game_seed,
                               game_actions_per_block, game_jitter, mode,
                               game_episodes);
  }
  return MatrixCoopGame::from_json_string(read_file(game_file));
}

EngineConfig ExperimentConfig::engine_config() const {
  EngineConfig e;
  e.solver.damping = damping;
  e.solver.pagerank_tol = pagerank_tol;
  e.solver.pagerank_max_iter = pagerank_max_iter;
  e.solver.exact_limit = exact_limit;
  e.solver.mc_samples = mc_samples;
  e.solver.ties = tie_rule();
  e.solver.sigma_weighting = sigma_weighting == "unpopularity"
                                 ? SigmaWeighting::kUnpopularity
                                 : SigmaWeighting::kPopularity;
  e.oracle.alpha = alpha;
  e.oracle.k = k;
  e.oracle.c = c;
  e.oracle.ratio_a = ratio_a;
  e.oracle.ratio_b = ratio_b;
  e.oracle.steps = oracle_steps;
  e.oracle.step_size = oracle_step_size;
  e.oracle.ties = tie_rule();
  e.oracle_kind = oracle == "local" ? OracleKind::kLocal : OracleKind::kExact;
  e.population_cap = population_cap;
  e.evict_window = evict_window;
  return e;
}

namespace {

void progress_line(std::ostream& out, const GenerationRecord& r) {
  out << "gen " << r.generation << ": eta_new=" << format_double(r.oracle.eta_new)
      << " rank=" << r.oracle.rank << " accepted=" << (r.oracle.accepted ? 1 : 0)
      << " J=" << format_double(r.oracle.objective_value) << "\n";
}

void write_final_state(const fs::path& dir, const Population& pop,
                       const ExperimentConfig& cfg, long next_generation,
                       const MatrixCoopGame& game) {
  Checkpoint ckpt;
  ckpt.pop = pop;
  ckpt.next_generation = next_generation;
  ckpt.master_seed = cfg.seed;
  ckpt.game_json = game.to_json_string();
  ckpt.config_text = cfg.to_string();
  write_file(dir / "checkpoint.json", ckpt.to_json_string() + "\n");
  write_file(dir / "payoff.csv", pop.payoff.to_csv());
  const std::string history =
      pop.size() >= 2 ? centrality_history(pop.payoff, cfg.tie_rule()).to_csv()
                      : std::string();
  write_file(dir / "eta_history.csv", history);
}

}  // namespace

void run_experiment(const ExperimentConfig& cfg, std::ostream& progress) {
  const MatrixCoopGame game = cfg.build_game();
  const EngineConfig engine = cfg.engine_config();
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  write_file(dir / "config.txt", cfg.to_string());

  Population pop = Population::initial(Strategy::uniform(game.actions()));
  std::ofstream jsonl(dir / "generations.jsonl", std::ios::binary | std::ios::trunc);
  if (!jsonl) throw ColeError("cannot write generation log");
  for (long g = 1; g <= cfg.generations; ++g) {
    const GenerationRecord rec = run_generation(pop, game, engine, cfg.seed, g);
    jsonl << rec.to_json_string() << "\n";
    jsonl.flush();
    progress_line(progress, rec);
  }
  write_final_state(dir, pop, cfg, cfg.generations + 1, game);
}

void resume_experiment(const std::string& checkpoint_path, long extra,
                       const std::string& out_override, std::ostream& progress) {
  if (extra < 0) throw ParseError("extra generations must be >= 0");
  Checkpoint ckpt = Checkpoint::from_json_string(read_file(checkpoint_path));
  if (extra == 0) {
    progress << "resume: nothing to do\n";
    return;
  }
  ExperimentConfig cfg = ExperimentConfig::from_string(ckpt.config_text);
  const fs::path dir = out_override.empty()
                           ? fs::path(checkpoint_path).parent_path()
                           : fs::path(out_override);
  fs::create_directories(dir);
  const MatrixCoopGame game = MatrixCoopGame::from_json_string(ckpt.game_json);
  const EngineConfig engine = cfg.engine_config();

  Population pop = std::move(ckpt.pop);
  std::ofstream jsonl(dir / "generations.jsonl", std::ios::binary | std::ios::app);
  if (!jsonl) throw ColeError("cannot append to generation log");
  const long first = ckpt.next_generation;
  for (long g = first; g < first + extra; ++g) {
    const GenerationRecord rec = run_generation(pop, game, engine,
                                                ckpt.master_seed, g);
    jsonl << rec.to_json_string() << "\n";
    jsonl.flush();
    progress_line(progress, rec);
  }
  write_final_state(dir, pop, cfg, first + extra, game);
}

void write_analysis(const PayoffMatrix& m, TieRule ties,
                    const std::string& out_dir) {
  if (m.size() < 2) throw ParseError("analysis needs a payoff table with n >= 2");
  const fs::path dir(out_dir);
  fs::create_directories(dir);

  const PreferenceGraph pg = build_preference_graph(m, ties);
  std::string edges = "node,out_edge\n";
  for (int i = 0; i < pg.size(); ++i) {
    edges += std::to_string(i) + "," + std::to_string(pg.out_edge[i]) + "\n";
  }
  write_file(dir / "preference_edges.csv", edges);

  write_file(dir / "eta_history.csv", centrality_history(m, ties).to_csv());

  const PageRankVector pr = weighted_pagerank(pg);
  std::string wpg = "node,pr\n";
  for (int i = 0; i < pg.size(); ++i) {
    wpg += std::to_string(i) + "," + format_double(pr.pr[i]) + "\n";
  }
  write_file(dir / "wpg.csv", wpg);
}

void write_solve(const PayoffMatrix& m, long mc_samples, std::uint64_t seed,
                 const std::string& out_dir, std::ostream& progress) {
  if (m.size() < 2) throw ParseError("solve needs a payoff table with n >= 2");
  SolverConfig sc;
  sc.mc_samples = mc_samples;
  sc.seed = seed;
  const SolveResult res = solve(m, sc);
  const fs::path dir(out_dir);
  fs::create_directories(dir);
  write_file(dir / "shapley.json", to_json_string(res.shapley, res.phi) + "\n");

  if (res.shapley.method == ShapleyMethod::kExact) {
    std::vector<int> everyone(m.size());
    for (int i = 0; i < m.size(); ++i) everyone[i] = i;
    const CharacteristicFunction cf(res.sigma, m);
    double sum = 0.0;
    for (double v : res.shapley.sv) sum += v;
    const double gap = std::fabs(sum - characteristic_value(cf, everyone));
    progress << "method=exact efficiency_gap=" << format_double(gap) << " "
             << (gap <= 1e-9 ? "PASS" : "FAIL") << "\n";
  } else {
    progress << "method=monte_carlo samples=" << res.shapley.samples << "\n";
  }
}

}  // namespace cole

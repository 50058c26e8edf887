// Command-line front end for the goal-seeking QUBO toolkit.
//
// Subcommands: solve, oracle, profile, gen, stats, reduce.
// Exit codes: 0 success, 1 usage error, 2 I/O or parse error,
// 3 (solve/oracle) finished cleanly with zero solutions.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qubogoal/qubogoal.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace qubogoal;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitNoSolutions = 3;

struct SolveOptions {
  std::string instance_path;
  std::string sense = "max";
  std::string name;
  std::optional<std::int64_t> exact;
  std::vector<std::int64_t> interval;  // LB UB
  std::optional<std::string> pct;
  std::string bks_path;
  std::vector<std::int64_t> lex;  // FSTAR DELTA
  std::vector<std::string> target_texts;
  std::uint32_t tenure = 10;
  std::optional<std::uint64_t> iters;
  std::optional<std::uint64_t> time_ms;
  std::uint64_t seed = 0;
  bool aspiration = false;
  std::string order = "obj-desc";
  std::string out_path;
  std::string trace_path;
  std::string manifest_path;
  std::string from_manifest;
};

std::string default_out_path(const std::string& instance_name) {
  return instance_name.empty() ? "solutions.txt" : instance_name + ".solutions.txt";
}

std::string per_target_path(const std::string& base, std::size_t index, std::size_t total) {
  if (total == 1) return base;
  return base + ".t" + std::to_string(index);
}

QuboInstance load_instance_or_die(const std::string& path, const std::string& sense,
                                  const std::string& name) {
  std::vector<std::string> warnings;
  QuboInstance inst = load_instance_file(path, sense_from_string(sense), name, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << path << ": " << w << '\n';
  return inst;
}

/// Resolves the target flags to a list of concrete targets (original sense).
std::vector<TargetSpec> resolve_targets(const SolveOptions& opt, const QuboInstance& inst) {
  std::vector<TargetRequest> requests;
  int single_forms = 0;
  if (opt.exact) {
    requests.push_back({TargetRequest::Kind::exact, *opt.exact, 0, Rational()});
    ++single_forms;
  }
  if (!opt.interval.empty()) {
    requests.push_back(
        {TargetRequest::Kind::interval, opt.interval[0], opt.interval[1], Rational()});
    ++single_forms;
  }
  if (opt.pct) {
    requests.push_back({TargetRequest::Kind::pct, 0, 0, parse_rational(*opt.pct)});
    ++single_forms;
  }
  if (!opt.lex.empty()) {
    requests.push_back({TargetRequest::Kind::lex, opt.lex[0], opt.lex[1], Rational()});
    ++single_forms;
  }
  if (single_forms > 1)
    throw std::invalid_argument("give at most one of --exact/--interval/--pct/--lex");
  for (const auto& text : opt.target_texts) requests.push_back(parse_target_request(text));
  if (requests.empty())
    throw std::invalid_argument(
        "no target given (use --exact, --interval, --pct, --lex or --target)");

  std::optional<std::int64_t> bks;
  const bool needs_bks = std::any_of(requests.begin(), requests.end(), [](const auto& r) {
    return r.kind == TargetRequest::Kind::pct;
  });
  if (needs_bks) {
    if (opt.bks_path.empty()) throw std::invalid_argument("pct targets require --bks FILE");
    const BksTable table = load_bks_file(opt.bks_path);
    const auto entry = table.lookup(inst.name());
    if (!entry)
      throw std::runtime_error("instance '" + inst.name() + "' not found in " + opt.bks_path);
    if (entry->sense != inst.sense())
      throw std::runtime_error("bks sense for '" + inst.name() +
                               "' disagrees with --sense; refusing to mix");
    bks = entry->value;
  }

  std::vector<TargetSpec> targets;
  targets.reserve(requests.size());
  for (const auto& r : requests) targets.push_back(r.resolve(bks));
  return targets;
}

json manifest_json(const SolveOptions& opt, const QuboInstance& inst,
                   const std::vector<TargetSpec>& targets,
                   const std::vector<std::string>& out_paths, const SolverConfig& cfg,
                   const std::vector<SolutionSet>& sets, const std::vector<RunStats>& stats,
                   std::uint64_t wall_ms) {
  json targets_json = json::array();
  for (const auto& t : targets) targets_json.push_back(target_text(t));
  json outputs = json::array();
  for (const auto& p : out_paths) outputs.push_back(p);
  json counts = json::array(), iterations = json::array(), best_af = json::array(),
       best_f = json::array();
  std::uint64_t total = 0;
  for (std::size_t k = 0; k < sets.size(); ++k) {
    counts.push_back(sets[k].size());
    total += sets[k].size();
    iterations.push_back(stats[k].iterations);
    best_af.push_back(stats[k].best_af.str());
    best_f.push_back(stats[k].best_f);
  }
  return json{
      {"tool", "qubogoal"},
      {"version", std::string(kVersion)},
      {"instance",
       {{"path", opt.instance_path},
        {"name", inst.name()},
        {"n", inst.n()},
        {"sense", to_string(inst.sense())}}},
      {"targets", targets_json},
      {"config",
       {{"tenure", opt.tenure},
        {"iters", opt.iters ? json(*opt.iters) : json(nullptr)},
        {"time_ms", opt.time_ms ? json(*opt.time_ms) : json(nullptr)},
        {"seed", cfg.seed},
        {"aspiration", cfg.aspiration},
        {"start", "all-zero"},
        {"order", opt.order}}},
      {"outputs",
       {{"solutions", outputs},
        {"trace", opt.trace_path.empty() ? json(nullptr) : json(opt.trace_path)}}},
      {"result",
       {{"unique_solutions", counts},
        {"total_unique", total},
        {"iterations", iterations},
        {"best_af", best_af},
        {"best_f", best_f},
        {"wall_ms", wall_ms}}}};
}

/// Fills solve options from a previously written manifest, pinning the
/// iteration counts actually executed so the replay is deterministic.
void apply_manifest(SolveOptions& opt, std::vector<std::uint64_t>& replay_iters) {
  std::ifstream in(opt.from_manifest);
  if (!in) throw std::runtime_error("cannot open: " + opt.from_manifest);
  json m;
  try {
    in >> m;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("manifest parse error: " + std::string(e.what()));
  }
  try {
    opt.instance_path = m.at("instance").at("path").get<std::string>();
    opt.name = m.at("instance").at("name").get<std::string>();
    opt.sense = m.at("instance").at("sense").get<std::string>();
    opt.target_texts = m.at("targets").get<std::vector<std::string>>();
    opt.exact.reset();
    opt.interval.clear();
    opt.pct.reset();
    opt.lex.clear();
    const auto& cfg = m.at("config");
    opt.tenure = cfg.at("tenure").get<std::uint32_t>();
    opt.seed = cfg.at("seed").get<std::uint64_t>();
    opt.aspiration = cfg.at("aspiration").get<bool>();
    opt.order = cfg.at("order").get<std::string>();
    opt.time_ms.reset();
    replay_iters = m.at("result").at("iterations").get<std::vector<std::uint64_t>>();
    if (opt.out_path.empty() && m.at("outputs").at("solutions").size() == 1)
      opt.out_path = m.at("outputs").at("solutions")[0].get<std::string>();
  } catch (const json::exception& e) {
    throw std::runtime_error("manifest missing field: " + std::string(e.what()));
  }
}

int cmd_solve(SolveOptions opt) {
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();

  std::vector<std::uint64_t> replay_iters;
  if (!opt.from_manifest.empty()) apply_manifest(opt, replay_iters);
  if (opt.instance_path.empty()) throw std::invalid_argument("missing --instance");

  const QuboInstance inst = load_instance_or_die(opt.instance_path, opt.sense, opt.name);
  const std::vector<TargetSpec> targets = resolve_targets(opt, inst);

  SolverConfig cfg;
  cfg.tenure = opt.tenure;
  cfg.seed = opt.seed;
  cfg.aspiration = opt.aspiration;
  if (opt.time_ms) cfg.time_limit_ms = *opt.time_ms;
  if (opt.iters) cfg.iter_limit = *opt.iters;
  if (!cfg.iter_limit && !cfg.time_limit_ms && replay_iters.empty()) {
    cfg.iter_limit = 100'000;  // documented default
    opt.iters = cfg.iter_limit;
  }

  std::ofstream trace_file;
  std::ostream* trace = nullptr;
  if (!opt.trace_path.empty()) {
    if (targets.size() > 1)
      throw std::invalid_argument("--trace applies to single-target runs only");
    trace_file.open(opt.trace_path);
    if (!trace_file) throw std::runtime_error("cannot open for writing: " + opt.trace_path);
    trace = &trace_file;
  }

  const SolutionOrder order = solution_order_from_string(opt.order);
  std::vector<SolutionSet> sets;
  std::vector<RunStats> stats;
  if (!replay_iters.empty()) {
    // Replay path: sequential runs with the recorded iteration counts and
    // the same per-target seed derivation as the original run.
    if (replay_iters.size() != targets.size())
      throw std::runtime_error("manifest iteration list does not match its target list");
    for (std::size_t k = 0; k < targets.size(); ++k) {
      SolverConfig per_target = cfg;
      per_target.iter_limit = replay_iters[k];
      per_target.time_limit_ms.reset();
      per_target.seed = targets.size() == 1 ? cfg.seed : derive_seed(cfg.seed, k);
      RunStats st;
      sets.push_back(run(inst, targets[k], per_target, trace, &st));
      stats.push_back(st);
    }
    opt.iters = replay_iters.size() == 1 ? std::optional<std::uint64_t>(replay_iters[0])
                                         : std::nullopt;
  } else if (targets.size() == 1) {
    RunStats st;
    sets.push_back(run(inst, targets[0], cfg, trace, &st));
    stats.push_back(st);
  } else {
    sets = run_parallel_targets(inst, targets, cfg, &stats);
  }

  const std::string out_base =
      opt.out_path.empty() ? default_out_path(inst.name()) : opt.out_path;
  std::vector<std::string> out_paths;
  std::uint64_t total = 0;
  for (std::size_t k = 0; k < sets.size(); ++k) {
    sort_solutions(sets[k], order);
    const std::string path = per_target_path(out_base, k, sets.size());
    write_solutions_file(sets[k], path);
    out_paths.push_back(path);
    total += sets[k].size();
    std::cout << "target " << target_text(targets[k]) << ": " << sets[k].size()
              << " unique solutions (best af " << stats[k].best_af.str() << ") -> " << path
              << '\n';
  }

  const auto wall_ms = static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count());
  const std::string manifest_path =
      opt.manifest_path.empty() ? out_base + ".manifest.json" : opt.manifest_path;
  {
    std::ofstream mf(manifest_path);
    if (!mf) throw std::runtime_error("cannot open for writing: " + manifest_path);
    mf << manifest_json(opt, inst, targets, out_paths, cfg, sets, stats, wall_ms).dump(2)
       << '\n';
  }

  return total > 0 ? kExitOk : kExitNoSolutions;
}

int cmd_oracle(const SolveOptions& opt, std::uint32_t max_n) {
  const QuboInstance inst = load_instance_or_die(opt.instance_path, opt.sense, opt.name);
  const std::vector<TargetSpec> targets = resolve_targets(opt, inst);
  if (targets.size() != 1) throw std::invalid_argument("oracle takes exactly one target");

  SolutionSet set = enumerate_satisficing(inst, targets[0], OracleLimit{max_n});
  sort_solutions(set, solution_order_from_string(opt.order));
  for (const auto& r : set.records)
    std::cout << r.x.to_string() << " f=" << r.f << " af=" << r.af.str() << '\n';
  std::cerr << set.size() << " satisficing vectors of " << (std::uint64_t{1} << inst.n())
            << '\n';
  if (!opt.out_path.empty()) write_solutions_file(set, opt.out_path);
  return set.empty() ? kExitNoSolutions : kExitOk;
}

int cmd_profile(std::uint32_t n, std::uint32_t l_from, std::optional<std::uint32_t> l_to,
                const std::string& instance_path, const std::string& sense, bool strict) {
  std::optional<QuboInstance> inst;
  if (!instance_path.empty()) {
    inst = load_instance_or_die(instance_path, sense, "");
    if (n == 0) n = inst->n();
    if (n != inst->n())
      throw std::invalid_argument("--n disagrees with the instance dimension");
  }
  if (n == 0) throw std::invalid_argument("give --n or --instance");
  const std::uint32_t last = l_to.value_or(l_from);
  if (last < l_from) throw std::invalid_argument("--l-to below --l");

  std::cout << "n,l,binomial_estimate,closed_form";
  if (inst) std::cout << ",oracle_count";
  std::cout << '\n';
  for (std::uint32_t l = l_from; l <= last; ++l) {
    std::cout << n << ',' << l << ',' << estimate_binomial(n, l).str(50) << ',';
    if (l + 2 <= n) std::cout << estimate_closed_form(n, l).str(50);
    if (inst) std::cout << ',' << count_local_optima(*inst, l, strict);
    std::cout << '\n';
  }
  return kExitOk;
}

int cmd_gen(std::uint32_t n, const std::string& density, std::int64_t lo, std::int64_t hi,
            std::uint64_t seed, std::string name, const std::string& out) {
  GeneratorSpec spec;
  spec.n = n;
  spec.density = parse_rational(density);
  spec.coeff_min = lo;
  spec.coeff_max = hi;
  spec.seed = seed;
  if (name.empty()) name = fs::path(out).stem().string();
  spec.name = name;
  const QuboInstance inst = generate(spec);
  write_instance_file(inst, out);
  std::cout << "wrote " << out << ": n=" << inst.n() << " triples=" << inst.coeffs().size()
            << " seed=" << seed << '\n';
  return kExitOk;
}

int cmd_stats(const std::string& path, bool pretty) {
  const SolutionSet set = read_solutions_file(path);
  DiversityReport report;
  try {
    report = diversity_report(set);
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  if (pretty) {
    std::cout << "solutions:     " << report.set_size << '\n'
              << "pairs:         " << report.pair_count << '\n'
              << "mean hamming:  " << rational_to_decimal(report.mean) << '\n'
              << "median:        " << rational_to_decimal(report.median) << '\n'
              << "min:           " << report.min << '\n'
              << "max:           " << report.max << '\n';
  } else {
    std::cout << diversity_csv_header() << '\n' << diversity_csv_row(report) << '\n';
  }
  return kExitOk;
}

int cmd_reduce(const std::string& instance_path, const std::string& sense,
               std::int64_t exact_t, std::optional<std::int64_t> penalty,
               const std::string& out, std::string aux_path) {
  const QuboInstance inst = load_instance_or_die(instance_path, sense, "");
  const PseudoBooleanPoly poly = square_objective(inst, exact_t);
  const QuadratizationResult result =
      penalty ? reduce_to_qubo(poly, *penalty) : reduce_to_qubo(poly);
  write_instance_file(result.qubo, out);
  if (aux_path.empty()) aux_path = out + ".aux";
  {
    std::ofstream aux(aux_path);
    if (!aux) throw std::runtime_error("cannot open for writing: " + aux_path);
    aux << "# auxiliary map for " << out << " (1-based: z i j)\n";
    aux << "# offset " << result.offset << "\n# penalty " << result.penalty << '\n';
    for (const auto& [z, i, j] : result.aux_map)
      aux << (z + 1) << ' ' << (i + 1) << ' ' << (j + 1) << '\n';
  }
  std::cout << "wrote " << out << ": vars=" << result.qubo.n() << " (aux "
            << result.aux_map.size() << "), offset=" << result.offset
            << ", penalty=" << result.penalty << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Goal-seeking QUBO solver: collect distinct binary vectors whose "
               "objective meets an exact target, an interval, or a weighted "
               "multi-target goal."};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  SolveOptions opt;

  auto add_target_flags = [&](CLI::App* cmd, bool multi_ok) {
    cmd->add_option("--exact", opt.exact, "Exact target value T");
    cmd->add_option("--interval", opt.interval, "Closed interval LB UB")->expected(2);
    cmd->add_option("--pct", opt.pct, "Target as a fraction of the best known value");
    cmd->add_option("--bks", opt.bks_path, "Best-known-solutions file (for --pct)");
    cmd->add_option("--lex", opt.lex, "Near-optimal band FSTAR DELTA")->expected(2);
    if (multi_ok)
      cmd->add_option("--target", opt.target_texts,
                      "Target in textual form (repeat for parallel multi-target runs)");
  };

  CLI::App* solve = app.add_subcommand("solve", "Tabu search for satisficing solutions");
  solve->add_option("-i,--instance", opt.instance_path, "Instance file");
  solve->add_option("--sense", opt.sense, "Objective sense of the file (default max)")
      ->check(CLI::IsMember({"min", "max"}));
  solve->add_option("--name", opt.name, "Instance name (default: file stem)");
  add_target_flags(solve, true);
  solve->add_option("--tenure", opt.tenure, "Tabu tenure (default 10)");
  solve->add_option("--iters", opt.iters, "Iteration limit");
  solve->add_option("--time", opt.time_ms, "Wall-time limit in milliseconds");
  solve->add_option("--seed", opt.seed, "Random seed");
  solve->add_flag("--aspiration", opt.aspiration, "Allow tabu moves that meet the target");
  solve->add_option("--order", opt.order, "Solution order: obj-desc, obj-asc, found")
      ->check(CLI::IsMember({"obj-desc", "obj-asc", "found"}));
  solve->add_option("--out", opt.out_path, "Solutions file (default <name>.solutions.txt)");
  solve->add_option("--trace", opt.trace_path, "Move-trace debug stream");
  solve->add_option("--manifest", opt.manifest_path,
                    "Manifest path (default <out>.manifest.json)");
  solve->add_option("--from-manifest", opt.from_manifest,
                    "Replay a recorded run deterministically");

  std::uint32_t oracle_max_n = 24;
  CLI::App* oracle = app.add_subcommand("oracle", "Exhaustive satisficing enumeration");
  oracle->add_option("-i,--instance", opt.instance_path, "Instance file")->required();
  oracle->add_option("--sense", opt.sense, "Objective sense of the file (default max)")
      ->check(CLI::IsMember({"min", "max"}));
  oracle->add_option("--name", opt.name, "Instance name (default: file stem)");
  add_target_flags(oracle, false);
  oracle->add_option("--max-n", oracle_max_n, "Enumeration size cap (default 24)");
  oracle->add_option("--order", opt.order, "Solution order: obj-desc, obj-asc, found")
      ->check(CLI::IsMember({"obj-desc", "obj-asc", "found"}));
  oracle->add_option("--out", opt.out_path, "Also write a solutions file");

  std::uint32_t profile_n = 0, profile_l = 0;
  std::optional<std::uint32_t> profile_l_to;
  std::string profile_instance, profile_sense = "max";
  bool profile_strict = false;
  CLI::App* profile = app.add_subcommand("profile", "Local-optima estimates as CSV");
  profile->add_option("--n", profile_n, "Dimension");
  profile->add_option("--l", profile_l, "Move radius")->required();
  profile->add_option("--l-to", profile_l_to, "Sweep radii l..L2");
  profile->add_option("-i,--instance", profile_instance,
                      "Small instance for the exact oracle count column");
  profile->add_option("--sense", profile_sense, "Objective sense of the file")
      ->check(CLI::IsMember({"min", "max"}));
  profile->add_flag("--strict", profile_strict, "Count strict local optima");

  std::uint32_t gen_n = 0;
  std::string gen_density = "0.5", gen_name, gen_out;
  std::int64_t gen_min = -100, gen_max = 100;
  std::uint64_t gen_seed = 0;
  CLI::App* gen = app.add_subcommand("gen", "Generate a seeded random instance");
  gen->add_option("--n", gen_n, "Dimension")->required();
  gen->add_option("--density", gen_density, "Pair inclusion probability (default 0.5)");
  gen->add_option("--min", gen_min, "Smallest coefficient (default -100)");
  gen->add_option("--max", gen_max, "Largest coefficient (default 100)");
  gen->add_option("--seed", gen_seed, "Generator seed");
  gen->add_option("--name", gen_name, "Instance name (default: file stem)");
  gen->add_option("--out", gen_out, "Output file")->required();

  std::string stats_path;
  bool stats_pretty = false;
  CLI::App* stats = app.add_subcommand("stats", "Diversity statistics of a solutions file");
  stats->add_option("file", stats_path, "Solutions file")->required();
  stats->add_flag("--pretty", stats_pretty, "Human-readable output");

  std::string reduce_instance, reduce_sense = "max", reduce_out, reduce_aux;
  std::int64_t reduce_exact = 0;
  std::optional<std::int64_t> reduce_penalty;
  CLI::App* reduce =
      app.add_subcommand("reduce", "Quadratize the exact-target achievement polynomial");
  reduce->add_option("-i,--instance", reduce_instance, "Instance file")->required();
  reduce->add_option("--sense", reduce_sense, "Objective sense of the file (default max)")
      ->check(CLI::IsMember({"min", "max"}));
  reduce->add_option("--exact", reduce_exact, "Exact target value T")->required();
  reduce->add_option("--penalty", reduce_penalty,
                     "Rosenberg penalty M (default 1 + sum |coefficients|)");
  reduce->add_option("--out", reduce_out, "Reduced instance file")->required();
  reduce->add_option("--aux-map", reduce_aux, "Auxiliary map sidecar (default <out>.aux)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (solve->parsed()) return cmd_solve(opt);
    if (oracle->parsed()) return cmd_oracle(opt, oracle_max_n);
    if (profile->parsed())
      return cmd_profile(profile_n, profile_l, profile_l_to, profile_instance, profile_sense,
                         profile_strict);
    if (gen->parsed())
      return cmd_gen(gen_n, gen_density, gen_min, gen_max, gen_seed, gen_name, gen_out);
    if (stats->parsed()) return cmd_stats(stats_path, stats_pretty);
    if (reduce->parsed())
      return cmd_reduce(reduce_instance, reduce_sense, reduce_exact, reduce_penalty,
                        reduce_out, reduce_aux);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitUsage;
}

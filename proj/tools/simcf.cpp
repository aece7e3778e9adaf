// Command-line front end: runs Monte-Carlo batches of the benchmark schemes
// on a scenario (optionally sweeping one parameter) and writes results CSV,
// optional iteration traces, and a JSON metadata sidecar.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "simcf/report.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string schemes = "aga-ao";
  int trials = 1;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out_dir = ".";
  bool trace = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path,
                  "Scenario JSON file (defaults used when omitted)");
  cmd->add_option("--schemes", args.schemes,
                  "Comma-separated scheme tokens (aga-ao,nua-ao,aga-sim,"
                  "nua-sim,aga-power,nua-power,aga-rp-ep,nua-rp-ep)");
  cmd->add_option("--trials", args.trials, "Monte-Carlo trials per scheme")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", args.seed, "Override the scenario's base seed");
  cmd->add_option("--out", args.out_dir, "Output directory");
  cmd->add_flag("--trace", args.trace, "Also write per-iteration traces");
}

std::vector<simcf::SchemeId> parse_schemes(const std::string& list) {
  std::vector<simcf::SchemeId> schemes;
  std::stringstream ss(list);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (!token.empty()) schemes.push_back(simcf::parse_scheme(token));
  }
  if (schemes.empty())
    throw simcf::ConfigError("--schemes lists no scheme tokens");
  return schemes;
}

int thread_cap_from_env() {
  const char* env = std::getenv("SIMCF_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  try {
    const int n = std::stoi(env);
    if (n < 1) throw std::invalid_argument(env);
    return n;
  } catch (const std::exception&) {
    throw simcf::ConfigError(
        std::string("SIMCF_THREADS must be a positive integer (got '") + env +
        "')");
  }
}

simcf::ScenarioConfig resolve_config(const CommonArgs& args) {
  simcf::ScenarioConfig cfg;
  if (!args.config_path.empty())
    cfg = simcf::load_scenario_file(args.config_path);
  if (args.seed_given) cfg.seed = args.seed;
  cfg.validate();
  return cfg;
}

void write_outputs(const std::vector<simcf::ResultBlock>& blocks,
                   const std::optional<simcf::SweepSpec>& sweep,
                   const CommonArgs& args, const std::string& invocation,
                   int threads) {
  namespace fs = std::filesystem;
  fs::create_directories(args.out_dir);

  const fs::path results = fs::path(args.out_dir) / "results.csv";
  {
    std::ofstream out(results);
    if (!out) throw std::runtime_error("cannot write " + results.string());
    simcf::write_results_csv(blocks, out);
  }
  if (args.trace) {
    const fs::path trace = fs::path(args.out_dir) / "trace.csv";
    std::ofstream out(trace);
    if (!out) throw std::runtime_error("cannot write " + trace.string());
    simcf::write_trace_csv(blocks, out);
  }
  {
    const fs::path meta = fs::path(args.out_dir) / "results_meta.json";
    std::ofstream out(meta);
    if (!out) throw std::runtime_error("cannot write " + meta.string());
    simcf::write_meta_json(blocks, invocation, threads, out);
  }
  simcf::write_summary(blocks, sweep, std::cout);
  std::cout << "wrote " << results.string() << '\n';
}

int do_run(const CommonArgs& args, const std::string& invocation) {
  const simcf::ScenarioConfig cfg = resolve_config(args);
  const auto schemes = parse_schemes(args.schemes);
  const int threads = thread_cap_from_env();

  simcf::ResultBlock block;
  block.config = cfg;
  block.stats = simcf::monte_carlo(cfg, schemes, args.trials, threads);
  write_outputs({block}, std::nullopt, args, invocation, threads);
  return 0;
}

int do_sweep(const CommonArgs& args, const std::string& sweep_text,
             std::optional<long> fixed_n_total,
             const std::string& invocation) {
  const simcf::ScenarioConfig base = resolve_config(args);
  const auto schemes = parse_schemes(args.schemes);
  const int threads = thread_cap_from_env();

  simcf::SweepSpec spec = simcf::parse_sweep(sweep_text);
  if (fixed_n_total) {
    if (spec.param != "L")
      throw simcf::ConfigError(
          "--fixed-n-total applies only to an L sweep (per-layer elements = "
          "total / L)");
    if (*fixed_n_total < 1)
      throw simcf::ConfigError("--fixed-n-total must be >= 1");
    spec.fixed_n_total = fixed_n_total;
  }

  std::vector<simcf::ResultBlock> blocks;
  blocks.reserve(spec.values.size());
  for (double value : spec.values) {
    simcf::ResultBlock block;
    block.config = simcf::apply_sweep_value(base, spec, value, &std::cerr);
    block.sweep_value = value;
    block.stats = simcf::monte_carlo(block.config, schemes, args.trials, threads);
    blocks.push_back(std::move(block));
  }
  write_outputs(blocks, spec, args, invocation, threads);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Deterministic downlink simulator for stacked-surface-assisted "
      "cell-free systems: antenna-user association, per-antenna power "
      "control, and surface phase optimization over Monte-Carlo trials."};
  app.require_subcommand(1);

  CommonArgs run_args, sweep_args;
  std::string sweep_text;
  long fixed_n_total = 0;

  CLI::App* run_cmd =
      app.add_subcommand("run", "Run the configured scenario as-is");
  add_common(run_cmd, run_args);

  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "Repeat the scenario over a parameter sweep");
  add_common(sweep_cmd, sweep_args);
  sweep_cmd
      ->add_option("--sweep", sweep_text,
                   "PARAM=v1,v2,... with PARAM one of L,U,K,M,N,N_total,P_max")
      ->required();
  CLI::Option* fnt = sweep_cmd->add_option(
      "--fixed-n-total", fixed_n_total,
      "Keep the total element budget fixed while sweeping L");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  std::ostringstream invocation;
  for (int i = 0; i < argc; ++i) invocation << (i ? " " : "") << argv[i];

  try {
    if (run_cmd->parsed()) {
      run_args.seed_given = run_cmd->count("--seed") > 0;
      return do_run(run_args, invocation.str());
    }
    sweep_args.seed_given = sweep_cmd->count("--seed") > 0;
    return do_sweep(sweep_args, sweep_text,
                    fnt->count() > 0 ? std::optional<long>(fixed_n_total)
                                     : std::nullopt,
                    invocation.str());
  } catch (const simcf::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

// jsrcert: data-driven stability certification for switched linear systems.
//
// Subcommands: gen-system, simulate, certify, estimate-index, oracle-jsr,
// sample-complexity. Exit codes: 0 = done (certify: certified stable),
// 2 = inconclusive certificate, 1 = any error. The JSRCERT_THREADS
// environment variable caps internal parallelism.

#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "jsrcert/pipeline.hpp"

namespace {

// One optional per flag; only flags the user actually passed override the
// config file, so a report's embedded config survives a re-run untouched.
struct Flags {
  std::optional<std::string> config;
  std::optional<std::uint64_t> seed;
  std::optional<int> n, M, p, k, q_max;
  std::optional<std::int64_t> N, T, max_sweeps;
  std::optional<double> lambda_bar, beta, tol_bisect, tol_residual, threshold;
  std::optional<double> spectral_target, c, chi, epsilon, varepsilon;
  std::optional<std::string> mode, route, system, trajectories, pairs, out;
  std::optional<std::uint64_t> word_budget;
};

void add_common_options(CLI::App& cmd, Flags& f) {
  cmd.add_option("--config", f.config, "JSON config file; flags override its values. "
                                       "A previously emitted report works here too");
  cmd.add_option("--seed", f.seed, "64-bit RNG seed");
  cmd.add_option("--n", f.n, "state dimension");
  cmd.add_option("--M", f.M, "number of modes");
  cmd.add_option("--p", f.p, "output dimension");
  cmd.add_option("--N", f.N, "sample count");
  cmd.add_option("--T", f.T, "trajectory horizon (default 2k+1)");
  cmd.add_option("--k", f.k, "window length (certify default 3; estimate-index scan limit)");
  cmd.add_option("--lambda-bar", f.lambda_bar, "upper eigenvalue cap of the certificate band");
  cmd.add_option("--beta", f.beta, "confidence budget in (0,1)");
  cmd.add_option("--mode", f.mode, "white (model available) or black (data only)")
      ->check(CLI::IsMember({"white", "black"}));
  cmd.add_option("--out", f.out, "output file path");
  cmd.add_option("--tol-bisect", f.tol_bisect, "relative bisection tolerance on gamma");
  cmd.add_option("--q-max", f.q_max, "product length for enumeration brackets");
  cmd.add_option("--threshold", f.threshold, "xi cutoff for the index estimate");
  cmd.add_option("--system", f.system, "system JSON file");
  cmd.add_option("--trajectories", f.trajectories, "trajectory JSONL file");
  cmd.add_option("--pairs", f.pairs, "data-pair JSONL file");
  cmd.add_option("--route", f.route, "bound the verdict reads")
      ->check(CLI::IsMember({"posteriori", "apriori", "explicit"}));
  cmd.add_option("--c", f.c, "a-priori shape constant of the model class (>= 1)");
  cmd.add_option("--chi", f.chi, "reference shape constant for planning (>= 1)");
  cmd.add_option("--epsilon", f.epsilon, "violation-rate override for the certificate");
  cmd.add_option("--varepsilon", f.varepsilon, "accuracy margin for planning / screening");
  cmd.add_option("--spectral-target", f.spectral_target,
                 "gen-system: rescale until the enumeration upper bound is below this");
  cmd.add_option("--tol-residual", f.tol_residual, "inner feasibility residual tolerance");
  cmd.add_option("--max-sweeps", f.max_sweeps, "projection sweep cap per feasibility solve");
  cmd.add_option("--word-budget", f.word_budget, "cap on enumerated switching words");
}

jsrcert::RunConfig merge(const Flags& f) {
  jsrcert::RunConfig cfg;
  if (f.config) cfg = jsrcert::config_from_file(*f.config);
  if (f.mode) cfg.mode = *f.mode;
  if (f.seed) cfg.seed = *f.seed;
  if (f.n) cfg.n = *f.n;
  if (f.M) cfg.M = *f.M;
  if (f.p) cfg.p = *f.p;
  if (f.N) cfg.N = *f.N;
  if (f.T) cfg.T = *f.T;
  if (f.k) cfg.k = *f.k;
  if (f.lambda_bar) cfg.lambda_bar = *f.lambda_bar;
  if (f.beta) cfg.beta = *f.beta;
  if (f.tol_bisect) cfg.tol_bisect = *f.tol_bisect;
  if (f.tol_residual) cfg.tol_residual = *f.tol_residual;
  if (f.max_sweeps) cfg.max_sweeps = *f.max_sweeps;
  if (f.q_max) cfg.q_max = *f.q_max;
  if (f.word_budget) cfg.word_budget = *f.word_budget;
  if (f.threshold) cfg.threshold = *f.threshold;
  if (f.spectral_target) cfg.spectral_target = *f.spectral_target;
  if (f.c) cfg.c_prior = *f.c;
  if (f.chi) cfg.chi_prior = *f.chi;
  if (f.epsilon) cfg.epsilon = *f.epsilon;
  if (f.varepsilon) cfg.varepsilon = *f.varepsilon;
  if (f.route) cfg.route = *f.route;
  if (f.system) cfg.system_path = *f.system;
  if (f.trajectories) cfg.trajectory_path = *f.trajectories;
  if (f.pairs) cfg.pair_path = *f.pairs;
  if (f.out) cfg.out_path = *f.out;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Probabilistic joint-spectral-radius certification from output data"};
  app.require_subcommand(1);

  Flags flags;
  using Runner = jsrcert::CommandOutcome (*)(const jsrcert::RunConfig&);
  Runner runner = nullptr;

  struct Command {
    const char* name;
    const char* help;
    Runner fn;
  };
  const Command commands[] = {
      {"gen-system", "Draw a random switched system (entries uniform on [-1,1]) "
                     "and write it to --out; --spectral-target rescales it stable",
       &jsrcert::run_gen_system},
      {"simulate", "Sample N output trajectories of horizon T from --system into "
                   "--out; --mode black strips (x0, word) provenance",
       &jsrcert::run_simulate},
      {"certify", "Solve the scenario program on recorded data and bound the "
                  "joint spectral radius; exit 0 = certified stable, 2 = inconclusive",
       &jsrcert::run_certify},
      {"estimate-index", "Tabulate window-extension ratios xi_k and estimate the "
                         "observability window from data",
       &jsrcert::run_estimate_index},
      {"oracle-jsr", "Exhaustive product-enumeration bracket on the joint "
                     "spectral radius of --system",
       &jsrcert::run_oracle_jsr},
      {"sample-complexity", "Samples needed for a (1+varepsilon)-accurate "
                            "certificate at confidence 1-beta",
       &jsrcert::run_sample_complexity},
  };
  for (const Command& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    add_common_options(*sub, flags);
    sub->callback([&runner, &c] { runner = c.fn; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    const jsrcert::CommandOutcome outcome = runner(merge(flags));
    std::cout << outcome.report << "\n";
    return outcome.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "jsrcert/system.hpp"

namespace jsrcert {

// Everything a command run depends on. Serialized verbatim into every report
// under "params", so a report can be re-run: feeding a report file back in as
// --config reproduces the numbers bit for bit (inputs pinned by content hash).
struct RunConfig {
  std::string mode = "white";  // "white" uses the model; "black" is data-only
  std::uint64_t seed = 0;

  std::optional<int> n;
  std::optional<int> M;
  std::optional<int> p;
  std::optional<std::int64_t> N;
  std::optional<std::int64_t> T;  // unset: 2k + 1 where a horizon is needed
  std::optional<int> k;           // unset: 3 for certify, floor(T/2) as the
                                  // scan limit for estimate-index

  double lambda_bar = 10.0;
  double beta = 0.1;
  double tol_bisect = 1e-5;
  double tol_residual = 1e-9;
  std::int64_t max_sweeps = 50000;
  int q_max = 6;
  std::uint64_t word_budget = 1000000;

  std::optional<double> threshold;        // estimate-index cutoff override
  std::optional<double> spectral_target;  // gen-system: rescale until the
                                          // enumeration upper bound is below
  std::optional<double> c_prior;          // shape constant for the model class
  std::optional<double> chi_prior;        // reference chi for planning
  std::optional<double> epsilon;          // rate override for the certificate
  std::optional<double> varepsilon;       // accuracy for planning / screening

  // Bound the verdict reads: "posteriori", "apriori" or "explicit".
  std::string route = "explicit";

  std::optional<std::string> system_path;
  std::optional<std::string> trajectory_path;
  std::optional<std::string> pair_path;
  std::optional<std::string> out_path;

  void validate() const;
};

// Parses a config object. A certification report is accepted too: when the
// object carries a "params" key next to result fields, that embedded config
// is loaded instead, which is what makes re-runs one command.
RunConfig config_from_json_text(const std::string& text);
RunConfig config_from_file(const std::string& path);

// Canonical JSON echo of a config (single line, all keys present).
std::string config_to_json_text(const RunConfig& config);

struct CommandOutcome {
  std::string report;  // JSON text, one object
  int exit_code = 0;   // 0 certified / done, 2 inconclusive, 1 never (thrown)
};

// gen-system: writes a random system to out_path (entries uniform on [-1,1]);
// with spectral_target set, rescales the dynamics until the enumeration upper
// bound at q_max sits below the target.
CommandOutcome run_gen_system(const RunConfig& config);

// simulate: samples N trajectories of horizon T from the system file and
// writes them to out_path. Black mode nulls the (x0, word) provenance in the
// emitted file, leaving outputs only.
CommandOutcome run_simulate(const RunConfig& config);

// certify: data -> scenario solve -> probabilistic bounds -> verdict.
// Data comes from pair_path, or trajectory_path (windows cut at k), or, in
// white mode, fresh collection from the system file (needs N). White mode
// requires the system file, checks every length-k window is observable, and
// adds the model-based bound; black mode refuses a system file and runs on
// recorded outputs alone. Exit code 0 = certified stable, 2 = inconclusive.
CommandOutcome run_certify(const RunConfig& config);

// estimate-index: window-extension ratio table xi_k for k = 1..k_max (k_max
// from k, default floor(T/2)) plus the smallest k passing the threshold.
CommandOutcome run_estimate_index(const RunConfig& config);

// oracle-jsr: exhaustive product enumeration bracket for the system file.
CommandOutcome run_oracle_jsr(const RunConfig& config);

// sample-complexity: how many samples make a (1 + varepsilon)-accurate
// certificate hold with confidence 1 - beta, given the prior shape constants.
CommandOutcome run_sample_complexity(const RunConfig& config);

}  // namespace jsrcert

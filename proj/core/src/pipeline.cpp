#include "jsrcert/pipeline.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "jsrcert/bounds.hpp"
#include "jsrcert/errors.hpp"
#include "jsrcert/io.hpp"
#include "jsrcert/jsr.hpp"
#include "jsrcert/observability.hpp"
#include "jsrcert/pairs.hpp"
#include "jsrcert/sampling.hpp"
#include "jsrcert/scenario.hpp"

namespace jsrcert {

using nlohmann::json;

namespace {

// Every stage failure is rethrown with a "command/stage:" prefix so a failed
// run names where it died without a stack trace.
template <typename Fn>
auto with_stage(const std::string& tag, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(tag + ": " + e.what());
  } catch (const std::exception& e) {
    throw Error(tag + ": " + e.what());
  }
}

json real_or_inf(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

template <typename T>
json opt_json(const std::optional<T>& v) {
  if (!v) return nullptr;
  return *v;
}

template <typename T>
void read_opt(const json& j, const char* key, std::optional<T>& out) {
  if (!j.contains(key) || j[key].is_null()) return;
  out = j[key].get<T>();
}

template <typename T>
void read_plain(const json& j, const char* key, T& out) {
  if (!j.contains(key) || j[key].is_null()) return;
  out = j[key].get<T>();
}

std::string require_out(const RunConfig& config, const char* command) {
  if (!config.out_path || config.out_path->empty())
    throw InvalidInputError(std::string(command) + " needs an output path (--out)");
  return *config.out_path;
}

json matrix_row_major(const Eigen::MatrixXd& m) {
  json arr = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) arr.push_back(m(r, c));
  return arr;
}

double condition_number(const Eigen::MatrixXd& P) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P);
  const double lo = es.eigenvalues()(0);
  const double hi = es.eigenvalues()(es.eigenvalues().size() - 1);
  if (lo <= 0.0) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

void emit(const RunConfig& config, const std::string& report) {
  if (config.out_path && !config.out_path->empty())
    write_text_file(*config.out_path, report + "\n");
}

}  // namespace

void RunConfig::validate() const {
  if (mode != "white" && mode != "black")
    throw InvalidInputError("mode must be \"white\" or \"black\", got \"" + mode + "\"");
  if (route != "posteriori" && route != "apriori" && route != "explicit")
    throw InvalidInputError("route must be posteriori, apriori or explicit");
  if (lambda_bar < 1.0) throw InvalidInputError("lambda_bar must be >= 1");
  if (!(beta > 0.0 && beta < 1.0)) throw InvalidInputError("beta must lie in (0, 1)");
  if (!(tol_bisect > 0.0) || !(tol_residual > 0.0))
    throw InvalidInputError("tolerances must be positive");
  if (max_sweeps < 1) throw InvalidInputError("max_sweeps must be >= 1");
  if (q_max < 1) throw InvalidInputError("q_max must be >= 1");
  if (k && *k < 1) throw InvalidInputError("k must be >= 1");
  if (T && k && *k > *T - 1)
    throw InvalidInputError("k must be <= T - 1 (k = " + std::to_string(*k) +
                            ", T = " + std::to_string(*T) + ")");
  if (N && *N < 1) throw InvalidInputError("N must be >= 1");
  if (n && *n < 1) throw InvalidInputError("n must be >= 1");
  if (M && *M < 1) throw InvalidInputError("M must be >= 1");
  if (p && *p < 1) throw InvalidInputError("p must be >= 1");
  if (epsilon && !(*epsilon > 0.0 && *epsilon < 1.0))
    throw InvalidInputError("epsilon must lie in (0, 1)");
  if (varepsilon && !(*varepsilon > 0.0))
    throw InvalidInputError("varepsilon must be positive");
  if (threshold && !(*threshold > 0.0))
    throw InvalidInputError("threshold must be positive");
  if (c_prior && *c_prior < 1.0) throw InvalidInputError("c must be >= 1");
  if (chi_prior && *chi_prior < 1.0) throw InvalidInputError("chi must be >= 1");
  if (spectral_target && !(*spectral_target > 0.0))
    throw InvalidInputError("spectral target must be positive");
}

RunConfig config_from_json_text(const std::string& text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw IoError("malformed JSON config");
  if (!j.is_object()) throw IoError("config must be a JSON object");
  // A report carries its config under "params"; accept it directly.
  // A bare config never has that key, so its presence is decisive.
  if (j.contains("params") && j["params"].is_object()) j = j["params"];

  RunConfig config;
  read_plain(j, "mode", config.mode);
  read_plain(j, "seed", config.seed);
  read_opt(j, "n", config.n);
  read_opt(j, "M", config.M);
  read_opt(j, "p", config.p);
  read_opt(j, "N", config.N);
  read_opt(j, "T", config.T);
  read_opt(j, "k", config.k);
  read_plain(j, "lambda_bar", config.lambda_bar);
  read_plain(j, "beta", config.beta);
  read_plain(j, "tol_bisect", config.tol_bisect);
  read_plain(j, "tol_residual", config.tol_residual);
  read_plain(j, "max_sweeps", config.max_sweeps);
  read_plain(j, "q_max", config.q_max);
  read_plain(j, "word_budget", config.word_budget);
  read_opt(j, "threshold", config.threshold);
  read_opt(j, "spectral_target", config.spectral_target);
  read_opt(j, "c", config.c_prior);
  read_opt(j, "chi", config.chi_prior);
  read_opt(j, "epsilon", config.epsilon);
  read_opt(j, "varepsilon", config.varepsilon);
  read_plain(j, "route", config.route);
  read_opt(j, "system", config.system_path);
  read_opt(j, "trajectories", config.trajectory_path);
  read_opt(j, "pairs", config.pair_path);
  read_opt(j, "out", config.out_path);
  config.validate();
  return config;
}

RunConfig config_from_file(const std::string& path) {
  return with_stage("config " + path, [&] { return config_from_json_text(read_text_file(path)); });
}

namespace {

json config_json(const RunConfig& config) {
  json j;
  j["mode"] = config.mode;
  j["seed"] = config.seed;
  j["n"] = opt_json(config.n);
  j["M"] = opt_json(config.M);
  j["p"] = opt_json(config.p);
  j["N"] = opt_json(config.N);
  j["T"] = opt_json(config.T);
  j["k"] = opt_json(config.k);
  j["lambda_bar"] = config.lambda_bar;
  j["beta"] = config.beta;
  j["tol_bisect"] = config.tol_bisect;
  j["tol_residual"] = config.tol_residual;
  j["max_sweeps"] = config.max_sweeps;
  j["q_max"] = config.q_max;
  j["word_budget"] = config.word_budget;
  j["threshold"] = opt_json(config.threshold);
  j["spectral_target"] = opt_json(config.spectral_target);
  j["c"] = opt_json(config.c_prior);
  j["chi"] = opt_json(config.chi_prior);
  j["epsilon"] = opt_json(config.epsilon);
  j["varepsilon"] = opt_json(config.varepsilon);
  j["route"] = config.route;
  j["system"] = opt_json(config.system_path);
  j["trajectories"] = opt_json(config.trajectory_path);
  j["pairs"] = opt_json(config.pair_path);
  j["out"] = opt_json(config.out_path);
  return j;
}

}  // namespace

std::string config_to_json_text(const RunConfig& config) { return config_json(config).dump(); }

CommandOutcome run_gen_system(const RunConfig& config) {
  config.validate();
  const std::string out = require_out(config, "gen-system");
  if (!config.n || !config.M || !config.p)
    throw InvalidInputError("gen-system needs --n, --M and --p");

  SwitchedLinearSystem sys = with_stage("gen-system/draw", [&] {
    return random_system(*config.n, *config.M, *config.p, Rng(config.seed));
  });

  int attempts = 0;
  JsrBracket bracket;
  with_stage("gen-system/rescale", [&] {
    bracket = jsr_bracket(sys, config.q_max, config.word_budget);
    if (config.spectral_target) {
      const double target = *config.spectral_target;
      while (bracket.upper >= target) {
        if (++attempts > 100)
          throw Error("rescaling failed to reach the spectral target in 100 attempts");
        const double factor = 0.99 * target / bracket.upper;
        for (auto& A : sys.A) A *= factor;
        bracket = jsr_bracket(sys, config.q_max, config.word_budget);
      }
    }
  });

  with_stage("gen-system/write", [&] { save_system(sys, out); });

  json report;
  report["command"] = "gen-system";
  report["out"] = out;
  report["file_hash"] = file_content_hash(out);
  report["oracle_lower"] = bracket.lower;
  report["oracle_upper"] = bracket.upper;
  report["oracle_depth"] = bracket.depth;
  report["rescale_attempts"] = attempts;
  report["params"] = config_json(config);
  return {report.dump(), 0};
}

CommandOutcome run_simulate(const RunConfig& config) {
  config.validate();
  const std::string out = require_out(config, "simulate");
  if (!config.system_path) throw InvalidInputError("simulate needs a system file (--system)");
  if (!config.N) throw InvalidInputError("simulate needs --N");
  const int k = config.k.value_or(3);
  const std::int64_t T = config.T.value_or(2 * static_cast<std::int64_t>(k) + 1);

  const SwitchedLinearSystem sys =
      with_stage("simulate/load", [&] { return load_system(*config.system_path); });
  const SampleSet set =
      with_stage("simulate/collect", [&] { return collect(sys, *config.N, T, config.seed); });
  // Black mode publishes outputs only; the emitted file carries no states,
  // initial conditions or switching words.
  with_stage("simulate/write",
             [&] { save_trajectories(set, out, /*strip_provenance=*/config.mode == "black"); });

  json report;
  report["command"] = "simulate";
  report["out"] = out;
  report["file_hash"] = file_content_hash(out);
  report["n"] = set.n;
  report["M"] = set.M;
  report["p"] = set.p;
  report["N"] = set.N;
  report["T"] = set.T;
  report["seed"] = set.seed;
  report["provenance_stripped"] = config.mode == "black";
  report["params"] = config_json(config);
  return {report.dump(), 0};
}

namespace {

json bound_details_json(const std::optional<BoundResult>& b) {
  if (!b) return nullptr;
  json j;
  j["value"] = real_or_inf(b->value);
  j["confidence"] = b->confidence;
  j["delta_arg"] = real_or_inf(b->delta_arg);
  j["min_informative_n"] =
      b->min_informative_n ? json(*b->min_informative_n) : json(nullptr);
  return j;
}

json instability_json(const InstabilityStatement& st) {
  json j;
  j["emitted"] = st.emitted;
  j["applicable"] = st.applicable;
  j["boundary"] = st.boundary;
  j["gamma_star"] = st.gamma_star;
  j["varepsilon"] = st.varepsilon;
  j["threshold"] = st.threshold;
  j["beta"] = st.beta;
  j["N"] = st.N;
  j["N_required"] = st.N_required;
  j["text"] = st.text;
  return j;
}

// Shared certification body. The black-box entry passes sys = nullptr and
// the data's own header dimensions; nothing below touches system matrices
// unless sys is present.
CommandOutcome certify_with_data(const RunConfig& config, DataPairSet pairs,
                                 const SwitchedLinearSystem* sys,
                                 std::map<std::string, std::string> input_hashes) {
  const int k = pairs.k;
  const int T = static_cast<int>(pairs.T);
  const int n = sys ? sys->n : pairs.source_n;
  const int M = sys ? sys->M : pairs.source_M;
  const std::int64_t N = static_cast<std::int64_t>(pairs.pairs.size());

  with_stage("certify/validate", [&] {
    if (n < 2)
      throw InvalidInputError("bounds need state dimension n >= 2 (data header says n = " +
                              std::to_string(n) + ")");
    if (M < 1) throw InvalidInputError("data header must state the mode count M");
    if (N < 1) throw InvalidInputError("no data pairs to certify from");
    if (sys) {
      // Model in hand: insist every length-k window is observable, which is
      // what the white-box bound needs.
      const auto idx = pathwise_index(*sys, k, config.word_budget);
      if (!idx)
        throw InvalidInputError(
            "some switching word of length " + std::to_string(k) +
            " has a rank-deficient output window; increase k (try estimate-index)");
    }
  });

  ScenarioProblem problem;
  problem.pairs = std::move(pairs);
  problem.lambda_bar = config.lambda_bar;
  problem.options.tol_bisect = config.tol_bisect;
  problem.options.tol_residual = config.tol_residual;
  problem.options.max_sweeps = config.max_sweeps;

  const CertificateSolution cert = with_stage("certify/solve", [&] { return solve(problem); });

  const std::int64_t d = scenario_dimension(k, problem.pairs.p);
  ConfidenceParams params = with_stage("certify/confidence", [&] {
    ConfidenceParams cp = confidence_from_beta(config.beta, d, N);
    if (config.epsilon) cp.epsilon = *config.epsilon;
    return cp;
  });

  std::optional<BoundResult> posteriori, apriori, explicit_bound;
  with_stage("certify/bounds", [&] {
    if (sys)
      posteriori = bound_posteriori(cert, *sys, params, T, k, N, config.word_budget);
    if (config.c_prior)
      apriori = bound_apriori(cert, *config.c_prior, config.lambda_bar, params, n, M, T, k, N);
    explicit_bound = bound_explicit(cert, problem.pairs, params, n, M);
  });

  const std::optional<BoundResult>& routed = config.route == "posteriori" ? posteriori
                                             : config.route == "apriori"  ? apriori
                                                                          : explicit_bound;
  with_stage("certify/verdict", [&] {
    if (!routed)
      throw InvalidInputError("route \"" + config.route + "\" has no bound here (" +
                              (config.route == "posteriori"
                                   ? "model-based route needs white mode"
                                   : "a-priori route needs --c") +
                              ")");
  });
  const Verdict v = verdict(*routed);

  std::optional<InstabilityStatement> instability;
  if (config.varepsilon) {
    with_stage("certify/instability", [&] {
      const SampleComplexity sc =
          sample_complexity(*config.varepsilon, config.beta, n, T, k, M, problem.pairs.p,
                            config.c_prior.value_or(1.0), config.lambda_bar,
                            config.chi_prior.value_or(1.0));
      instability =
          instability_risk(cert.gamma_star, *config.varepsilon, config.beta, N, sc.N_upper);
    });
  }

  json report;
  report["command"] = "certify";
  report["gamma_star"] = cert.gamma_star;
  report["kp"] = static_cast<std::int64_t>(problem.pairs.kp());
  report["kappa_P"] = real_or_inf(condition_number(cert.P_star));
  report["P_star"] = matrix_row_major(cert.P_star);

  json bounds;
  bounds["posteriori"] = posteriori ? real_or_inf(posteriori->value) : json(nullptr);
  bounds["apriori"] = apriori ? real_or_inf(apriori->value) : json(nullptr);
  bounds["explicit"] = explicit_bound ? real_or_inf(explicit_bound->value) : json(nullptr);
  report["bounds"] = std::move(bounds);

  json confidence;
  confidence["posteriori"] = posteriori ? json(posteriori->confidence) : json(nullptr);
  confidence["apriori"] = apriori ? json(apriori->confidence) : json(nullptr);
  confidence["explicit"] = explicit_bound ? json(explicit_bound->confidence) : json(nullptr);
  report["confidence"] = std::move(confidence);

  json details;
  details["posteriori"] = bound_details_json(posteriori);
  details["apriori"] = bound_details_json(apriori);
  details["explicit"] = bound_details_json(explicit_bound);
  report["bound_details"] = std::move(details);

  report["route"] = config.route;
  report["verdict"] = v == Verdict::certified_stable ? "certified-stable" : "inconclusive";
  report["instability"] = instability ? instability_json(*instability) : json(nullptr);

  json diag;
  diag["bisection_iterations"] = cert.diagnostics.bisection_iterations;
  diag["total_sweeps"] = cert.diagnostics.total_sweeps;
  diag["final_residual"] = cert.diagnostics.final_residual;
  diag["interval_width"] = cert.diagnostics.interval_width;
  diag["gamma_lo"] = cert.diagnostics.gamma_lo;
  diag["gamma_hi"] = cert.diagnostics.gamma_hi;
  diag["active_constraints"] = cert.diagnostics.active_constraints;
  diag["duplicates_removed"] = cert.diagnostics.duplicates_removed;
  report["diagnostics"] = std::move(diag);

  json prov;
  prov["mode"] = config.mode;
  prov["n"] = n;
  prov["M"] = M;
  prov["p"] = problem.pairs.p;
  prov["k"] = k;
  prov["T"] = T;
  prov["N"] = N;
  prov["d"] = d;
  prov["seed"] = problem.pairs.seed;
  prov["lambda_bar"] = config.lambda_bar;
  prov["beta"] = config.beta;
  prov["epsilon"] = params.epsilon;
  prov["epsilon_bar"] = params.epsilon_bar;
  prov["epsilon_prime"] = params.epsilon_prime;
  prov["epsilon_second"] = params.epsilon_second;
  prov["tol_bisect"] = config.tol_bisect;
  prov["tol_residual"] = config.tol_residual;
  // The data-only bound's shape constant, spelled out so certificates are
  // auditable: kappa is the spectral condition number of P_star.
  prov["explicit_shape"] = "psi^(n-1) * sqrt(kappa(P_star)^(n-1))";
  json hashes = json::object();
  for (const auto& [path, hash] : input_hashes) hashes[path] = hash;
  prov["input_hashes"] = std::move(hashes);
  report["provenance"] = std::move(prov);

  json csv;
  {
    std::ostringstream line;
    line << "N,gamma_star\n" << N << "," << cert.gamma_star << "\n";
    csv["gamma_vs_N"] = line.str();
  }
  report["csv"] = std::move(csv);

  report["params"] = config_json(config);

  CommandOutcome outcome;
  outcome.report = report.dump();
  outcome.exit_code = v == Verdict::certified_stable ? 0 : 2;
  return outcome;
}

struct LoadedData {
  DataPairSet pairs;
  std::map<std::string, std::string> hashes;
};

// Resolves the data source in priority order: explicit pair file, trajectory
// file cut at k, or (white mode only) fresh collection from the model.
LoadedData load_certify_data(const RunConfig& config, const SwitchedLinearSystem* sys) {
  return with_stage("certify/load", [&]() -> LoadedData {
    LoadedData data;
    if (config.pair_path) {
      data.pairs = load_pairs(*config.pair_path);
      data.hashes[*config.pair_path] = file_content_hash(*config.pair_path);
      if (config.k && *config.k != data.pairs.k)
        throw InvalidInputError("--k disagrees with the pair file header (k = " +
                                std::to_string(data.pairs.k) + ")");
      return data;
    }
    const int k = config.k.value_or(3);
    if (config.trajectory_path) {
      const SampleSet set = load_trajectories(*config.trajectory_path);
      data.hashes[*config.trajectory_path] = file_content_hash(*config.trajectory_path);
      data.pairs = extract_pairs(set, k);
      return data;
    }
    if (sys && config.N) {
      const std::int64_t T = config.T.value_or(2 * static_cast<std::int64_t>(k) + 1);
      data.pairs = extract_pairs(collect(*sys, *config.N, T, config.seed), k);
      return data;
    }
    throw InvalidInputError(
        "certify needs --pairs, --trajectories, or (white mode) --system with --N");
  });
}

// White-box entry: model available for observability checks and the
// model-based bound.
CommandOutcome certify_white(const RunConfig& config) {
  if (!config.system_path)
    throw InvalidInputError("certify/load: white mode needs a system file (--system)");
  const SwitchedLinearSystem sys =
      with_stage("certify/load", [&] { return load_system(*config.system_path); });
  LoadedData data = load_certify_data(config, &sys);
  data.hashes[*config.system_path] = file_content_hash(*config.system_path);
  return certify_with_data(config, std::move(data.pairs), &sys, std::move(data.hashes));
}

// Black-box entry: no system parameter exists on this path, so certification
// provably consumes recorded outputs only.
CommandOutcome certify_black(const RunConfig& config) {
  if (config.system_path)
    throw InvalidInputError("certify/load: black mode takes no system file; drop --system");
  LoadedData data = load_certify_data(config, nullptr);
  return certify_with_data(config, std::move(data.pairs), nullptr, std::move(data.hashes));
}

}  // namespace

CommandOutcome run_certify(const RunConfig& config) {
  config.validate();
  CommandOutcome outcome =
      config.mode == "white" ? certify_white(config) : certify_black(config);
  emit(config, outcome.report);
  return outcome;
}

CommandOutcome run_estimate_index(const RunConfig& config) {
  config.validate();

  SampleSet set = with_stage("estimate-index/load", [&]() -> SampleSet {
    if (config.trajectory_path) return load_trajectories(*config.trajectory_path);
    if (config.system_path && config.N) {
      const SwitchedLinearSystem sys = load_system(*config.system_path);
      const std::int64_t T =
          config.T.value_or(2 * static_cast<std::int64_t>(config.k.value_or(3)) + 1);
      return collect(sys, *config.N, T, config.seed);
    }
    throw InvalidInputError("estimate-index needs --trajectories, or --system with --N");
  });

  const int k_max = config.k.value_or(static_cast<int>(set.T / 2));
  const std::vector<IndexEstimate> table =
      with_stage("estimate-index/scan", [&] { return xi_estimates(set, 1, k_max); });

  const bool user_threshold = config.threshold.has_value();
  const double threshold =
      user_threshold ? *config.threshold : default_xi_threshold(table);
  const std::optional<int> H_hat = estimated_index(table, threshold);

  json report;
  report["command"] = "estimate-index";
  json xi_rows = json::array();
  std::ostringstream csv;
  csv << "k,xi\n";
  for (const auto& row : table) {
    json r;
    r["k"] = row.k;
    r["xi"] = real_or_inf(row.xi);
    xi_rows.push_back(std::move(r));
    csv << row.k << "," << (std::isinf(row.xi) ? "inf" : std::to_string(row.xi)) << "\n";
  }
  report["xi"] = std::move(xi_rows);
  report["threshold"] = real_or_inf(threshold);
  report["threshold_rule"] =
      user_threshold ? "user" : "10 x median of the finite xi values";
  report["H_hat"] = H_hat ? json(*H_hat) : json(nullptr);
  report["warning"] =
      H_hat ? json(nullptr)
            : json("no window length up to " + std::to_string(k_max) +
                   " passes the threshold; the data does not support an index estimate");
  json csv_obj;
  csv_obj["xi_vs_k"] = csv.str();
  report["csv"] = std::move(csv_obj);

  json prov;
  prov["n"] = set.n;
  prov["M"] = set.M;
  prov["p"] = set.p;
  prov["N"] = set.N;
  prov["T"] = set.T;
  prov["seed"] = set.seed;
  prov["k_max"] = k_max;
  if (config.trajectory_path) {
    json hashes = json::object();
    hashes[*config.trajectory_path] = file_content_hash(*config.trajectory_path);
    prov["input_hashes"] = std::move(hashes);
  }
  report["provenance"] = std::move(prov);
  report["params"] = config_json(config);

  CommandOutcome outcome{report.dump(), 0};
  emit(config, outcome.report);
  return outcome;
}

CommandOutcome run_oracle_jsr(const RunConfig& config) {
  config.validate();
  if (!config.system_path)
    throw InvalidInputError("oracle-jsr needs a system file (--system)");
  const SwitchedLinearSystem sys =
      with_stage("oracle-jsr/load", [&] { return load_system(*config.system_path); });
  const JsrBracket bracket = with_stage(
      "oracle-jsr/enumerate", [&] { return jsr_bracket(sys, config.q_max, config.word_budget); });

  json report;
  report["command"] = "oracle-jsr";
  report["lower"] = bracket.lower;
  report["upper"] = bracket.upper;
  report["depth"] = bracket.depth;
  json hashes = json::object();
  hashes[*config.system_path] = file_content_hash(*config.system_path);
  json prov;
  prov["input_hashes"] = std::move(hashes);
  report["provenance"] = std::move(prov);
  report["params"] = config_json(config);

  CommandOutcome outcome{report.dump(), 0};
  emit(config, outcome.report);
  return outcome;
}

CommandOutcome run_sample_complexity(const RunConfig& config) {
  config.validate();
  if (!config.varepsilon)
    throw InvalidInputError("sample-complexity needs --varepsilon (accuracy margin)");
  if (!config.n || !config.M || !config.p)
    throw InvalidInputError("sample-complexity needs --n, --M and --p");
  const int k = config.k.value_or(3);
  const std::int64_t T = config.T.value_or(2 * static_cast<std::int64_t>(k) + 1);

  const SampleComplexity sc = with_stage("sample-complexity/plan", [&] {
    return sample_complexity(*config.varepsilon, config.beta, *config.n,
                             static_cast<int>(T), k, *config.M, *config.p,
                             config.c_prior.value_or(1.0), config.lambda_bar,
                             config.chi_prior.value_or(1.0));
  });

  json report;
  report["command"] = "sample-complexity";
  report["N_upper"] = sc.N_upper;
  report["closed_form"] = sc.closed_form;
  report["epsilon_target"] = sc.epsilon_target;
  report["d"] = scenario_dimension(k, *config.p);
  report["params"] = config_json(config);

  CommandOutcome outcome{report.dump(), 0};
  emit(config, outcome.report);
  return outcome;
}

}  // namespace jsrcert

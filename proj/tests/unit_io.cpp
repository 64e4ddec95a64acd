#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include <doctest.h>
#include <json.hpp>

#include "jsrcert/errors.hpp"
#include "jsrcert/io.hpp"
#include "jsrcert/pipeline.hpp"
#include "jsrcert/rng.hpp"
#include "jsrcert/sampling.hpp"
#include "jsrcert/system.hpp"

using namespace jsrcert;
using nlohmann::json;

namespace {

std::filesystem::path test_dir() {
  static const std::filesystem::path dir = [] {
    auto d = std::filesystem::temp_directory_path() /
             ("jsrcert_unit_" + std::to_string(::getpid()));
    std::filesystem::create_directories(d);
    return d;
  }();
  return dir;
}

std::string path_of(const std::string& name) { return (test_dir() / name).string(); }

int run_cli(const std::string& args, std::string* stdout_text = nullptr) {
  const std::string out = path_of("cli_stdout.txt");
  const std::string err = path_of("cli_stderr.txt");
  const std::string cmd =
      std::string(JSRCERT_CLI_PATH) + " " + args + " > " + out + " 2> " + err;
  const int status = std::system(cmd.c_str());
  if (stdout_text) *stdout_text = read_text_file(out);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

SwitchedLinearSystem contraction_system(double a) {
  SwitchedLinearSystem sys;
  sys.n = 2;
  sys.M = 1;
  sys.p = 2;
  sys.A = {a * Eigen::MatrixXd::Identity(2, 2)};
  sys.C = {Eigen::MatrixXd::Identity(2, 2)};
  return sys;
}

}  // namespace

TEST_CASE("system files round-trip bit for bit") {
  const SwitchedLinearSystem sys = random_system(3, 2, 2, Rng(1));
  const std::string path = path_of("sys_roundtrip.json");
  save_system(sys, path);
  const SwitchedLinearSystem back = load_system(path);
  CHECK(back.n == sys.n);
  CHECK(back.M == sys.M);
  CHECK(back.p == sys.p);
  for (int m = 0; m < sys.M; ++m) {
    CHECK((back.A[static_cast<std::size_t>(m)] - sys.A[static_cast<std::size_t>(m)]).norm() ==
          0.0);
    CHECK((back.C[static_cast<std::size_t>(m)] - sys.C[static_cast<std::size_t>(m)]).norm() ==
          0.0);
  }
}

TEST_CASE("system loader ignores unknown keys and rejects damage") {
  const std::string ok = path_of("sys_extra.json");
  write_text_file(ok,
                  R"({"n":1,"M":1,"p":1,"A":[[0.5]],"C":[[1.0]],"note":"ignored"})");
  const SwitchedLinearSystem sys = load_system(ok);
  CHECK(sys.A[0](0, 0) == 0.5);

  const std::string bad = path_of("sys_bad.json");
  write_text_file(bad, "{ this is not json");
  CHECK_THROWS_AS(load_system(bad), IoError);

  write_text_file(bad, R"({"n":1,"M":1,"A":[[0.5]],"C":[[1.0]]})");
  CHECK_THROWS_AS(load_system(bad), IoError);  // p missing

  write_text_file(bad, R"({"n":1,"M":2,"p":1,"A":[[0.5]],"C":[[1.0]]})");
  CHECK_THROWS_AS(load_system(bad), IoError);  // A lists 1 matrix, M = 2

  write_text_file(bad, R"({"n":0,"M":1,"p":1,"A":[[]],"C":[[]]})");
  CHECK_THROWS_AS(load_system(bad), IoError);

  CHECK_THROWS_AS(load_system(path_of("does_not_exist.json")), IoError);
}

TEST_CASE("trajectory files round-trip, with provenance or stripped") {
  const SwitchedLinearSystem sys = random_system(2, 2, 2, Rng(3));
  const SampleSet set = collect(sys, 4, 3, 9);
  const std::string path = path_of("traj_roundtrip.jsonl");

  save_trajectories(set, path);
  const SampleSet back = load_trajectories(path);
  REQUIRE(back.samples.size() == set.samples.size());
  CHECK(back.T == set.T);
  CHECK(back.seed == set.seed);
  for (std::size_t i = 0; i < set.samples.size(); ++i) {
    const auto& a = set.samples[i];
    const auto& b = back.samples[i];
    REQUIRE(b.x0.has_value());
    REQUIRE(b.word.has_value());
    CHECK((*b.x0 - *a.x0).norm() == 0.0);
    CHECK(*b.word == *a.word);
    for (std::size_t t = 0; t < a.y.size(); ++t) CHECK((b.y[t] - a.y[t]).norm() == 0.0);
  }

  const std::string blind = path_of("traj_blind.jsonl");
  save_trajectories(set, blind, /*strip_provenance=*/true);
  const SampleSet anon = load_trajectories(blind);
  for (const auto& s : anon.samples) {
    CHECK_FALSE(s.x0.has_value());
    CHECK_FALSE(s.word.has_value());
  }
  for (std::size_t i = 0; i < set.samples.size(); ++i)
    for (std::size_t t = 0; t < set.samples[i].y.size(); ++t)
      CHECK((anon.samples[i].y[t] - set.samples[i].y[t]).norm() == 0.0);
}

TEST_CASE("pair files round-trip and enforce their header count") {
  const SampleSet set = collect(contraction_system(0.5), 6, 4, 2);
  const DataPairSet pairs = extract_pairs(set, 2);
  const std::string path = path_of("pairs_roundtrip.jsonl");
  save_pairs(pairs, path);
  const DataPairSet back = load_pairs(path);
  CHECK(back.k == pairs.k);
  CHECK(back.p == pairs.p);
  CHECK(back.T == pairs.T);
  CHECK(back.N == pairs.N);
  CHECK(back.source_n == pairs.source_n);
  CHECK(back.source_M == pairs.source_M);
  REQUIRE(back.pairs.size() == pairs.pairs.size());
  for (std::size_t i = 0; i < pairs.pairs.size(); ++i) {
    CHECK((back.pairs[i].v - pairs.pairs[i].v).norm() == 0.0);
    CHECK((back.pairs[i].z - pairs.pairs[i].z).norm() == 0.0);
  }

  const std::string short_file = path_of("pairs_short.jsonl");
  write_text_file(short_file,
                  "{\"n\":2,\"M\":1,\"p\":1,\"k\":1,\"T\":2,\"N\":2,\"seed\":0}\n"
                  "{\"v\":[1.0],\"z\":[0.5]}\n");
  CHECK_THROWS_AS(load_pairs(short_file), IoError);
}

TEST_CASE("text helpers and content hashes behave") {
  const std::string path = path_of("text_a.txt");
  const std::string content = "line one\nline two\xC3\xA9\n";
  write_text_file(path, content);
  CHECK(read_text_file(path) == content);
  CHECK_THROWS_AS(read_text_file(path_of("missing.txt")), IoError);

  const std::string h1 = file_content_hash(path);
  CHECK(h1.rfind("fnv1a64:", 0) == 0);
  CHECK(h1.size() == 8 + 16);
  CHECK(file_content_hash(path) == h1);

  const std::string path2 = path_of("text_b.txt");
  write_text_file(path2, content);
  CHECK(file_content_hash(path2) == h1);
  write_text_file(path2, content + " ");
  CHECK(file_content_hash(path2) != h1);
}

TEST_CASE("run configs echo to JSON and back unchanged") {
  RunConfig config;
  config.mode = "black";
  config.seed = 42;
  config.n = 3;
  config.N = 100;
  config.k = 2;
  config.lambda_bar = 5.5;
  config.beta = 0.05;
  config.route = "apriori";
  config.varepsilon = 0.25;
  config.trajectory_path = "traj.jsonl";
  config.out_path = "report.json";

  const std::string text = config_to_json_text(config);
  const RunConfig back = config_from_json_text(text);
  CHECK(back.mode == config.mode);
  CHECK(back.seed == config.seed);
  CHECK(back.n == config.n);
  CHECK(back.M == config.M);
  CHECK(back.N == config.N);
  CHECK(back.k == config.k);
  CHECK(back.lambda_bar == config.lambda_bar);
  CHECK(back.beta == config.beta);
  CHECK(back.route == config.route);
  CHECK(back.varepsilon == config.varepsilon);
  CHECK(back.trajectory_path == config.trajectory_path);
  CHECK(back.out_path == config.out_path);
  // Canonical form is a fixed point.
  CHECK(config_to_json_text(back) == text);
}

TEST_CASE("command reports are accepted wherever a config is") {
  RunConfig config;
  config.varepsilon = 0.1;
  config.n = 2;
  config.M = 1;
  config.p = 2;
  const CommandOutcome outcome = run_sample_complexity(config);
  const json report = json::parse(outcome.report);
  REQUIRE(report.contains("params"));

  const RunConfig again = config_from_json_text(outcome.report);
  CHECK(again.varepsilon == config.varepsilon);
  CHECK(again.n == config.n);
  CHECK(again.M == config.M);
  CHECK(again.p == config.p);
}

TEST_CASE("the command line certifies, reruns bit for bit, and signals errors") {
  const std::string sys_path = path_of("cli_sys.json");
  save_system(contraction_system(0.3), sys_path);

  const std::string traj = path_of("cli_traj.jsonl");
  REQUIRE(run_cli("simulate --system " + sys_path + " --N 200 --T 4 --seed 5 --out " + traj) ==
          0);

  const std::string report1 = path_of("cli_report1.json");
  CHECK(run_cli("certify --mode white --system " + sys_path + " --trajectories " + traj +
                " --k 1 --route posteriori --out " + report1) == 0);
  const json r1 = json::parse(read_text_file(report1));
  CHECK(r1["verdict"] == "certified-stable");
  CHECK(r1["gamma_star"].get<double>() == doctest::Approx(0.3).epsilon(1e-6));

  const std::string report2 = path_of("cli_report2.json");
  CHECK(run_cli("certify --config " + report1 + " --out " + report2) == 0);
  const json r2 = json::parse(read_text_file(report2));
  CHECK(r1["gamma_star"] == r2["gamma_star"]);
  CHECK(r1["bounds"] == r2["bounds"]);
  CHECK(r1["confidence"] == r2["confidence"]);
  CHECK(r1["P_star"] == r2["P_star"]);
  CHECK(r1["verdict"] == r2["verdict"]);

  // Too little data for the data-only route: inconclusive, exit code 2.
  const std::string blind = path_of("cli_blind.jsonl");
  REQUIRE(run_cli("simulate --mode black --system " + sys_path +
                  " --N 5 --T 4 --seed 5 --out " + blind) == 0);
  CHECK(run_cli("certify --mode black --trajectories " + blind + " --k 1") == 2);

  // Hard errors exit with 1.
  CHECK(run_cli("certify --mode black --system " + sys_path + " --trajectories " + blind +
                " --k 1") == 1);
  CHECK(run_cli("certify") == 1);
  CHECK(run_cli("simulate --system " + path_of("nope.json") + " --N 2 --T 3") == 1);

  std::string xi_out;
  CHECK(run_cli("estimate-index --trajectories " + traj, &xi_out) == 0);
  const json xi = json::parse(xi_out);
  CHECK(xi["command"] == "estimate-index");
  REQUIRE(xi.contains("xi"));
  CHECK(xi["H_hat"] == 1);
}

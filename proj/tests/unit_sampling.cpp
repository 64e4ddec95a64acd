#include <cmath>
#include <cstdlib>

#include <doctest.h>

#include "jsrcert/errors.hpp"
#include "jsrcert/pairs.hpp"
#include "jsrcert/rng.hpp"
#include "jsrcert/sampling.hpp"
#include "jsrcert/system.hpp"
#include "jsrcert/threads.hpp"

using namespace jsrcert;

namespace {

SwitchedLinearSystem scalar_system(double a) {
  SwitchedLinearSystem sys;
  sys.n = 2;
  sys.M = 1;
  sys.p = 2;
  sys.A = {a * Eigen::MatrixXd::Identity(2, 2)};
  sys.C = {Eigen::MatrixXd::Identity(2, 2)};
  return sys;
}

bool bitwise_equal(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return a.size() == b.size() && (a - b).norm() == 0.0;
}

bool same_outputs(const SampleSet& a, const SampleSet& b) {
  if (a.samples.size() != b.samples.size()) return false;
  for (std::size_t i = 0; i < a.samples.size(); ++i)
    for (std::size_t t = 0; t < a.samples[i].y.size(); ++t)
      if (!bitwise_equal(a.samples[i].y[t], b.samples[i].y[t])) return false;
  return true;
}

}  // namespace

TEST_CASE("sphere samples are unit length and seed-deterministic") {
  const auto pts = sample_uniform_sphere(3, 200, 99);
  for (const auto& x : pts) CHECK(std::fabs(x.norm() - 1.0) <= 1e-12);
  const auto again = sample_uniform_sphere(3, 200, 99);
  CHECK(bitwise_equal(pts[137], again[137]));
  const auto other = sample_uniform_sphere(3, 200, 100);
  CHECK_FALSE(bitwise_equal(pts[0], other[0]));
}

TEST_CASE("sphere samples have a near-zero mean") {
  const auto pts = sample_uniform_sphere(3, 100000, 7);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(3);
  for (const auto& x : pts) mean += x;
  mean /= static_cast<double>(pts.size());
  // 3 sigma for coordinates of a uniform sphere point: 3 / sqrt(3 * 1e5).
  CHECK(mean.norm() < 0.02);
}

TEST_CASE("sample prefixes are stable under count extension") {
  const auto short_run = sample_uniform_sphere(4, 50, 31);
  const auto long_run = sample_uniform_sphere(4, 120, 31);
  for (std::size_t i = 0; i < 50; ++i) CHECK(bitwise_equal(short_run[i], long_run[i]));
}

TEST_CASE("switching words are uniform over modes") {
  const auto words = sample_switching(4, 5, 100000, 12);
  for (const auto& w : words) REQUIRE(w.length() == 5);
  std::int64_t counts[4] = {0, 0, 0, 0};
  for (const auto& w : words)
    for (int t = 0; t < w.length(); ++t) ++counts[w[t] - 1];
  const double total = 5.0 * 100000.0;
  const double sigma = std::sqrt(total * 0.25 * 0.75);
  for (std::int64_t c : counts) CHECK(std::fabs(c - total / 4.0) <= 3.0 * sigma);

  const auto ones = sample_switching(1, 3, 10, 0);
  for (const auto& w : ones) CHECK(w == SwitchingWord({1, 1, 1}));
}

TEST_CASE("collect stores outputs that regenerate exactly from provenance") {
  const SwitchedLinearSystem sys = scalar_system(0.5);
  const SampleSet set = collect(sys, 20, 6, 77);
  REQUIRE(set.samples.size() == 20);
  for (const auto& s : set.samples) {
    REQUIRE(s.x0.has_value());
    REQUIRE(s.word.has_value());
    REQUIRE(s.y.size() == 6);
    const Trajectory traj = simulate(sys, *s.x0, *s.word);
    for (std::size_t t = 0; t < 6; ++t) CHECK(bitwise_equal(traj.outputs[t], s.y[t]));
  }
}

TEST_CASE("collect outputs are geometric for scalar dynamics") {
  const SampleSet set = collect(scalar_system(0.5), 5, 4, 3);
  for (const auto& s : set.samples)
    for (std::size_t t = 0; t + 1 < 4; ++t)
      CHECK((s.y[t + 1] - 0.5 * s.y[t]).norm() < 1e-15);
}

TEST_CASE("collect does not depend on the thread count") {
  const SwitchedLinearSystem sys = scalar_system(0.9);
  setenv("JSRCERT_THREADS", "1", 1);
  const SampleSet serial = collect(sys, 64, 5, 123);
  setenv("JSRCERT_THREADS", "4", 1);
  const SampleSet parallel = collect(sys, 64, 5, 123);
  unsetenv("JSRCERT_THREADS");
  CHECK(same_outputs(serial, parallel));
}

TEST_CASE("extract_pairs cuts leading and trailing windows") {
  const SwitchedLinearSystem sys = scalar_system(0.5);
  const SampleSet set = collect(sys, 10, 2, 5);
  const DataPairSet pairs = extract_pairs(set, 1);
  CHECK(pairs.k == 1);
  CHECK(pairs.source_n == 2);
  CHECK(pairs.source_M == 1);
  for (std::size_t i = 0; i < pairs.pairs.size(); ++i) {
    CHECK(bitwise_equal(pairs.pairs[i].v, set.samples[i].y[0]));
    CHECK(bitwise_equal(pairs.pairs[i].z, set.samples[i].y[1]));
  }
}

TEST_CASE("extract_pairs stacks in output order") {
  // Hand-built two-output trajectory with recognizable entries: y_t = (10t+1, 10t+2).
  SampleSet set;
  set.n = 2;
  set.M = 1;
  set.p = 2;
  set.N = 1;
  set.T = 4;
  set.seed = 0;
  TrajectorySample s;
  for (int t = 0; t < 4; ++t) {
    Eigen::VectorXd y(2);
    y << 10.0 * t + 1.0, 10.0 * t + 2.0;
    s.y.push_back(y);
  }
  set.samples.push_back(s);

  const DataPairSet pairs = extract_pairs(set, 3);
  Eigen::VectorXd v_expected(6), z_expected(6);
  v_expected << 1, 2, 11, 12, 21, 22;
  z_expected << 11, 12, 21, 22, 31, 32;
  CHECK(bitwise_equal(pairs.pairs[0].v, v_expected));
  CHECK(bitwise_equal(pairs.pairs[0].z, z_expected));
}

TEST_CASE("extract_pairs range checks k") {
  const SampleSet set = collect(scalar_system(0.5), 2, 3, 1);
  CHECK_THROWS_AS(extract_pairs(set, 0), InvalidInputError);
  CHECK_THROWS_AS(extract_pairs(set, 3), InvalidInputError);
}

TEST_CASE("scalar dynamics give z = a^(T-k) v for every pair") {
  const SampleSet set = collect(scalar_system(0.7), 15, 5, 21);
  const DataPairSet pairs = extract_pairs(set, 2);
  const double factor = std::pow(0.7, 3);
  for (const auto& pr : pairs.pairs) CHECK((pr.z - factor * pr.v).norm() < 1e-14);
}

TEST_CASE("xi estimates are exact powers for scalar dynamics") {
  const SampleSet set = collect(scalar_system(0.5), 25, 6, 4);
  const auto table = xi_estimates(set, 1, 3);
  REQUIRE(table.size() == 3);
  CHECK(table[0].xi == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(table[1].xi == doctest::Approx(0.25).epsilon(1e-13));
  CHECK(table[2].xi == doctest::Approx(0.125).epsilon(1e-13));
}

TEST_CASE("xi uses the infinity sentinel for vanishing lead windows") {
  SampleSet set;
  set.n = 2;
  set.M = 1;
  set.p = 1;
  set.N = 1;
  set.T = 2;
  set.seed = 0;
  TrajectorySample s;
  s.y = {Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1)};
  set.samples.push_back(s);
  const auto table = xi_estimates(set, 1, 1);
  CHECK(std::isinf(table[0].xi));
}

TEST_CASE("xi rejects windows past half the horizon") {
  const SampleSet set = collect(scalar_system(0.5), 2, 5, 0);
  CHECK_THROWS_AS(xi_estimates(set, 1, 3), InvalidInputError);
}

TEST_CASE("zeta stats on unit initial states with full observation") {
  const SampleSet set = collect(scalar_system(0.5), 40, 4, 13);
  const ZetaStats zeta = zeta_stats(extract_pairs(set, 1));
  CHECK(zeta.zeta_max == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(zeta.zeta_min == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(zeta.zeta_min <= zeta.zeta_max);
}

TEST_CASE("zeta stats match a direct scan and reject empty sets") {
  DataPairSet pairs;
  pairs.k = 1;
  pairs.p = 1;
  pairs.source_n = 2;
  pairs.source_M = 1;
  pairs.T = 2;
  pairs.N = 10;
  double expected_max = 0.0, expected_min = 1e300;
  for (int i = 0; i < 10; ++i) {
    DataPair pr;
    pr.v = Eigen::VectorXd::Constant(1, 0.3 + 0.1 * i);
    pr.z = Eigen::VectorXd::Zero(1);
    expected_max = std::max(expected_max, pr.v.norm());
    expected_min = std::min(expected_min, pr.v.norm());
    pairs.pairs.push_back(pr);
  }
  const ZetaStats zeta = zeta_stats(pairs);
  CHECK(zeta.zeta_max == doctest::Approx(expected_max).epsilon(1e-15));
  CHECK(zeta.zeta_min == doctest::Approx(expected_min).epsilon(1e-15));

  pairs.pairs.clear();
  CHECK_THROWS_AS(zeta_stats(pairs), InvalidInputError);
}

TEST_CASE("zeta range only widens as the sample grows") {
  const SwitchedLinearSystem sys = scalar_system(0.9);
  const ZetaStats small = zeta_stats(extract_pairs(collect(sys, 50, 4, 77), 1));
  const ZetaStats big = zeta_stats(extract_pairs(collect(sys, 200, 4, 77), 1));
  CHECK(big.zeta_max >= small.zeta_max);
  CHECK(big.zeta_min <= small.zeta_min);
}

TEST_CASE("default threshold is ten times the median finite xi") {
  std::vector<IndexEstimate> table(2);
  table[0].k = 1;
  table[0].xi = 0.5;
  table[1].k = 2;
  table[1].xi = 0.25;
  CHECK(default_xi_threshold(table) == doctest::Approx(3.75).epsilon(1e-15));

  table[0].xi = std::numeric_limits<double>::infinity();
  CHECK(default_xi_threshold(table) == doctest::Approx(2.5).epsilon(1e-15));

  table[1].xi = std::numeric_limits<double>::infinity();
  CHECK(std::isinf(default_xi_threshold(table)));
}

TEST_CASE("estimated index picks the first k at or below the threshold") {
  std::vector<IndexEstimate> table(3);
  for (int i = 0; i < 3; ++i) table[static_cast<std::size_t>(i)].k = i + 1;
  table[0].xi = 9.0;
  table[1].xi = 0.8;
  table[2].xi = 0.7;
  CHECK(estimated_index(table, 1.0) == 2);
  CHECK(estimated_index(table, 0.1) == std::nullopt);
}

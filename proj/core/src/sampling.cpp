#include "jsrcert/sampling.hpp"

#include <string>

#include "jsrcert/errors.hpp"
#include "jsrcert/rng.hpp"
#include "jsrcert/threads.hpp"

namespace jsrcert {

namespace {

Eigen::VectorXd sphere_point(int n, Rng rng) {
  Eigen::VectorXd x(n);
  for (int attempt = 0; attempt < 64; ++attempt) {
    for (int i = 0; i < n; ++i) x(i) = rng.normal();
    const double norm = x.norm();
    if (norm >= 1e-12) return x / norm;
  }
  throw Error("sphere sampling failed to draw a usable Gaussian vector");
}

SwitchingWord switching_word(int M, int T, Rng rng) {
  std::vector<int> symbols(static_cast<std::size_t>(T));
  for (int t = 0; t < T; ++t) symbols[static_cast<std::size_t>(t)] = rng.uniform_int(1, M);
  return SwitchingWord(std::move(symbols));
}

}  // namespace

void SampleSet::validate() const {
  if (n < 1 || M < 1 || p < 1 || N < 0 || T < 1)
    throw InvalidInputError("sample set requires n, M, p >= 1 and T >= 1");
  if (static_cast<std::int64_t>(samples.size()) != N)
    throw DimensionError("sample set holds " + std::to_string(samples.size()) +
                         " trajectories, header says " + std::to_string(N));
  for (const auto& s : samples) {
    if (static_cast<std::int64_t>(s.y.size()) != T)
      throw DimensionError("trajectory does not have T outputs");
    for (const auto& yt : s.y)
      if (yt.size() != p) throw DimensionError("output dimension mismatch");
    if (s.x0 && s.x0->size() != n) throw DimensionError("stored x0 dimension mismatch");
    if (s.word && s.word->length() != T) throw DimensionError("stored word length mismatch");
  }
}

std::vector<Eigen::VectorXd> sample_uniform_sphere(int n, std::int64_t count,
                                                   std::uint64_t seed) {
  if (n < 1 || count < 0) throw InvalidInputError("need n >= 1 and count >= 0");
  std::vector<Eigen::VectorXd> points(static_cast<std::size_t>(count));
  const Rng root(seed);
  parallel_chunks(count, [&](std::int64_t begin, std::int64_t end, int) {
    for (std::int64_t i = begin; i < end; ++i)
      points[static_cast<std::size_t>(i)] =
          sphere_point(n, root.stream(kStreamInitialState, static_cast<std::uint64_t>(i)));
  });
  return points;
}

std::vector<SwitchingWord> sample_switching(int M, int T, std::int64_t count,
                                            std::uint64_t seed) {
  if (M < 1 || T < 1 || count < 0) throw InvalidInputError("need M, T >= 1 and count >= 0");
  std::vector<SwitchingWord> words(static_cast<std::size_t>(count));
  const Rng root(seed);
  parallel_chunks(count, [&](std::int64_t begin, std::int64_t end, int) {
    for (std::int64_t i = begin; i < end; ++i)
      words[static_cast<std::size_t>(i)] =
          switching_word(M, T, root.stream(kStreamSwitching, static_cast<std::uint64_t>(i)));
  });
  return words;
}

SampleSet collect(const SwitchedLinearSystem& sys, std::int64_t N, std::int64_t T,
                  std::uint64_t seed) {
  sys.validate();
  if (N < 1 || T < 1) throw InvalidInputError("collect requires N >= 1 and T >= 1");
  SampleSet set;
  set.n = sys.n;
  set.M = sys.M;
  set.p = sys.p;
  set.N = N;
  set.T = T;
  set.seed = seed;
  set.samples.resize(static_cast<std::size_t>(N));
  const Rng root(seed);
  parallel_chunks(N, [&](std::int64_t begin, std::int64_t end, int) {
    for (std::int64_t i = begin; i < end; ++i) {
      const auto iu = static_cast<std::uint64_t>(i);
      TrajectorySample sample;
      sample.x0 = sphere_point(sys.n, root.stream(kStreamInitialState, iu));
      sample.word =
          switching_word(sys.M, static_cast<int>(T), root.stream(kStreamSwitching, iu));
      sample.y = simulate(sys, *sample.x0, *sample.word).outputs;
      set.samples[static_cast<std::size_t>(i)] = std::move(sample);
    }
  });
  return set;
}

}  // namespace jsrcert

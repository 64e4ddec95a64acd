#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "jsrcert/system.hpp"

namespace jsrcert {

// One recorded trajectory. Only outputs are ever consumed downstream; x0 and
// word are provenance kept for white-box validation and are absent when the
// data came from an external (black-box) source.
struct TrajectorySample {
  std::optional<Eigen::VectorXd> x0;
  std::optional<SwitchingWord> word;
  std::vector<Eigen::VectorXd> y;  // y_0 ... y_{T-1}, each of dimension p
};

struct SampleSet {
  int n = 0;
  int M = 0;
  int p = 0;
  std::int64_t N = 0;
  std::int64_t T = 0;
  std::uint64_t seed = 0;
  std::vector<TrajectorySample> samples;

  void validate() const;
};

// i.i.d. points uniform on the unit sphere in R^n: normalized Gaussian
// vectors, redrawing the (measure-zero) case of norm below 1e-12. Point i
// comes from substream (kStreamInitialState, i) of the seed.
std::vector<Eigen::VectorXd> sample_uniform_sphere(int n, std::int64_t count,
                                                   std::uint64_t seed);

// i.i.d. uniform switching words of length T over {1, ..., M}; word i comes
// from substream (kStreamSwitching, i) of the seed.
std::vector<SwitchingWord> sample_switching(int M, int T, std::int64_t count,
                                            std::uint64_t seed);

// Stream tags used by the samplers above (and by collect, which must agree
// with them sample by sample).
inline constexpr std::uint64_t kStreamInitialState = 1;
inline constexpr std::uint64_t kStreamSwitching = 2;

// Draws N trajectories of horizon T: x0 uniform on the sphere, word uniform
// over modes, outputs recorded. Deterministic in (seed, i) regardless of the
// thread count. Internal states are discarded; only outputs are stored.
SampleSet collect(const SwitchedLinearSystem& sys, std::int64_t N, std::int64_t T,
                  std::uint64_t seed);

}  // namespace jsrcert

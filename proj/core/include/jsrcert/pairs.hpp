#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "jsrcert/sampling.hpp"

namespace jsrcert {

// One scenario constraint: stacked leading window v and trailing window z of
// a recorded output trajectory.
struct DataPair {
  Eigen::VectorXd v;
  Eigen::VectorXd z;
};

struct DataPairSet {
  int k = 0;          // window length
  int p = 0;          // output dimension
  int source_n = 0;   // state dimension of the generating process
  int source_M = 0;   // mode count of the generating process
  std::int64_t T = 0; // horizon the windows were cut from
  std::int64_t N = 0; // number of source trajectories
  std::uint64_t seed = 0;
  std::vector<DataPair> pairs;

  Eigen::Index kp() const { return static_cast<Eigen::Index>(k) * p; }
  void validate() const;
};

// Cuts each trajectory into (v, z) with v = stack(y_0 ... y_{k-1}) and
// z = stack(y_{T-k} ... y_{T-1}). Requires 1 <= k <= T - 1.
DataPairSet extract_pairs(const SampleSet& samples, int k);

struct IndexEstimate {
  int k = 0;
  double xi = 0.0;       // +inf when some leading window has negligible norm
  double threshold = 0.0;  // filled by the caller that picked one
};

// Empirical window-extension ratios xi_k = max_i ||stack(y_k..y_{2k-1})|| /
// ||stack(y_0..y_{k-1})|| for k in [k_min, k_max]. Requires 2 k_max <= T.
// A leading window with norm below 1e-14 makes xi_k = +inf.
std::vector<IndexEstimate> xi_estimates(const SampleSet& samples, int k_min, int k_max);

struct ZetaStats {
  double zeta_max = 0.0;  // largest ||v|| over the set
  double zeta_min = 0.0;  // smallest ||v|| over the set
};

ZetaStats zeta_stats(const DataPairSet& pairs);

// Default cutoff for declaring xi_k "small": 10 times the median of the
// finite xi values (empty or all-infinite tables yield +inf, so nothing
// passes). Callers may override with any positive threshold.
double default_xi_threshold(const std::vector<IndexEstimate>& estimates);

// Smallest k whose xi_k lies at or below the threshold; nullopt when none.
std::optional<int> estimated_index(const std::vector<IndexEstimate>& estimates,
                                   double threshold);

}  // namespace jsrcert

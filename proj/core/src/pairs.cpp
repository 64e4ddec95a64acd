#include "jsrcert/pairs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "jsrcert/errors.hpp"

namespace jsrcert {

namespace {

Eigen::VectorXd stack_window(const TrajectorySample& s, int from, int k, int p) {
  Eigen::VectorXd w(static_cast<Eigen::Index>(k) * p);
  for (int j = 0; j < k; ++j)
    w.segment(static_cast<Eigen::Index>(j) * p, p) = s.y[static_cast<std::size_t>(from + j)];
  return w;
}

}  // namespace

void DataPairSet::validate() const {
  if (k < 1 || p < 1 || T < 2) throw InvalidInputError("pair set requires k, p >= 1, T >= 2");
  if (k > T - 1) throw InvalidInputError("pair set requires k <= T - 1");
  for (const auto& pr : pairs)
    if (pr.v.size() != kp() || pr.z.size() != kp())
      throw DimensionError("pair dimension differs from k p");
}

DataPairSet extract_pairs(const SampleSet& samples, int k) {
  samples.validate();
  if (k < 1 || k > samples.T - 1)
    throw InvalidInputError("extract_pairs requires 1 <= k <= T - 1 (k = " +
                            std::to_string(k) + ", T = " + std::to_string(samples.T) + ")");
  DataPairSet set;
  set.k = k;
  set.p = samples.p;
  set.source_n = samples.n;
  set.source_M = samples.M;
  set.T = samples.T;
  set.N = samples.N;
  set.seed = samples.seed;
  set.pairs.reserve(samples.samples.size());
  const int tail = static_cast<int>(samples.T) - k;
  for (const auto& s : samples.samples) {
    DataPair pr;
    pr.v = stack_window(s, 0, k, samples.p);
    pr.z = stack_window(s, tail, k, samples.p);
    set.pairs.push_back(std::move(pr));
  }
  return set;
}

std::vector<IndexEstimate> xi_estimates(const SampleSet& samples, int k_min, int k_max) {
  samples.validate();
  if (k_min < 1 || k_min > k_max) throw InvalidInputError("need 1 <= k_min <= k_max");
  if (2 * static_cast<std::int64_t>(k_max) > samples.T)
    throw InvalidInputError("xi_k needs 2 k <= T (k_max = " + std::to_string(k_max) +
                            ", T = " + std::to_string(samples.T) + ")");
  std::vector<IndexEstimate> estimates;
  estimates.reserve(static_cast<std::size_t>(k_max - k_min + 1));
  for (int k = k_min; k <= k_max; ++k) {
    IndexEstimate est;
    est.k = k;
    est.threshold = std::numeric_limits<double>::quiet_NaN();
    double worst = 0.0;
    for (const auto& s : samples.samples) {
      const double head = stack_window(s, 0, k, samples.p).norm();
      const double cont = stack_window(s, k, k, samples.p).norm();
      if (head < 1e-14) {
        // An (almost) silent leading window cannot bound its continuation.
        worst = std::numeric_limits<double>::infinity();
        break;
      }
      worst = std::max(worst, cont / head);
    }
    est.xi = worst;
    estimates.push_back(est);
  }
  return estimates;
}

ZetaStats zeta_stats(const DataPairSet& pairs) {
  pairs.validate();
  if (pairs.pairs.empty()) throw InvalidInputError("zeta_stats needs at least one pair");
  ZetaStats st;
  st.zeta_max = 0.0;
  st.zeta_min = std::numeric_limits<double>::infinity();
  for (const auto& pr : pairs.pairs) {
    const double nv = pr.v.norm();
    st.zeta_max = std::max(st.zeta_max, nv);
    st.zeta_min = std::min(st.zeta_min, nv);
  }
  return st;
}

double default_xi_threshold(const std::vector<IndexEstimate>& estimates) {
  std::vector<double> finite;
  for (const auto& e : estimates)
    if (std::isfinite(e.xi)) finite.push_back(e.xi);
  if (finite.empty()) return std::numeric_limits<double>::infinity();
  std::sort(finite.begin(), finite.end());
  const std::size_t m = finite.size();
  const double median =
      (m % 2 == 1) ? finite[m / 2] : 0.5 * (finite[m / 2 - 1] + finite[m / 2]);
  return 10.0 * median;
}

std::optional<int> estimated_index(const std::vector<IndexEstimate>& estimates,
                                   double threshold) {
  for (const auto& e : estimates)
    if (e.xi <= threshold) return e.k;
  return std::nullopt;
}

}  // namespace jsrcert

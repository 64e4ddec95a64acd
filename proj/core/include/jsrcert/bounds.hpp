#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "jsrcert/observability.hpp"
#include "jsrcert/pairs.hpp"
#include "jsrcert/scenario.hpp"
#include "jsrcert/system.hpp"

namespace jsrcert {

// Dimension of the scenario decision space: a symmetric (k p) x (k p) matrix
// has kp (kp + 1) / 2 free entries. Always derived, never user input.
std::int64_t scenario_dimension(int k, int p);

struct ConfidenceParams {
  double epsilon = 0.0;         // sphere-cap rate of the single-term route
  double beta = 0.1;            // total confidence budget
  double epsilon_bar = 0.0;     // scenario rate of the three-term route
  double epsilon_prime = 0.0;   // first sphere-cap rate inside psi
  double epsilon_second = 0.0;  // second sphere-cap rate inside psi
  std::int64_t d = 0;           // scenario_dimension(k, p)
};

// Canonical split of a confidence budget beta:
//   epsilon     solves phi(epsilon; d, N) = beta          (single-term route)
//   epsilon_bar solves phi(epsilon_bar; d, N) = beta / 3  (three-term route)
//   epsilon_prime = epsilon_second = 1 - (beta/3)^(1/N), so each remaining
//   miss probability (1 - eps)^N equals beta / 3.
ConfidenceParams confidence_from_beta(double beta, std::int64_t d, std::int64_t N);

struct BoundResult {
  double value = 0.0;       // +inf when the sphere-cap argument reaches 1/2
  double confidence = 0.0;  // probability the bound holds over the sampling
  double delta_arg = 0.0;   // argument handed to the sphere-cap function
  // When value is +inf: smallest N making the bound informative, assuming the
  // rate is re-derived from beta at that N and the shape constant stays put.
  std::optional<std::int64_t> min_informative_n;

  bool finite() const;
};

// White-box bound gamma_star / delta(eps M^T chi / 2)^(1/(T-k)) with chi
// computed from the certified P_star; holds with probability at least
// 1 - phi(eps; d, N). All magnitudes are combined in log space.
BoundResult bound_posteriori(const CertificateSolution& cert, const SwitchedLinearSystem& sys,
                             const ConfidenceParams& params, int T, int k, std::int64_t N,
                             std::uint64_t budget = kDefaultWordBudget);

// A-priori bound: chi is replaced by its closed-form cap sqrt((c lambda_bar)^(n-1))
// with user-supplied c >= max window Gram condition number, and the rate is
// pinned to eps = I^{-1}(1 - beta; d, N - d + 1); confidence 1 - beta.
BoundResult bound_apriori(const CertificateSolution& cert, double c, double lambda_bar,
                          const ConfidenceParams& params, int n, int M, int T, int k,
                          std::int64_t N);

// Data-only bound: the shape constant is the surrogate
// psi^(n-1) sqrt(kappa(P_star)^(n-1)) with
//   psi = 1 / (delta(eps' M^k / 2) zeta_min/zeta_max - sqrt(2 - 2 delta(eps'' M^k / 2)))
// computed from the recorded window norms; a nonpositive denominator yields
// the +inf sentinel. Confidence 1 - phi(eps_bar) - (1-eps')^N - (1-eps'')^N.
BoundResult bound_explicit(const CertificateSolution& cert, const DataPairSet& pairs,
                           const ConfidenceParams& params, int n, int M);

struct SampleComplexity {
  std::int64_t N_upper = 0;     // smallest N with phi(eps_target; d, N) <= beta
  std::int64_t closed_form = 0; // ceil(d / (beta eps_target)), always >= N_upper
  double epsilon_target = 0.0;
};

// Samples sufficient for a (1 + varepsilon)-accurate certificate with
// confidence 1 - beta, from a-priori data only (c, lambda_bar, chi of a
// reference shape). Throws ParameterInfeasibleError when the derived target
// rate leaves (0, 1).
SampleComplexity sample_complexity(double varepsilon, double beta, int n, int T, int k,
                                   int M, int p, double c, double lambda_bar, double chi_q);

enum class Verdict { certified_stable, inconclusive };

// Certified iff the routed bound is finite, below one, and carries positive
// confidence; anything weaker is inconclusive.
Verdict verdict(const BoundResult& routed_bound);

struct InstabilityStatement {
  bool emitted = false;     // false when N < N_required (statement withheld)
  bool applicable = false;  // gamma_star strictly below 1 / (1 + varepsilon)
  bool boundary = false;    // gamma_star within rounding of the threshold
  double gamma_star = 0.0;
  double varepsilon = 0.0;
  double threshold = 0.0;   // 1 / (1 + varepsilon)
  double beta = 0.0;
  std::int64_t N = 0;
  std::int64_t N_required = 0;
  std::string text;
};

// One-sided instability screen: with N >= N_required samples, an unstable
// system produces gamma_star < 1 / (1 + varepsilon) with probability at most
// beta, so observing that event is evidence against instability.
InstabilityStatement instability_risk(double gamma_star, double varepsilon, double beta,
                                      std::int64_t N, std::int64_t N_required);

}  // namespace jsrcert

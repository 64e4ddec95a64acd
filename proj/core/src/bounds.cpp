#include "jsrcert/bounds.hpp"

#include <cmath>
#include <limits>

#include "jsrcert/errors.hpp"
#include "jsrcert/special_functions.hpp"

namespace jsrcert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLogHalf = -0.6931471805599453;  // log(1/2)

double kappa_of(const Eigen::MatrixXd& P) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (P + P.transpose()));
  const double lo = eig.eigenvalues()(0);
  const double hi = eig.eigenvalues()(eig.eigenvalues().size() - 1);
  if (lo <= 0.0) throw InvalidInputError("P_star is not positive definite");
  return hi / lo;
}

// Smallest N >= d with I^{-1}(1 - beta; d, N - d + 1) below eps_needed.
std::optional<std::int64_t> minimal_informative_n(double beta, std::int64_t d,
                                                  double log_eps_needed) {
  if (!(beta > 0.0) || !(beta < 1.0)) return std::nullopt;
  const double eps_needed = std::exp(log_eps_needed);
  if (!(eps_needed > 0.0)) return std::nullopt;
  auto ok = [&](std::int64_t N) {
    return reg_inc_beta_inv(1.0 - beta, static_cast<double>(d),
                            static_cast<double>(N - d + 1)) < eps_needed;
  };
  std::int64_t lo = d, hi = d;
  const std::int64_t cap = 1000000000000LL;
  while (!ok(hi)) {
    if (hi >= cap) return std::nullopt;
    lo = hi;
    hi = std::min(cap, hi * 2);
  }
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (ok(mid))
      hi = mid;
    else
      lo = mid;
  }
  return ok(lo) ? lo : hi;
}

// Shared tail: the sphere-cap argument is eps * rest with rest = M^T chi / 2,
// handed over as logs so huge shape constants cannot overflow on the way in.
BoundResult finish_bound(double gamma_star, double confidence, double log_eps,
                         double log_rest, int n, int T, int k, double beta,
                         std::int64_t d) {
  const double log_arg = log_eps + log_rest;
  BoundResult out;
  out.confidence = confidence;
  out.delta_arg = std::exp(log_arg);
  if (gamma_star == 0.0) {
    out.value = 0.0;
    return out;
  }
  if (!(log_arg < kLogHalf)) {
    out.value = kInf;
    // Informative once eps drops below (1/2) / rest; find the N whose
    // beta-derived rate gets there.
    out.min_informative_n = minimal_informative_n(beta, d, kLogHalf - log_rest);
    return out;
  }
  const double dlt = delta(std::exp(log_arg), n);
  if (dlt <= 0.0) {
    out.value = kInf;
    return out;
  }
  out.value = gamma_star * std::pow(dlt, -1.0 / (T - k));
  return out;
}

}  // namespace

bool BoundResult::finite() const { return std::isfinite(value); }

std::int64_t scenario_dimension(int k, int p) {
  if (k < 1 || p < 1) throw InvalidInputError("scenario_dimension needs k, p >= 1");
  const std::int64_t kp = static_cast<std::int64_t>(k) * p;
  return kp * (kp + 1) / 2;
}

ConfidenceParams confidence_from_beta(double beta, std::int64_t d, std::int64_t N) {
  if (!(beta > 0.0) || !(beta < 1.0)) throw InvalidInputError("beta must lie in (0, 1)");
  if (d < 1 || N < d) throw InvalidInputError("need 1 <= d <= N");
  ConfidenceParams params;
  params.beta = beta;
  params.d = d;
  params.epsilon =
      reg_inc_beta_inv(1.0 - beta, static_cast<double>(d), static_cast<double>(N - d + 1));
  params.epsilon_bar = reg_inc_beta_inv(1.0 - beta / 3.0, static_cast<double>(d),
                                        static_cast<double>(N - d + 1));
  // (1 - eps)^N = beta / 3  =>  eps = 1 - (beta/3)^(1/N)
  const double eps_tail = -std::expm1(std::log(beta / 3.0) / static_cast<double>(N));
  params.epsilon_prime = eps_tail;
  params.epsilon_second = eps_tail;
  return params;
}

BoundResult bound_posteriori(const CertificateSolution& cert, const SwitchedLinearSystem& sys,
                             const ConfidenceParams& params, int T, int k, std::int64_t N,
                             std::uint64_t budget) {
  if (T <= k || k < 1) throw InvalidInputError("bound needs T > k >= 1");
  if (!(params.epsilon > 0.0) || !(params.epsilon < 1.0))
    throw InvalidInputError("epsilon must lie in (0, 1)");
  const double chi_value = chi(sys, cert.P_star, k, budget);
  const double confidence = 1.0 - phi(params.epsilon, params.d, N);
  const double log_rest = T * std::log(static_cast<double>(sys.M)) + std::log(chi_value) -
                          std::log(2.0);
  return finish_bound(cert.gamma_star, confidence, std::log(params.epsilon), log_rest,
                      sys.n, T, k, params.beta, params.d);
}

BoundResult bound_apriori(const CertificateSolution& cert, double c, double lambda_bar,
                          const ConfidenceParams& params, int n, int M, int T, int k,
                          std::int64_t N) {
  if (T <= k || k < 1) throw InvalidInputError("bound needs T > k >= 1");
  if (!(c >= 1.0)) throw InvalidInputError("the Gram condition cap c must be >= 1");
  if (!(lambda_bar >= 1.0)) throw InvalidInputError("lambda_bar must be >= 1");
  if (n < 2) throw InvalidInputError("bounds require state dimension n >= 2");
  const double eps = reg_inc_beta_inv(1.0 - params.beta, static_cast<double>(params.d),
                                      static_cast<double>(N - params.d + 1));
  const double log_chi_cap = 0.5 * (n - 1) * std::log(c * lambda_bar);
  const double log_rest =
      T * std::log(static_cast<double>(M)) + log_chi_cap - std::log(2.0);
  return finish_bound(cert.gamma_star, 1.0 - params.beta, std::log(eps), log_rest, n, T, k,
                      params.beta, params.d);
}

BoundResult bound_explicit(const CertificateSolution& cert, const DataPairSet& pairs,
                           const ConfidenceParams& params, int n, int M) {
  const int T = static_cast<int>(pairs.T);
  const int k = pairs.k;
  if (T <= k || k < 1) throw InvalidInputError("bound needs T > k >= 1");
  if (n < 2) throw InvalidInputError("bounds require state dimension n >= 2");
  const std::int64_t N = pairs.N;
  for (double e : {params.epsilon_bar, params.epsilon_prime, params.epsilon_second})
    if (!(e > 0.0) || !(e < 1.0))
      throw InvalidInputError("three-term route rates must lie in (0, 1)");

  const double confidence = 1.0 - phi(params.epsilon_bar, params.d, N) -
                            std::exp(N * std::log1p(-params.epsilon_prime)) -
                            std::exp(N * std::log1p(-params.epsilon_second));

  const ZetaStats zeta = zeta_stats(pairs);
  const double ratio = zeta.zeta_min / zeta.zeta_max;
  const double mk = static_cast<double>(k) * std::log(static_cast<double>(M));
  const double arg1 = 0.5 * params.epsilon_prime * std::exp(mk);
  const double arg2 = 0.5 * params.epsilon_second * std::exp(mk);
  const double den = delta(arg1, n) * ratio - std::sqrt(2.0 - 2.0 * delta(arg2, n));

  BoundResult out;
  out.confidence = confidence;
  if (!(den > 0.0)) {
    // The window-norm surrogate failed: not enough samples for the sphere-cap
    // rates to bite. Sentinel, with no finite shape constant to report.
    out.value = kInf;
    out.delta_arg = kInf;
    return out;
  }
  const double psi = 1.0 / den;
  const double log_chi_hat =
      (n - 1) * std::log(psi) + 0.5 * (n - 1) * std::log(kappa_of(cert.P_star));
  const double log_rest =
      T * std::log(static_cast<double>(M)) + log_chi_hat - std::log(2.0);
  // Guidance on the vacuous branch re-derives the rate from this route's own
  // share of the budget (the scenario term holds beta / 3).
  return finish_bound(cert.gamma_star, confidence, std::log(params.epsilon_bar), log_rest,
                      n, T, k, params.beta / 3.0, params.d);
}

SampleComplexity sample_complexity(double varepsilon, double beta, int n, int T, int k,
                                   int M, int p, double c, double lambda_bar, double chi_q) {
  if (!(varepsilon > 0.0)) throw InvalidInputError("varepsilon must be positive");
  if (!(beta > 0.0) || !(beta < 1.0)) throw InvalidInputError("beta must lie in (0, 1)");
  if (n < 2) throw InvalidInputError("sample complexity requires n >= 2");
  if (T <= k || k < 1 || M < 1 || p < 1) throw InvalidInputError("need T > k >= 1, M, p >= 1");
  if (!(c >= 1.0) || !(lambda_bar >= 1.0) || !(chi_q > 0.0))
    throw InvalidInputError("need c >= 1, lambda_bar >= 1, chi_q > 0");

  // Accuracy target translated through the sphere-cap function.
  const double y = -std::expm1(-2.0 * (T - k) * std::log1p(varepsilon));
  const double cap = reg_inc_beta(y, 0.5 * (n - 1), 0.5);
  const double log_div = T * std::log(static_cast<double>(M)) + std::log(chi_q) +
                         0.5 * (n - 1) * std::log(c * lambda_bar);
  const double eps_target = cap * std::exp(-log_div);
  if (!(eps_target > 0.0) || !(eps_target < 1.0))
    throw ParameterInfeasibleError("derived target rate " + std::to_string(eps_target) +
                                   " leaves (0, 1)");

  SampleComplexity result;
  result.epsilon_target = eps_target;
  const std::int64_t d = scenario_dimension(k, p);
  const double closed = std::ceil(static_cast<double>(d) / (beta * eps_target));
  if (!(closed < 9e18))
    throw ParameterInfeasibleError("closed-form sample bound overflows a 64-bit count");
  result.closed_form = static_cast<std::int64_t>(closed);

  // phi is decreasing in N; doubling then bisection finds the threshold.
  auto ok = [&](std::int64_t N) { return phi(eps_target, d, N) <= beta; };
  std::int64_t lo = d, hi = d;
  if (!ok(hi)) {
    while (!ok(hi)) {
      if (hi >= result.closed_form) {
        hi = result.closed_form;
        break;
      }
      lo = hi;
      hi = std::min(result.closed_form, hi * 2);
    }
    while (hi - lo > 1) {
      const std::int64_t mid = lo + (hi - lo) / 2;
      if (ok(mid))
        hi = mid;
      else
        lo = mid;
    }
  }
  result.N_upper = hi;
  if (result.N_upper > result.closed_form)
    throw Error("sample complexity search exceeded its closed form (internal)");
  return result;
}

Verdict verdict(const BoundResult& routed_bound) {
  const bool certified = routed_bound.finite() && routed_bound.value < 1.0 &&
                         routed_bound.confidence > 0.0;
  return certified ? Verdict::certified_stable : Verdict::inconclusive;
}

InstabilityStatement instability_risk(double gamma_star, double varepsilon, double beta,
                                      std::int64_t N, std::int64_t N_required) {
  if (!(varepsilon > 0.0)) throw InvalidInputError("varepsilon must be positive");
  if (!(beta > 0.0) || !(beta < 1.0)) throw InvalidInputError("beta must lie in (0, 1)");
  InstabilityStatement st;
  st.gamma_star = gamma_star;
  st.varepsilon = varepsilon;
  st.threshold = 1.0 / (1.0 + varepsilon);
  st.beta = beta;
  st.N = N;
  st.N_required = N_required;
  st.boundary = std::fabs(gamma_star - st.threshold) <= 1e-12 * std::max(1.0, st.threshold);
  if (N < N_required) {
    st.text = "no statement: N = " + std::to_string(N) + " is below the required " +
              std::to_string(N_required) + " samples";
    return st;
  }
  st.emitted = true;
  st.applicable = gamma_star < st.threshold;
  if (st.applicable) {
    st.text = "gamma_star = " + std::to_string(gamma_star) + " < 1/(1+varepsilon) = " +
              std::to_string(st.threshold) +
              ": an unstable system shows this with probability at most " +
              std::to_string(beta);
    if (st.boundary) st.text += " (at the threshold boundary; treat with care)";
  } else {
    st.text = "not applicable: gamma_star = " + std::to_string(gamma_star) +
              " is not below the threshold " + std::to_string(st.threshold);
  }
  return st;
}

}  // namespace jsrcert

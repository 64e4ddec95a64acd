#include "jsrcert/scenario.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <string>
#include <unordered_set>

#include "jsrcert/errors.hpp"

namespace jsrcert {

namespace {

constexpr double kMinPairNorm = 1e-14;

struct Prepared {
  std::vector<Eigen::VectorXd> v, z;
  std::vector<double> v2, z2, vz;  // ||v||^2, ||z||^2, v'z per pair
  Eigen::Index kp = 0;
  double exponent = 0.0;  // 2 (T - k)
  std::int64_t duplicates_removed = 0;
};

std::string pair_bytes(const DataPair& pr) {
  std::string key;
  key.resize(static_cast<std::size_t>(pr.v.size() + pr.z.size()) * sizeof(double));
  std::memcpy(key.data(), pr.v.data(), static_cast<std::size_t>(pr.v.size()) * sizeof(double));
  std::memcpy(key.data() + static_cast<std::size_t>(pr.v.size()) * sizeof(double), pr.z.data(),
              static_cast<std::size_t>(pr.z.size()) * sizeof(double));
  return key;
}

Prepared prepare(const ScenarioProblem& prob) {
  Prepared pre;
  pre.kp = prob.pairs.kp();
  pre.exponent = 2.0 * static_cast<double>(prob.pairs.T - prob.pairs.k);
  std::unordered_set<std::string> seen;
  seen.reserve(prob.pairs.pairs.size() * 2);
  for (const auto& pr : prob.pairs.pairs) {
    if (!seen.insert(pair_bytes(pr)).second) {
      ++pre.duplicates_removed;
      continue;
    }
    pre.v.push_back(pr.v);
    pre.z.push_back(pr.z);
    pre.v2.push_back(pr.v.squaredNorm());
    pre.z2.push_back(pr.z.squaredNorm());
    pre.vz.push_back(pr.v.dot(pr.z));
  }
  return pre;
}

Eigen::MatrixXd clip_band(const Eigen::MatrixXd& P, double lambda_bar) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (P + P.transpose()));
  Eigen::VectorXd lam = eig.eigenvalues();
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    lam(i) = std::min(std::max(lam(i), 1.0), lambda_bar);
  return eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().transpose();
}

// Max normalized halfspace violation at P (P assumed inside the band).
double max_violation(const Prepared& pre, const Eigen::MatrixXd& P, double c) {
  double worst = 0.0;
  for (std::size_t i = 0; i < pre.v.size(); ++i) {
    const double scale = pre.z2[i] + c * pre.v2[i];
    if (scale <= 0.0) continue;  // z = 0 and c = 0: trivially satisfied
    const double g = pre.z[i].dot(P * pre.z[i]) - c * pre.v[i].dot(P * pre.v[i]);
    worst = std::max(worst, g / scale);
  }
  return worst;
}

// Squared Frobenius norm of W = z z' - c v v' from cached scalars.
double w_norm2(const Prepared& pre, std::size_t i, double c) {
  return pre.z2[i] * pre.z2[i] - 2.0 * c * pre.vz[i] * pre.vz[i] +
         c * c * pre.v2[i] * pre.v2[i];
}

FeasibilityResult run_pocs(const Prepared& pre, double c, double lambda_bar,
                           const SolverOptions& opt, Eigen::MatrixXd P) {
  FeasibilityResult result;
  double reference = std::numeric_limits<double>::infinity();
  int since_improved = 0;
  for (std::int64_t sweep = 1; sweep <= opt.max_sweeps; ++sweep) {
    P = clip_band(P, lambda_bar);
    for (std::size_t i = 0; i < pre.v.size(); ++i) {
      const double g = pre.z[i].dot(P * pre.z[i]) - c * pre.v[i].dot(P * pre.v[i]);
      if (g <= 0.0) continue;
      const double w2 = w_norm2(pre, i, c);
      if (w2 <= 0.0) continue;  // W = 0: the constraint is the tautology 0 <= 0
      const double alpha = g / w2;
      P.noalias() -= alpha * (pre.z[i] * pre.z[i].transpose());
      P.noalias() += (alpha * c) * (pre.v[i] * pre.v[i].transpose());
    }
    Eigen::MatrixXd Pb = clip_band(P, lambda_bar);
    const double viol = max_violation(pre, Pb, c);
    result.sweeps = sweep;
    result.residual = viol;
    if (viol <= opt.tol_residual) {
      result.status = Feasibility::feasible;
      result.P = std::move(Pb);
      return result;
    }
    if (viol <= reference * (1.0 - opt.stagnation_rel)) {
      reference = viol;
      since_improved = 0;
    } else if (++since_improved >= opt.stagnation_window) {
      result.status = Feasibility::infeasible;
      result.P = std::move(Pb);
      return result;
    }
  }
  result.status = Feasibility::indeterminate;
  result.P = clip_band(P, lambda_bar);
  return result;
}

// Dykstra best-approximation from the zero matrix onto the intersection of
// the band with the pair halfspaces; the limit is the feasible P of minimum
// Frobenius norm. Halfspace corrections are scalar multiples of their W, so
// only one scalar per pair is stored. Near-parallel active halfspaces can
// make the tail of the iteration arbitrarily slow, so on budget exhaustion
// the pass degrades gracefully: the final iterate if it is feasible, else
// the caller-provided feasible witness.
Eigen::MatrixXd dykstra_min_norm(const Prepared& pre, double c, double lambda_bar,
                                 const SolverOptions& opt, const Eigen::MatrixXd& witness,
                                 std::int64_t* sweeps_out, double* residual_out,
                                 bool* converged_out) {
  const Eigen::Index kp = pre.kp;
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(kp, kp);
  Eigen::MatrixXd band_corr = Eigen::MatrixXd::Zero(kp, kp);
  std::vector<double> beta(pre.v.size(), 0.0);
  Eigen::MatrixXd prev = x;
  for (std::int64_t cycle = 1; cycle <= opt.max_sweeps; ++cycle) {
    // Band set with a full-matrix correction.
    Eigen::MatrixXd y = x + band_corr;
    x = clip_band(y, lambda_bar);
    band_corr = y - x;
    // Halfspace sets with scalar corrections along W_i.
    for (std::size_t i = 0; i < pre.v.size(); ++i) {
      const double w2 = w_norm2(pre, i, c);
      if (w2 <= 0.0) continue;
      const double gx = pre.z[i].dot(x * pre.z[i]) - c * pre.v[i].dot(x * pre.v[i]);
      const double gy = gx + beta[i] * w2;  // slack at y = x + beta_i W_i
      const double beta_new = gy > 0.0 ? gy / w2 : 0.0;
      const double step = beta[i] - beta_new;  // x_new = x + step * W_i
      if (step != 0.0) {
        x.noalias() += step * (pre.z[i] * pre.z[i].transpose());
        x.noalias() -= (step * c) * (pre.v[i] * pre.v[i].transpose());
      }
      beta[i] = beta_new;
    }
    if (sweeps_out) ++*sweeps_out;
    const double change = (x - prev).norm() / std::max(1.0, x.norm());
    prev = x;
    Eigen::MatrixXd Pb = clip_band(x, lambda_bar);
    const double viol = max_violation(pre, Pb, c);
    if (residual_out) *residual_out = viol;
    if (viol <= opt.tol_residual && change <= 1e-11) {
      *converged_out = true;
      return Pb;
    }
  }
  *converged_out = false;
  Eigen::MatrixXd Pb = clip_band(x, lambda_bar);
  if (max_violation(pre, Pb, c) <= opt.tol_residual) return Pb;
  // The witness was certified at gamma_star and the constraints only loosen
  // above it, so it stays feasible here.
  if (residual_out) *residual_out = max_violation(pre, witness, c);
  return witness;
}

}  // namespace

void ScenarioProblem::validate() const {
  pairs.validate();
  if (pairs.pairs.empty()) throw InvalidInputError("scenario problem needs at least one pair");
  if (!(lambda_bar >= 1.0)) throw InvalidInputError("lambda_bar must be >= 1");
  if (!(options.tol_bisect > 0.0) || !(options.tol_residual > 0.0) ||
      options.max_sweeps < 1 || options.stagnation_window < 1 ||
      !(options.stagnation_rel > 0.0))
    throw InvalidInputError("solver tolerances must be positive");
  for (const auto& pr : pairs.pairs)
    if (pr.v.norm() < kMinPairNorm)
      throw InvalidInputError("pair with ||v|| below 1e-14 rejected: the leading window "
                              "carries no usable signal");
}

FeasibilityResult feasibility(const ScenarioProblem& problem, double gamma) {
  problem.validate();
  if (!(gamma >= 0.0)) throw InvalidInputError("gamma must be nonnegative");
  const Prepared pre = prepare(problem);
  const double c = std::pow(gamma, pre.exponent);
  return run_pocs(pre, c, problem.lambda_bar, problem.options,
                  Eigen::MatrixXd::Identity(pre.kp, pre.kp));
}

CertificateSolution solve(const ScenarioProblem& problem) {
  problem.validate();
  const Prepared pre = prepare(problem);
  const SolverOptions& opt = problem.options;
  CertificateSolution sol;
  sol.diagnostics.duplicates_removed = pre.duplicates_removed;

  double ratio_max = 0.0;  // max ||z|| / ||v||
  for (std::size_t i = 0; i < pre.v.size(); ++i)
    ratio_max = std::max(ratio_max, std::sqrt(pre.z2[i] / pre.v2[i]));

  const double root = 1.0 / (0.5 * pre.exponent);  // 1 / (T - k)
  double gamma_star = 0.0;
  // P = I certifies gamma_hi (and the trivial gamma = 0 problem); feasible
  // probes replace it with their iterate.
  Eigen::MatrixXd witness = Eigen::MatrixXd::Identity(pre.kp, pre.kp);
  if (ratio_max > 0.0) {
    // P = I is feasible at gamma_hi; the band bound makes gamma_lo necessary.
    const double gamma_hi = std::pow(ratio_max, root);
    const double gamma_lo = gamma_hi * std::pow(problem.lambda_bar, -0.5 * root);
    sol.diagnostics.gamma_lo = gamma_lo;
    sol.diagnostics.gamma_hi = gamma_hi;

    Eigen::MatrixXd warm = Eigen::MatrixXd::Identity(pre.kp, pre.kp);
    auto probe = [&](double gamma) {
      FeasibilityResult r =
          run_pocs(pre, std::pow(gamma, pre.exponent), problem.lambda_bar, opt, warm);
      sol.diagnostics.total_sweeps += r.sweeps;
      ++sol.diagnostics.bisection_iterations;
      warm = r.P;
      if (r.status == Feasibility::indeterminate)
        throw IndeterminateError("feasibility probe at gamma = " + std::to_string(gamma) +
                                     " ran out of sweeps while still improving",
                                 gamma);
      if (r.status == Feasibility::feasible) witness = r.P;
      return r.status == Feasibility::feasible;
    };

    if (probe(gamma_lo)) {
      gamma_star = gamma_lo;
      sol.diagnostics.interval_width = 0.0;
    } else {
      double lo = gamma_lo, hi = gamma_hi;
      while (hi - lo > opt.tol_bisect * hi) {
        const double mid = 0.5 * (lo + hi);
        if (probe(mid))
          hi = mid;
        else
          lo = mid;
      }
      gamma_star = hi;
      sol.diagnostics.interval_width = hi - lo;
    }
  }
  sol.gamma_star = gamma_star;

  // Minimum-norm certificate one bisection step above gamma_star, so the
  // stage-1 feasible set is strictly inside and Dykstra has room to converge.
  const double gamma2 = gamma_star * (1.0 + opt.tol_bisect);
  const double c2 = std::pow(gamma2, pre.exponent);
  double residual = 0.0;
  sol.P_star = dykstra_min_norm(pre, c2, problem.lambda_bar, opt, witness,
                                &sol.diagnostics.total_sweeps, &residual,
                                &sol.diagnostics.min_norm_converged);
  sol.diagnostics.final_residual = residual;
  for (std::size_t i = 0; i < pre.v.size(); ++i) {
    const double scale = pre.z2[i] + c2 * pre.v2[i];
    if (scale <= 0.0) continue;
    const double g =
        pre.z[i].dot(sol.P_star * pre.z[i]) - c2 * pre.v[i].dot(sol.P_star * pre.v[i]);
    if (g / scale >= -1e-6) ++sol.diagnostics.active_constraints;
  }
  return sol;
}

std::vector<double> constraint_residuals(const ScenarioProblem& problem,
                                         const Eigen::MatrixXd& P, double gamma) {
  problem.pairs.validate();
  if (P.rows() != problem.pairs.kp() || P.cols() != problem.pairs.kp())
    throw DimensionError("P size differs from k p");
  const double c = std::pow(gamma, 2.0 * static_cast<double>(problem.pairs.T -
                                                             problem.pairs.k));
  std::vector<double> res;
  res.reserve(problem.pairs.pairs.size());
  for (const auto& pr : problem.pairs.pairs)
    res.push_back(pr.z.dot(P * pr.z) - c * pr.v.dot(P * pr.v));
  return res;
}

}  // namespace jsrcert

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "jsrcert/pairs.hpp"

namespace jsrcert {

struct SolverOptions {
  double tol_bisect = 1e-5;    // stop when the gamma interval width / hi <= this
  double tol_residual = 1e-9;  // normalized constraint violation tolerance
  std::int64_t max_sweeps = 50000;  // projection sweeps per feasibility call
  int stagnation_window = 200;      // sweeps without relative progress ...
  double stagnation_rel = 1e-3;     // ... of at least this much => infeasible
};

// Sampled surrogate of the robust rate program: find gamma and P with
//   I <= P <= lambda_bar I   and   z' P z <= gamma^(2 (T-k)) v' P v
// for every recorded pair, minimizing gamma first and ||P||_F second.
struct ScenarioProblem {
  DataPairSet pairs;
  double lambda_bar = 10.0;
  SolverOptions options;

  void validate() const;
};

enum class Feasibility { feasible, infeasible, indeterminate };

struct FeasibilityResult {
  Feasibility status = Feasibility::indeterminate;
  Eigen::MatrixXd P;       // band-projected final iterate
  double residual = 0.0;   // max normalized violation at P
  std::int64_t sweeps = 0;
};

// Fixed-gamma feasibility via cyclic projections: spectral clipping onto the
// band {I <= P <= lambda_bar I} alternating with closed-form projections onto
// the violated pair halfspaces. Declares infeasible when the best violation
// stops improving (relative stagnation_rel) for stagnation_window consecutive
// sweeps while above tol_residual; indeterminate when the sweep budget runs
// out first. Violations are normalized by ||z||^2 + c ||v||^2 per pair, which
// makes the decisions invariant under a common positive rescaling of the data.
FeasibilityResult feasibility(const ScenarioProblem& problem, double gamma);

struct SolveDiagnostics {
  std::int64_t bisection_iterations = 0;
  std::int64_t total_sweeps = 0;
  double final_residual = 0.0;
  double interval_width = 0.0;  // absolute width of the final gamma interval
  double gamma_lo = 0.0;        // initial bracket, from the band bounds
  double gamma_hi = 0.0;        // initial bracket, P = I is feasible here
  std::int64_t active_constraints = 0;  // pairs within 1e-6 of tight at P_star
  std::int64_t duplicates_removed = 0;  // bitwise-identical pairs dropped
  bool min_norm_converged = true;  // false: P_star is feasible but the norm
                                   // tie-break ran out of budget first
};

struct CertificateSolution {
  double gamma_star = 0.0;
  Eigen::MatrixXd P_star;
  SolveDiagnostics diagnostics;
};

// Lexicographic solve: bisection on gamma over [gamma_lo, gamma_hi] (smallest
// feasible probe wins), then a best-approximation pass (Dykstra) from the
// zero matrix at gamma_star inflated by one bisection step, which yields the
// minimum-Frobenius-norm feasible P. Bitwise-duplicate pairs are solved once.
// When the minimum-norm pass runs out of budget, P_star falls back to the
// last feasible probe iterate (still a valid certificate; see
// min_norm_converged). Throws IndeterminateError when a feasibility probe
// exhausts its sweep budget while still improving.
CertificateSolution solve(const ScenarioProblem& problem);

// Raw slack z' P z - gamma^(2 (T-k)) v' P v for every pair in the set, in
// input order (duplicates included).
std::vector<double> constraint_residuals(const ScenarioProblem& problem,
                                         const Eigen::MatrixXd& P, double gamma);

}  // namespace jsrcert

#include "jsrcert/degeneracy.hpp"

#include <cmath>
#include <string>

#include "jsrcert/errors.hpp"
#include "jsrcert/observability.hpp"
#include "jsrcert/rng.hpp"

namespace jsrcert {

DegeneracyReport degeneracy_diagnostic(const SwitchedLinearSystem& sys,
                                       const SwitchingWord& word, int k, int trials,
                                       std::uint64_t seed, double tol) {
  const int T = word.length();
  if (k < 1) throw InvalidInputError("degeneracy screen needs k >= 1");
  if (T == k)
    throw InvalidInputError("degenerate horizon T = k: start and end windows coincide");
  if (T < k) throw InvalidInputError("word shorter than the window");
  if (trials < 0) throw InvalidInputError("trials must be nonnegative");

  const Eigen::Index kp = static_cast<Eigen::Index>(k) * sys.p;
  // Transition over the first T - k symbols pulls the end-window form back to
  // the initial state, so both sides become n x n forms in x_0.
  const Eigen::MatrixXd Ahead = product(sys, word.slice(0, T - k - 1));

  DegeneracyReport report;
  report.trials = trials;
  Rng rng(seed);
  for (int trial = 0; trial <= trials; ++trial) {
    Eigen::MatrixXd P;
    if (trial == 0) {
      P = Eigen::MatrixXd::Identity(kp, kp);
    } else {
      // Random positive definite test matrix: B' B + I with B uniform [-1, 1].
      Eigen::MatrixXd B(kp, kp);
      Rng r = rng.stream(0x7064, static_cast<std::uint64_t>(trial));
      for (Eigen::Index i = 0; i < kp; ++i)
        for (Eigen::Index j = 0; j < kp; ++j) B(i, j) = 2.0 * r.uniform01() - 1.0;
      P = B.transpose() * B + Eigen::MatrixXd::Identity(kp, kp);
    }

    const Eigen::MatrixXd Q_start = path_gram(sys, P, word, 0, k);
    Eigen::MatrixXd Q_end = Ahead.transpose() * path_gram(sys, P, word, T - k, k) * Ahead;
    Q_end = 0.5 * (Q_end + Q_end.transpose());

    const double ss = Q_start.squaredNorm();
    const double scale = std::max({Q_end.norm(), Q_start.norm(), 1e-300});
    double c = 0.0;
    if (ss > 0.0) c = (Q_end.cwiseProduct(Q_start)).sum() / ss;
    if (c < 0.0) c = 0.0;  // a negative rate squared cannot fit
    const double residual = (Q_end - c * Q_start).norm() / scale;
    if (residual < report.min_residual) {
      report.min_residual = residual;
      report.gamma_hat = std::pow(c, 0.5 / (T - k));
    }
    if (residual < tol) {
      report.verdict = DegeneracyVerdict::possibly_degenerate;
      break;
    }
  }
  return report;
}

}  // namespace jsrcert

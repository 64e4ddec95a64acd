#include "jsrcert/jsr.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "jsrcert/errors.hpp"

namespace jsrcert {

namespace {

double spectral_radius(const Eigen::MatrixXd& A) {
  Eigen::EigenSolver<Eigen::MatrixXd> eig(A, /*computeEigenvectors=*/false);
  double r = 0.0;
  for (Eigen::Index i = 0; i < A.rows(); ++i) r = std::max(r, std::abs(eig.eigenvalues()(i)));
  return r;
}

double spectral_norm(const Eigen::MatrixXd& A) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  return svd.singularValues()(0);
}

struct DepthStats {
  double max_rho = 0.0;
  double max_norm = 0.0;
};

void walk(const SwitchedLinearSystem& sys, const Eigen::MatrixXd& prefix, int depth,
          int q_max, std::uint64_t budget, std::uint64_t& nodes,
          std::vector<DepthStats>& stats) {
  for (int s = 1; s <= sys.M; ++s) {
    if (++nodes > budget)
      throw BudgetError("jsr_bracket would enumerate more than " + std::to_string(budget) +
                            " products",
                        nodes, budget, depth);
    const Eigen::MatrixXd B = sys.mode_A(s) * prefix;
    auto& st = stats[static_cast<std::size_t>(depth)];
    st.max_rho = std::max(st.max_rho, spectral_radius(B));
    st.max_norm = std::max(st.max_norm, spectral_norm(B));
    if (depth + 1 < q_max) walk(sys, B, depth + 1, q_max, budget, nodes, stats);
  }
}

}  // namespace

JsrBracket jsr_bracket(const SwitchedLinearSystem& sys, int q_max, std::uint64_t budget) {
  if (q_max < 1) throw InvalidInputError("jsr_bracket needs q_max >= 1");
  std::vector<DepthStats> stats(static_cast<std::size_t>(q_max));
  std::uint64_t nodes = 0;
  walk(sys, Eigen::MatrixXd::Identity(sys.n, sys.n), 0, q_max, budget, nodes, stats);

  JsrBracket bracket;
  bracket.depth = q_max;
  bracket.upper = std::numeric_limits<double>::infinity();
  for (int q = 1; q <= q_max; ++q) {
    const auto& st = stats[static_cast<std::size_t>(q - 1)];
    bracket.lower = std::max(bracket.lower, std::pow(st.max_rho, 1.0 / q));
    bracket.upper = std::min(bracket.upper, std::pow(st.max_norm, 1.0 / q));
  }
  return bracket;
}

}  // namespace jsrcert

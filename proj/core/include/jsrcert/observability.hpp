#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>

#include "jsrcert/system.hpp"

namespace jsrcert {

// Relative singular value cutoff for rank decisions: a window counts as
// rank-deficient when sigma_min / sigma_max < kRankTol.
inline constexpr double kRankTol = 1e-10;

// Default cap on enumerated words per length.
inline constexpr std::uint64_t kDefaultWordBudget = 1000000;

struct ObservabilityMatrix {
  SwitchingWord word;
  Eigen::MatrixXd O;  // (k p) x n, row blocks C_{s0}, C_{s1} A_{s0}, ...
};

// Stacked output map of the word: row block j is C_{sigma_j} A_{sigma_{j-1}}
// ... A_{sigma_0}, so O * x lists the outputs y_0 ... y_{k-1} from state x.
ObservabilityMatrix observability_matrix(const SwitchedLinearSystem& sys,
                                         const SwitchingWord& word);

// True when the stacked map of this word has full column rank n.
bool window_full_rank(const SwitchedLinearSystem& sys, const SwitchingWord& word,
                      double rank_tol = kRankTol);

// Smallest k <= k_max such that SOME word of length k has a full-rank stacked
// map; nullopt when no k qualifies. Enumeration is lexicographic.
std::optional<int> observability_index(const SwitchedLinearSystem& sys, int k_max,
                                       std::uint64_t budget = kDefaultWordBudget,
                                       double rank_tol = kRankTol);

// Smallest k <= k_max such that EVERY word of length k has a full-rank
// stacked map; nullopt when no k qualifies.
std::optional<int> pathwise_index(const SwitchedLinearSystem& sys, int k_max,
                                  std::uint64_t budget = kDefaultWordBudget,
                                  double rank_tol = kRankTol);

// Window Gram O' P O pulled back to state space, where O is the stacked map
// of the k-symbol window of `word` starting at `offset`. P must be symmetric
// of size (k p). The result is explicitly symmetrized.
Eigen::MatrixXd path_gram(const SwitchedLinearSystem& sys, const Eigen::MatrixXd& P,
                          const SwitchingWord& word, int offset, int window);

// Shape constant of the Gram family: max over words of length k of
// sqrt(det(G) / lambda_min(G)^n) with G = path_gram(P, word, 0, k).
// Throws SingularGramError when some window is rank-deficient. Internally
// cross-checks the closed-form cap sqrt((c_k kappa(P))^(n-1)).
double chi(const SwitchedLinearSystem& sys, const Eigen::MatrixXd& P, int k,
           std::uint64_t budget = kDefaultWordBudget);

// c_k: max over words of length k of the spectral condition number of O' O.
double max_gram_condition(const SwitchedLinearSystem& sys, int k,
                          std::uint64_t budget = kDefaultWordBudget);

// White-box check of the pathwise Lyapunov inequality: for every word of
// length k + ell,
//   A' (O_ell' P O_ell) A  <=  gamma^(2 ell) (O_0' P O_0)
// in the semidefinite order, where A is the transition over the first ell
// symbols and O_ell, O_0 are the stacked maps of the shifted and leading
// k-windows. Eigenvalue test with absolute slack tol * max(1, scale).
bool lyapunov_condition_holds(const SwitchedLinearSystem& sys, const Eigen::MatrixXd& P,
                              double gamma, int k, int ell, double tol = 1e-9,
                              std::uint64_t budget = kDefaultWordBudget);

}  // namespace jsrcert

#include "jsrcert/observability.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "jsrcert/errors.hpp"
#include "jsrcert/threads.hpp"

namespace jsrcert {

namespace {

std::string word_string(const SwitchingWord& w) {
  std::string s;
  for (int sym : w.symbols) {
    if (!s.empty()) s += ',';
    s += std::to_string(sym);
  }
  return s;
}

// Visits words of the given length lexicographically until pred returns true;
// reports the first hit.
std::optional<std::uint64_t> find_word(int M, int length, std::uint64_t budget,
                                       const std::function<bool(const SwitchingWord&)>& pred) {
  const std::uint64_t count = word_count(M, length, budget);
  SwitchingWord word = word_at(M, length, 0);
  for (std::uint64_t j = 0; j < count; ++j) {
    if (pred(word)) return j;
    for (int i = length - 1; i >= 0; --i) {
      auto& s = word.symbols[static_cast<std::size_t>(i)];
      if (s < M) {
        ++s;
        break;
      }
      s = 1;
    }
  }
  return std::nullopt;
}

}  // namespace

ObservabilityMatrix observability_matrix(const SwitchedLinearSystem& sys,
                                         const SwitchingWord& word) {
  const int k = word.length();
  if (k < 1) throw InvalidInputError("observability matrix needs a nonempty word");
  ObservabilityMatrix result;
  result.word = word;
  result.O.resize(static_cast<Eigen::Index>(k) * sys.p, sys.n);
  Eigen::MatrixXd prefix = Eigen::MatrixXd::Identity(sys.n, sys.n);
  for (int j = 0; j < k; ++j) {
    result.O.middleRows(static_cast<Eigen::Index>(j) * sys.p, sys.p) =
        sys.mode_C(word[j]) * prefix;
    if (j + 1 < k) prefix = sys.mode_A(word[j]) * prefix;
  }
  return result;
}

bool window_full_rank(const SwitchedLinearSystem& sys, const SwitchingWord& word,
                      double rank_tol) {
  const Eigen::MatrixXd O = observability_matrix(sys, word).O;
  if (O.rows() < O.cols()) return false;  // fewer rows than n: rank < n
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(O);
  const auto& sv = svd.singularValues();
  if (sv(0) <= 0.0) return false;
  return sv(sv.size() - 1) / sv(0) >= rank_tol;
}

namespace {

std::optional<int> index_search(const SwitchedLinearSystem& sys, int k_max,
                                std::uint64_t budget, double rank_tol, bool every_word) {
  if (k_max < 1) throw InvalidInputError("index search needs k_max >= 1");
  for (int k = 1; k <= k_max; ++k) {
    try {
      if (every_word) {
        // Pathwise: fail fast on the first deficient word.
        auto deficient = find_word(sys.M, k, budget, [&](const SwitchingWord& w) {
          return !window_full_rank(sys, w, rank_tol);
        });
        if (!deficient) return k;
      } else {
        auto good = find_word(sys.M, k, budget, [&](const SwitchingWord& w) {
          return window_full_rank(sys, w, rank_tol);
        });
        if (good) return k;
      }
    } catch (const BudgetError& e) {
      throw BudgetError("index search stopped at word length " + std::to_string(k) +
                            ": " + e.what() + " (lengths below " + std::to_string(k) +
                            " were fully checked)",
                        e.required(), e.budget(), k - 1);
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<int> observability_index(const SwitchedLinearSystem& sys, int k_max,
                                       std::uint64_t budget, double rank_tol) {
  return index_search(sys, k_max, budget, rank_tol, /*every_word=*/false);
}

std::optional<int> pathwise_index(const SwitchedLinearSystem& sys, int k_max,
                                  std::uint64_t budget, double rank_tol) {
  return index_search(sys, k_max, budget, rank_tol, /*every_word=*/true);
}

Eigen::MatrixXd path_gram(const SwitchedLinearSystem& sys, const Eigen::MatrixXd& P,
                          const SwitchingWord& word, int offset, int window) {
  if (window < 1 || offset < 0 || offset + window > word.length())
    throw InvalidInputError("window [" + std::to_string(offset) + ", " +
                            std::to_string(offset + window) + ") does not fit word of length " +
                            std::to_string(word.length()));
  const Eigen::Index kp = static_cast<Eigen::Index>(window) * sys.p;
  if (P.rows() != kp || P.cols() != kp)
    throw DimensionError("P must be " + std::to_string(kp) + "x" + std::to_string(kp));
  const double scale = std::max(1.0, P.cwiseAbs().maxCoeff());
  if ((P - P.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw InvalidInputError("P must be symmetric");
  const Eigen::MatrixXd O =
      observability_matrix(sys, word.slice(offset, offset + window - 1)).O;
  Eigen::MatrixXd G = O.transpose() * P * O;
  return 0.5 * (G + G.transpose());
}

namespace {

struct ChiChunk {
  double max_log_chi = -std::numeric_limits<double>::infinity();
  double max_cond = 0.0;  // condition number of O' O over the chunk
  std::uint64_t first_singular = std::numeric_limits<std::uint64_t>::max();
};

}  // namespace

double chi(const SwitchedLinearSystem& sys, const Eigen::MatrixXd& P, int k,
           std::uint64_t budget) {
  if (k < 1) throw InvalidInputError("chi needs k >= 1");
  const Eigen::Index kp = static_cast<Eigen::Index>(k) * sys.p;
  if (P.rows() != kp || P.cols() != kp)
    throw DimensionError("P must be " + std::to_string(kp) + "x" + std::to_string(kp));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> peig(0.5 * (P + P.transpose()));
  const double p_min = peig.eigenvalues()(0);
  const double p_max = peig.eigenvalues()(peig.eigenvalues().size() - 1);
  if (p_min <= 0.0) throw InvalidInputError("chi requires positive definite P");
  const double kappa_p = p_max / p_min;

  const std::uint64_t count = word_count(sys.M, k, budget);
  std::vector<ChiChunk> partial(static_cast<std::size_t>(thread_count()), ChiChunk{});
  parallel_chunks(static_cast<std::int64_t>(count), [&](std::int64_t begin, std::int64_t end,
                                                        int chunk) {
    ChiChunk local;
    for (std::int64_t j = begin; j < end; ++j) {
      const SwitchingWord w = word_at(sys.M, k, static_cast<std::uint64_t>(j));
      const Eigen::MatrixXd O = observability_matrix(sys, w).O;
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(O);
      const auto& sv = svd.singularValues();
      const double smax = sv(0);
      const double smin = sv(sv.size() - 1);
      if (O.rows() < O.cols() || smax <= 0.0 || smin / smax < kRankTol) {
        local.first_singular = std::min(local.first_singular, static_cast<std::uint64_t>(j));
        continue;
      }
      local.max_cond = std::max(local.max_cond, (smax / smin) * (smax / smin));
      Eigen::MatrixXd G = O.transpose() * P * O;
      G = 0.5 * (G + G.transpose());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(G);
      const auto& lam = eig.eigenvalues();
      if (lam(0) <= 0.0) {
        local.first_singular = std::min(local.first_singular, static_cast<std::uint64_t>(j));
        continue;
      }
      double log_det = 0.0;
      for (Eigen::Index i = 0; i < lam.size(); ++i) log_det += std::log(lam(i));
      const double log_chi = 0.5 * (log_det - sys.n * std::log(lam(0)));
      local.max_log_chi = std::max(local.max_log_chi, log_chi);
    }
    partial[static_cast<std::size_t>(chunk)] = local;
  });

  ChiChunk total;
  for (const auto& c : partial) {
    total.max_log_chi = std::max(total.max_log_chi, c.max_log_chi);
    total.max_cond = std::max(total.max_cond, c.max_cond);
    total.first_singular = std::min(total.first_singular, c.first_singular);
  }
  if (total.first_singular != std::numeric_limits<std::uint64_t>::max())
    throw SingularGramError(
        "rank-deficient window at word (" +
        word_string(word_at(sys.M, k, total.first_singular)) + ")");

  const double value = std::exp(total.max_log_chi);
  // Closed-form cap: chi <= sqrt((c_k kappa(P))^(n-1)). A violation beyond
  // rounding slack means an internal inconsistency.
  const double cap_log = 0.5 * (sys.n - 1) * std::log(total.max_cond * kappa_p);
  if (total.max_log_chi > cap_log + 1e-9)
    throw Error("chi exceeded its closed-form cap (internal inconsistency)");
  return value;
}

double max_gram_condition(const SwitchedLinearSystem& sys, int k, std::uint64_t budget) {
  if (k < 1) throw InvalidInputError("max_gram_condition needs k >= 1");
  const std::uint64_t count = word_count(sys.M, k, budget);
  std::vector<double> partial(static_cast<std::size_t>(thread_count()), 0.0);
  std::vector<std::uint64_t> singular(static_cast<std::size_t>(thread_count()),
                                      std::numeric_limits<std::uint64_t>::max());
  parallel_chunks(static_cast<std::int64_t>(count),
                  [&](std::int64_t begin, std::int64_t end, int chunk) {
                    double local = 0.0;
                    std::uint64_t first_bad = std::numeric_limits<std::uint64_t>::max();
                    for (std::int64_t j = begin; j < end; ++j) {
                      const SwitchingWord w = word_at(sys.M, k, static_cast<std::uint64_t>(j));
                      const Eigen::MatrixXd O = observability_matrix(sys, w).O;
                      Eigen::JacobiSVD<Eigen::MatrixXd> svd(O);
                      const auto& sv = svd.singularValues();
                      const double smax = sv(0);
                      const double smin = sv(sv.size() - 1);
                      if (O.rows() < O.cols() || smax <= 0.0 || smin / smax < kRankTol) {
                        first_bad = std::min(first_bad, static_cast<std::uint64_t>(j));
                        continue;
                      }
                      local = std::max(local, (smax / smin) * (smax / smin));
                    }
                    partial[static_cast<std::size_t>(chunk)] = local;
                    singular[static_cast<std::size_t>(chunk)] = first_bad;
                  });
  std::uint64_t first_singular = std::numeric_limits<std::uint64_t>::max();
  for (auto s : singular) first_singular = std::min(first_singular, s);
  if (first_singular != std::numeric_limits<std::uint64_t>::max())
    throw SingularGramError("rank-deficient window at word (" +
                            word_string(word_at(sys.M, k, first_singular)) + ")");
  double c = 0.0;
  for (double v : partial) c = std::max(c, v);
  return c;
}

bool lyapunov_condition_holds(const SwitchedLinearSystem& sys, const Eigen::MatrixXd& P,
                              double gamma, int k, int ell, double tol,
                              std::uint64_t budget) {
  if (k < 1 || ell < 1) throw InvalidInputError("lyapunov check needs k >= 1 and ell >= 1");
  const double rate = std::pow(gamma, 2.0 * ell);
  bool holds = true;
  for_each_word(sys.M, k + ell, budget, [&](std::uint64_t, const SwitchingWord& w) {
    if (!holds) return;
    const Eigen::MatrixXd G0 = path_gram(sys, P, w, 0, k);
    const Eigen::MatrixXd Gl = path_gram(sys, P, w, ell, k);
    const Eigen::MatrixXd Aw = product(sys, w.slice(0, ell - 1));
    Eigen::MatrixXd gap = rate * G0 - Aw.transpose() * Gl * Aw;
    gap = 0.5 * (gap + gap.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gap);
    const double scale = std::max(1.0, std::max(G0.cwiseAbs().maxCoeff(),
                                                Gl.cwiseAbs().maxCoeff()));
    if (eig.eigenvalues()(0) < -tol * scale) holds = false;
  });
  return holds;
}

}  // namespace jsrcert

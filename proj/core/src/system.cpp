#include "jsrcert/system.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "jsrcert/errors.hpp"

namespace jsrcert {

SwitchingWord SwitchingWord::slice(int from, int to) const {
  if (from < 0 || to >= length() || from > to + 1)
    throw InvalidInputError("word slice [" + std::to_string(from) + ", " + std::to_string(to) +
                            "] out of range for length " + std::to_string(length()));
  return SwitchingWord(
      std::vector<int>(symbols.begin() + from, symbols.begin() + (to + 1)));
}

void SwitchedLinearSystem::validate() const {
  if (n < 1 || M < 1 || p < 1)
    throw InvalidInputError("system requires n >= 1, M >= 1, p >= 1");
  if (static_cast<int>(A.size()) != M || static_cast<int>(C.size()) != M)
    throw DimensionError("expected " + std::to_string(M) + " A and C matrices");
  for (int m = 0; m < M; ++m) {
    if (A[m].rows() != n || A[m].cols() != n)
      throw DimensionError("A[" + std::to_string(m + 1) + "] is not " + std::to_string(n) +
                           "x" + std::to_string(n));
    if (C[m].rows() != p || C[m].cols() != n)
      throw DimensionError("C[" + std::to_string(m + 1) + "] is not " + std::to_string(p) +
                           "x" + std::to_string(n));
    if (!A[m].allFinite() || !C[m].allFinite())
      throw InvalidInputError("mode " + std::to_string(m + 1) + " has non-finite entries");
  }
}

const Eigen::MatrixXd& SwitchedLinearSystem::mode_A(int symbol) const {
  if (symbol < 1 || symbol > M)
    throw InvalidModeError("mode " + std::to_string(symbol) + " outside 1.." +
                           std::to_string(M));
  return A[static_cast<std::size_t>(symbol - 1)];
}

const Eigen::MatrixXd& SwitchedLinearSystem::mode_C(int symbol) const {
  if (symbol < 1 || symbol > M)
    throw InvalidModeError("mode " + std::to_string(symbol) + " outside 1.." +
                           std::to_string(M));
  return C[static_cast<std::size_t>(symbol - 1)];
}

Eigen::MatrixXd product(const SwitchedLinearSystem& sys, const SwitchingWord& word) {
  Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(sys.n, sys.n);
  // Left-multiplying in word order yields A_{sigma_{k-1}} ... A_{sigma_0}.
  for (int s : word.symbols) acc = sys.mode_A(s) * acc;
  return acc;
}

Trajectory simulate(const SwitchedLinearSystem& sys, const Eigen::VectorXd& x0,
                    const SwitchingWord& word) {
  if (x0.size() != sys.n) throw DimensionError("initial state has wrong dimension");
  Trajectory traj;
  const int T = word.length();
  traj.states.reserve(static_cast<std::size_t>(T) + 1);
  traj.outputs.reserve(static_cast<std::size_t>(T));
  Eigen::VectorXd x = x0;
  traj.states.push_back(x);
  for (int t = 0; t < T; ++t) {
    int s = word[t];
    traj.outputs.push_back(sys.mode_C(s) * x);
    x = sys.mode_A(s) * x;
    traj.states.push_back(x);
  }
  return traj;
}

std::uint64_t word_count(int M, int length, std::uint64_t budget) {
  if (M < 1 || length < 0) throw InvalidInputError("word_count requires M >= 1, length >= 0");
  const auto m = static_cast<std::uint64_t>(M);
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t count = 1;
  bool saturated = false;
  for (int i = 0; i < length; ++i) {
    if (count > kMax / m) {  // saturate instead of overflowing
      count = kMax;
      saturated = true;
      break;
    }
    count *= m;
  }
  if (saturated || count > budget) {
    // Longest word length that still fits the budget, for the error report.
    int depth = 0;
    std::uint64_t fit = 1;
    while (depth < length && fit <= budget / m) {
      fit *= m;
      ++depth;
    }
    throw BudgetError("enumerating M^" + std::to_string(length) + " words exceeds budget " +
                          std::to_string(budget),
                      count, budget, depth);
  }
  return count;
}

SwitchingWord word_at(int M, int length, std::uint64_t index) {
  std::vector<int> symbols(static_cast<std::size_t>(length));
  for (int i = length - 1; i >= 0; --i) {
    symbols[static_cast<std::size_t>(i)] =
        1 + static_cast<int>(index % static_cast<std::uint64_t>(M));
    index /= static_cast<std::uint64_t>(M);
  }
  return SwitchingWord(std::move(symbols));
}

void for_each_word(int M, int length, std::uint64_t budget,
                   const std::function<void(std::uint64_t, const SwitchingWord&)>& body) {
  const std::uint64_t count = word_count(M, length, budget);
  SwitchingWord word = word_at(M, length, 0);
  for (std::uint64_t j = 0; j < count; ++j) {
    body(j, word);
    // Lexicographic increment: bump the least significant position.
    for (int i = length - 1; i >= 0; --i) {
      auto& s = word.symbols[static_cast<std::size_t>(i)];
      if (s < M) {
        ++s;
        break;
      }
      s = 1;
    }
  }
}

SwitchedLinearSystem random_system(int n, int M, int p, Rng rng) {
  if (n < 1 || M < 1 || p < 1) throw InvalidInputError("random_system requires n, M, p >= 1");
  SwitchedLinearSystem sys;
  sys.n = n;
  sys.M = M;
  sys.p = p;
  sys.A.reserve(static_cast<std::size_t>(M));
  sys.C.reserve(static_cast<std::size_t>(M));
  for (int m = 0; m < M; ++m) {
    Eigen::MatrixXd Am(n, n), Cm(p, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) Am(r, c) = 2.0 * rng.uniform01() - 1.0;
    for (int r = 0; r < p; ++r)
      for (int c = 0; c < n; ++c) Cm(r, c) = 2.0 * rng.uniform01() - 1.0;
    sys.A.push_back(std::move(Am));
    sys.C.push_back(std::move(Cm));
  }
  return sys;
}

}  // namespace jsrcert

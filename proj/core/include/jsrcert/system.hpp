#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "jsrcert/rng.hpp"

namespace jsrcert {

// Switching sequence sigma_0 sigma_1 ... with 1-based mode symbols.
struct SwitchingWord {
  std::vector<int> symbols;

  SwitchingWord() = default;
  explicit SwitchingWord(std::vector<int> s) : symbols(std::move(s)) {}

  int length() const { return static_cast<int>(symbols.size()); }
  int operator[](int i) const { return symbols[static_cast<std::size_t>(i)]; }

  // Contiguous slice sigma_{from} ... sigma_{to} (inclusive bounds).
  SwitchingWord slice(int from, int to) const;

  bool operator==(const SwitchingWord&) const = default;
};

// Discrete-time switched linear system: x+ = A_sigma x, y = C_sigma x.
struct SwitchedLinearSystem {
  int n = 0;  // state dimension
  int M = 0;  // number of modes
  int p = 0;  // output dimension
  std::vector<Eigen::MatrixXd> A;  // M matrices, n x n
  std::vector<Eigen::MatrixXd> C;  // M matrices, p x n

  // Throws DimensionError / InvalidInputError on inconsistent or non-finite data.
  void validate() const;

  const Eigen::MatrixXd& mode_A(int symbol) const;  // 1-based, throws InvalidModeError
  const Eigen::MatrixXd& mode_C(int symbol) const;
};

// Ordered product A_{sigma_{k-1}} ... A_{sigma_1} A_{sigma_0} for the word
// sigma_0 ... sigma_{k-1}; the empty word gives the identity. This is the
// state transition over the word: x_k = product(sys, word) * x_0.
Eigen::MatrixXd product(const SwitchedLinearSystem& sys, const SwitchingWord& word);

struct Trajectory {
  std::vector<Eigen::VectorXd> states;   // x_0 ... x_T (T+1 entries)
  std::vector<Eigen::VectorXd> outputs;  // y_0 ... y_{T-1}, y_t = C_{sigma_t} x_t
};

Trajectory simulate(const SwitchedLinearSystem& sys, const Eigen::VectorXd& x0,
                    const SwitchingWord& word);

// Number of words of the given length; throws BudgetError when M^length
// exceeds the budget.
std::uint64_t word_count(int M, int length, std::uint64_t budget);

// The index-th word of the given length in lexicographic order: sigma_0 is
// the most significant digit, so index 0 is (1,1,...,1).
SwitchingWord word_at(int M, int length, std::uint64_t index);

// Visits all M^length words in lexicographic order. Kept as an indexed loop
// so callers can parallelize over index ranges deterministically.
void for_each_word(int M, int length, std::uint64_t budget,
                   const std::function<void(std::uint64_t, const SwitchingWord&)>& body);

// System with all A and C entries drawn i.i.d. uniform on [-1, 1].
SwitchedLinearSystem random_system(int n, int M, int p, Rng rng);

}  // namespace jsrcert

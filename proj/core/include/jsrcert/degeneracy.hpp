#pragma once

#include <cstdint>

#include "jsrcert/system.hpp"

namespace jsrcert {

enum class DegeneracyVerdict { no_evidence, possibly_degenerate };

struct DegeneracyReport {
  DegeneracyVerdict verdict = DegeneracyVerdict::no_evidence;
  // Smallest relative proportionality residual seen over the tested P.
  double min_residual = 1.0;
  // Rate recovered from the best-fitting proportionality constant.
  double gamma_hat = 0.0;
  int trials = 0;
};

// Randomized screen for degenerate horizons: along the given word of length
// T, checks whether the end-window output energy form equals
// gamma^(2 (T - k)) times the start-window form exactly, as quadratic forms
// in the initial state. Tests P = identity plus `trials` random positive
// definite P; any exact proportionality (relative Frobenius residual below
// `tol`) reports possibly-degenerate. A clean screen is evidence, not proof.
DegeneracyReport degeneracy_diagnostic(const SwitchedLinearSystem& sys,
                                       const SwitchingWord& word, int k, int trials,
                                       std::uint64_t seed, double tol = 1e-9);

}  // namespace jsrcert

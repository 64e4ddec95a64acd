#pragma once

#include <cstdint>

#include "jsrcert/observability.hpp"
#include "jsrcert/system.hpp"

namespace jsrcert {

// Two-sided enclosure of the joint spectral radius from products up to a
// fixed length:
//   lower = max over q <= depth, words of length q, of rho(A_w)^(1/q)
//   upper = min over q <= depth of (max over words of length q of ||A_w||_2)^(1/q)
struct JsrBracket {
  double lower = 0.0;
  double upper = 0.0;
  int depth = 0;
};

// Exhaustive product enumeration up to length q_max (depth-first, products
// reused along the tree). Total node count is capped by `budget`.
JsrBracket jsr_bracket(const SwitchedLinearSystem& sys, int q_max,
                       std::uint64_t budget = kDefaultWordBudget);

}  // namespace jsrcert

#include <cmath>

#include <doctest.h>

#include "jsrcert/degeneracy.hpp"
#include "jsrcert/errors.hpp"
#include "jsrcert/jsr.hpp"
#include "jsrcert/observability.hpp"
#include "jsrcert/rng.hpp"
#include "jsrcert/system.hpp"

using namespace jsrcert;

namespace {

// Single mode, scaled quarter-turn: A = 0.9 [[0,-1],[1,0]], C = (1 0).
// One output never pins the state in one step, two steps always do.
SwitchedLinearSystem rotation_system() {
  SwitchedLinearSystem sys;
  sys.n = 2;
  sys.M = 1;
  sys.p = 1;
  Eigen::MatrixXd A(2, 2), C(1, 2);
  A << 0.0, -0.9, 0.9, 0.0;
  C << 1.0, 0.0;
  sys.A = {A};
  sys.C = {C};
  return sys;
}

// Mode 2 freezes the state, so the all-2 word stays rank one at every length.
SwitchedLinearSystem rotation_plus_identity() {
  SwitchedLinearSystem sys = rotation_system();
  sys.M = 2;
  sys.A.push_back(Eigen::MatrixXd::Identity(2, 2));
  sys.C.push_back(sys.C[0]);
  return sys;
}

SwitchedLinearSystem diagonal_pair() {
  SwitchedLinearSystem sys;
  sys.n = 2;
  sys.M = 2;
  sys.p = 2;
  Eigen::VectorXd d1(2), d2(2);
  d1 << 0.8, 0.2;
  d2 << 0.2, 0.8;
  sys.A = {d1.asDiagonal(), d2.asDiagonal()};
  sys.C = {Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Identity(2, 2)};
  return sys;
}

}  // namespace

TEST_CASE("observability_matrix stacks prefix products") {
  const SwitchedLinearSystem sys = rotation_system();
  const ObservabilityMatrix om = observability_matrix(sys, SwitchingWord({1, 1}));
  Eigen::MatrixXd expected(2, 2);
  expected << 1.0, 0.0, 0.0, -0.9;
  CHECK((om.O - expected).norm() < 1e-15);
}

TEST_CASE("window rank decisions on the rotation fixture") {
  const SwitchedLinearSystem sys = rotation_system();
  CHECK_FALSE(window_full_rank(sys, SwitchingWord({1})));
  CHECK(window_full_rank(sys, SwitchingWord({1, 1})));
  CHECK(observability_index(sys, 4) == 2);
  CHECK(pathwise_index(sys, 4) == 2);
}

TEST_CASE("some-word and every-word indices can differ") {
  const SwitchedLinearSystem sys = rotation_plus_identity();
  // Words starting with the rotation become observable at length two...
  CHECK(observability_index(sys, 4) == 2);
  // ...but the frozen all-2 word never does, at any length.
  CHECK(pathwise_index(sys, 4) == std::nullopt);
}

TEST_CASE("index search reports budget exhaustion with progress") {
  const SwitchedLinearSystem sys = rotation_plus_identity();
  try {
    pathwise_index(sys, 40, /*budget=*/64);
    FAIL("expected BudgetError");
  } catch (const BudgetError& e) {
    CHECK(e.depth_reached() >= 1);
    CHECK(e.budget() == 64);
  }
}

TEST_CASE("path_gram matches the sliced window's own stacked map") {
  const SwitchedLinearSystem sys = diagonal_pair();
  const SwitchingWord word({1, 2, 2, 1});
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(4, 4);
  P.diagonal() << 1.0, 2.0, 3.0, 4.0;
  P(0, 2) = P(2, 0) = 0.5;

  const Eigen::MatrixXd G = path_gram(sys, P, word, 1, 2);
  const Eigen::MatrixXd O = observability_matrix(sys, word.slice(1, 2)).O;
  CHECK((G - O.transpose() * P * O).norm() < 1e-14);
}

TEST_CASE("path_gram validates shape and symmetry") {
  const SwitchedLinearSystem sys = diagonal_pair();
  const SwitchingWord word({1, 2});
  CHECK_THROWS_AS(path_gram(sys, Eigen::MatrixXd::Identity(3, 3), word, 0, 2),
                  DimensionError);
  Eigen::MatrixXd lopsided = Eigen::MatrixXd::Identity(4, 4);
  lopsided(0, 1) = 0.3;  // not mirrored
  CHECK_THROWS_AS(path_gram(sys, lopsided, word, 0, 2), InvalidInputError);
  CHECK_THROWS_AS(path_gram(sys, Eigen::MatrixXd::Identity(4, 4), word, 1, 2),
                  InvalidInputError);
}

TEST_CASE("chi on the rotation fixture has a closed form") {
  const SwitchedLinearSystem sys = rotation_system();
  // G = diag(1, 0.81): chi = sqrt(det / lambda_min^2) = 1 / 0.9.
  CHECK(chi(sys, Eigen::MatrixXd::Identity(2, 2), 2) ==
        doctest::Approx(1.0 / 0.9).epsilon(1e-12));
}

TEST_CASE("chi is one for orthogonal-scaled full observation") {
  SwitchedLinearSystem sys = rotation_system();
  sys.p = 2;
  sys.C = {Eigen::MatrixXd::Identity(2, 2)};
  // O'O = (1 + 0.81) I: determinant and lambda_min^n coincide.
  CHECK(chi(sys, Eigen::MatrixXd::Identity(4, 4), 2) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("chi refuses rank-deficient windows by name") {
  // One output row against two states: every length-1 window is rank one.
  const SwitchedLinearSystem sys = rotation_plus_identity();
  CHECK_THROWS_AS(chi(sys, Eigen::MatrixXd::Identity(1, 1), 1), SingularGramError);
}

TEST_CASE("max_gram_condition on the rotation fixture") {
  const SwitchedLinearSystem sys = rotation_system();
  CHECK(max_gram_condition(sys, 2) == doctest::Approx(1.0 / 0.81).epsilon(1e-12));
}

TEST_CASE("lyapunov condition accepts the true rate and rejects a smaller one") {
  const SwitchedLinearSystem sys = diagonal_pair();
  const Eigen::MatrixXd P = Eigen::MatrixXd::Identity(2, 2);
  CHECK(lyapunov_condition_holds(sys, P, 0.8, 1, 1));
  CHECK_FALSE(lyapunov_condition_holds(sys, P, 0.8 * (1.0 - 1e-3), 1, 1));
}

TEST_CASE("jsr bracket is tight for the rotation and diagonal fixtures") {
  const JsrBracket rot = jsr_bracket(rotation_system(), 3);
  CHECK(rot.lower == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(rot.upper == doctest::Approx(0.9).epsilon(1e-12));

  const JsrBracket diag = jsr_bracket(diagonal_pair(), 4);
  CHECK(diag.lower == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(diag.upper == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("jsr bracket upper bound never increases with depth") {
  const SwitchedLinearSystem sys = random_system(3, 2, 1, Rng(5));
  double prev_upper = std::numeric_limits<double>::infinity();
  double prev_lower = 0.0;
  for (int q = 1; q <= 5; ++q) {
    const JsrBracket b = jsr_bracket(sys, q);
    CHECK(b.upper <= prev_upper + 1e-12);
    CHECK(b.lower >= prev_lower - 1e-12);
    CHECK(b.lower <= b.upper + 1e-12);
    prev_upper = b.upper;
    prev_lower = b.lower;
  }
}

TEST_CASE("jsr bracket stops at its node budget") {
  const SwitchedLinearSystem sys = random_system(2, 3, 1, Rng(9));
  CHECK_THROWS_AS(jsr_bracket(sys, 12, /*budget=*/50), BudgetError);
}

TEST_CASE("degeneracy screen flags scalar dynamics and clears generic ones") {
  SwitchedLinearSystem scalar;
  scalar.n = 2;
  scalar.M = 1;
  scalar.p = 2;
  scalar.A = {0.5 * Eigen::MatrixXd::Identity(2, 2)};
  scalar.C = {Eigen::MatrixXd::Identity(2, 2)};
  const DegeneracyReport flagged =
      degeneracy_diagnostic(scalar, SwitchingWord({1, 1}), 1, 4, 11);
  CHECK(flagged.verdict == DegeneracyVerdict::possibly_degenerate);
  CHECK(flagged.min_residual < 1e-12);
  CHECK(flagged.gamma_hat == doctest::Approx(0.5).epsilon(1e-10));

  SwitchedLinearSystem generic;
  generic.n = 2;
  generic.M = 2;
  generic.p = 2;
  Eigen::MatrixXd A1(2, 2), A2(2, 2);
  A1 << 0.5, 0.3, 0.0, 0.2;
  A2 << 0.1, -0.4, 0.3, 0.6;
  generic.A = {A1, A2};
  generic.C = {Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Identity(2, 2)};
  const DegeneracyReport cleared =
      degeneracy_diagnostic(generic, SwitchingWord({1, 2, 1}), 1, 4, 11);
  CHECK(cleared.verdict == DegeneracyVerdict::no_evidence);
  CHECK(cleared.min_residual > 1e-6);
}

TEST_CASE("degeneracy screen rejects a window covering the whole horizon") {
  const SwitchedLinearSystem sys = rotation_system();
  CHECK_THROWS_AS(degeneracy_diagnostic(sys, SwitchingWord({1, 1}), 2, 3, 1),
                  InvalidInputError);
}

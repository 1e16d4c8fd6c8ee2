#include <cmath>

#include "conegames/game.hpp"
#include "conegames/oracles.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace conegames;

namespace {

LinearOperator rn_op(const AlgebraPtr& a, std::initializer_list<double> rows) {
  int n = a->dim();
  MatrixXd m(n, n);
  int k = 0;
  for (double v : rows) m(k / n, k % n) = v, ++k;
  return from_dense(a, m);
}

void check_solution_contract(const LinearOperator& L, const GameSolution& sol) {
  const AlgebraPtr& a = L.algebra;
  CHECK(in_cone(sol.xbar, 1e-8));
  CHECK(in_cone(sol.ybar, 1e-8));
  CHECK(std::abs(trace_of(sol.xbar) - 1.0) <= 1e-9);
  CHECK(std::abs(trace_of(sol.ybar) - 1.0) <= 1e-9);
  double lo = lambda_min(L.apply(sol.xbar));
  Element lty = L.transpose().apply(sol.ybar);
  double hi = lambda_max(lty);
  CHECK(lo >= sol.value - sol.gap - 1e-8 * (1 + std::abs(sol.value)));
  CHECK(hi <= sol.value + sol.gap + 1e-8 * (1 + std::abs(sol.value)));
  (void)a;
}

}  // namespace

TEST_CASE("value: symmetric Z fixture with value zero") {
  auto r2 = Algebra::real_n(2);
  LinearOperator A = rn_op(r2, {1, -1, -1, 1});
  GameSolution sol = value(A);
  CHECK(std::abs(sol.value) <= 1e-6);
  CHECK(sol.gap <= 1e-5);
  check_solution_contract(A, sol);
}

TEST_CASE("value: identity operator gives 1/rank with the barycentric pair") {
  for (const auto& a : conegames::testing::sample_algebras()) {
    CAPTURE(a->describe());
    GameSolution sol = value(identity_op(a));
    CHECK(sol.value == doctest::Approx(1.0 / a->rank()).epsilon(1e-5));
    check_solution_contract(identity_op(a), sol);
    CHECK((sol.xbar.coords - a->unit_coords() / a->rank()).norm() <= 1e-3);
  }
}

TEST_CASE("value: all-minus-one matrix has value -1") {
  auto r2 = Algebra::real_n(2);
  LinearOperator A = rn_op(r2, {-1, -1, -1, -1});
  GameSolution sol = value(A);
  CHECK(sol.value == doctest::Approx(-1.0).epsilon(1e-6));
  auto [ok, v] = verify_pair(A, make_element(r2, Eigen::Vector2d(1, 0)),
                             make_element(r2, Eigen::Vector2d(0, 1)), 1e-6);
  CHECK(ok);
  CHECK(v == doctest::Approx(-1.0));
}

TEST_CASE("value agrees with the LP oracle on random classical games") {
  auto r3 = Algebra::real_n(3);
  RngStream rng(41);
  for (int rep = 0; rep < 25; ++rep) {
    MatrixXd A(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) A(i, j) = rng.unif(-2, 2);
    oracles::MatrixGameLP lp = oracles::solve_matrix_game_lp(A);
    GameSolution sol = value(from_dense(r3, A));
    CAPTURE(rep);
    CHECK(std::abs(sol.value - lp.value) <= 1e-6);
  }
}

TEST_CASE("LP oracle sanity on hand-checked games") {
  MatrixXd rps(3, 3);
  rps << 0, -1, 1, 1, 0, -1, -1, 1, 0;
  oracles::MatrixGameLP lp = oracles::solve_matrix_game_lp(rps);
  CHECK(std::abs(lp.value) <= 1e-12);
  for (int i = 0; i < 3; ++i) CHECK(lp.x[i] == doctest::Approx(1.0 / 3).epsilon(1e-9));

  MatrixXd z(2, 2);
  z << 1, -1, -1, 1;
  lp = oracles::solve_matrix_game_lp(z);
  CHECK(std::abs(lp.value) <= 1e-12);
  CHECK(lp.x[0] == doctest::Approx(0.5));
  CHECK(lp.y[0] == doctest::Approx(0.5));

  MatrixXd neg(2, 2);
  neg << -1, -1, -1, -1;
  lp = oracles::solve_matrix_game_lp(neg);
  CHECK(lp.value == doctest::Approx(-1.0));
}

TEST_CASE("verify_pair accepts certificates and rejects non-strategies") {
  auto r2 = Algebra::real_n(2);
  LinearOperator A = rn_op(r2, {1, -1, -1, 1});
  Element half = make_element(r2, Eigen::Vector2d(0.5, 0.5));
  auto [ok, v] = verify_pair(A, half, half, 1e-8);
  CHECK(ok);
  CHECK(v == doctest::Approx(0.0));

  for (const auto& a : conegames::testing::sample_algebras()) {
    Element xe = make_element(a, VectorXd(a->unit_coords() / a->rank()));
    auto [ok2, v2] = verify_pair(identity_op(a), xe, xe, 1e-8);
    CHECK(ok2);
    CHECK(v2 == doctest::Approx(1.0 / a->rank()));
  }

  CHECK_THROWS_AS(verify_pair(A, make_element(r2, Eigen::Vector2d(2, 0)),
                              make_element(r2, Eigen::Vector2d(0.5, 0.5)), 1e-8),
                  InvalidInput);
  CHECK_THROWS_AS(verify_pair(A, make_element(r2, Eigen::Vector2d(1.5, -0.5)),
                              make_element(r2, Eigen::Vector2d(0.5, 0.5)), 1e-8),
                  InvalidInput);
  // optimality check fails for a non-optimal pair on a nonzero-value game
  LinearOperator B = rn_op(r2, {2, 0, 0, 1});
  auto [ok3, v3] = verify_pair(B, make_element(r2, Eigen::Vector2d(1, 0)),
                               make_element(r2, Eigen::Vector2d(1, 0)), 1e-8);
  CHECK(!ok3);
  (void)v3;
}

TEST_CASE("completely mixed: kernel route on the value-zero Z fixture") {
  auto r2 = Algebra::real_n(2);
  MixedReport rep = is_completely_mixed(rn_op(r2, {1, -1, -1, 1}));
  CHECK(rep.verdict == MixedVerdict::completely_mixed);
  CHECK(rep.path == MixedPath::kernel_zero_value);
  CHECK(rep.kernel_dim == 1);
  CHECK(rep.xbar.coords[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(rep.ybar.coords[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(rep.s_commutation_residuals.first <= 1e-7);
  CHECK(rep.s_commutation_residuals.second <= 1e-7);
}

TEST_CASE("completely mixed: all-ones matrix is not (boundary optimal pair)") {
  auto r2 = Algebra::real_n(2);
  MixedReport rep = is_completely_mixed(rn_op(r2, {1, 1, 1, 1}));
  CHECK(rep.game_value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(rep.verdict == MixedVerdict::not_completely_mixed);
}

TEST_CASE("completely mixed: rotation-generator Lyapunov operator on S^2") {
  auto s2 = Algebra::sym(2);
  MatrixXd A(2, 2);
  A << 0, 1, -1, 0;
  LinearOperator LA = lyapunov_matrix_op(s2, A);
  MixedReport rep = is_completely_mixed(LA);
  CHECK(rep.verdict == MixedVerdict::completely_mixed);
  CHECK(rep.path == MixedPath::kernel_zero_value);
  // strategies are I/2
  VectorXd half_i = s2->unit_coords() / 2;
  CHECK((rep.xbar.coords - half_i).norm() <= 1e-6);
  CHECK((rep.ybar.coords - half_i).norm() <= 1e-6);
}

TEST_CASE("completely mixed: positive-value Z route via the inverse") {
  auto r3 = Algebra::real_n(3);
  // strictly diagonally dominant Z-matrix: positive stable
  LinearOperator A = rn_op(r3, {3, -1, -1, -1, 3, -1, -1, -1, 3});
  MixedReport rep = is_completely_mixed(A);
  CHECK(rep.verdict == MixedVerdict::completely_mixed);
  CHECK(rep.path == MixedPath::invertible_nonzero_value);
  CHECK(rep.game_value > 1e-6);
  CHECK(lambda_min(rep.xbar) > 1e-6);
}

TEST_CASE("quadratic representation characterization") {
  SUBCASE("R^3 singular irreducible M-transformation: all shifted values positive") {
    auto r3 = Algebra::real_n(3);
    LinearOperator S = rank_one_op(unit_element(r3), unit_element(r3));
    LinearOperator L = m_transform(3.0, S);  // rho(S) = 3
    QuadRepCheck qc = cm_by_quadratic_reps(L);
    CHECK(qc.exact);
    CHECK(qc.all_positive);
    CHECK(qc.worst_value > 1e-7);
    CHECK(is_completely_mixed(L).verdict == MixedVerdict::completely_mixed);
  }
  SUBCASE("R^2 zero operator: some shifted value stays zero") {
    auto r2 = Algebra::real_n(2);
    LinearOperator L = zero_op(r2);
    QuadRepCheck qc = cm_by_quadratic_reps(L);
    CHECK(qc.exact);
    CHECK(!qc.all_positive);
    CHECK(std::abs(qc.worst_value) <= 1e-7);
    CHECK(is_completely_mixed(L).verdict == MixedVerdict::not_completely_mixed);
  }
  SUBCASE("4x4 reducible block construction") {
    auto r4 = Algebra::real_n(4);
    // two independent singular irreducible 2x2 M-blocks
    LinearOperator L = rn_op(r4, {1, -1, 0, 0, -1, 1, 0, 0, 0, 0, 2, -2, 0, 0, -2, 2});
    QuadRepCheck qc = cm_by_quadratic_reps(L);
    CHECK(qc.exact);
    CHECK(!qc.all_positive);
    CHECK(is_completely_mixed(L).verdict == MixedVerdict::not_completely_mixed);
  }
  SUBCASE("S^2 skew Lyapunov operator: sampled minimum stays positive") {
    auto s2 = Algebra::sym(2);
    MatrixXd A(2, 2);
    A << 0, 1, -1, 0;
    LinearOperator LA = lyapunov_matrix_op(s2, A);
    SearchBudget b;
    b.multistarts = 24;
    b.seed = 3;
    QuadRepCheck qc = cm_by_quadratic_reps(LA, b);
    CHECK(!qc.exact);
    CHECK(qc.all_positive);
  }
  SUBCASE("hypothesis violation") {
    auto r2 = Algebra::real_n(2);
    CHECK_THROWS_AS(cm_by_quadratic_reps(identity_op(r2)), InvalidInput);
  }
}

TEST_CASE("Lyapunov game trichotomy") {
  SUBCASE("a = e") {
    for (const auto& a : conegames::testing::sample_algebras()) {
      CAPTURE(a->describe());
      TrichotomyReport rep = lyapunov_game_trichotomy(unit_element(a));
      CHECK(rep.verdict == Trichotomy::cm_positive_value);
      CHECK(rep.consistent);
      CHECK(rep.game_value == doctest::Approx(1.0 / a->rank()).epsilon(1e-5));
    }
  }
  SUBCASE("mixed signs on R^2") {
    auto r2 = Algebra::real_n(2);
    TrichotomyReport rep = lyapunov_game_trichotomy(make_element(r2, Eigen::Vector2d(1, -1)));
    CHECK(rep.verdict == Trichotomy::not_cm);
    CHECK(rep.consistent);
    CHECK(std::abs(rep.game_value) <= 1e-6);
  }
  SUBCASE("a = -e") {
    auto s2 = Algebra::sym(2);
    Element minus_e{s2, VectorXd(-s2->unit_coords())};
    TrichotomyReport rep = lyapunov_game_trichotomy(minus_e);
    CHECK(rep.verdict == Trichotomy::cm_negative_value);
    CHECK(rep.consistent);
    CHECK(rep.game_value == doctest::Approx(-0.5).epsilon(1e-5));
  }
}

TEST_CASE("sign invariance across normalization points") {
  auto r2 = Algebra::real_n(2);
  CHECK(sign_invariance_probe(rn_op(r2, {1, -1, -1, 1}), 5, 1));
  CHECK(sign_invariance_probe(identity_op(Algebra::sym(2)), 5, 2));
  CHECK(sign_invariance_probe(rn_op(r2, {-1, -1, -1, -1}), 5, 3));
}

TEST_CASE("duality gap and symmetry on random operators") {
  std::vector<AlgebraPtr> algebras{Algebra::real_n(5), Algebra::sym(3), Algebra::spin(4)};
  for (const auto& a : algebras) {
    CAPTURE(a->describe());
    RngStream rng(42);
    for (int rep = 0; rep < 10; ++rep) {
      MatrixXd m(a->dim(), a->dim());
      for (int i = 0; i < a->dim(); ++i)
        for (int j = 0; j < a->dim(); ++j) m(i, j) = rng.gauss();
      LinearOperator L = from_dense(a, m);
      GameSolution sol = value(L);
      CHECK(sol.gap <= 1e-5);
      check_solution_contract(L, sol);

      // v(−Lᵀ) = −v(L) and the swapped pair verifies
      LinearOperator Lneg{a, MatrixXd(-m.transpose())};
      GameSolution neg = value(Lneg);
      CHECK(std::abs(neg.value + sol.value) <= 2 * (sol.gap + neg.gap) + 1e-7);
      auto [ok, v] = verify_pair(Lneg, sol.ybar, sol.xbar,
                                 4 * (sol.gap + neg.gap) + 1e-7);
      CHECK(ok);
      (void)v;

      // value > 0 iff some interior u maps to the interior (checked via xbar)
      if (sol.value > 1e-6) {
        CHECK(lambda_min(L.apply(sol.xbar)) > 0);
        CHECK(lambda_min(sol.xbar) > 0);
      }
    }
  }
}

TEST_CASE("stein operator of a contraction has positive value at the unit") {
  auto s2 = Algebra::sym(2);
  MatrixXd A(2, 2);
  A << 0.3, 0.2, -0.1, 0.4;  // spectral norm well below 1
  LinearOperator SA = stein_matrix_op(s2, A);
  GameSolution sol = value(SA);
  CHECK(sol.value > 1e-6);
}

TEST_CASE("value with a custom normalization point") {
  auto r2 = Algebra::real_n(2);
  LinearOperator A = rn_op(r2, {1, -1, -1, 1});
  Element eprime = make_element(r2, Eigen::Vector2d(2.0, 0.5));
  GameSolution sol = value(A, eprime);
  CHECK(std::abs(sol.value) <= 1e-6);  // sign invariance: still zero
  CHECK(std::abs(inner(sol.xbar, eprime) - 1.0) <= 1e-8);
  CHECK(in_cone(sol.xbar, 1e-8));
}

TEST_CASE("positive value iff an interior point maps into the interior") {
  auto r3 = Algebra::real_n(3);
  RngStream rng(43);
  for (int rep = 0; rep < 8; ++rep) {
    MatrixXd m(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) = rng.gauss();
    LinearOperator L = from_dense(r3, m);
    GameSolution sol = value(L);
    if (sol.value > 1e-6) {
      // the optimal strategy itself is the witness
      CHECK(lambda_min(sol.xbar) > 0);
      CHECK(lambda_min(L.apply(sol.xbar)) > 0);
    } else {
      // refutation search: no interior u with L(u) interior should exist
      SearchBudget b;
      b.multistarts = 24;
      b.refine_steps = 80;
      b.seed = 1000 + rep;
      SearchResult sr = multistart_minimize(
          3,
          [&](const VectorXd& th) {
            VectorXd u = th.cwiseAbs().array() + 1e-3;
            u /= u.sum();
            return -lambda_min(Element{r3, VectorXd(m * u)});
          },
          b);
      CHECK(-sr.value <= sol.gap + 1e-7);
    }
  }
}

TEST_CASE("sign of the value matches the sign of alpha on completely mixed Z instances") {
  auto r3 = Algebra::real_n(3);
  RngStream rng(44);
  int checked = 0;
  for (int rep = 0; rep < 12; ++rep) {
    // random Z-matrix: nonpositive off-diagonals, varied diagonal shift
    MatrixXd m(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) = i == j ? 0.0 : -rng.unif(0.0, 1.0);
    m.diagonal().setConstant(rng.unif(-0.5, 2.5));
    LinearOperator L = from_dense(r3, m);
    SearchBudget b;
    b.seed = 45 + rep;
    if (is_z(L, b).verdict != ClassVerdict::certified) continue;
    MixedReport mixed = is_completely_mixed(L, tol::game_gap, 46 + rep);
    if (mixed.verdict != MixedVerdict::completely_mixed) continue;
    ++checked;
    double alpha = spectrum(L).alpha;
    auto sgn = [](double x) { return std::abs(x) <= 1e-7 ? 0 : (x > 0 ? 1 : -1); };
    CHECK(sgn(mixed.game_value) == sgn(alpha));
  }
  CHECK(checked > 3);
}

TEST_CASE("value-zero completely mixed games stay so under renormalization") {
  auto r2 = Algebra::real_n(2);
  MatrixXd m(2, 2);
  m << 1, -1, -1, 1;
  LinearOperator L = from_dense(r2, m);
  for (uint64_t s = 1; s <= 5; ++s) {
    RngStream rng(s);
    Element eprime = random_interior_point(r2, rng, 0.5, 2.0);
    GameSolution sol = value(L, eprime, 1e-8);
    CHECK(std::abs(sol.value) <= 1e-6);
    CHECK(lambda_min(sol.xbar) > 1e-6);
    CHECK(lambda_min(sol.ybar) > 1e-6);
  }
}

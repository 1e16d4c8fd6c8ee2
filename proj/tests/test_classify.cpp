#include <cmath>

#include "conegames/classify.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace conegames;
using conegames::testing::sample_algebras;

namespace {

// inner derivation [L_a, L_b]
LinearOperator random_derivation(const AlgebraPtr& alg, RngStream& rng) {
  LinearOperator la = lyapunov_op(random_element(alg, rng));
  LinearOperator lb = lyapunov_op(random_element(alg, rng));
  return LinearOperator{alg, la.matrix * lb.matrix - lb.matrix * la.matrix};
}

void recheck_pair_witness(const LinearOperator& L, const ClassificationReport& rep,
                          bool expect_nonzero_only = false) {
  REQUIRE(rep.witness_pair.has_value());
  const auto& [x, y] = *rep.witness_pair;
  CHECK(in_cone(x, 1e-7));
  CHECK(in_cone(y, 1e-7));
  CHECK(std::abs(inner(x, y)) <= 1e-7 * (1 + x.norm() * y.norm()));
  double violation = inner(L.apply(x), y);
  if (expect_nonzero_only)
    CHECK(std::abs(violation) > 1e-9);
  else
    CHECK(violation > 1e-9);
}

}  // namespace

TEST_CASE("is_positive") {
  SUBCASE("nonnegative matrix on R^n is certified exactly") {
    auto r3 = Algebra::real_n(3);
    MatrixXd m(3, 3);
    m << 1, 2, 0, 0, 1, 3, 2, 0, 1;
    ClassificationReport rep = is_positive(from_dense(r3, m));
    CHECK(rep.verdict == ClassVerdict::certified);
    CHECK(!rep.sampled);
  }
  SUBCASE("negative off-diagonal entry is refuted with a coordinate witness") {
    auto r2 = Algebra::real_n(2);
    MatrixXd m(2, 2);
    m << 1, -1, -1, 1;
    ClassificationReport rep = is_positive(from_dense(r2, m));
    REQUIRE(rep.verdict == ClassVerdict::refuted);
    REQUIRE(rep.witness_point.has_value());
    CHECK(lambda_min(Element{r2, m * rep.witness_point->coords}) < -1e-9);
  }
  SUBCASE("quadratic representations are certified positive (sampled)") {
    for (const auto& a : sample_algebras()) {
      CAPTURE(a->describe());
      RngStream rng(51);
      LinearOperator pa = quad_rep(random_element(a, rng));
      SearchBudget b;
      b.multistarts = 16;
      b.seed = 7;
      ClassificationReport rep = is_positive(pa, b);
      CHECK(rep.verdict == ClassVerdict::certified);
      if (a->kind() != AlgebraKind::RealVectors) CHECK(rep.sampled);
    }
  }
  SUBCASE("a transformation that leaks out of the cone is refuted") {
    auto s2 = Algebra::sym(2);
    // negate the E11 coordinate: sends E11 to −E11
    MatrixXd m = MatrixXd::Identity(3, 3);
    m(0, 0) = -1;
    ClassificationReport rep = is_positive(from_dense(s2, m));
    REQUIRE(rep.verdict == ClassVerdict::refuted);
    REQUIRE(rep.witness_point.has_value());
    CHECK(lambda_min(Element{s2, m * rep.witness_point->coords}) < -1e-9);
  }
}

TEST_CASE("is_z on R^n") {
  auto r3 = Algebra::real_n(3);
  SUBCASE("nonpositive off-diagonals certify") {
    MatrixXd m(3, 3);
    m << 5, -1, 0, -2, 7, -1, 0, -3, 2;
    ClassificationReport rep = is_z(from_dense(r3, m));
    CHECK(rep.verdict == ClassVerdict::certified);
    CHECK(!rep.sampled);
  }
  SUBCASE("positive off-diagonal refutes with a complementary pair") {
    auto r2 = Algebra::real_n(2);
    MatrixXd m(2, 2);
    m << 1, 1, 1, 1;
    ClassificationReport rep = is_z(from_dense(r2, m));
    REQUIRE(rep.verdict == ClassVerdict::refuted);
    recheck_pair_witness(from_dense(r2, m), rep);
  }
}

TEST_CASE("is_z on S^n: Lyapunov operators certify, perturbations refute") {
  auto s2 = Algebra::sym(2);
  RngStream rng(52);
  SearchBudget b;
  b.multistarts = 24;
  b.refine_steps = 120;
  b.seed = 9;
  for (int rep_i = 0; rep_i < 5; ++rep_i) {
    MatrixXd A(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) A(i, j) = rng.gauss();
    LinearOperator LA = lyapunov_matrix_op(s2, A);
    ClassificationReport rep = is_z(LA, b);
    CHECK(rep.verdict == ClassVerdict::certified);
    CHECK(rep.sampled);
  }
  // rank_one(e,e) maps everything to multiples of I: positive but not Z
  LinearOperator S = rank_one_op(unit_element(s2), unit_element(s2));
  ClassificationReport rep = is_z(S, b);
  REQUIRE(rep.verdict == ClassVerdict::refuted);
  recheck_pair_witness(S, rep);
}

TEST_CASE("stern-wolkowicz test") {
  SUBCASE("identity is a Lorentz Z-matrix") {
    auto [ok, gamma] = stern_wolkowicz_test(MatrixXd(MatrixXd::Identity(4, 4)));
    CHECK(ok);
    REQUIRE(gamma.has_value());
    // gamma = 2 is a known feasible point: 2J − 2J = 0
    VectorXd jd = VectorXd::Ones(4);
    jd.tail(3).setConstant(-1);
    MatrixXd J = jd.asDiagonal();
    MatrixXd M = 2 * J;  // JA + AᵀJ for A = I
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(*gamma * J - M);
    CHECK(es.eigenvalues().minCoeff() >= -1e-8);
  }
  SUBCASE("A = -J is feasible (gamma = 0 leaves 2I)") {
    VectorXd jd = VectorXd::Ones(3);
    jd.tail(2).setConstant(-1);
    MatrixXd J = jd.asDiagonal();
    auto [ok, gamma] = stern_wolkowicz_test(MatrixXd(-J));
    CHECK(ok);
  }
  SUBCASE("agreement with the definitional boundary-pair margin, 100 x 4x4 and 6x6") {
    for (int n : {4, 6}) {
      auto ln = Algebra::spin(n);
      RngStream rng(53 + n);
      int agreements = 0;
      for (int trial = 0; trial < 100; ++trial) {
        MatrixXd A(n, n);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) A(i, j) = rng.gauss();
        auto [sw_ok, gamma] = stern_wolkowicz_test(A);
        LorentzZMargin lz = lorentz_z_margin(from_dense(ln, A));
        bool def_ok = lz.margin <= 1e-9 * std::max(1.0, A.norm());
        if (sw_ok == def_ok) ++agreements;
        (void)gamma;
      }
      CHECK(agreements == 100);
    }
  }
}

TEST_CASE("is_z on the spin algebra goes through the exact Lorentz route") {
  auto l4 = Algebra::spin(4);
  ClassificationReport rep = is_z(identity_op(l4));
  CHECK(rep.verdict == ClassVerdict::certified);
  CHECK(!rep.sampled);
  CHECK(rep.gamma.has_value());

  // a rank-one cone map is positive but far from Z
  RngStream rng(54);
  Element x = conegames::testing::random_cone_element(l4, rng);
  LinearOperator S = rank_one_op(unit_element(l4), unit_element(l4));
  ClassificationReport rep2 = is_z(S);
  REQUIRE(rep2.verdict == ClassVerdict::refuted);
  recheck_pair_witness(S, rep2);
  (void)x;
}

TEST_CASE("is_lyapunov_like") {
  SUBCASE("multiplication operators certify with zero derivation") {
    for (const auto& a : sample_algebras()) {
      CAPTURE(a->describe());
      RngStream rng(55);
      Element av = random_element(a, rng);
      ClassificationReport rep = is_lyapunov_like(lyapunov_op(av));
      CHECK(rep.verdict == ClassVerdict::certified);
      REQUIRE(rep.decomposition.has_value());
      CHECK((rep.decomposition->first.coords - av.coords).norm() <= 1e-7 * (1 + av.norm()));
      CHECK(rep.decomposition->second.matrix.norm() <= 1e-7 * (1 + av.norm()));
    }
  }
  SUBCASE("skew rotation generator on S^2: a = 0, derivation residual tiny") {
    auto s2 = Algebra::sym(2);
    MatrixXd A(2, 2);
    A << 0, 1, -1, 0;
    LinearOperator LA = lyapunov_matrix_op(s2, A);
    ClassificationReport rep = is_lyapunov_like(LA);
    CHECK(rep.verdict == ClassVerdict::certified);
    REQUIRE(rep.decomposition.has_value());
    CHECK(rep.decomposition->first.coords.norm() <= 1e-8);
    CHECK((rep.decomposition->second.matrix - LA.matrix).norm() <= 1e-8);
  }
  SUBCASE("Lyapunov-like plus inner derivation certifies everywhere") {
    for (const auto& a : sample_algebras()) {
      CAPTURE(a->describe());
      RngStream rng(56);
      LinearOperator L = lyapunov_op(random_element(a, rng)) + random_derivation(a, rng);
      ClassificationReport rep = is_lyapunov_like(L);
      CHECK(rep.verdict == ClassVerdict::certified);
    }
  }
  SUBCASE("the symmetric Z-matrix is not Lyapunov-like on R^2") {
    auto r2 = Algebra::real_n(2);
    MatrixXd m(2, 2);
    m << 1, -1, -1, 1;
    ClassificationReport rep = is_lyapunov_like(from_dense(r2, m));
    REQUIRE(rep.verdict == ClassVerdict::refuted);
    recheck_pair_witness(from_dense(r2, m), rep, /*expect_nonzero_only=*/true);
  }
}

TEST_CASE("containment invariants on random instances") {
  SearchBudget b;
  b.multistarts = 16;
  b.refine_steps = 80;
  for (const auto& a : sample_algebras()) {
    CAPTURE(a->describe());
    RngStream rng(57);
    for (int trial = 0; trial < 3; ++trial) {
      // Lyapunov-like instance
      LinearOperator L = lyapunov_op(random_element(a, rng)) + random_derivation(a, rng);
      b.seed = 100 + trial;
      ClassificationReport ll = is_lyapunov_like(L);
      REQUIRE(ll.verdict == ClassVerdict::certified);
      ClassificationReport z = is_z(L, b);
      CHECK(z.verdict == ClassVerdict::certified);  // LL ⊆ Z
      // certified Z passes exp(−tL) positivity sampling
      for (double t : {0.1, 1.0}) {
        ClassificationReport pos = is_positive(op_exp(L, -t), b);
        CHECK(pos.verdict == ClassVerdict::certified);
      }
    }
  }
}

TEST_CASE("LL minus positive: constructor and heuristic splitter") {
  auto s2 = Algebra::sym(2);
  RngStream rng(58);
  SUBCASE("shifted Lyapunov-like operators split cleanly") {
    Element av = random_element(s2, rng);
    LinearOperator L = make_ll_minus_pi(lyapunov_op(av) + random_derivation(s2, rng),
                                        2.0 * identity_op(s2));
    LLMinusPiSplit split = try_split_ll_minus_pi(L);
    CHECK(split.verdict == ClassVerdict::certified);
    // re-assemble: (L_a + D) − positive == L
    LinearOperator rebuilt =
        lyapunov_op(split.a) + split.derivation - split.positive_part;
    CHECK((rebuilt.matrix - L.matrix).norm() <= 1e-7 * (1 + L.norm()));
  }
  SUBCASE("singular M-transformation defeats the heuristic (inconclusive, not refuted)") {
    auto r3 = Algebra::real_n(3);
    LinearOperator S = rank_one_op(unit_element(r3), unit_element(r3));
    LinearOperator L = m_transform(3.0, S);
    LLMinusPiSplit split = try_split_ll_minus_pi(L);
    CHECK(split.verdict == ClassVerdict::inconclusive);
  }
}

TEST_CASE("certified Z operators expose the least-real-part eigenvector in the cone") {
  SearchBudget b;
  b.seed = 59;
  // R^n Z-matrices
  auto r4 = Algebra::real_n(4);
  RngStream rng(60);
  for (int rep = 0; rep < 6; ++rep) {
    MatrixXd m(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) m(i, j) = i == j ? rng.unif(0, 2) : -rng.unif(0, 1);
    LinearOperator L = from_dense(r4, m);
    REQUIRE(is_z(L, b).verdict == ClassVerdict::certified);
    SpectrumReport spec_rep = spectrum(L);
    REQUIRE(spec_rep.perron_vector.has_value());
    CHECK(lambda_min(*spec_rep.perron_vector) >= -1e-7);
  }
  // Lyapunov operators on S^2
  auto s2 = Algebra::sym(2);
  for (int rep = 0; rep < 4; ++rep) {
    MatrixXd A(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) A(i, j) = rng.gauss();
    LinearOperator LA = lyapunov_matrix_op(s2, A);
    b.seed = 61 + rep;
    if (is_z(LA, b).verdict != ClassVerdict::certified) continue;
    SpectrumReport spec_rep = spectrum(LA);
    REQUIRE(spec_rep.perron_vector.has_value());
    CHECK(lambda_min(*spec_rep.perron_vector) >= -1e-7);
  }
}

TEST_CASE("positively stable Z operators have a positive inverse") {
  auto r3 = Algebra::real_n(3);
  MatrixXd m(3, 3);
  m << 3, -1, -1, -1, 3, -1, -1, -1, 3;  // strictly diagonally dominant Z
  LinearOperator L = from_dense(r3, m);
  Element u = unit_element(r3);
  REQUIRE(lambda_min(L.apply(u)) > 0);  // interior image of an interior point
  MatrixXd inv = m.inverse();
  RngStream rng(62);
  for (int rep = 0; rep < 20; ++rep) {
    Element x = conegames::testing::random_cone_element(r3, rng);
    CHECK(in_cone(Element{r3, VectorXd(inv * x.coords)}, 1e-9));
  }
}

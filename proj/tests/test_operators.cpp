#include <cmath>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "test_support.hpp"

using namespace conegames;
using conegames::testing::sample_algebras;

namespace {

MatrixXd mat2(double a, double b, double c, double d) {
  MatrixXd m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST_CASE("operator plumbing") {
  auto r3 = Algebra::real_n(3);
  RngStream rng(31);
  LinearOperator I = identity_op(r3);
  Element x = random_element(r3, rng);
  CHECK((I.apply(x).coords - x.coords).norm() == 0.0);

  LinearOperator S = from_dense(r3, [] {
    MatrixXd m(3, 3);
    m << 1, 2, 0, 2, 5, 1, 0, 1, 4;
    return m;
  }());
  CHECK((S.transpose().matrix - S.matrix).norm() == 0.0);
  CHECK((S.transpose().transpose().matrix - S.matrix).norm() == 0.0);

  LinearOperator L = from_dense(r3, MatrixXd::Random(3, 3));
  LinearOperator M = from_dense(r3, MatrixXd::Random(3, 3));
  Element y = random_element(r3, rng);
  CHECK(((L + M).apply(y).coords - (L.apply(y).coords + M.apply(y).coords)).norm() < 1e-12);
  CHECK(((L * M).apply(y).coords - L.apply(M.apply(y)).coords).norm() < 1e-12);
  CHECK(((2.5 * L).apply(y).coords - 2.5 * L.apply(y).coords).norm() < 1e-12);

  // adjoint identity <L^T x, y> = <x, L y>
  Element z = random_element(r3, rng);
  CHECK(std::abs(inner(L.transpose().apply(y), z) - inner(y, L.apply(z))) <=
        1e-12 * (1 + L.norm() * y.norm() * z.norm()));

  CHECK_THROWS_AS(from_dense(r3, MatrixXd::Zero(2, 2)), InvalidInput);
}

TEST_CASE("lyapunov_matrix_op") {
  auto s2 = Algebra::sym(2);
  SUBCASE("A = I gives twice the identity") {
    LinearOperator L = lyapunov_matrix_op(s2, MatrixXd(MatrixXd::Identity(2, 2)));
    CHECK((L.matrix - 2 * MatrixXd::Identity(3, 3)).norm() < 1e-13);
  }
  SUBCASE("rotation generator annihilates I") {
    LinearOperator L = lyapunov_matrix_op(s2, mat2(0, 1, -1, 0));
    CHECK(L.apply(unit_element(s2)).coords.norm() < 1e-13);
    // skew: L + L^T = 0
    CHECK((L.matrix + L.matrix.transpose()).norm() < 1e-13);
  }
  SUBCASE("coordinate action matches the matrix action") {
    RngStream rng(32);
    MatrixXd A = MatrixXd::Random(3, 3);
    auto s3 = Algebra::sym(3);
    LinearOperator L = lyapunov_matrix_op(s3, A);
    Element x = random_element(s3, rng);
    MatrixXd X = sym_to_matrix(s3, x.coords);
    MatrixXd want = A * X + X * A.transpose();
    CHECK((sym_to_matrix(s3, L.apply(x).coords) - want).norm() <= 1e-12 * (1 + want.norm()));
  }
  SUBCASE("H^n variant uses the conjugate transpose") {
    auto h2 = Algebra::herm(2);
    Eigen::MatrixXcd A(2, 2);
    A << std::complex<double>(0, 1), 0, 0, std::complex<double>(1, -1);
    LinearOperator L = lyapunov_matrix_op(h2, A);
    RngStream rng(33);
    Element x = random_element(h2, rng);
    Eigen::MatrixXcd X = herm_to_matrix(h2, x.coords);
    Eigen::MatrixXcd want = A * X + X * A.adjoint();
    CHECK((herm_to_matrix(h2, L.apply(x).coords) - want).norm() <= 1e-12 * (1 + want.norm()));
  }
  SUBCASE("kind mismatch") {
    CHECK_THROWS_AS(lyapunov_matrix_op(Algebra::real_n(3), MatrixXd(MatrixXd::Identity(3, 3))),
                    InvalidInput);
  }
}

TEST_CASE("stein_matrix_op") {
  auto s2 = Algebra::sym(2);
  CHECK((stein_matrix_op(s2, MatrixXd(MatrixXd::Zero(2, 2))).matrix -
         MatrixXd::Identity(3, 3))
            .norm() < 1e-13);
  CHECK(stein_matrix_op(s2, MatrixXd(MatrixXd::Identity(2, 2))).matrix.norm() < 1e-13);
}

TEST_CASE("rank_one_op") {
  auto r3 = Algebra::real_n(3);
  Element e = unit_element(r3);
  LinearOperator S = rank_one_op(e, e);
  RngStream rng(34);
  Element z = random_element(r3, rng);
  CHECK((S.apply(z).coords - trace_of(z) * e.coords).norm() < 1e-13);

  VectorXd y(3), w(3);
  y << 1, 0, 0;
  w << 0, 1, 0;
  CHECK(rank_one_op(e, make_element(r3, y)).apply(make_element(r3, w)).coords.norm() == 0.0);
}

TEST_CASE("m_transform") {
  auto r3 = Algebra::real_n(3);
  Element e = unit_element(r3);
  LinearOperator S = rank_one_op(e, e);
  double rho = spectrum(S).rho;
  CHECK(rho == doctest::Approx(3.0));
  LinearOperator L = m_transform(rho, S);
  CHECK(L.apply(e).coords.norm() < 1e-12);  // 1 is the Perron vector
  CHECK(m_transform(0, zero_op(r3)).matrix.norm() == 0.0);
}

TEST_CASE("matrix exponential") {
  auto r2 = Algebra::real_n(2);
  SUBCASE("exp(0) = I") {
    LinearOperator L = from_dense(r2, mat2(3, 1, -2, 0));
    CHECK((op_exp(L, 0.0).matrix - MatrixXd::Identity(2, 2)).norm() < 1e-14);
  }
  SUBCASE("diagonal case") {
    LinearOperator L = from_dense(r2, mat2(1, 0, 0, 2));
    for (double t : {0.5, 1.0, 3.0}) {
      MatrixXd E = op_exp(L, -t).matrix;
      CHECK(E(0, 0) == doctest::Approx(std::exp(-t)).epsilon(1e-12));
      CHECK(E(1, 1) == doctest::Approx(std::exp(-2 * t)).epsilon(1e-12));
      CHECK(std::abs(E(0, 1)) < 1e-14);
    }
  }
  SUBCASE("Z-matrix exponential is entrywise nonnegative (closed form check)") {
    LinearOperator A = from_dense(r2, mat2(1, -1, -1, 1));
    MatrixXd E = op_exp(A, -1.0).matrix;
    double c = 0.5 * (1 + std::exp(-2.0)), s = 0.5 * (1 - std::exp(-2.0));
    CHECK(E(0, 0) == doctest::Approx(c).epsilon(1e-12));
    CHECK(E(0, 1) == doctest::Approx(s).epsilon(1e-12));
    CHECK(E.minCoeff() >= 0.0);
  }
  SUBCASE("semigroup law and transpose commutation") {
    for (const auto& a : sample_algebras()) {
      RngStream rng(35);
      LinearOperator L{a, MatrixXd::Random(a->dim(), a->dim())};
      double s = 0.4, t = 1.3;
      MatrixXd lhs = op_exp(L, s + t).matrix;
      MatrixXd rhs = op_exp(L, s).matrix * op_exp(L, t).matrix;
      CHECK((lhs - rhs).norm() <= 1e-8 * (1 + lhs.norm()));
      CHECK((op_exp(L.transpose(), t).matrix - op_exp(L, t).matrix.transpose()).norm() <=
            1e-10 * (1 + lhs.norm()));
    }
  }
  SUBCASE("accuracy vs spectral route for symmetric matrices up to ||tL|| = 50") {
    auto r6 = Algebra::real_n(6);
    RngStream rng(36);
    MatrixXd G(6, 6);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) G(i, j) = rng.gauss();
    MatrixXd Sym = 0.5 * (G + G.transpose());
    Sym *= 50.0 / Sym.cwiseAbs().rowwise().sum().maxCoeff();
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(Sym);
    MatrixXd viaspec = es.eigenvectors() *
                       es.eigenvalues().array().exp().matrix().asDiagonal() *
                       es.eigenvectors().transpose();
    MatrixXd viapade = op_exp(from_dense(r6, Sym), 1.0).matrix;
    CHECK((viapade - viaspec).norm() <= 1e-10 * viaspec.norm());
  }
  SUBCASE("overflow guard") {
    LinearOperator L = from_dense(r2, mat2(1000, 0, 0, 1000));
    CHECK_THROWS_AS(op_exp(L, 1.0), ComputeError);
  }
}

TEST_CASE("spectrum") {
  auto r2 = Algebra::real_n(2);
  SUBCASE("identity") {
    SpectrumReport rep = spectrum(identity_op(r2));
    CHECK(rep.alpha == doctest::Approx(1.0));
    CHECK(rep.rho == doctest::Approx(1.0));
    CHECK(kernel_basis(identity_op(r2)).empty());
  }
  SUBCASE("symmetric Z-matrix: alpha = 0, kernel spanned by the ones vector") {
    LinearOperator A = from_dense(r2, mat2(1, -1, -1, 1));
    SpectrumReport rep = spectrum(A);
    CHECK(rep.alpha == doctest::Approx(0.0).epsilon(1e-12));
    auto ker = kernel_basis(A);
    REQUIRE(ker.size() == 1);
    VectorXd v = ker[0].coords;
    if (v[0] < 0) v = -v;
    CHECK(v[0] == doctest::Approx(1 / std::sqrt(2.0)));
    CHECK(v[1] == doctest::Approx(1 / std::sqrt(2.0)));
    REQUIRE(rep.perron_vector.has_value());
    CHECK(in_cone(*rep.perron_vector, 1e-9));
  }
  SUBCASE("nilpotent: rho = 0") {
    LinearOperator A = from_dense(r2, mat2(0, 1, 0, 0));
    CHECK(spectrum(A).rho == doctest::Approx(0.0));
  }
}

TEST_CASE("group inverse") {
  auto r2 = Algebra::real_n(2);
  SUBCASE("invertible: equals the inverse") {
    MatrixXd m = mat2(2, 1, 0, 3);
    LinearOperator L = from_dense(r2, m);
    CHECK((group_inverse(L).matrix - m.inverse()).norm() < 1e-12);
  }
  SUBCASE("singular symmetric: L# = L/4 for eigenvalues {0,2}") {
    LinearOperator L = from_dense(r2, mat2(1, -1, -1, 1));
    LinearOperator G = group_inverse(L);
    CHECK((G.matrix - L.matrix / 4.0).norm() < 1e-12);
    CHECK((L.matrix * G.matrix * L.matrix - L.matrix).norm() <= 1e-8 * L.norm());
    CHECK((G.matrix * L.matrix * G.matrix - G.matrix).norm() <= 1e-8 * L.norm());
    CHECK((L.matrix * G.matrix - G.matrix * L.matrix).norm() <= 1e-8 * L.norm());
  }
  SUBCASE("nilpotent: no group inverse, witness provided") {
    LinearOperator L = from_dense(r2, mat2(0, 1, 0, 0));
    try {
      group_inverse(L);
      FAIL("expected GroupInverseError");
    } catch (const GroupInverseError& err) {
      // witness in ker L^2 but not in ker L
      CHECK((L.matrix * L.matrix * err.witness.coords).norm() < 1e-10);
      CHECK((L.matrix * err.witness.coords).norm() > 1e-6);
    }
  }
  SUBCASE("random index-one singular operators satisfy the three identities") {
    auto r5 = Algebra::real_n(5);
    RngStream rng(37);
    for (int rep = 0; rep < 20; ++rep) {
      MatrixXd X(5, 5);
      do {
        for (int i = 0; i < 5; ++i)
          for (int j = 0; j < 5; ++j) X(i, j) = rng.gauss();
      } while (std::abs(X.determinant()) < 1e-3);
      VectorXd d(5);
      d << rng.unif(0.5, 2), rng.unif(0.5, 2), rng.unif(0.5, 2), 0, 0;
      MatrixXd m = X * d.asDiagonal() * X.inverse();
      LinearOperator L = from_dense(r5, m);
      LinearOperator G = group_inverse(L);
      double scale = L.norm();
      CHECK((L.matrix * G.matrix * L.matrix - L.matrix).norm() <= 1e-8 * scale);
      CHECK((G.matrix * L.matrix * G.matrix - G.matrix).norm() <= 1e-8 * scale);
      CHECK((L.matrix * G.matrix - G.matrix * L.matrix).norm() <= 1e-8 * scale);
    }
  }
}

TEST_CASE("kernel basis is orthonormal and annihilated") {
  auto r4 = Algebra::real_n(4);
  MatrixXd m = MatrixXd::Zero(4, 4);
  m(0, 0) = 1;
  m(1, 1) = 2;  // rank 2
  LinearOperator L = from_dense(r4, m);
  auto ker = kernel_basis(L);
  REQUIRE(ker.size() == 2);
  for (const auto& v : ker) {
    CHECK(v.coords.norm() == doctest::Approx(1.0));
    CHECK((m * v.coords).norm() <= 1e-12);
  }
  CHECK(std::abs(ker[0].coords.dot(ker[1].coords)) < 1e-12);
}

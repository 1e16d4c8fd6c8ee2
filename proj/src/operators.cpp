#include "conegames/operators.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

namespace conegames {

Element LinearOperator::apply(const Element& x) const {
  if (!algebra || !x.algebra) throw InvalidInput("apply: missing algebra");
  if (x.coords.size() != matrix.cols()) throw InvalidInput("apply: dimension mismatch");
  return {x.algebra, matrix * x.coords};
}

LinearOperator operator+(const LinearOperator& a, const LinearOperator& b) {
  if (a.matrix.rows() != b.matrix.rows() || a.matrix.cols() != b.matrix.cols())
    throw InvalidInput("operator+: shape mismatch");
  return {a.algebra, a.matrix + b.matrix};
}
LinearOperator operator-(const LinearOperator& a, const LinearOperator& b) {
  if (a.matrix.rows() != b.matrix.rows() || a.matrix.cols() != b.matrix.cols())
    throw InvalidInput("operator-: shape mismatch");
  return {a.algebra, a.matrix - b.matrix};
}
LinearOperator operator*(const LinearOperator& a, const LinearOperator& b) {
  if (a.matrix.cols() != b.matrix.rows()) throw InvalidInput("compose: shape mismatch");
  return {a.algebra, a.matrix * b.matrix};
}
LinearOperator operator*(double c, const LinearOperator& a) { return {a.algebra, c * a.matrix}; }

LinearOperator from_dense(const AlgebraPtr& a, MatrixXd m) {
  if (!a) throw InvalidInput("from_dense: null algebra");
  if (m.rows() != a->dim() || m.cols() != a->dim())
    throw InvalidInput("from_dense: expected " + std::to_string(a->dim()) + "x" +
                       std::to_string(a->dim()) + " matrix, got " + std::to_string(m.rows()) +
                       "x" + std::to_string(m.cols()));
  return {a, std::move(m)};
}

LinearOperator identity_op(const AlgebraPtr& a) {
  return {a, MatrixXd::Identity(a->dim(), a->dim())};
}
LinearOperator zero_op(const AlgebraPtr& a) { return {a, MatrixXd::Zero(a->dim(), a->dim())}; }

LinearOperator lyapunov_op(const Element& a) {
  const AlgebraPtr& alg = a.algebra;
  int d = alg->dim();
  MatrixXd m(d, d);
  VectorXd basis = VectorXd::Zero(d);
  for (int k = 0; k < d; ++k) {
    basis[k] = 1.0;
    m.col(k) = alg->product(a.coords, basis);
    basis[k] = 0.0;
  }
  return {alg, std::move(m)};
}

LinearOperator quad_rep(const Element& a) {
  LinearOperator la = lyapunov_op(a);
  LinearOperator la2 = lyapunov_op(jordan_product(a, a));
  return {a.algebra, 2.0 * la.matrix * la.matrix - la2.matrix};
}

PeirceProjectors peirce_projectors(const Idempotent& c) {
  // For an idempotent, P_c projects onto V(c,1) and P_{e−c} onto V(c,0).
  const AlgebraPtr& alg = c.element.algebra;
  if (c.rank_k == 0) throw InvalidInput("peirce_projectors: zero idempotent");
  Element comp{alg, alg->unit_coords() - c.element.coords};
  LinearOperator p1 = quad_rep(c.element);
  LinearOperator p0 = quad_rep(comp);
  LinearOperator ph{alg, MatrixXd::Identity(alg->dim(), alg->dim()) - p1.matrix - p0.matrix};
  return {p1, ph, p0};
}

std::vector<PeirceBlock> frame_peirce_blocks(const std::vector<Element>& frame) {
  if (frame.empty()) throw InvalidInput("frame_peirce_blocks: empty frame");
  const AlgebraPtr& alg = frame[0].algebra;
  int n = static_cast<int>(frame.size());
  if (n != alg->rank()) throw InvalidInput("frame_peirce_blocks: frame size != rank");
  // validate the frame
  for (int i = 0; i < n; ++i) {
    Element sq = jordan_product(frame[i], frame[i]);
    if ((sq.coords - frame[i].coords).norm() > 1e-8)
      throw InvalidInput("frame_peirce_blocks: frame element is not idempotent");
    for (int j = i + 1; j < n; ++j)
      if (jordan_product(frame[i], frame[j]).coords.norm() > 1e-8)
        throw InvalidInput("frame_peirce_blocks: frame elements are not orthogonal");
  }
  VectorXd sum = VectorXd::Zero(alg->dim());
  for (const Element& f : frame) sum += f.coords;
  if ((sum - alg->unit_coords()).norm() > 1e-8)
    throw InvalidInput("frame_peirce_blocks: frame does not sum to the unit");

  std::vector<LinearOperator> mult;
  mult.reserve(n);
  for (const Element& f : frame) mult.push_back(lyapunov_op(f));

  std::vector<PeirceBlock> blocks;
  for (int i = 0; i < n; ++i) {
    MatrixXd p = frame[i].coords * frame[i].coords.transpose();  // <e_i,e_i> = 1
    blocks.push_back({i, i, 1, {alg, std::move(p)}});
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      MatrixXd p = 4.0 * mult[i].matrix * mult[j].matrix;
      int bdim = static_cast<int>(std::lround(p.trace()));
      if (bdim == 0) continue;
      blocks.push_back({i, j, bdim, {alg, std::move(p)}});
    }
  return blocks;
}

namespace {

MatrixXd operator_on_basis(const AlgebraPtr& alg,
                           const std::function<VectorXd(const VectorXd&)>& f) {
  int d = alg->dim();
  MatrixXd m(d, d);
  VectorXd basis = VectorXd::Zero(d);
  for (int k = 0; k < d; ++k) {
    basis[k] = 1.0;
    m.col(k) = f(basis);
    basis[k] = 0.0;
  }
  return m;
}

}  // namespace

LinearOperator lyapunov_matrix_op(const AlgebraPtr& a, const MatrixXd& A) {
  if (a->kind() == AlgebraKind::SymMatrices) {
    if (A.rows() != a->param_n() || A.cols() != a->param_n())
      throw InvalidInput("lyapunov_matrix_op: matrix size != n");
    return {a, operator_on_basis(a, [&](const VectorXd& c) {
              MatrixXd X = sym_to_matrix(a, c);
              return sym_from_matrix(a, A * X + X * A.transpose());
            })};
  }
  if (a->kind() == AlgebraKind::HermMatrices)
    return lyapunov_matrix_op(a, Eigen::MatrixXcd(A.cast<std::complex<double>>()));
  throw InvalidInput("lyapunov_matrix_op: algebra must be S^n or H^n");
}

LinearOperator lyapunov_matrix_op(const AlgebraPtr& a, const Eigen::MatrixXcd& A) {
  if (a->kind() != AlgebraKind::HermMatrices)
    throw InvalidInput("lyapunov_matrix_op: complex A needs H^n");
  if (A.rows() != a->param_n() || A.cols() != a->param_n())
    throw InvalidInput("lyapunov_matrix_op: matrix size != n");
  return {a, operator_on_basis(a, [&](const VectorXd& c) {
            Eigen::MatrixXcd X = herm_to_matrix(a, c);
            return herm_from_matrix(a, A * X + X * A.adjoint());
          })};
}

LinearOperator stein_matrix_op(const AlgebraPtr& a, const MatrixXd& A) {
  if (a->kind() == AlgebraKind::SymMatrices) {
    if (A.rows() != a->param_n() || A.cols() != a->param_n())
      throw InvalidInput("stein_matrix_op: matrix size != n");
    return {a, operator_on_basis(a, [&](const VectorXd& c) {
              MatrixXd X = sym_to_matrix(a, c);
              return sym_from_matrix(a, X - A * X * A.transpose());
            })};
  }
  if (a->kind() == AlgebraKind::HermMatrices)
    return stein_matrix_op(a, Eigen::MatrixXcd(A.cast<std::complex<double>>()));
  throw InvalidInput("stein_matrix_op: algebra must be S^n or H^n");
}

LinearOperator stein_matrix_op(const AlgebraPtr& a, const Eigen::MatrixXcd& A) {
  if (a->kind() != AlgebraKind::HermMatrices)
    throw InvalidInput("stein_matrix_op: complex A needs H^n");
  if (A.rows() != a->param_n() || A.cols() != a->param_n())
    throw InvalidInput("stein_matrix_op: matrix size != n");
  return {a, operator_on_basis(a, [&](const VectorXd& c) {
            Eigen::MatrixXcd X = herm_to_matrix(a, c);
            return herm_from_matrix(a, X - A * X * A.adjoint());
          })};
}

LinearOperator rank_one_op(const Element& x, const Element& y) {
  if (x.algebra->dim() != y.algebra->dim()) throw InvalidInput("rank_one_op: dimension mismatch");
  return {x.algebra, x.coords * y.coords.transpose()};
}

LinearOperator m_transform(double r, const LinearOperator& S) {
  return {S.algebra, r * MatrixXd::Identity(S.matrix.rows(), S.matrix.cols()) - S.matrix};
}

// ---------------------------------------------------------------------------
// Matrix exponential: scaling-and-squaring with Padé(13,13).

namespace {

void pade13(const MatrixXd& A, MatrixXd& U, MatrixXd& V) {
  static const double b[] = {64764752532480000., 32382376266240000., 7771770303897600.,
                             1187353796428800.,  129060195264000.,   10559470521600.,
                             670442572800.,      33522128640.,       1323241920.,
                             40840800.,          960960.,            16380.,
                             182.,               1.};
  const int d = static_cast<int>(A.rows());
  MatrixXd I = MatrixXd::Identity(d, d);
  MatrixXd A2 = A * A;
  MatrixXd A4 = A2 * A2;
  MatrixXd A6 = A4 * A2;
  U = A * (A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2) + b[7] * A6 + b[5] * A4 + b[3] * A2 +
           b[1] * I);
  V = A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2) + b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;
}

}  // namespace

LinearOperator op_exp(const LinearOperator& L, double t) {
  if (!std::isfinite(t)) throw InvalidInput("op_exp: t must be finite");
  MatrixXd A = t * L.matrix;
  double nrm = A.cwiseAbs().rowwise().sum().maxCoeff();  // infinity norm
  if (nrm > 500.0)
    throw ComputeError("op_exp: ||tL|| = " + std::to_string(nrm) +
                       " exceeds the overflow guard (500)");
  // theta_13 from the standard double-precision backward-error analysis
  const double theta13 = 5.371920351148152;
  int squarings = 0;
  if (nrm > theta13) {
    squarings = static_cast<int>(std::ceil(std::log2(nrm / theta13)));
    A /= std::pow(2.0, squarings);
  }
  MatrixXd U, V;
  pade13(A, U, V);
  MatrixXd F = (V - U).partialPivLu().solve(V + U);
  for (int s = 0; s < squarings; ++s) F = F * F;
  return {L.algebra, std::move(F)};
}

// ---------------------------------------------------------------------------
// Spectrum / kernel / group inverse

SpectrumReport spectrum(const LinearOperator& L) {
  Eigen::EigenSolver<MatrixXd> es(L.matrix);
  SpectrumReport rep;
  rep.eigenvalues = es.eigenvalues();
  rep.alpha = rep.eigenvalues.real().minCoeff();
  rep.rho = rep.eigenvalues.cwiseAbs().maxCoeff();
  double scale = 1.0 + rep.eigenvalues.cwiseAbs().maxCoeff();

  // Look for a real eigenvector in K for rho first (positive operators), then
  // for alpha (Z-transformations always carry one there).
  auto try_target = [&](double target, bool use_modulus) -> std::optional<Element> {
    for (int k = 0; k < rep.eigenvalues.size(); ++k) {
      std::complex<double> lam = rep.eigenvalues[k];
      double anchor = use_modulus ? std::abs(lam) : lam.real();
      if (std::abs(anchor - target) > 1e-8 * scale) continue;
      if (std::abs(lam.imag()) > 1e-8 * scale) continue;  // complex pairs rejected
      Eigen::VectorXcd vc = es.eigenvectors().col(k);
      if (vc.imag().cwiseAbs().maxCoeff() > 1e-7 * vc.norm()) continue;
      VectorXd v = vc.real();
      v /= v.norm();
      Element cand{L.algebra, v};
      double te = trace_of(cand);
      if (te < 0) cand.coords = -cand.coords;
      if (in_cone(cand, 1e-7)) return cand;
    }
    return std::nullopt;
  };
  rep.perron_vector = try_target(rep.rho, true);
  if (!rep.perron_vector) rep.perron_vector = try_target(rep.alpha, false);
  return rep;
}

std::vector<Element> kernel_basis(const LinearOperator& L, double tol) {
  Eigen::JacobiSVD<MatrixXd> svd(L.matrix, Eigen::ComputeFullV);
  const auto& sig = svd.singularValues();
  double smax = sig.size() ? sig[0] : 0.0;
  std::vector<Element> out;
  for (int k = 0; k < sig.size(); ++k)
    if (sig[k] <= tol * smax) out.push_back({L.algebra, svd.matrixV().col(k)});
  return out;
}

LinearOperator group_inverse(const LinearOperator& L) {
  const int d = L.dim();
  Eigen::JacobiSVD<MatrixXd> svd(L.matrix, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sig = svd.singularValues();
  double smax = sig.size() ? sig[0] : 0.0;
  int r = 0;
  for (int k = 0; k < sig.size(); ++k)
    if (sig[k] > tol::kernel_rel * smax) ++r;

  if (smax == 0.0) return zero_op(L.algebra);  // L = 0: group inverse is 0

  // index check: ker L² must equal ker L
  LinearOperator L2{L.algebra, L.matrix * L.matrix};
  std::vector<Element> k2 = kernel_basis(L2);
  if (static_cast<int>(k2.size()) != d - r) {
    // witness: kernel vector of L² with the largest ||Lv||
    Element witness = k2.front();
    double best = -1;
    for (const Element& v : k2) {
      double nv = (L.matrix * v.coords).norm();
      if (nv > best) {
        best = nv;
        witness = v;
      }
    }
    throw GroupInverseError("group inverse does not exist: ker(L^2) != ker(L)", witness);
  }

  if (r == d) return {L.algebra, L.matrix.partialPivLu().inverse()};

  // basis adapted to range(L) ⊕ ker(L); invert on the range block
  MatrixXd Ur = svd.matrixU().leftCols(r);
  MatrixXd Vk = svd.matrixV().rightCols(d - r);
  MatrixXd B(d, d);
  B.leftCols(r) = Ur;
  B.rightCols(d - r) = Vk;
  Eigen::PartialPivLU<MatrixXd> Blu(B);
  MatrixXd coords = Blu.solve(L.matrix * Ur);  // columns of L·Ur in basis B
  MatrixXd M = coords.topRows(r);              // action of L on range(L)
  MatrixXd inner = MatrixXd::Zero(d, d);
  inner.topLeftCorner(r, r) = M.partialPivLu().inverse();
  return {L.algebra, B * inner * Blu.inverse()};
}

}  // namespace conegames

#include "conegames/classify.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace conegames {

const char* to_string(ClassVerdict v) {
  switch (v) {
    case ClassVerdict::certified:
      return "certified";
    case ClassVerdict::refuted:
      return "refuted";
    case ClassVerdict::inconclusive:
      return "inconclusive";
  }
  return "?";
}

const char* to_string(OperatorClass c) {
  switch (c) {
    case OperatorClass::positive:
      return "positive";
    case OperatorClass::z:
      return "Z";
    case OperatorClass::lyapunov_like:
      return "lyapunov_like";
  }
  return "?";
}

namespace {

double op_scale(const LinearOperator& L) { return std::max(1.0, L.matrix.norm()); }

// max over the unit sphere of wᵀMw + gᵀw (M symmetric) via the secular
// equation; handles the hard case g ⊥ top eigenspace.
double sphere_quadratic_max(const MatrixXd& M, const VectorXd& g, VectorXd* argmax) {
  const int n = static_cast<int>(M.rows());
  if (n == 0) return 0;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(M);
  VectorXd lam = es.eigenvalues();  // ascending
  double ltop = lam[n - 1];
  VectorXd h = es.eigenvectors().transpose() * (0.5 * g);

  auto w_of = [&](double mu) {
    VectorXd w(n);
    for (int i = 0; i < n; ++i) w[i] = h[i] / (mu - lam[i]);
    return w;
  };

  double norm_at = 0;
  double lo = ltop + 1e-14 * (1 + std::abs(ltop)), hi = ltop + 0.5 * g.norm() + 1.0;
  // grow hi until ||w(hi)|| < 1
  for (int it = 0; it < 200 && w_of(hi).norm() >= 1.0; ++it) hi = ltop + 2 * (hi - ltop);
  norm_at = w_of(lo).norm();

  VectorXd w;
  if (norm_at < 1.0) {
    // hard case: put the remaining mass on the top eigenvector
    VectorXd wperp = w_of(lo);
    // zero the top-eigenvalue components (they blow up only if h there != 0,
    // which the norm_at < 1 branch excludes up to roundoff)
    for (int i = 0; i < n; ++i)
      if (std::abs(lam[i] - ltop) < 1e-12 * (1 + std::abs(ltop))) wperp[i] = 0.0;
    double residual = std::max(0.0, 1.0 - wperp.squaredNorm());
    int top_idx = n - 1;
    wperp[top_idx] += std::sqrt(residual);
    w = es.eigenvectors() * wperp;
  } else {
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      if (w_of(mid).norm() >= 1.0)
        lo = mid;
      else
        hi = mid;
    }
    VectorXd wd = w_of(0.5 * (lo + hi));
    if (wd.norm() > 0) wd /= wd.norm();
    w = es.eigenvectors() * wd;
  }
  if (argmax) *argmax = w;
  return w.dot(M * w) + g.dot(w);
}

}  // namespace

// ---------------------------------------------------------------------------
// Positivity

ClassificationReport is_positive(const LinearOperator& T, const SearchBudget& budget) {
  ClassificationReport rep;
  rep.op_class = OperatorClass::positive;
  const AlgebraPtr& a = T.algebra;
  double scale = op_scale(T);

  if (a->kind() == AlgebraKind::RealVectors) {
    int bi = 0, bj = 0;
    double worst = T.matrix.minCoeff(&bi, &bj);
    rep.worst_margin = worst / scale;
    if (worst < -tol::value_zero * scale) {
      rep.verdict = ClassVerdict::refuted;
      VectorXd c = VectorXd::Zero(a->dim());
      c[bj] = 1.0;
      rep.witness_point = Element{a, c};
    } else {
      rep.verdict = ClassVerdict::certified;
    }
    rep.budget_used = 1;
    return rep;
  }

  auto objective = [&](const Idempotent& c) { return lambda_min(T.apply(c.element)) / scale; };
  IdempotentSearchResult sr = minimize_over_primitive_idempotents(a, objective, budget);
  rep.worst_margin = sr.value;
  rep.budget_used = sr.evaluations;
  if (sr.value < -tol::value_zero) {
    rep.verdict = ClassVerdict::refuted;
    rep.witness_point = sr.argmin.element;
  } else {
    rep.verdict = ClassVerdict::certified;
    rep.sampled = true;
    rep.note = "certified (sampled): extreme-ray search found no violation";
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Z-transformations

LorentzZMargin lorentz_z_margin(const LinearOperator& L) {
  const AlgebraPtr& a = L.algebra;
  if (a->kind() != AlgebraKind::SpinAlgebra) throw InvalidInput("lorentz_z_margin: needs L^n");
  const int m = a->dim() - 1;
  // In ambient (t,u) blocks A = [[alpha, b^T],[c, D]], the pairing of
  // x = (1,w), y = (1,−w) under the trace inner product is
  // 2(alpha + (b − c)ᵀw − wᵀDw); coordinates equal the ambient matrix.
  double alpha = L.matrix(0, 0);
  VectorXd b = L.matrix.row(0).tail(m);
  VectorXd c = L.matrix.col(0).tail(m);
  MatrixXd D = L.matrix.bottomRightCorner(m, m);
  MatrixXd M = -0.5 * (D + D.transpose());
  VectorXd g = b - c;
  VectorXd w;
  double qmax = sphere_quadratic_max(M, g, &w) + alpha;

  LorentzZMargin out;
  VectorXd xc(a->dim()), yc(a->dim());
  xc[0] = 1;
  xc.tail(m) = w;
  yc[0] = 1;
  yc.tail(m) = -w;
  // coords of ambient (1,w) carry the √2 factor; normalize to unit coords
  xc *= std::sqrt(2.0) / std::sqrt(2.0 * (1 + w.squaredNorm()));
  yc *= std::sqrt(2.0) / std::sqrt(2.0 * (1 + w.squaredNorm()));
  out.x = Element{a, xc};
  out.y = Element{a, yc};
  out.margin = inner(Element{a, VectorXd(L.matrix * xc)}, out.y);
  (void)qmax;
  return out;
}

std::pair<bool, std::optional<double>> stern_wolkowicz_test(const MatrixXd& A) {
  const int n = static_cast<int>(A.rows());
  if (A.cols() != n || n < 2) throw InvalidInput("stern_wolkowicz_test: square n>=2 required");
  VectorXd jd = VectorXd::Ones(n);
  jd.tail(n - 1).setConstant(-1.0);
  MatrixXd J = jd.asDiagonal();
  MatrixXd M = J * A + A.transpose() * J;
  double scale = std::max(1.0, M.norm());

  auto h = [&](double gamma) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(gamma * J - M);
    return es.eigenvalues().minCoeff();
  };

  // h is concave with h(±R) < 0 for large R; golden-section maximize
  double R = 4.0 * scale + 4.0;
  double lo = -R, hi = R;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = h(x1), f2 = h(x2);
  for (int it = 0; it < 160; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = h(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = h(x1);
    }
  }
  double gamma = 0.5 * (lo + hi);
  double best = h(gamma);
  if (best >= -tol::witness * scale) return {true, gamma};
  return {false, std::nullopt};
}

namespace {

// multistart ascent of <L(uuᵀ), vvᵀ> over orthonormal pairs for S^n/H^n
struct PairSup {
  double margin;
  Element x, y;
  long evals;
};

PairSup matrix_pair_sup(const LinearOperator& L, const SearchBudget& budget) {
  const AlgebraPtr& a = L.algebra;
  const bool herm = a->kind() == AlgebraKind::HermMatrices;
  const int n = a->param_n();
  const int per = herm ? 2 * n : n;
  double scale = op_scale(L);

  // Orthonormalization uses two Gram–Schmidt passes and falls back to the
  // least-aligned coordinate vector when v is nearly parallel to u, so the
  // residual <u,v> stays at machine precision. A single pass would let the
  // ascent manufacture fake violations by driving v toward u.
  auto build = [&](const VectorXd& th, Element& x, Element& y) {
    if (!herm) {
      VectorXd u = th.head(n), v = th.tail(n);
      double un = u.norm();
      if (un < 1e-12) {
        u = VectorXd::Zero(n);
        u[0] = 1;
      } else
        u /= un;
      v -= v.dot(u) * u;
      if (v.norm() < 1e-6) {
        int least = 0;
        u.cwiseAbs().minCoeff(&least);
        v = VectorXd::Zero(n);
        v[least] = 1;
        v -= v.dot(u) * u;
      }
      v -= v.dot(u) * u;
      v /= v.norm();
      x = Element{a, sym_from_matrix(a, u * u.transpose())};
      y = Element{a, sym_from_matrix(a, v * v.transpose())};
    } else {
      Eigen::VectorXcd u(n), v(n);
      for (int i = 0; i < n; ++i) {
        u[i] = std::complex<double>(th[2 * i], th[2 * i + 1]);
        v[i] = std::complex<double>(th[per + 2 * i], th[per + 2 * i + 1]);
      }
      double un = u.norm();
      if (un < 1e-12) {
        u.setZero();
        u[0] = 1;
      } else
        u /= un;
      v -= u.dot(v) * u;
      if (v.norm() < 1e-6) {
        int least = 0;
        u.cwiseAbs().minCoeff(&least);
        v.setZero();
        v[least] = 1;
        v -= u.dot(v) * u;
      }
      v -= u.dot(v) * u;
      v /= v.norm();
      x = Element{a, herm_from_matrix(a, u * u.adjoint())};
      y = Element{a, herm_from_matrix(a, v * v.adjoint())};
    }
  };

  PairSup out{-1e300, {}, {}, 0};
  Element x, y;
  auto neg_objective = [&](const VectorXd& th) {
    build(th, x, y);
    return -inner(L.apply(x), y) / scale;
  };
  SearchResult sr = multistart_minimize(2 * per, neg_objective, budget);
  build(sr.argmin, x, y);
  out.margin = inner(L.apply(x), y) / scale;
  out.x = x;
  out.y = y;
  out.evals = sr.evaluations;
  return out;
}

// sampled frame-split pairs for generic algebras / direct sums
PairSup generic_pair_sup(const LinearOperator& L, const SearchBudget& budget) {
  const AlgebraPtr& a = L.algebra;
  double scale = op_scale(L);
  PairSup out{-1e300, {}, {}, 0};
  long total = static_cast<long>(budget.multistarts) * budget.refine_steps;
  for (long i = 0; i < total; ++i) {
    RngStream rng = RngStream::child(budget.seed ^ 0x5eedULL, static_cast<uint64_t>(i));
    auto [x, y] = random_complementary_pair(a, rng);
    double m = inner(L.apply(x), y) / scale;
    ++out.evals;
    if (m > out.margin) {
      out.margin = m;
      out.x = x;
      out.y = y;
    }
  }
  return out;
}

bool exp_positivity_consistent(const LinearOperator& L, const SearchBudget& budget) {
  SearchBudget small = budget;
  small.multistarts = std::max(8, budget.multistarts / 8);
  small.refine_steps = std::max(20, budget.refine_steps / 10);
  for (double t : {0.1, 1.0, 10.0}) {
    LinearOperator E = [&] {
      try {
        return op_exp(L, -t);
      } catch (const ComputeError&) {
        return identity_op(L.algebra);  // overflow guard: skip this t
      }
    }();
    small.seed = splitmix64(budget.seed ^ static_cast<uint64_t>(t * 1000));
    ClassificationReport pos = is_positive(E, small);
    if (pos.verdict == ClassVerdict::refuted) return false;
  }
  return true;
}

}  // namespace

ClassificationReport is_z(const LinearOperator& L, const SearchBudget& budget) {
  ClassificationReport rep;
  rep.op_class = OperatorClass::z;
  const AlgebraPtr& a = L.algebra;
  double scale = op_scale(L);

  if (a->rank() < 2) {
    // no nonzero complementary pairs exist; the Z condition is vacuous
    rep.verdict = ClassVerdict::certified;
    rep.worst_margin = 0;
    return rep;
  }

  switch (a->kind()) {
    case AlgebraKind::RealVectors: {
      double worst = -1e300;
      int wi = -1, wj = -1;
      for (int i = 0; i < a->dim(); ++i)
        for (int j = 0; j < a->dim(); ++j)
          if (i != j && L.matrix(i, j) > worst) {
            worst = L.matrix(i, j);
            wi = i;
            wj = j;
          }
      if (a->dim() == 1) {
        rep.verdict = ClassVerdict::certified;  // every 1x1 matrix is a Z-matrix
        rep.worst_margin = 0;
        return rep;
      }
      rep.worst_margin = worst / scale;
      rep.budget_used = a->dim() * (a->dim() - 1);
      if (worst > tol::witness * scale) {
        rep.verdict = ClassVerdict::refuted;
        VectorXd x = VectorXd::Zero(a->dim()), y = VectorXd::Zero(a->dim());
        x[wj] = 1.0;  // <L e_j, e_i> = L_ij
        y[wi] = 1.0;
        rep.witness_pair = {Element{a, x}, Element{a, y}};
      } else {
        rep.verdict = ClassVerdict::certified;
      }
      return rep;
    }

    case AlgebraKind::SpinAlgebra: {
      auto [ok, gamma] = stern_wolkowicz_test(L.matrix);
      LorentzZMargin lz = lorentz_z_margin(L);
      rep.worst_margin = lz.margin / scale;
      rep.budget_used = 2;
      if (ok) {
        if (rep.worst_margin > tol::witness) {
          rep.verdict = ClassVerdict::inconclusive;
          rep.note = "Stern–Wolkowicz feasible but a violating boundary pair was found";
          rep.witness_pair = {lz.x, lz.y};
          return rep;
        }
        rep.verdict = ClassVerdict::certified;
        rep.gamma = gamma;
      } else {
        rep.verdict = ClassVerdict::refuted;
        rep.witness_pair = {lz.x, lz.y};
        if (rep.worst_margin <= tol::witness) {
          // the two exact routes disagree within tolerance
          rep.verdict = ClassVerdict::inconclusive;
          rep.note = "Stern–Wolkowicz infeasible but the boundary sup is not positive";
        }
      }
      return rep;
    }

    case AlgebraKind::SymMatrices:
    case AlgebraKind::HermMatrices: {
      PairSup sup = matrix_pair_sup(L, budget);
      rep.worst_margin = sup.margin;
      rep.budget_used = sup.evals;
      if (sup.margin > tol::witness) {
        rep.verdict = ClassVerdict::refuted;
        rep.witness_pair = {sup.x, sup.y};
      } else if (exp_positivity_consistent(L, budget)) {
        rep.verdict = ClassVerdict::certified;
        rep.sampled = true;
        rep.note = "certified (sampled): orthonormal-pair ascent + exp(−tL) positivity";
      } else {
        rep.verdict = ClassVerdict::inconclusive;
        rep.note = "pair search found no violation but exp(−tL) positivity was refuted";
      }
      return rep;
    }

    case AlgebraKind::DirectSum: {
      PairSup sup = generic_pair_sup(L, budget);
      rep.worst_margin = sup.margin;
      rep.budget_used = sup.evals;
      if (sup.margin > tol::witness) {
        rep.verdict = ClassVerdict::refuted;
        rep.witness_pair = {sup.x, sup.y};
      } else if (exp_positivity_consistent(L, budget)) {
        rep.verdict = ClassVerdict::certified;
        rep.sampled = true;
        rep.note = "certified (sampled): frame-split pairs + exp(−tL) positivity";
      } else {
        rep.verdict = ClassVerdict::inconclusive;
        rep.note = "pair sampling found no violation but exp(−tL) positivity was refuted";
      }
      return rep;
    }
  }
  throw ComputeError("is_z: unknown kind");
}

// ---------------------------------------------------------------------------
// Lyapunov-like

ClassificationReport is_lyapunov_like(const LinearOperator& L, double tol) {
  ClassificationReport rep;
  rep.op_class = OperatorClass::lyapunov_like;
  const AlgebraPtr& alg = L.algebra;
  const int d = alg->dim();
  double scale = op_scale(L);

  MatrixXd sym = 0.5 * (L.matrix + L.matrix.transpose());
  Element a{alg, VectorXd(sym * alg->unit_coords())};
  LinearOperator la = lyapunov_op(a);
  double sym_residual = (sym - la.matrix).norm();

  LinearOperator D{alg, L.matrix - la.matrix};
  double deriv_residual = 0;
  VectorXd bi = VectorXd::Zero(d), bj = VectorXd::Zero(d);
  for (int i = 0; i < d; ++i) {
    bi[i] = 1.0;
    for (int j = 0; j < d; ++j) {
      bj[j] = 1.0;
      VectorXd prod = alg->product(bi, bj);
      VectorXd lhs = D.matrix * prod;
      VectorXd rhs = alg->product(VectorXd(D.matrix * bi), bj) +
                     alg->product(bi, VectorXd(D.matrix * bj));
      deriv_residual = std::max(deriv_residual, (lhs - rhs).norm());
      bj[j] = 0.0;
    }
    bi[i] = 0.0;
  }

  rep.decomposition = {a, D};
  rep.budget_used = d * d;
  bool ok = sym_residual <= tol * std::max(1.0, L.matrix.norm()) && deriv_residual <= tol * scale;
  rep.worst_margin = std::max(sym_residual, deriv_residual) / scale;
  if (ok) {
    rep.verdict = ClassVerdict::certified;
    return rep;
  }
  rep.verdict = ClassVerdict::refuted;

  // definitional witness: complementary pair with <L(x),y> != 0
  if (alg->kind() == AlgebraKind::RealVectors) {
    double worst = 0;
    int wi = -1, wj = -1;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        if (i != j && std::abs(L.matrix(i, j)) > worst) {
          worst = std::abs(L.matrix(i, j));
          wi = i;
          wj = j;
        }
    if (wi >= 0 && worst > tol::witness * scale) {
      VectorXd x = VectorXd::Zero(d), y = VectorXd::Zero(d);
      x[wj] = 1.0;
      y[wi] = 1.0;
      rep.witness_pair = {Element{alg, x}, Element{alg, y}};
    }
    return rep;
  }
  if (alg->kind() == AlgebraKind::SpinAlgebra) {
    LorentzZMargin pos = lorentz_z_margin(L);
    LorentzZMargin neg = lorentz_z_margin(LinearOperator{alg, MatrixXd(-L.matrix)});
    const LorentzZMargin& worse = std::abs(pos.margin) >= std::abs(neg.margin) ? pos : neg;
    if (std::abs(worse.margin) > tol::witness * scale) rep.witness_pair = {worse.x, worse.y};
    return rep;
  }
  // sampled witness search, both signs
  SearchBudget budget;
  budget.seed = 0x11fULL;
  auto trial = [&](const LinearOperator& M) {
    if (alg->kind() == AlgebraKind::SymMatrices || alg->kind() == AlgebraKind::HermMatrices)
      return matrix_pair_sup(M, budget);
    return generic_pair_sup(M, budget);
  };
  PairSup pos = trial(L);
  PairSup neg = trial(LinearOperator{alg, MatrixXd(-L.matrix)});
  const PairSup& worse = pos.margin >= neg.margin ? pos : neg;
  if (worse.margin > tol::witness) rep.witness_pair = {worse.x, worse.y};
  return rep;
}

// ---------------------------------------------------------------------------
// LL(K) − π(K)

LinearOperator make_ll_minus_pi(const LinearOperator& lyapunov_like,
                                const LinearOperator& positive) {
  return lyapunov_like - positive;
}

LLMinusPiSplit try_split_ll_minus_pi(const LinearOperator& L, const SearchBudget& budget) {
  LLMinusPiSplit out;
  const AlgebraPtr& alg = L.algebra;
  MatrixXd sym = 0.5 * (L.matrix + L.matrix.transpose());
  out.a = Element{alg, VectorXd(sym * alg->unit_coords())};
  out.derivation = LinearOperator{alg, 0.5 * (L.matrix - L.matrix.transpose())};

  // candidate LL part: L_a + skew(L); positive part must absorb the rest
  LinearOperator ll_part = lyapunov_op(out.a) + out.derivation;
  ClassificationReport ll_check = is_lyapunov_like(ll_part);
  if (ll_check.verdict != ClassVerdict::certified) {
    out.note = "candidate Lyapunov-like part fails the derivation law";
    return out;
  }
  out.positive_part = ll_part - L;
  ClassificationReport pos = is_positive(out.positive_part, budget);
  if (pos.verdict == ClassVerdict::refuted) {
    out.note = "heuristic split L_a + skew(L) − L is not positive";
    return out;
  }
  out.verdict = ClassVerdict::certified;
  if (pos.sampled) out.note = "positive part certified (sampled)";
  return out;
}

}  // namespace conegames

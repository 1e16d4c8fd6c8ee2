#include "conegames/irreducibility.hpp"

#include "conegames/classify.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace conegames {

const char* to_string(IrrVerdict v) {
  switch (v) {
    case IrrVerdict::irreducible:
      return "irreducible";
    case IrrVerdict::reducible:
      return "reducible";
    case IrrVerdict::no_witness_found:
      return "no_witness_found";
  }
  return "?";
}

const char* to_string(IrrMode m) { return m == IrrMode::cone ? "cone" : "space"; }

const char* to_string(IrrMethod m) {
  switch (m) {
    case IrrMethod::graph_scc:
      return "graph_scc";
    case IrrMethod::eigenvector:
      return "eigenvector";
    case IrrMethod::power_positivity:
      return "power_positivity";
    case IrrMethod::invariant_subspace:
      return "invariant_subspace";
    case IrrMethod::idempotent_search:
      return "idempotent_search";
    case IrrMethod::delegated_positive_part:
      return "delegated_positive_part";
  }
  return "?";
}

double validate_invariant_face(const LinearOperator& L, const Idempotent& c) {
  if (c.rank_k <= 0) throw InvalidInput("validate_invariant_face: zero idempotent");
  LinearOperator p1 = quad_rep(c.element);
  MatrixXd rest = MatrixXd::Identity(L.dim(), L.dim()) - p1.matrix;
  return (rest * L.matrix * p1.matrix).norm();
}

namespace {

double op_scale(const LinearOperator& L) { return std::max(1.0, L.matrix.norm()); }

// support idempotent: frame elements carrying eigenvalues above the cutoff
Idempotent support_idempotent(const Element& x, double rel_cut = 1e-7) {
  SpectralDecomposition sd = spectral_decompose(x);
  double top = sd.eigenvalues.cwiseAbs().maxCoeff();
  VectorXd c = VectorXd::Zero(x.algebra->dim());
  int k = 0;
  for (int i = 0; i < sd.eigenvalues.size(); ++i)
    if (sd.eigenvalues[i] > rel_cut * (top > 0 ? top : 1.0)) {
      c += sd.frame[i].coords;
      ++k;
    }
  return make_idempotent(Element{x.algebra, c});
}

// closed vertex set of the successor digraph (edge j -> i when |M(i,j)| >
// threshold, i != j); empty when strongly connected
std::vector<int> closed_subset(const MatrixXd& M, double threshold) {
  const int n = static_cast<int>(M.rows());
  for (int start = 0; start < n; ++start) {
    // BFS over successors
    std::vector<bool> seen(n, false);
    std::vector<int> queue{start};
    seen[start] = true;
    size_t qi = 0;
    int count = 1;
    while (qi < queue.size()) {
      int j = queue[qi++];
      for (int i = 0; i < n; ++i)
        if (i != j && !seen[i] && std::abs(M(i, j)) > threshold) {
          seen[i] = true;
          queue.push_back(i);
          ++count;
        }
    }
    if (count < n) return queue;
  }
  return {};
}

struct FaceCandidate {
  Idempotent c;
  std::optional<Element> eigvec;
};

// boundary eigenvector scan: returns face candidates derived from real
// eigenvectors of T that can be normalized into K but not into its interior
std::vector<FaceCandidate> eigenvector_candidates(const LinearOperator& T,
                                                  const SearchBudget& budget,
                                                  bool* found_boundary) {
  const AlgebraPtr& alg = T.algebra;
  const int d = alg->dim();
  double scale = op_scale(T);
  std::vector<FaceCandidate> cands;
  *found_boundary = false;

  Eigen::EigenSolver<MatrixXd> es(T.matrix);
  std::vector<double> reals;
  for (int k = 0; k < d; ++k) {
    std::complex<double> lam = es.eigenvalues()[k];
    if (std::abs(lam.imag()) > 1e-8 * scale) continue;
    bool dup = false;
    for (double r : reals)
      if (std::abs(r - lam.real()) <= 1e-7 * scale) dup = true;
    if (!dup) reals.push_back(lam.real());
  }

  auto register_boundary = [&](const Element& u) {
    Idempotent c = support_idempotent(u);
    if (c.rank_k == 0 || c.rank_k >= alg->rank()) return;
    *found_boundary = true;
    cands.push_back({c, u});
  };

  for (double lam : reals) {
    LinearOperator shifted{alg, T.matrix - lam * MatrixXd::Identity(d, d)};
    std::vector<Element> basis = kernel_basis(shifted, 1e-7);
    if (basis.empty()) continue;
    if (basis.size() == 1) {
      Element u = basis[0];
      if (trace_of(u) < 0) u.coords = -u.coords;
      double lm = lambda_min(u);
      double unorm = 1.0 + u.norm();
      if (lm < -1e-7 * unorm) continue;  // not in the cone either way
      if (lm > 1e-6 * unorm) continue;   // interior eigenvector: fine
      register_boundary(u);
      continue;
    }
    // eigenspace of dimension >= 2: any cone vector inside it yields a
    // boundary eigenvector (a subspace cannot sit inside a pointed cone)
    const int m = static_cast<int>(basis.size());
    MatrixXd B(d, m);
    for (int j = 0; j < m; ++j) B.col(j) = basis[j].coords;
    auto lmin_of = [&](const VectorXd& alpha) {
      VectorXd v = B * alpha;
      double nv = v.norm();
      if (nv < 1e-14) return -1.0;
      return lambda_min(Element{alg, VectorXd(v / nv)});
    };
    SearchBudget sub = budget;
    sub.multistarts = std::max(8, budget.multistarts / 4);
    sub.seed = splitmix64(budget.seed ^ 0xE16ULL);
    SearchResult inmax =
        multistart_minimize(m, [&](const VectorXd& a) { return -lmin_of(a); }, sub);
    double best = -inmax.value;
    if (best < -1e-7) continue;  // eigenspace misses the cone
    VectorXd xin = B * inmax.argmin;
    xin /= xin.norm();
    if (best <= 1e-6) {
      register_boundary(Element{alg, xin});
      continue;
    }
    // interior point found: walk toward −x to cross the boundary inside E_λ
    VectorXd zout = -xin;
    double lo = 0.0, hi = 1.0;  // segment (1−s)·xin + s·zout
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      VectorXd v = (1 - mid) * xin + mid * zout;
      if (lambda_min(Element{alg, VectorXd(v / v.norm())}) > 0)
        lo = mid;
      else
        hi = mid;
    }
    VectorXd v = (1 - lo) * xin + lo * zout;
    v /= v.norm();
    register_boundary(Element{alg, v});
  }
  return cands;
}

}  // namespace

IrreducibilityReport cone_irreducible(const LinearOperator& T, const SearchBudget& budget) {
  IrreducibilityReport rep;
  rep.mode = IrrMode::cone;
  const AlgebraPtr& alg = T.algebra;
  const int n = alg->rank();
  double scale = op_scale(T);
  rep.note = "positivity of T attested by the caller";

  if (alg->rank() < 2) {
    // only faces are {0} and K itself
    rep.verdict = IrrVerdict::irreducible;
    rep.method = IrrMethod::graph_scc;
    return rep;
  }

  if (alg->kind() == AlgebraKind::RealVectors) {
    rep.method = IrrMethod::graph_scc;
    double threshold = 1e-11 * scale;
    std::vector<int> closed = closed_subset(T.matrix, threshold);
    if (closed.empty()) {
      rep.verdict = IrrVerdict::irreducible;
      rep.cone_tests = {0, 0, 0};
      return rep;
    }
    VectorXd c = VectorXd::Zero(alg->dim());
    for (int i : closed) c[i] = 1.0;
    rep.witness_face = make_idempotent(Element{alg, c});
    rep.leakage = validate_invariant_face(T, *rep.witness_face);
    rep.verdict = IrrVerdict::reducible;
    rep.cone_tests = {1, 1, 1};
    return rep;
  }

  rep.sampled = true;

  // (E) boundary eigenvector test
  bool found_boundary = false;
  std::vector<FaceCandidate> cands = eigenvector_candidates(T, budget, &found_boundary);
  rep.cone_tests.eigenvector = found_boundary ? 1 : 0;

  // (P) power positivity (I+T)^{n-1} on sampled boundary points + candidates
  rep.cone_tests.power = 0;
  MatrixXd W = MatrixXd::Identity(alg->dim(), alg->dim());
  MatrixXd IT = MatrixXd::Identity(alg->dim(), alg->dim()) + T.matrix / scale;
  for (int k = 0; k < n - 1; ++k) W = IT * W;
  std::vector<Element> power_samples;
  for (int s = 0; s < budget.multistarts; ++s) {
    RngStream rng = RngStream::child(budget.seed ^ 0xB0DULL, static_cast<uint64_t>(s));
    power_samples.push_back(random_boundary_point(alg, rng));
  }
  for (const auto& fc : cands)
    if (fc.eigvec) power_samples.push_back(*fc.eigvec);
  std::optional<Idempotent> power_witness;
  for (const Element& x : power_samples) {
    VectorXd w = W * x.coords;
    Element we{alg, w};
    if (lambda_min(we) > 1e-9 * (1.0 + w.norm())) continue;
    // rank must stall before reaching n; locate the stalled support
    VectorXd cur = x.coords;
    for (int k = 0; k < n; ++k) {
      Idempotent ck = support_idempotent(Element{alg, cur});
      VectorXd nxt = IT * cur;
      Idempotent cn = support_idempotent(Element{alg, nxt});
      if (cn.rank_k == ck.rank_k && ck.rank_k < n) {
        double leak = validate_invariant_face(T, ck);
        if (leak <= tol::leakage_rel * scale) {
          rep.cone_tests.power = 1;
          power_witness = ck;
        }
        break;
      }
      cur = nxt;
    }
    if (power_witness) break;
  }

  // (i) appendix face test: min <T(c), e−c> over rank-k idempotents
  rep.cone_tests.face = 0;
  Element unit = unit_element(alg);
  auto face_objective = [&](const Idempotent& c) {
    Element img = T.apply(c.element);
    Element rest{alg, unit.coords - c.element.coords};
    return inner(img, rest) / scale;
  };
  std::optional<Idempotent> face_witness;
  for (const auto& fc : cands) {
    if (face_objective(fc.c) < 1e-7) {
      double leak = validate_invariant_face(T, fc.c);
      if (leak <= tol::leakage_rel * scale) {
        face_witness = fc.c;
        rep.cone_tests.face = 1;
      }
    }
  }
  if (power_witness && !face_witness && face_objective(*power_witness) < 1e-7) {
    face_witness = power_witness;
    rep.cone_tests.face = 1;
  }
  if (!face_witness) {
    SearchBudget fb = budget;
    fb.multistarts = std::max(8, budget.multistarts / 2);
    for (int k = 1; k < n && !face_witness; ++k) {
      fb.seed = splitmix64(budget.seed ^ (0xFACEULL + static_cast<uint64_t>(k)));
      IdempotentSearchResult sr = minimize_over_rank_k_idempotents(alg, k, face_objective, fb);
      if (sr.value < 1e-7) {
        double leak = validate_invariant_face(T, sr.argmin);
        if (leak <= tol::leakage_rel * scale) {
          face_witness = sr.argmin;
          rep.cone_tests.face = 1;
        }
      }
    }
  }

  // combine
  if (found_boundary || power_witness || face_witness) {
    rep.verdict = IrrVerdict::reducible;
    if (found_boundary) {
      rep.method = IrrMethod::eigenvector;
      rep.boundary_eigenvector = cands.front().eigvec;
      rep.witness_face = cands.front().c;
    } else if (power_witness) {
      rep.method = IrrMethod::power_positivity;
      rep.witness_face = power_witness;
    } else {
      rep.method = IrrMethod::idempotent_search;
      rep.witness_face = face_witness;
    }
    if (rep.witness_face) rep.leakage = validate_invariant_face(T, *rep.witness_face);
    // a validated witness is a proof, not a sample
    if (rep.leakage >= 0 && rep.leakage <= tol::leakage_rel * scale) rep.sampled = false;
    return rep;
  }
  rep.verdict = IrrVerdict::irreducible;
  rep.method = IrrMethod::eigenvector;
  rep.note += "; certified (sampled): no boundary eigenvector, power test and face search clean";
  return rep;
}

namespace {

// least-squares fit of L as a Lyapunov operator X ↦ AX + XAᵀ (S^n) or
// AX + XA* (H^n); returns the relative residual
double fit_lyapunov_matrix(const LinearOperator& L, MatrixXd* A_out, Eigen::MatrixXcd* Ac_out) {
  const AlgebraPtr& alg = L.algebra;
  const int d = alg->dim();
  const int n = alg->param_n();
  const bool herm = alg->kind() == AlgebraKind::HermMatrices;
  const int unknowns = herm ? 2 * n * n : n * n;

  MatrixXd M(d * d, unknowns);
  for (int u = 0; u < unknowns; ++u) {
    LinearOperator basis_op = [&] {
      if (!herm) {
        MatrixXd E = MatrixXd::Zero(n, n);
        E(u / n, u % n) = 1.0;
        return lyapunov_matrix_op(alg, E);
      }
      Eigen::MatrixXcd E = Eigen::MatrixXcd::Zero(n, n);
      int base = u % (n * n);
      E(base / n, base % n) = (u < n * n) ? std::complex<double>(1, 0)
                                          : std::complex<double>(0, 1);
      return lyapunov_matrix_op(alg, E);
    }();
    M.col(u) = Eigen::Map<const VectorXd>(basis_op.matrix.data(), d * d);
  }
  VectorXd rhs = Eigen::Map<const VectorXd>(L.matrix.data(), d * d);
  VectorXd sol = M.colPivHouseholderQr().solve(rhs);
  double residual = (M * sol - rhs).norm() / std::max(1.0, rhs.norm());
  if (!herm) {
    MatrixXd A(n, n);
    for (int u = 0; u < n * n; ++u) A(u / n, u % n) = sol[u];
    if (A_out) *A_out = A;
  } else {
    Eigen::MatrixXcd A(n, n);
    for (int u = 0; u < n * n; ++u)
      A(u / n, u % n) = std::complex<double>(sol[u], sol[n * n + u]);
    if (Ac_out) *Ac_out = A;
  }
  return residual;
}

}  // namespace

IrreducibilityReport space_irreducible(const LinearOperator& L, const SearchBudget& budget) {
  IrreducibilityReport rep;
  rep.mode = IrrMode::space;
  const AlgebraPtr& alg = L.algebra;
  const int n = alg->rank();
  double scale = op_scale(L);

  if (n < 2) {
    rep.verdict = IrrVerdict::irreducible;
    rep.method = IrrMethod::graph_scc;
    return rep;
  }

  if (alg->kind() == AlgebraKind::RealVectors) {
    rep.method = IrrMethod::graph_scc;
    MatrixXd off = L.matrix;
    off.diagonal().setZero();
    std::vector<int> closed = closed_subset(off, 1e-11 * scale);
    if (closed.empty()) {
      rep.verdict = IrrVerdict::irreducible;
      return rep;
    }
    VectorXd c = VectorXd::Zero(alg->dim());
    for (int i : closed) c[i] = 1.0;
    rep.witness_face = make_idempotent(Element{alg, c});
    rep.leakage = validate_invariant_face(L, *rep.witness_face);
    rep.verdict = IrrVerdict::reducible;
    return rep;
  }

  // Lyapunov operators on the matrix algebras: invariant subspaces of A
  if (alg->kind() == AlgebraKind::SymMatrices || alg->kind() == AlgebraKind::HermMatrices) {
    MatrixXd A;
    Eigen::MatrixXcd Ac;
    double residual = fit_lyapunov_matrix(L, &A, &Ac);
    if (residual <= 1e-8) {
      rep.method = IrrMethod::invariant_subspace;
      const int nn = alg->param_n();
      if (alg->kind() == AlgebraKind::SymMatrices) {
        Eigen::RealSchur<MatrixXd> schur(A);
        const MatrixXd& T = schur.matrixT();
        const MatrixXd& Q = schur.matrixU();
        // leading quasi-diagonal block spans an invariant subspace of A
        int k = (nn >= 2 && std::abs(T(1, 0)) > 1e-10 * scale) ? 2 : 1;
        if (k < nn) {
          MatrixXd V = Q.leftCols(k);
          rep.witness_face = make_idempotent(Element{alg, sym_from_matrix(alg, V * V.transpose())});
          rep.leakage = validate_invariant_face(L, *rep.witness_face);
          rep.verdict = IrrVerdict::reducible;
          return rep;
        }
        // n = 2 with a complex eigenvalue pair: no real invariant subspace
        rep.verdict = IrrVerdict::irreducible;
        rep.note = "Lyapunov operator; the fitted matrix has no nontrivial real invariant subspace";
        return rep;
      }
      // H^n: the complex Schur form always yields an invariant line for n >= 2
      Eigen::ComplexSchur<Eigen::MatrixXcd> schur(Ac);
      Eigen::VectorXcd u = schur.matrixU().col(0);
      rep.witness_face = make_idempotent(Element{alg, herm_from_matrix(alg, u * u.adjoint())});
      rep.leakage = validate_invariant_face(L, *rep.witness_face);
      rep.verdict = IrrVerdict::reducible;
      return rep;
    }
  }

  // L = rI − S with S positive: space-irreducibility of L ≡ cone-irreducibility of S
  {
    double r = 2.0 * (1.0 + L.matrix.norm());
    LinearOperator S{alg, r * MatrixXd::Identity(alg->dim(), alg->dim()) - L.matrix};
    SearchBudget pb = budget;
    pb.seed = splitmix64(budget.seed ^ 0x905ULL);
    ClassificationReport pos_probe = is_positive(S, pb);
    if (pos_probe.verdict == ClassVerdict::certified) {
      IrreducibilityReport inner_rep = cone_irreducible(S, budget);
      rep.method = IrrMethod::delegated_positive_part;
      rep.sampled = inner_rep.sampled || pos_probe.sampled;
      rep.verdict = inner_rep.verdict;
      rep.witness_face = inner_rep.witness_face;
      rep.boundary_eigenvector = inner_rep.boundary_eigenvector;
      rep.cone_tests = inner_rep.cone_tests;
      if (rep.witness_face) rep.leakage = validate_invariant_face(L, *rep.witness_face);
      rep.note = "delegated: L = rI − S with S positive" +
                 std::string(pos_probe.sampled ? " (sampled)" : "");
      if (rep.verdict == IrrVerdict::reducible && rep.leakage > tol::leakage_rel * scale)
        rep.verdict = IrrVerdict::no_witness_found;
      return rep;
    }
  }

  // generic: leakage minimization over idempotents of every rank
  rep.method = IrrMethod::idempotent_search;
  rep.sampled = true;
  auto leak_objective = [&](const Idempotent& c) {
    return validate_invariant_face(L, c) / scale;
  };
  double best_leak = 1e300;
  for (int k = 1; k < n; ++k) {
    SearchBudget fb = budget;
    fb.seed = splitmix64(budget.seed ^ (0x1ea7ULL + static_cast<uint64_t>(k)));
    IdempotentSearchResult sr = minimize_over_rank_k_idempotents(alg, k, leak_objective, fb);
    if (sr.value < best_leak) {
      best_leak = sr.value;
      if (sr.value <= tol::leakage_rel) {
        rep.witness_face = sr.argmin;
        rep.leakage = sr.value * scale;
        rep.verdict = IrrVerdict::reducible;
        rep.sampled = false;
        return rep;
      }
    }
  }
  rep.verdict = IrrVerdict::no_witness_found;
  rep.leakage = best_leak * scale;
  rep.note = "generic search exhausted its budget without an invariant face";
  return rep;
}

ExpBridgeReport exp_irreducibility_bridge(const LinearOperator& L, double t,
                                          const SearchBudget& budget) {
  if (t <= 0) throw InvalidInput("exp_irreducibility_bridge: t must be positive");
  ExpBridgeReport out;
  LinearOperator E = op_exp(L, -t);
  out.cone_report = cone_irreducible(E, budget);
  out.space_report = space_irreducible(L, budget);
  out.exp_cone_irreducible = out.cone_report.verdict == IrrVerdict::irreducible;
  out.space_not_reducible = out.space_report.verdict != IrrVerdict::reducible;
  out.implication_violated =
      out.exp_cone_irreducible && out.space_report.verdict == IrrVerdict::reducible;
  return out;
}

}  // namespace conegames

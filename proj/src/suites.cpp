#include "conegames/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "conegames/oracles.hpp"

namespace conegames {

namespace {

json instance_json(const AlgebraPtr& a, const LinearOperator& L, const std::string& label) {
  Instance inst;
  inst.label = label;
  inst.algebra = a;
  inst.op = L;
  return instance_to_json(inst);
}

// --- generators -------------------------------------------------------------

MatrixXd random_irreducible_nonnegative(int n, RngStream& rng) {
  MatrixXd B = MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (rng.unif() < 0.35) B(i, j) = rng.unif(0.1, 1.0);
  for (int i = 0; i < n; ++i) B(i, (i + 1) % n) = rng.unif(0.2, 1.0);  // cycle
  return B;
}

LinearOperator singular_irreducible_m_matrix(int n, RngStream& rng, MatrixXd* b_out = nullptr) {
  auto a = Algebra::real_n(n);
  MatrixXd B = random_irreducible_nonnegative(n, rng);
  if (b_out) *b_out = B;
  double rho = spectrum(from_dense(a, B)).rho;
  return m_transform(rho, from_dense(a, B));
}

LinearOperator reducible_block_m_matrix(RngStream& rng, int* n_out) {
  int n1 = 2 + rng.index(3), n2 = 2 + rng.index(3);
  int n = n1 + n2;
  if (n_out) *n_out = n;
  auto a = Algebra::real_n(n);
  MatrixXd m = MatrixXd::Zero(n, n);
  RngStream r1 = RngStream::child(rng.u64(), 1), r2 = RngStream::child(rng.u64(), 2);
  MatrixXd B1 = random_irreducible_nonnegative(n1, r1);
  MatrixXd B2 = random_irreducible_nonnegative(n2, r2);
  m.topLeftCorner(n1, n1) =
      m_transform(spectrum(from_dense(Algebra::real_n(n1), B1)).rho,
                  from_dense(Algebra::real_n(n1), B1))
          .matrix;
  m.bottomRightCorner(n2, n2) =
      m_transform(spectrum(from_dense(Algebra::real_n(n2), B2)).rho,
                  from_dense(Algebra::real_n(n2), B2))
          .matrix;
  return from_dense(a, m);
}

LinearOperator strictly_positive_op(const AlgebraPtr& a, RngStream& rng, int terms = 4) {
  MatrixXd m = MatrixXd::Zero(a->dim(), a->dim());
  for (int k = 0; k < terms; ++k) {
    Element x = random_interior_point(a, rng, 0.3, 1.5);
    Element y = random_interior_point(a, rng, 0.3, 1.5);
    m += rng.unif(0.2, 1.0) * (x.coords * y.coords.transpose());
  }
  return {a, m};
}

LinearOperator block_compressed_positive_op(const AlgebraPtr& a, RngStream& rng) {
  std::vector<Element> frame = random_jordan_frame(a, rng);
  int split = 1 + rng.index(a->rank() - 1);
  VectorXd cc = VectorXd::Zero(a->dim());
  for (int i = 0; i < split; ++i) cc += frame[i].coords;
  Idempotent c = make_idempotent(Element{a, cc});
  PeirceProjectors pp = peirce_projectors(c);
  LinearOperator t1 = strictly_positive_op(a, rng);
  LinearOperator t2 = strictly_positive_op(a, rng);
  return {a, pp.p1.matrix * t1.matrix * pp.p1.matrix + pp.p0.matrix * t2.matrix * pp.p0.matrix};
}

// inner derivation [L_u, L_v]
LinearOperator random_derivation(const AlgebraPtr& a, RngStream& rng) {
  LinearOperator lu = lyapunov_op(random_element(a, rng));
  LinearOperator lv = lyapunov_op(random_element(a, rng));
  return {a, lu.matrix * lv.matrix - lv.matrix * lu.matrix};
}

SearchBudget budget_for(uint64_t seed, int multistarts = 16, int refine = 60) {
  SearchBudget b;
  b.multistarts = multistarts;
  b.refine_steps = refine;
  b.seed = seed;
  return b;
}

// --- suite harness ----------------------------------------------------------

struct SuiteRun {
  SuiteReport report;

  explicit SuiteRun(std::string name) { report.name = std::move(name); }

  void check(bool ok, const std::string& what, uint64_t seed, const json& inst = {}) {
    ++report.trials;
    if (ok) {
      ++report.passes;
    } else {
      report.failures.push_back({what, seed, inst});
    }
  }
};

double value_of(const LinearOperator& L) {
  try {
    return value(L, 1e-9 * std::max(1.0, L.matrix.norm())).value;
  } catch (const GameSolverError& err) {
    return err.best.value;
  }
}

// --- individual suites ------------------------------------------------------

void suite_thm31(SuiteRun& run, uint64_t seed, int trials) {
  for (int t = 0; t < trials; ++t) {
    uint64_t s = splitmix64(seed ^ (0x31ULL + t));
    RngStream rng(s);
    int n = 2 + t % 7;
    MatrixXd B;
    LinearOperator L = singular_irreducible_m_matrix(n, rng, &B);
    json inst = instance_json(L.algebra, L, "thm31-cm-" + std::to_string(t));
    if (!oracles::strongly_connected(B, 1e-12)) {
      run.check(false, "generator produced a reducible support", s, inst);
      continue;
    }
    oracles::MatrixGameLP lp = oracles::solve_matrix_game_lp(L.matrix);
    double v = value_of(L);
    MixedReport mixed = is_completely_mixed(L, tol::game_gap, s);
    bool ok = std::abs(lp.value) <= 1e-6 && std::abs(v) <= 1e-6 &&
              mixed.verdict == MixedVerdict::completely_mixed;
    run.check(ok, "singular irreducible M-matrix must have value 0 and be completely mixed", s,
              inst);
  }
  for (int t = 0; t < trials; ++t) {
    uint64_t s = splitmix64(seed ^ (0x310ULL + t));
    RngStream rng(s);
    int n = 0;
    LinearOperator L = reducible_block_m_matrix(rng, &n);
    json inst = instance_json(L.algebra, L, "thm31-red-" + std::to_string(t));
    MixedReport mixed = is_completely_mixed(L, tol::game_gap, s);
    run.check(mixed.verdict == MixedVerdict::not_completely_mixed,
              "reducible block M-matrix must not be completely mixed", s, inst);
  }
}

void suite_thm32(SuiteRun& run, uint64_t seed, int trials) {
  int transpose_agree = 0, transpose_total = 0;
  // bundled fixtures first
  for (const Instance& inst : builtin_fixtures()) {
    if (!inst.expected || !inst.expected->mixed || *inst.expected->mixed != "completely_mixed")
      continue;
    if (!inst.expected->value || std::abs(*inst.expected->value) > tol::value_zero) continue;
    IrreducibilityReport rep = space_irreducible(inst.op, budget_for(seed));
    run.check(rep.verdict != IrrVerdict::reducible,
              "fixture " + inst.label + ": value-zero completely mixed must not be reducible",
              seed, instance_to_json(inst));
  }
  std::vector<AlgebraPtr> algebras{Algebra::real_n(5), Algebra::sym(3), Algebra::spin(4)};
  for (int t = 0; t < trials; ++t) {
    uint64_t s = splitmix64(seed ^ (0x32ULL + t));
    RngStream rng(s);
    const AlgebraPtr& a = algebras[t % algebras.size()];
    LinearOperator S = strictly_positive_op(a, rng);
    LinearOperator L = m_transform(spectrum(S).rho, S);
    json inst = instance_json(a, L, "thm32-" + std::to_string(t));
    MixedReport mixed = is_completely_mixed(L, tol::game_gap, s);
    if (mixed.verdict != MixedVerdict::completely_mixed || std::abs(mixed.game_value) > 1e-6) {
      run.check(false, "strictly positive M-transformation should be value-zero completely mixed",
                s, inst);
      continue;
    }
    IrreducibilityReport rep = space_irreducible(L, budget_for(s));
    run.check(rep.verdict != IrrVerdict::reducible,
              "value-zero completely mixed Z-transformation must not be space-reducible", s, inst);
    // open question: does space-irreducibility of L transfer to Lᵀ?
    // agreement is recorded, never asserted
    IrreducibilityReport rept = space_irreducible(L.transpose(), budget_for(s ^ 0x7ULL));
    ++transpose_total;
    if ((rep.verdict == IrrVerdict::reducible) == (rept.verdict == IrrVerdict::reducible))
      ++transpose_agree;
  }
  run.report.notes.push_back("transpose space-irreducibility agreement: " +
                             std::to_string(transpose_agree) + "/" +
                             std::to_string(transpose_total));
}

void suite_thm41(SuiteRun& run, uint64_t seed, int trials) {
  std::vector<AlgebraPtr> algebras{Algebra::real_n(4), Algebra::sym(3), Algebra::spin(4)};
  for (int t = 0; t < trials; ++t) {
    uint64_t s = splitmix64(seed ^ (0x41ULL + t));
    RngStream rng(s);
    const AlgebraPtr& a = algebras[t % algebras.size()];
    bool irreducible_shape = (t % 2 == 0);
    LinearOperator S =
        irreducible_shape ? strictly_positive_op(a, rng) : block_compressed_positive_op(a, rng);
    LinearOperator L = m_transform(spectrum(S).rho, S);
    json inst = instance_json(a, L, "thm41-" + std::to_string(t));
    double v = value_of(L);
    if (std::abs(v) > 1e-6) {
      run.check(false, "M-transformation should have value zero", s, inst);
      continue;
    }
    ExpBridgeReport bridge = exp_irreducibility_bridge(L, 1.0, budget_for(s));
    if (!bridge.exp_cone_irreducible) {
      run.check(true, "", s);  // hypothesis not met: vacuous trial
      continue;
    }
    MixedReport mixed = is_completely_mixed(L, tol::game_gap, s);
    run.check(mixed.verdict == MixedVerdict::completely_mixed,
              "v = 0 with exp(−L) K-irreducible must be completely mixed", s, inst);
  }
}

void suite_thm42(SuiteRun& run, uint64_t seed, int trials) {
  std::vector<AlgebraPtr> algebras{Algebra::real_n(4), Algebra::sym(3), Algebra::spin(4)};
  for (int t = 0; t < trials; ++t) {
    uint64_t s = splitmix64(seed ^ (0x42ULL + t));
    RngStream rng(s);
    const AlgebraPtr& a = algebras[t % algebras.size()];
    LinearOperator L1 = lyapunov_op(random_interior_point(a, rng, 0.6, 1.8)) +
                        random_derivation(a, rng);
    LinearOperator L2 = strictly_positive_op(a, rng);
    // scale the positive part until the value crosses zero, then bisect
    double lo = 0.0, hi = 1.0;
    double vh = value_of(L1 - hi * L2);
    int guard = 0;
    while (vh > 0 && guard++ < 40) {
      hi *= 2;
      vh = value_of(L1 - hi * L2);
    }
    if (vh > 0) {
      run.check(false, "could not drive the value negative", s, {});
      continue;
    }
    for (int it = 0; it < 60; ++it) {
      double mid = 0.5 * (lo + hi);
      (value_of(L1 - mid * L2) > 0 ? lo : hi) = mid;
    }
    LinearOperator L = L1 - 0.5 * (lo + hi) * L2;
    // snap: remove the residual least real eigenvalue so L is exactly
    // singular (L − αI stays in LL − π since αI is Lyapunov-like)
    double alpha = spectrum(L).alpha;
    L = L - alpha * identity_op(a);
    json inst = instance_json(a, L, "thm42-" + std::to_string(t));
    double v = value_of(L);
    if (std::abs(v) > 1e-6) {
      run.check(false, "bisection failed to land on value zero", s, inst);
      continue;
    }
    ExpBridgeReport bridge = exp_irreducibility_bridge(L, 1.0, budget_for(s));
    if (bridge.exp_cone_irreducible) {
      MixedReport mixed = is_completely_mixed(L, tol::game_gap, s);
      run.check(mixed.verdict == MixedVerdict::completely_mixed,
                "irreducible LL−π with value zero must be completely mixed", s, inst);
      // boundary-feasibility probe for the standalone implication:
      // x on the boundary with L(x) in the cone contradicts x > 0
      double scale = std::max(1.0, L.matrix.norm());
      bool violation = false;
      for (int probe = 0; probe < 64 && !violation; ++probe) {
        RngStream prng = RngStream::child(s ^ 0xB0F1ULL, probe);
        Element x = random_boundary_point(a, prng);
        if (lambda_min(L.apply(x)) > 1e-7 * scale) violation = true;
      }
      run.check(!violation, "boundary point with a strictly positive image violates interiority",
                s, inst);
    } else {
      run.check(true, "", s);  // structured irreducibility not established: vacuous
    }
  }
}

void suite_thm61(SuiteRun& run, uint64_t seed, int trials) {
  std::vector<AlgebraPtr> algebras{Algebra::sym(3), Algebra::spin(4), Algebra::real_n(5)};
  for (int t = 0; t < trials; ++t) {
    uint64_t s = splitmix64(seed ^ (0x61ULL + t));
    RngStream rng(s);
    const AlgebraPtr& a = algebras[t % algebras.size()];
    Element av = [&] {
      switch (t % 3) {
        case 0:
          return random_interior_point(a, rng, 0.3, 2.0);
        case 1: {
          Element x = random_interior_point(a, rng, 0.3, 2.0);
          x.coords = -x.coords;
          return x;
        }
        default:
          return random_element(a, rng);
      }
    }();
    TrichotomyReport rep = lyapunov_game_trichotomy(av, true);
    json inst = instance_json(a, lyapunov_op(av), "thm61-" + std::to_string(t));
    run.check(rep.consistent, "sign-pattern trichotomy disagrees with the solver verdicts", s,
              inst);
  }
}

void suite_thm62(SuiteRun& run, uint64_t seed, int trials) {
  for (int t = 0; t < trials; ++t) {
    uint64_t s = splitmix64(seed ^ (0x62ULL + t));
    RngStream rng(s);
    bool cm_shape = (t % 2 == 0);
    LinearOperator L = cm_shape ? singular_irreducible_m_matrix(3, rng)
                                : [&] {
                                    int n = 0;
                                    return reducible_block_m_matrix(rng, &n);
                                  }();
    json inst = instance_json(L.algebra, L, "thm62-" + std::to_string(t));
    MixedReport mixed = is_completely_mixed(L, tol::game_gap, s);
    QuadRepCheck qc = cm_by_quadratic_reps(L, budget_for(s));
    bool agreement = qc.all_positive == (mixed.verdict == MixedVerdict::completely_mixed);
    run.check(agreement && qc.exact,
              "finite quadratic-representation check must match the completely mixed verdict", s,
              inst);
  }
  // sampled consistency on the skew fixture
  for (const Instance& inst : builtin_fixtures()) {
    if (inst.label != "ex52") continue;
    QuadRepCheck qc = cm_by_quadratic_reps(inst.op, budget_for(seed, 24, 20));
    run.check(qc.all_positive, "sampled v(L + P_c) search must stay positive on ex52", seed,
              instance_to_json(inst));
  }
}

void suite_thm71(SuiteRun& run, uint64_t seed, int trials) {
  std::vector<std::pair<LinearOperator, json>> cases;
  for (const Instance& inst : builtin_fixtures())
    if (inst.expected && inst.expected->mixed && *inst.expected->mixed == "completely_mixed" &&
        inst.expected->value && std::abs(*inst.expected->value) <= tol::value_zero)
      cases.push_back({inst.op, instance_to_json(inst)});
  std::vector<AlgebraPtr> algebras{Algebra::real_n(5), Algebra::sym(3), Algebra::spin(4)};
  for (int t = 0; t < trials; ++t) {
    RngStream rng(splitmix64(seed ^ (0x71ULL + t)));
    const AlgebraPtr& a = algebras[t % algebras.size()];
    LinearOperator S = strictly_positive_op(a, rng);
    LinearOperator L = m_transform(spectrum(S).rho, S);
    cases.push_back({L, instance_json(a, L, "thm71-" + std::to_string(t))});
  }

  for (size_t ci = 0; ci < cases.size(); ++ci) {
    const auto& [L, inst] = cases[ci];
    const AlgebraPtr& a = L.algebra;
    uint64_t s = splitmix64(seed ^ (0x710ULL + ci));
    double scale = std::max(1.0, L.matrix.norm());

    // (a) range monotonicity probe: no x with L(x) strictly inside the cone
    auto sup_lmin = [&](const MatrixXd& M) {
      SearchBudget b = budget_for(s, 40, 25);  // 1000 starts overall
      SearchResult sr = multistart_minimize(
          a->dim(),
          [&](const VectorXd& th) {
            double n = th.norm();
            if (n < 1e-12) return 1e300;
            return -lambda_min(Element{a, VectorXd(M * th / n)});
          },
          b);
      return -sr.value;
    };
    run.check(sup_lmin(L.matrix) <= 1e-7 * scale,
              "found x with L(x) strictly in the cone on a value-zero completely mixed fixture", s,
              inst);
    // (b) trivially range monotone: same probe for L²
    run.check(sup_lmin(L.matrix * L.matrix) <= 1e-7 * scale * scale,
              "found x with L²(x) strictly in the cone", s, inst);
    // (c) ker L² = ker L
    run.check(kernel_basis(LinearOperator{a, L.matrix * L.matrix}).size() ==
                  kernel_basis(L).size(),
              "kernel of L² differs from kernel of L", s, inst);
    // (d) group inverse exists and satisfies the three identities
    try {
      LinearOperator G = group_inverse(L);
      double r1 = (L.matrix * G.matrix * L.matrix - L.matrix).norm();
      double r2 = (G.matrix * L.matrix * G.matrix - G.matrix).norm();
      double r3 = (L.matrix * G.matrix - G.matrix * L.matrix).norm();
      run.check(r1 <= 1e-8 * scale && r2 <= 1e-8 * std::max(1.0, G.matrix.norm()) &&
                    r3 <= 1e-8 * scale,
                "group inverse identities exceed tolerance", s, inst);
    } catch (const GroupInverseError&) {
      run.check(false, "group inverse must exist for value-zero completely mixed Z", s, inst);
    }
  }
}

void suite_thm81(SuiteRun& run, uint64_t seed, int trials) {
  std::vector<AlgebraPtr> algebras{Algebra::real_n(6), Algebra::sym(3), Algebra::spin(5)};
  for (const AlgebraPtr& a : algebras) {
    for (int t = 0; t < trials; ++t) {
      uint64_t s = splitmix64(seed ^ (0x81ULL + t * 3 + a->dim()));
      RngStream rng(s);
      bool reducible_shape = (t % 2 == 1);
      LinearOperator T =
          reducible_shape ? block_compressed_positive_op(a, rng) : strictly_positive_op(a, rng);
      json inst = instance_json(a, T, "thm81-" + std::to_string(t));
      IrreducibilityReport rep = cone_irreducible(T, budget_for(s));
      bool verdict_ok =
          (rep.verdict == IrrVerdict::reducible) == reducible_shape;
      bool tests_agree = true;
      if (a->kind() != AlgebraKind::RealVectors)
        tests_agree = rep.cone_tests.eigenvector == rep.cone_tests.power &&
                      rep.cone_tests.power == rep.cone_tests.face;
      run.check(verdict_ok && tests_agree,
                "appendix equivalence tests disagree or missed the constructed answer", s, inst);
    }
  }
}

void suite_prop61(SuiteRun& run, uint64_t seed, int trials) {
  std::vector<AlgebraPtr> algebras{Algebra::real_n(5), Algebra::sym(3), Algebra::spin(4)};
  for (int t = 0; t < trials; ++t) {
    uint64_t s = splitmix64(seed ^ (0x6101ULL + t));
    RngStream rng(s);
    const AlgebraPtr& a = algebras[t % algebras.size()];
    LinearOperator T = strictly_positive_op(a, rng);
    json inst = instance_json(a, T, "prop61-" + std::to_string(t));
    IrreducibilityReport rep = cone_irreducible(T, budget_for(s));
    if (rep.verdict != IrrVerdict::irreducible) {
      run.check(false, "strictly positive operator must be K-irreducible", s, inst);
      continue;
    }
    double rho = spectrum(T).rho;
    double v = value_of(T);
    run.check(rho > 1e-7 && v > 1e-7,
              "K-irreducible positive operator must have positive spectral radius and value", s,
              inst);
  }
}

void suite_skewflow(SuiteRun& run, uint64_t seed, int trials) {
  auto s2 = Algebra::sym(2);
  for (int t = 0; t < std::max(1, trials); ++t) {
    double omega = 1.0 + t;  // scaled skew generators
    MatrixXd A(2, 2);
    A << 0, omega, -omega, 0;
    LinearOperator LA = lyapunov_matrix_op(s2, A);
    json inst = instance_json(s2, LA, "skewflow-" + std::to_string(t));
    MixedReport mixed = is_completely_mixed(LA, tol::game_gap, seed);
    if (mixed.verdict != MixedVerdict::completely_mixed) {
      run.check(false, "skew Lyapunov fixture must be completely mixed", seed, inst);
      continue;
    }
    MatrixXd P = sym_to_matrix(s2, mixed.ybar.coords);
    run.check((A.transpose() * P + P * A).norm() <= 1e-7,
              "recovered P must satisfy AᵀP + PA = 0", seed, inst);

    // quadratic invariant of dx/dt = Ax under a classical 4th-order step
    Eigen::Vector2d x(1.0, 0.5);
    const double h = 1e-3;
    const double phi0 = x.dot(P * x);
    double worst = 0;
    auto f = [&](const Eigen::Vector2d& v) { return Eigen::Vector2d(A * v); };
    for (int step = 0; step < 10000; ++step) {
      Eigen::Vector2d k1 = f(x);
      Eigen::Vector2d k2 = f(x + 0.5 * h * k1);
      Eigen::Vector2d k3 = f(x + 0.5 * h * k2);
      Eigen::Vector2d k4 = f(x + h * k3);
      x += (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4);
      worst = std::max(worst, std::abs(x.dot(P * x) - phi0));
    }
    run.check(worst <= 1e-5, "quadratic invariant drifted beyond tolerance", seed, inst);
  }
}

}  // namespace

std::vector<std::string> suite_names() {
  return {"thm31", "thm32", "thm41", "thm42", "thm61",
          "thm62", "thm71", "thm81", "prop61", "skewflow"};
}

SuiteReport run_suite(const std::string& name, uint64_t seed, int trials) {
  SuiteRun run(name);
  auto start = std::chrono::steady_clock::now();
  if (name == "thm31")
    suite_thm31(run, seed, trials);
  else if (name == "thm32")
    suite_thm32(run, seed, trials);
  else if (name == "thm41")
    suite_thm41(run, seed, trials);
  else if (name == "thm42")
    suite_thm42(run, seed, trials);
  else if (name == "thm61")
    suite_thm61(run, seed, trials);
  else if (name == "thm62")
    suite_thm62(run, seed, trials);
  else if (name == "thm71")
    suite_thm71(run, seed, trials);
  else if (name == "thm81")
    suite_thm81(run, seed, trials);
  else if (name == "prop61")
    suite_prop61(run, seed, trials);
  else if (name == "skewflow")
    suite_skewflow(run, seed, trials);
  else
    throw InvalidInput("run_suite: unknown suite '" + name + "'");
  run.report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run.report;
}

json to_json(const SuiteReport& rep) {
  json j;
  j["schema"] = 1;
  j["suite"] = rep.name;
  j["trials"] = rep.trials;
  j["passes"] = rep.passes;
  j["wall_seconds"] = rep.wall_seconds;
  json fails = json::array();
  for (const auto& f : rep.failures) {
    json fj;
    fj["description"] = f.description;
    fj["seed"] = f.seed;
    if (!f.instance.is_null()) fj["instance"] = f.instance;
    fails.push_back(fj);
  }
  j["failures"] = fails;
  if (!rep.notes.empty()) j["notes"] = rep.notes;
  return j;
}

}  // namespace conegames

#pragma once

#include <optional>
#include <string>
#include <utility>

#include "conegames/manifolds.hpp"
#include "conegames/operators.hpp"

namespace conegames {

enum class ClassVerdict { certified, refuted, inconclusive };
enum class OperatorClass { positive, z, lyapunov_like };

const char* to_string(ClassVerdict v);
const char* to_string(OperatorClass c);

struct ClassificationReport {
  ClassVerdict verdict = ClassVerdict::inconclusive;
  OperatorClass op_class = OperatorClass::positive;
  bool sampled = false;       // certification rests on budgeted search, not proof
  double worst_margin = 0;    // most adverse defining value found (scale-normalized)
  std::optional<std::pair<Element, Element>> witness_pair;  // complementary (x, y)
  std::optional<Element> witness_point;                     // boundary point c
  std::optional<double> gamma;                              // Lorentz certificate scalar
  std::optional<std::pair<Element, LinearOperator>> decomposition;  // (a, D)
  long budget_used = 0;
  std::string note;
};

// L(K) ⊆ K, decided on the extreme rays (primitive idempotents): exact
// entrywise test on R^n, budgeted multistart elsewhere.
ClassificationReport is_positive(const LinearOperator& T, const SearchBudget& budget = {});

// Z-transformation: <L(x),y> <= 0 on complementary cone pairs. Exact on R^n
// (off-diagonal signs) and L^n (Stern–Wolkowicz); sampled sup on S^n/H^n and
// direct sums, cross-checked against positivity of exp(−tL).
ClassificationReport is_z(const LinearOperator& L, const SearchBudget& budget = {});

// Existence of γ with γJ − (JA + AᵀJ) ⪰ 0, J = diag(1,−1,…,−1): concave 1-D
// maximization of λ_min. A is given in ambient (t,u) coordinates.
std::pair<bool, std::optional<double>> stern_wolkowicz_test(const MatrixXd& A);

// Exact max of <L(x),y>/(||x||·||y||) over complementary boundary pairs of the
// Lorentz cone (a sphere-constrained quadratic); the witness achieves it.
struct LorentzZMargin {
  double margin = 0;
  Element x, y;
};
LorentzZMargin lorentz_z_margin(const LinearOperator& L);

// Lyapunov-like: decompose L = L_a + D with a = sym(L)(e), D the residual;
// certified iff sym(L) = L_a and D satisfies the derivation law on all
// canonical basis pairs.
ClassificationReport is_lyapunov_like(const LinearOperator& L, double tol = 1e-8);

// LL(K) − π(K): constructor plus a heuristic splitter (a := sym(L)(e),
// D := skew(L), positive part L_a + D − L). Splitter failure is inconclusive.
LinearOperator make_ll_minus_pi(const LinearOperator& lyapunov_like,
                                const LinearOperator& positive);
struct LLMinusPiSplit {
  ClassVerdict verdict = ClassVerdict::inconclusive;
  Element a;
  LinearOperator derivation;
  LinearOperator positive_part;
  std::string note;
};
LLMinusPiSplit try_split_ll_minus_pi(const LinearOperator& L, const SearchBudget& budget = {});

}  // namespace conegames

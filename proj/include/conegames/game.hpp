#pragma once

#include <optional>
#include <string>
#include <utility>

#include "conegames/classify.hpp"
#include "conegames/operators.hpp"

namespace conegames {

// Output of the value solver. The certificate inequalities
//   Lᵀ(ȳ) ⪯ (value+gap)·ê  and  L(x̄) ⪰ (value−gap)·ê
// hold by construction: value is the midpoint of the certified primal/dual
// bracket and gap its width.
struct GameSolution {
  double value = 0;
  Element xbar, ybar;
  double gap = 0;
  std::pair<double, double> residuals{0, 0};  // (λ_min(L x̄) − v, v − λ_max(Lᵀ ȳ))
  int iterations = 0;
  bool warned = false;  // gap missed tol but is within the accept band
};

struct GameSolverError : ComputeError {
  GameSolverError(const std::string& msg, GameSolution best_so_far)
      : ComputeError(msg), best(std::move(best_so_far)) {}
  GameSolution best;
};

// v(L,e) = max over Δ(e) of λ_min(L(x)), solved by log-det barrier
// path-following with a spectral-subgradient polish fallback.
GameSolution value(const LinearOperator& L, double tol = tol::game_gap);
// Same game normalized at an arbitrary interior point e′ (strategies satisfy
// <x, e′> = 1); solved by conjugating with P_{e′^{-1/2}}.
GameSolution value(const LinearOperator& L, const Element& normalization,
                   double tol = tol::game_gap);

// Optimality certificate check: accepts iff λ_max(Lᵀ(y)) ≤ λ_min(L(x)) + tol
// and returns the midpoint as the certified value.
std::pair<bool, double> verify_pair(const LinearOperator& L, const Element& x, const Element& y,
                                    double tol = 1e-6);

enum class MixedVerdict { completely_mixed, not_completely_mixed, inconclusive };
enum class MixedPath { kernel_zero_value, invertible_nonzero_value, solver_interior };

const char* to_string(MixedVerdict v);
const char* to_string(MixedPath p);

struct MixedReport {
  MixedVerdict verdict = MixedVerdict::inconclusive;
  MixedPath path = MixedPath::solver_interior;
  double game_value = 0;
  int kernel_dim = -1;
  Element xbar, ybar;
  std::pair<double, double> interiority_margins{0, 0};  // λ_min of each strategy
  std::pair<double, double> s_commutation_residuals{0, 0};  // (||LS||, ||SL||)
  bool sampled = false;
  std::string note;
};

MixedReport is_completely_mixed(const LinearOperator& L, double tol = tol::game_gap,
                                uint64_t seed = 0);

// Characterization via quadratic representations: minimizes v(L + P_c) over
// primitive idempotents c. Requires v(L) = 0 (throws otherwise). Exact on R^n.
struct QuadRepCheck {
  bool all_positive = false;
  bool exact = false;  // finite enumeration was available
  Idempotent worst_c;
  double worst_value = 0;
  long budget_used = 0;
};
QuadRepCheck cm_by_quadratic_reps(const LinearOperator& L, const SearchBudget& budget = {});

enum class Trichotomy { cm_positive_value, cm_negative_value, not_cm };
const char* to_string(Trichotomy t);

struct TrichotomyReport {
  Trichotomy verdict = Trichotomy::not_cm;
  VectorXd eigenvalues;  // of a
  bool cross_checked = false;
  bool consistent = true;
  double game_value = 0;
  MixedVerdict mixed = MixedVerdict::inconclusive;
};

// Sign pattern of a's eigenvalues decides whether the multiplication game L_a
// is completely mixed; optionally cross-checked against the solver.
TrichotomyReport lyapunov_game_trichotomy(const Element& a, bool cross_check = true);

// Solves the game at `trials` random interior normalization points and reports
// whether the value sign (zero band ±1e-7) is constant.
bool sign_invariance_probe(const LinearOperator& L, int trials, uint64_t seed = 0);

}  // namespace conegames

#pragma once

#include "conegames/common.hpp"

// Reference implementations used by the verification suites and tests. These
// are deliberately independent of the solver and classifier code paths they
// cross-check: a dense tableau simplex for classical matrix games, Tarjan's
// SCC for digraph irreducibility, and a face brute-force for R^n.

namespace conegames::oracles {

struct MatrixGameLP {
  double value = 0;
  VectorXd x, y;  // optimal mixed strategies (row chooser maximizes <Ax, y>)
  int pivots = 0;
};

// Classical zero-sum matrix game by LP (positive shift + primal simplex on
// the bounded dual). Payoff to the maximizer choosing x is min_i (Ax)_i.
MatrixGameLP solve_matrix_game_lp(const MatrixXd& A);

// Strong connectivity of the support digraph (edges where |M_ij| > threshold,
// i != j), via Tarjan's SCC.
bool strongly_connected(const MatrixXd& M, double threshold = 0.0);
int scc_count(const MatrixXd& M, double threshold = 0.0);

// Exact space-irreducibility over R^n: checks every nonempty proper
// coordinate subset for invariance (off-diagonal block of zeros). n <= 24.
bool rn_space_irreducible_bruteforce(const MatrixXd& M, double tol = 0.0);

}  // namespace conegames::oracles

#include "conegames/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace conegames::oracles {

MatrixGameLP solve_matrix_game_lp(const MatrixXd& A) {
  const int n = static_cast<int>(A.rows());
  if (A.cols() != n || n < 1) throw InvalidInput("solve_matrix_game_lp: square matrix required");

  // shift so every entry is positive, making the value positive
  double sigma = 1.0 - std::min(0.0, A.minCoeff());
  MatrixXd Ab = A.array() + sigma;

  // maximize 1ᵀw  s.t.  Abᵀ w + s = 1,  w,s >= 0  (w = y/v̄)
  const int cols = 2 * n;
  MatrixXd T(n, cols);
  T.leftCols(n) = Ab.transpose();
  T.rightCols(n) = MatrixXd::Identity(n, n);
  VectorXd rhs = VectorXd::Ones(n);
  std::vector<int> basis(n);
  for (int i = 0; i < n; ++i) basis[i] = n + i;
  auto cost = [&](int j) { return j < n ? 1.0 : 0.0; };

  MatrixGameLP out;
  const int pivot_cap = 200 * n + 200;
  for (;; ++out.pivots) {
    if (out.pivots > pivot_cap) throw ComputeError("solve_matrix_game_lp: pivot cap exceeded");
    // reduced costs r_j = c_j − c_Bᵀ T_j
    VectorXd cb(n);
    for (int i = 0; i < n; ++i) cb[i] = cost(basis[i]);
    int enter = -1;
    double best_r = 1e-10;
    bool bland = out.pivots > 50 * n + 50;
    for (int j = 0; j < cols; ++j) {
      double r = cost(j) - cb.dot(T.col(j));
      if (r > best_r) {
        enter = j;
        if (bland) break;  // first improving column
        best_r = r;
      }
    }
    if (enter < 0) break;  // optimal
    int leave = -1;
    double best_ratio = 0;
    for (int i = 0; i < n; ++i) {
      if (T(i, enter) > 1e-10) {
        double ratio = rhs[i] / T(i, enter);
        if (leave < 0 || ratio < best_ratio - 1e-12 ||
            (std::abs(ratio - best_ratio) <= 1e-12 && basis[i] < basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
    }
    if (leave < 0) throw ComputeError("solve_matrix_game_lp: unbounded (cannot happen)");
    double piv = T(leave, enter);
    T.row(leave) /= piv;
    rhs[leave] /= piv;
    for (int i = 0; i < n; ++i) {
      if (i == leave) continue;
      double f = T(i, enter);
      if (f != 0.0) {
        T.row(i) -= f * T.row(leave);
        rhs[i] -= f * rhs[leave];
      }
    }
    basis[leave] = enter;
  }

  VectorXd w = VectorXd::Zero(n);
  for (int i = 0; i < n; ++i)
    if (basis[i] < n) w[basis[i]] = rhs[i];
  VectorXd cb(n);
  for (int i = 0; i < n; ++i) cb[i] = cost(basis[i]);
  VectorXd pi(n);
  for (int i = 0; i < n; ++i) pi[i] = cb.dot(T.col(n + i));  // multipliers from slack columns
  double sumw = w.sum();
  if (sumw <= 0) throw ComputeError("solve_matrix_game_lp: degenerate optimum");
  double vbar = 1.0 / sumw;
  out.value = vbar - sigma;
  out.y = vbar * w;
  out.x = vbar * pi;
  return out;
}

namespace {

struct Tarjan {
  const std::vector<std::vector<int>>& adj;
  std::vector<int> index, low, stk;
  std::vector<bool> on_stack;
  int counter = 0, components = 0;

  explicit Tarjan(const std::vector<std::vector<int>>& a)
      : adj(a), index(a.size(), -1), low(a.size(), 0), on_stack(a.size(), false) {}

  void run(int v0) {
    // iterative DFS to keep the stack shallow
    struct Frame {
      int v;
      size_t child;
    };
    std::vector<Frame> frames{{v0, 0}};
    index[v0] = low[v0] = counter++;
    stk.push_back(v0);
    on_stack[v0] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.child < adj[f.v].size()) {
        int w = adj[f.v][f.child++];
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stk.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
      } else {
        if (low[f.v] == index[f.v]) {
          ++components;
          for (;;) {
            int w = stk.back();
            stk.pop_back();
            on_stack[w] = false;
            if (w == f.v) break;
          }
        }
        int v = f.v;
        frames.pop_back();
        if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
      }
    }
  }
};

std::vector<std::vector<int>> support_digraph(const MatrixXd& M, double threshold) {
  const int n = static_cast<int>(M.rows());
  std::vector<std::vector<int>> adj(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && std::abs(M(i, j)) > threshold) adj[i].push_back(j);
  return adj;
}

}  // namespace

int scc_count(const MatrixXd& M, double threshold) {
  if (M.rows() != M.cols()) throw InvalidInput("scc_count: square matrix required");
  auto adj = support_digraph(M, threshold);
  Tarjan t(adj);
  for (int v = 0; v < M.rows(); ++v)
    if (t.index[v] < 0) t.run(v);
  return t.components;
}

bool strongly_connected(const MatrixXd& M, double threshold) {
  if (M.rows() == 1) return true;
  return scc_count(M, threshold) == 1;
}

bool rn_space_irreducible_bruteforce(const MatrixXd& M, double tol) {
  const int n = static_cast<int>(M.rows());
  if (M.cols() != n) throw InvalidInput("rn_space_irreducible_bruteforce: square required");
  if (n > 24) throw InvalidInput("rn_space_irreducible_bruteforce: n too large");
  if (n == 1) return true;
  for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
    bool invariant = true;
    for (int i = 0; i < n && invariant; ++i) {
      if (mask & (1u << i)) continue;  // i outside the subset
      for (int j = 0; j < n; ++j)
        if ((mask & (1u << j)) && std::abs(M(i, j)) > tol) {
          invariant = false;
          break;
        }
    }
    if (invariant) return false;
  }
  return true;
}

}  // namespace conegames::oracles

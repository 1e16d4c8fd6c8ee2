#pragma once

#include <functional>
#include <utility>

#include "conegames/common.hpp"

namespace conegames {

// Budget for sampled certifications: multistarts × refinement steps.
struct SearchBudget {
  int multistarts = 64;
  int refine_steps = 200;
  uint64_t seed = 0;
};

struct SearchResult {
  double value = 0;     // best objective found (minimum)
  VectorXd argmin;      // parameter vector at the best value
  long evaluations = 0;
};

// Multistart compass search: Gaussian starts, coordinate steps with halving.
// Deterministic for a fixed budget.seed regardless of evaluation order.
inline SearchResult multistart_minimize(int param_dim,
                                        const std::function<double(const VectorXd&)>& f,
                                        const SearchBudget& budget,
                                        double initial_step = 0.5) {
  SearchResult best;
  bool have_best = false;
  for (int trial = 0; trial < budget.multistarts; ++trial) {
    RngStream rng = RngStream::child(budget.seed, static_cast<uint64_t>(trial));
    VectorXd x = rng.gauss_vec(param_dim);
    double fx = f(x);
    ++best.evaluations;
    double step = initial_step;
    int since_improve = 0;
    for (int it = 0; it < budget.refine_steps; ++it) {
      int k = it % param_dim;
      bool improved = false;
      for (double sgn : {1.0, -1.0}) {
        VectorXd y = x;
        y[k] += sgn * step;
        double fy = f(y);
        ++best.evaluations;
        if (fy < fx - 1e-15) {
          x = std::move(y);
          fx = fy;
          improved = true;
          break;
        }
      }
      if (improved) {
        since_improve = 0;
      } else if (++since_improve >= param_dim) {
        step *= 0.5;
        since_improve = 0;
        if (step < 1e-10) break;
      }
    }
    if (!have_best || fx < best.value) {
      best.value = fx;
      best.argmin = x;
      have_best = true;
    }
  }
  return best;
}

}  // namespace conegames

#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace conegames {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Shared tolerance knobs. Several verdicts (kernel dimension, completely-mixed
// dispatch, witness validation) must agree across modules, so the thresholds
// live in one place.
namespace tol {
inline constexpr double idempotent = 1e-9;        // ||c∘c - c||
inline constexpr double idempotent_round = 1e-6;  // max eigenvalue move when re-projecting
inline constexpr double kernel_rel = 1e-8;        // sigma < kernel_rel * sigma_max counts as 0
inline constexpr double value_zero = 1e-7;        // |v| below this is treated as zero
inline constexpr double interior = 1e-6;          // lambda_min above this: interior strategy
inline constexpr double leakage_rel = 1e-7;       // invariant-face leakage vs ||L||
inline constexpr double witness = 1e-9;           // minimum violation for a refutation witness
inline constexpr double game_gap = 1e-7;          // default solver gap target
inline constexpr double game_gap_warn = 1e-5;     // accepted with a warning flag
}  // namespace tol

struct InvalidInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ComputeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline uint64_t splitmix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seeded random stream. Child streams let multistart trials draw independent,
// reproducible randomness regardless of evaluation order.
class RngStream {
 public:
  explicit RngStream(uint64_t seed) : gen_(splitmix64(seed)) {}

  double gauss() { return normal_(gen_); }
  double unif() { return unif_(gen_); }
  double unif(double lo, double hi) { return lo + (hi - lo) * unif(); }
  uint64_t u64() { return gen_(); }
  int index(int n) { return static_cast<int>(u64() % static_cast<uint64_t>(n)); }

  VectorXd gauss_vec(int n) {
    VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = gauss();
    return v;
  }

  VectorXd unit_vec(int n) {
    VectorXd v = gauss_vec(n);
    double nrm = v.norm();
    while (nrm < 1e-12) {
      v = gauss_vec(n);
      nrm = v.norm();
    }
    return v / nrm;
  }

  static RngStream child(uint64_t master, uint64_t index) {
    return RngStream(splitmix64(master ^ splitmix64(index + 1)));
  }

 private:
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> unif_{0.0, 1.0};
};

}  // namespace conegames

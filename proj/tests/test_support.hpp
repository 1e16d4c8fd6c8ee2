#pragma once

#include <vector>

#include "conegames/algebra.hpp"
#include "conegames/operators.hpp"

namespace conegames::testing {

inline std::vector<AlgebraPtr> sample_algebras() {
  return {
      Algebra::real_n(4),
      Algebra::sym(3),
      Algebra::herm(2),
      Algebra::spin(4),
      Algebra::direct_sum({Algebra::real_n(2), Algebra::spin(3), Algebra::sym(2)}),
  };
}

inline Element random_cone_element(const AlgebraPtr& a, RngStream& rng) {
  Element x = random_element(a, rng);
  return project_to_cone(x);
}

// Independent product oracle: precompute the structure tensor T_ijk =
// <b_i∘b_j, b_k> once, then multiply by contraction. Exercises bilinearity
// and the coordinate packing separately from the per-kind product formulas.
class StructureTensorOracle {
 public:
  explicit StructureTensorOracle(const AlgebraPtr& a) : a_(a) {
    int d = a->dim();
    tensor_.resize(d);
    VectorXd bi = VectorXd::Zero(d), bj = VectorXd::Zero(d);
    for (int i = 0; i < d; ++i) {
      tensor_[i].resize(d, d);
      bi[i] = 1.0;
      for (int j = 0; j < d; ++j) {
        bj[j] = 1.0;
        tensor_[i].col(j) = a->product(bi, bj);
        bj[j] = 0.0;
      }
      bi[i] = 0.0;
    }
  }

  VectorXd product(const VectorXd& x, const VectorXd& y) const {
    VectorXd z = VectorXd::Zero(a_->dim());
    for (int i = 0; i < a_->dim(); ++i) z += x[i] * (tensor_[i] * y);
    return z;
  }

 private:
  AlgebraPtr a_;
  std::vector<MatrixXd> tensor_;
};

}  // namespace conegames::testing

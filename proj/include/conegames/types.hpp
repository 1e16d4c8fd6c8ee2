#pragma once

#include <memory>
#include <utility>

#include "conegames/common.hpp"

namespace conegames {

class Algebra;
using AlgebraPtr = std::shared_ptr<const Algebra>;

// An algebra element as its coordinate vector in the canonical orthonormal
// basis (trace inner product), so <x,y> is the plain dot product of coords.
struct Element {
  AlgebraPtr algebra;
  VectorXd coords;

  Element() = default;
  Element(AlgebraPtr a, VectorXd c) : algebra(std::move(a)), coords(std::move(c)) {}

  double norm() const { return coords.norm(); }
};

// Dense linear map on the coordinate space. Adjoint = matrix transpose by
// basis orthonormality.
struct LinearOperator {
  AlgebraPtr algebra;
  MatrixXd matrix;

  LinearOperator() = default;
  LinearOperator(AlgebraPtr a, MatrixXd m) : algebra(std::move(a)), matrix(std::move(m)) {}

  Element apply(const Element& x) const;
  LinearOperator transpose() const { return {algebra, matrix.transpose()}; }
  double norm() const { return matrix.norm(); }
  int dim() const { return static_cast<int>(matrix.rows()); }
};

LinearOperator operator+(const LinearOperator& a, const LinearOperator& b);
LinearOperator operator-(const LinearOperator& a, const LinearOperator& b);
LinearOperator operator*(const LinearOperator& a, const LinearOperator& b);  // composition
LinearOperator operator*(double c, const LinearOperator& a);

}  // namespace conegames

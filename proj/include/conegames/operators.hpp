#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "conegames/algebra.hpp"

namespace conegames {

LinearOperator from_dense(const AlgebraPtr& a, MatrixXd m);
LinearOperator identity_op(const AlgebraPtr& a);
LinearOperator zero_op(const AlgebraPtr& a);

// Multiplication operator L_a(x) = a∘x and quadratic representation
// P_a(x) = 2a∘(a∘x) − a²∘x. Both self-adjoint; P_a maps K into K.
LinearOperator lyapunov_op(const Element& a);
LinearOperator quad_rep(const Element& a);

// Orthogonal projectors onto V(c,1), V(c,1/2), V(c,0).
struct PeirceProjectors {
  LinearOperator p1, p_half, p0;
};
PeirceProjectors peirce_projectors(const Idempotent& c);

// Projectors onto the joint Peirce blocks V_ij of a Jordan frame; diagonal
// blocks first, then (i,j) lexicographic; empty blocks omitted.
struct PeirceBlock {
  int i, j;   // 0-based, i <= j
  int dim;
  LinearOperator projector;
};
std::vector<PeirceBlock> frame_peirce_blocks(const std::vector<Element>& frame);

// X ↦ AX + XAᵀ on S^n, X ↦ AX + XA* on H^n.
LinearOperator lyapunov_matrix_op(const AlgebraPtr& a, const MatrixXd& A);
LinearOperator lyapunov_matrix_op(const AlgebraPtr& a, const Eigen::MatrixXcd& A);
// X ↦ X − AXAᵀ (resp. X − AXA*).
LinearOperator stein_matrix_op(const AlgebraPtr& a, const MatrixXd& A);
LinearOperator stein_matrix_op(const AlgebraPtr& a, const Eigen::MatrixXcd& A);

// z ↦ <y,z>·x.
LinearOperator rank_one_op(const Element& x, const Element& y);

// rI − S.
LinearOperator m_transform(double r, const LinearOperator& S);

// exp(tL) by scaling-and-squaring with a Padé(13,13) kernel. Throws for
// ||tL|| large enough to overflow.
LinearOperator op_exp(const LinearOperator& L, double t = 1.0);

struct SpectrumReport {
  Eigen::VectorXcd eigenvalues;
  double alpha = 0;  // min real part
  double rho = 0;    // spectral radius
  std::optional<Element> perron_vector;  // real eigenvector in K for rho (or alpha)
};
SpectrumReport spectrum(const LinearOperator& L);

// Orthonormal basis of ker L: right singular vectors with sigma < tol·sigma_max.
std::vector<Element> kernel_basis(const LinearOperator& L, double tol = tol::kernel_rel);

struct GroupInverseError : ComputeError {
  GroupInverseError(const std::string& msg, Element witness_vec)
      : ComputeError(msg), witness(std::move(witness_vec)) {}
  Element witness;  // vector in ker L² \ ker L
};

// Group inverse for index <= 1 (ker L² = ker L): inverts L on its range,
// zero on the kernel. Throws GroupInverseError otherwise.
LinearOperator group_inverse(const LinearOperator& L);

}  // namespace conegames

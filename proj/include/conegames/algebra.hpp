#pragma once

#include <string>
#include <vector>

#include "conegames/types.hpp"

namespace conegames {

enum class AlgebraKind { RealVectors, SymMatrices, HermMatrices, SpinAlgebra, DirectSum };

// Spectral data at coordinate level: eigenvalues (descending) and the Jordan
// frame as columns of a dim x rank matrix.
struct SpectralData {
  VectorXd eigenvalues;
  MatrixXd frame;
};

// A Euclidean Jordan algebra of one of the supported kinds, fixed canonical
// orthonormal basis w.r.t. the trace inner product:
//   R^n   : standard basis, componentwise product.
//   S^n   : {E_ii} ∪ {(E_ij+E_ji)/√2}, X∘Y = (XY+YX)/2, d = n(n+1)/2.
//   H^n   : adds {(iE_ij−iE_ji)/√2}, d = n².
//   L^n   : (1/√2)(1,0) and (1/√2)(0,e_i); (t,u)∘(s,w) = (ts+<u,w>, tw+su),
//           rank 2, d = n.
//   sums  : concatenated coordinates, blockwise operations.
class Algebra : public std::enable_shared_from_this<Algebra> {
 public:
  static AlgebraPtr real_n(int n);
  static AlgebraPtr sym(int n);
  static AlgebraPtr herm(int n);
  static AlgebraPtr spin(int n);
  static AlgebraPtr direct_sum(std::vector<AlgebraPtr> parts);

  virtual ~Algebra() = default;

  AlgebraKind kind() const { return kind_; }
  int rank() const { return rank_; }
  int dim() const { return dim_; }
  // n of the constructor (matrix size for S^n/H^n, ambient dim for L^n).
  int param_n() const { return n_; }
  static constexpr const char* basis_convention() { return "trace-orthonormal-v1"; }

  virtual VectorXd product(const VectorXd& x, const VectorXd& y) const = 0;
  virtual SpectralData spectral(const VectorXd& x) const = 0;
  virtual const std::vector<AlgebraPtr>& parts() const;

  const VectorXd& unit_coords() const { return unit_; }

  std::string describe() const;

 protected:
  Algebra(AlgebraKind kind, int n, int rank, int dim)
      : kind_(kind), n_(n), rank_(rank), dim_(dim) {}

  AlgebraKind kind_;
  int n_;
  int rank_;
  int dim_;
  VectorXd unit_;
};

struct SpectralDecomposition {
  VectorXd eigenvalues;         // descending
  std::vector<Element> frame;   // e_1..e_n, primitive idempotents
};

// Nonzero idempotent with its integer rank tr(c).
struct Idempotent {
  Element element;
  int rank_k = 0;
};

Element make_element(const AlgebraPtr& a, VectorXd coords);
Element unit_element(const AlgebraPtr& a);
Element zero_element(const AlgebraPtr& a);

Element jordan_product(const Element& x, const Element& y);
double inner(const Element& x, const Element& y);
double trace_of(const Element& x);

SpectralDecomposition spectral_decompose(const Element& x);
double lambda_min(const Element& x);
double lambda_max(const Element& x);
bool in_cone(const Element& x, double tol = 1e-10);
bool in_interior(const Element& x, double tol = 1e-10);
Element project_to_cone(const Element& x);

// Jordan inverse Σ λ_i^{-1} e_i; throws for singular elements.
Element jordan_inverse(const Element& x);
double log_det(const Element& x);  // Σ log λ_i, throws outside the interior

// Validates ||c∘c − c|| and integer trace; re-projects by rounding spectral
// eigenvalues to {0,1}, rejecting if any eigenvalue moves more than the
// rounding tolerance. c = 0 and c = e are accepted (rank 0 / rank n).
Idempotent make_idempotent(const Element& c);

Element random_element(const AlgebraPtr& a, RngStream& rng);
Idempotent random_primitive_idempotent(const AlgebraPtr& a, RngStream& rng);
std::vector<Element> random_jordan_frame(const AlgebraPtr& a, RngStream& rng);

Element random_element(const AlgebraPtr& a, uint64_t seed);
Idempotent random_primitive_idempotent(const AlgebraPtr& a, uint64_t seed);
std::vector<Element> random_jordan_frame(const AlgebraPtr& a, uint64_t seed);

// Interior point with eigenvalues in [lo, hi] on a random frame.
Element random_interior_point(const AlgebraPtr& a, RngStream& rng, double lo = 0.5,
                              double hi = 2.0);

// Matrix packing for the matrix algebras (exposed for operator constructors
// and tests; throws on kind mismatch).
MatrixXd sym_to_matrix(const AlgebraPtr& a, const VectorXd& coords);
VectorXd sym_from_matrix(const AlgebraPtr& a, const MatrixXd& m);
Eigen::MatrixXcd herm_to_matrix(const AlgebraPtr& a, const VectorXd& coords);
VectorXd herm_from_matrix(const AlgebraPtr& a, const Eigen::MatrixXcd& m);

}  // namespace conegames

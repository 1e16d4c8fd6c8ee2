#include "conegames/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace conegames {

namespace {

void check_same_algebra(const Element& x, const Element& y, const char* where) {
  if (!x.algebra || !y.algebra) throw InvalidInput(std::string(where) + ": element without algebra");
  if (x.algebra != y.algebra &&
      (x.algebra->kind() != y.algebra->kind() || x.algebra->dim() != y.algebra->dim() ||
       x.algebra->rank() != y.algebra->rank()))
    throw InvalidInput(std::string(where) + ": elements from different algebras");
  if (x.coords.size() != x.algebra->dim() || y.coords.size() != y.algebra->dim())
    throw InvalidInput(std::string(where) + ": coordinate length does not match algebra dim");
}

void check_element(const Element& x, const char* where) {
  if (!x.algebra) throw InvalidInput(std::string(where) + ": element without algebra");
  if (x.coords.size() != x.algebra->dim())
    throw InvalidInput(std::string(where) + ": coordinate length does not match algebra dim");
}

// ---------------------------------------------------------------------------
// R^n

class RnAlgebra final : public Algebra {
 public:
  explicit RnAlgebra(int n) : Algebra(AlgebraKind::RealVectors, n, n, n) {
    unit_ = VectorXd::Ones(n);
  }

  VectorXd product(const VectorXd& x, const VectorXd& y) const override {
    return x.cwiseProduct(y);
  }

  SpectralData spectral(const VectorXd& x) const override {
    std::vector<int> idx(dim_);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int i, int j) { return x[i] > x[j]; });
    SpectralData sd;
    sd.eigenvalues.resize(dim_);
    sd.frame = MatrixXd::Zero(dim_, dim_);
    for (int k = 0; k < dim_; ++k) {
      sd.eigenvalues[k] = x[idx[k]];
      sd.frame(idx[k], k) = 1.0;
    }
    return sd;
  }

  const std::vector<AlgebraPtr>& parts() const override { return Algebra::parts(); }
};

// ---------------------------------------------------------------------------
// S^n

class SymAlgebra final : public Algebra {
 public:
  explicit SymAlgebra(int n) : Algebra(AlgebraKind::SymMatrices, n, n, n * (n + 1) / 2) {
    unit_ = pack(MatrixXd::Identity(n, n));
  }

  MatrixXd unpack(const VectorXd& c) const {
    MatrixXd m(n_, n_);
    int k = 0;
    const double s = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < n_; ++i) m(i, i) = c[k++];
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j) {
        m(i, j) = m(j, i) = c[k++] * s;
      }
    return m;
  }

  VectorXd pack(const MatrixXd& m) const {
    VectorXd c(dim_);
    int k = 0;
    const double s = std::sqrt(2.0);
    for (int i = 0; i < n_; ++i) c[k++] = m(i, i);
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j) c[k++] = 0.5 * (m(i, j) + m(j, i)) * s;
    return c;
  }

  VectorXd product(const VectorXd& x, const VectorXd& y) const override {
    MatrixXd X = unpack(x), Y = unpack(y);
    return pack(0.5 * (X * Y + Y * X));
  }

  SpectralData spectral(const VectorXd& x) const override {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(unpack(x));
    SpectralData sd;
    sd.eigenvalues.resize(n_);
    sd.frame.resize(dim_, n_);
    // SelfAdjointEigenSolver sorts ascending; flip to descending.
    for (int k = 0; k < n_; ++k) {
      int src = n_ - 1 - k;
      sd.eigenvalues[k] = es.eigenvalues()[src];
      VectorXd u = es.eigenvectors().col(src);
      sd.frame.col(k) = pack(u * u.transpose());
    }
    return sd;
  }
};

// ---------------------------------------------------------------------------
// H^n

class HermAlgebra final : public Algebra {
 public:
  explicit HermAlgebra(int n) : Algebra(AlgebraKind::HermMatrices, n, n, n * n) {
    unit_ = pack(Eigen::MatrixXcd::Identity(n, n));
  }

  // layout: n diagonal entries, then the real off-diagonal parts, then the
  // imaginary parts (basis element (iE_ij − iE_ji)/√2 has entry i/√2 at (i,j)).
  Eigen::MatrixXcd unpack(const VectorXd& c) const {
    Eigen::MatrixXcd m(n_, n_);
    const double s = 1.0 / std::sqrt(2.0);
    const int noff = n_ * (n_ - 1) / 2;
    int k = 0;
    for (int i = 0; i < n_; ++i) m(i, i) = c[k++];
    int off = 0;
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j) {
        m(i, j) = std::complex<double>(c[n_ + off] * s, c[n_ + noff + off] * s);
        m(j, i) = std::conj(m(i, j));
        ++off;
      }
    return m;
  }

  VectorXd pack(const Eigen::MatrixXcd& m) const {
    VectorXd c(dim_);
    const double s = std::sqrt(2.0);
    const int noff = n_ * (n_ - 1) / 2;
    int k = 0;
    for (int i = 0; i < n_; ++i) c[k++] = m(i, i).real();
    int off = 0;
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j) {
        std::complex<double> h = 0.5 * (m(i, j) + std::conj(m(j, i)));
        c[n_ + off] = h.real() * s;
        c[n_ + noff + off] = h.imag() * s;
        ++off;
      }
    return c;
  }

  VectorXd product(const VectorXd& x, const VectorXd& y) const override {
    Eigen::MatrixXcd X = unpack(x), Y = unpack(y);
    return pack(0.5 * (X * Y + Y * X));
  }

  SpectralData spectral(const VectorXd& x) const override {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(unpack(x));
    SpectralData sd;
    sd.eigenvalues.resize(n_);
    sd.frame.resize(dim_, n_);
    for (int k = 0; k < n_; ++k) {
      int src = n_ - 1 - k;
      sd.eigenvalues[k] = es.eigenvalues()[src];
      Eigen::VectorXcd u = es.eigenvectors().col(src);
      sd.frame.col(k) = pack(u * u.adjoint());
    }
    return sd;
  }
};

// ---------------------------------------------------------------------------
// L^n (Jordan spin algebra): element (t,u), coords = √2·(t,u).

class SpinAlgebra final : public Algebra {
 public:
  explicit SpinAlgebra(int n) : Algebra(AlgebraKind::SpinAlgebra, n, 2, n) {
    if (n < 2) throw InvalidInput("spin algebra needs ambient dimension >= 2");
    unit_ = VectorXd::Zero(n);
    unit_[0] = std::sqrt(2.0);
  }

  VectorXd product(const VectorXd& x, const VectorXd& y) const override {
    // In ambient (t,u) terms: (ts + <u,w>, tw + su). Coordinates carry a
    // uniform √2, so the product picks up a 1/√2.
    const double s = 1.0 / std::sqrt(2.0);
    VectorXd z(dim_);
    z[0] = x.dot(y) * s;
    z.tail(dim_ - 1) = s * (x[0] * y.tail(dim_ - 1) + y[0] * x.tail(dim_ - 1));
    return z;
  }

  SpectralData spectral(const VectorXd& x) const override {
    SpectralData sd;
    sd.eigenvalues.resize(2);
    sd.frame.resize(dim_, 2);
    VectorXd u = x.tail(dim_ - 1);
    double t = x[0] / std::sqrt(2.0);
    double un = u.norm() / std::sqrt(2.0);
    VectorXd w;
    if (un > 1e-300 * (1.0 + std::abs(t))) {
      w = u / u.norm();
    } else {
      w = VectorXd::Zero(dim_ - 1);
      w[0] = 1.0;
      un = 0.0;
    }
    sd.eigenvalues[0] = t + un;
    sd.eigenvalues[1] = t - un;
    // frame elements ½(1, ±w) in ambient terms; coords are √2·that.
    const double s = std::sqrt(2.0) * 0.5;
    sd.frame(0, 0) = s;
    sd.frame(0, 1) = s;
    sd.frame.col(0).tail(dim_ - 1) = s * w;
    sd.frame.col(1).tail(dim_ - 1) = -s * w;
    return sd;
  }
};

// ---------------------------------------------------------------------------
// Direct sums

class SumAlgebra final : public Algebra {
 public:
  explicit SumAlgebra(std::vector<AlgebraPtr> parts)
      : Algebra(AlgebraKind::DirectSum, 0, total_rank(parts), total_dim(parts)),
        parts_(std::move(parts)) {
    unit_.resize(dim_);
    int off = 0;
    for (const auto& p : parts_) {
      unit_.segment(off, p->dim()) = p->unit_coords();
      off += p->dim();
    }
  }

  VectorXd product(const VectorXd& x, const VectorXd& y) const override {
    VectorXd z(dim_);
    int off = 0;
    for (const auto& p : parts_) {
      z.segment(off, p->dim()) = p->product(x.segment(off, p->dim()), y.segment(off, p->dim()));
      off += p->dim();
    }
    return z;
  }

  SpectralData spectral(const VectorXd& x) const override {
    struct Entry {
      double lambda;
      VectorXd frame_col;
    };
    std::vector<Entry> entries;
    entries.reserve(rank_);
    int off = 0;
    for (const auto& p : parts_) {
      SpectralData sub = p->spectral(x.segment(off, p->dim()));
      for (int k = 0; k < p->rank(); ++k) {
        VectorXd col = VectorXd::Zero(dim_);
        col.segment(off, p->dim()) = sub.frame.col(k);
        entries.push_back({sub.eigenvalues[k], std::move(col)});
      }
      off += p->dim();
    }
    std::stable_sort(entries.begin(), entries.end(),
                     [](const Entry& a, const Entry& b) { return a.lambda > b.lambda; });
    SpectralData sd;
    sd.eigenvalues.resize(rank_);
    sd.frame.resize(dim_, rank_);
    for (int k = 0; k < rank_; ++k) {
      sd.eigenvalues[k] = entries[k].lambda;
      sd.frame.col(k) = entries[k].frame_col;
    }
    return sd;
  }

  const std::vector<AlgebraPtr>& parts() const override { return parts_; }

 private:
  static int total_rank(const std::vector<AlgebraPtr>& ps) {
    int r = 0;
    for (const auto& p : ps) r += p->rank();
    return r;
  }
  static int total_dim(const std::vector<AlgebraPtr>& ps) {
    int d = 0;
    for (const auto& p : ps) d += p->dim();
    return d;
  }

  std::vector<AlgebraPtr> parts_;
};

}  // namespace

const std::vector<AlgebraPtr>& Algebra::parts() const {
  static const std::vector<AlgebraPtr> empty;
  return empty;
}

AlgebraPtr Algebra::real_n(int n) {
  if (n < 1) throw InvalidInput("real_n: n must be positive");
  return std::make_shared<RnAlgebra>(n);
}
AlgebraPtr Algebra::sym(int n) {
  if (n < 1) throw InvalidInput("sym: n must be positive");
  return std::make_shared<SymAlgebra>(n);
}
AlgebraPtr Algebra::herm(int n) {
  if (n < 1) throw InvalidInput("herm: n must be positive");
  return std::make_shared<HermAlgebra>(n);
}
AlgebraPtr Algebra::spin(int n) { return std::make_shared<SpinAlgebra>(n); }
AlgebraPtr Algebra::direct_sum(std::vector<AlgebraPtr> parts) {
  if (parts.empty()) throw InvalidInput("direct_sum: needs at least one part");
  return std::make_shared<SumAlgebra>(std::move(parts));
}

std::string Algebra::describe() const {
  switch (kind_) {
    case AlgebraKind::RealVectors:
      return "rn(" + std::to_string(n_) + ")";
    case AlgebraKind::SymMatrices:
      return "sym(" + std::to_string(n_) + ")";
    case AlgebraKind::HermMatrices:
      return "herm(" + std::to_string(n_) + ")";
    case AlgebraKind::SpinAlgebra:
      return "spin(" + std::to_string(n_) + ")";
    case AlgebraKind::DirectSum: {
      std::string s = "sum(";
      bool first = true;
      for (const auto& p : parts()) {
        if (!first) s += ",";
        s += p->describe();
        first = false;
      }
      return s + ")";
    }
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Element-level API

Element make_element(const AlgebraPtr& a, VectorXd coords) {
  if (!a) throw InvalidInput("make_element: null algebra");
  if (coords.size() != a->dim())
    throw InvalidInput("make_element: expected " + std::to_string(a->dim()) + " coords, got " +
                       std::to_string(coords.size()));
  return {a, std::move(coords)};
}

Element unit_element(const AlgebraPtr& a) { return {a, a->unit_coords()}; }
Element zero_element(const AlgebraPtr& a) { return {a, VectorXd::Zero(a->dim())}; }

Element jordan_product(const Element& x, const Element& y) {
  check_same_algebra(x, y, "jordan_product");
  return {x.algebra, x.algebra->product(x.coords, y.coords)};
}

double inner(const Element& x, const Element& y) {
  check_same_algebra(x, y, "inner");
  return x.coords.dot(y.coords);
}

double trace_of(const Element& x) {
  check_element(x, "trace_of");
  return x.coords.dot(x.algebra->unit_coords());
}

SpectralDecomposition spectral_decompose(const Element& x) {
  check_element(x, "spectral_decompose");
  SpectralData sd = x.algebra->spectral(x.coords);
  SpectralDecomposition out;
  out.eigenvalues = sd.eigenvalues;
  out.frame.reserve(sd.frame.cols());
  for (int k = 0; k < sd.frame.cols(); ++k) out.frame.push_back({x.algebra, sd.frame.col(k)});
  return out;
}

double lambda_min(const Element& x) {
  check_element(x, "lambda_min");
  return x.algebra->spectral(x.coords).eigenvalues.minCoeff();
}

double lambda_max(const Element& x) {
  check_element(x, "lambda_max");
  return x.algebra->spectral(x.coords).eigenvalues.maxCoeff();
}

bool in_cone(const Element& x, double tol) {
  return lambda_min(x) >= -tol * (1.0 + x.coords.norm());
}

bool in_interior(const Element& x, double tol) {
  return lambda_min(x) > tol * (1.0 + x.coords.norm());
}

Element project_to_cone(const Element& x) {
  check_element(x, "project_to_cone");
  SpectralData sd = x.algebra->spectral(x.coords);
  VectorXd out = VectorXd::Zero(x.algebra->dim());
  for (int k = 0; k < sd.eigenvalues.size(); ++k)
    if (sd.eigenvalues[k] > 0) out += sd.eigenvalues[k] * sd.frame.col(k);
  return {x.algebra, out};
}

Element jordan_inverse(const Element& x) {
  check_element(x, "jordan_inverse");
  SpectralData sd = x.algebra->spectral(x.coords);
  double scale = sd.eigenvalues.cwiseAbs().maxCoeff();
  VectorXd out = VectorXd::Zero(x.algebra->dim());
  for (int k = 0; k < sd.eigenvalues.size(); ++k) {
    if (std::abs(sd.eigenvalues[k]) <= 1e-14 * (1.0 + scale))
      throw ComputeError("jordan_inverse: singular element");
    out += sd.frame.col(k) / sd.eigenvalues[k];
  }
  return {x.algebra, out};
}

double log_det(const Element& x) {
  check_element(x, "log_det");
  SpectralData sd = x.algebra->spectral(x.coords);
  double s = 0;
  for (int k = 0; k < sd.eigenvalues.size(); ++k) {
    if (sd.eigenvalues[k] <= 0) throw ComputeError("log_det: element not in the cone interior");
    s += std::log(sd.eigenvalues[k]);
  }
  return s;
}

Idempotent make_idempotent(const Element& c) {
  check_element(c, "make_idempotent");
  SpectralData sd = c.algebra->spectral(c.coords);
  VectorXd projected = VectorXd::Zero(c.algebra->dim());
  int rank_k = 0;
  for (int k = 0; k < sd.eigenvalues.size(); ++k) {
    double rounded = sd.eigenvalues[k] >= 0.5 ? 1.0 : 0.0;
    if (std::abs(sd.eigenvalues[k] - rounded) > tol::idempotent_round)
      throw InvalidInput("make_idempotent: eigenvalue " + std::to_string(sd.eigenvalues[k]) +
                         " is not within rounding tolerance of {0,1}");
    if (rounded == 1.0) {
      projected += sd.frame.col(k);
      ++rank_k;
    }
  }
  Element elem{c.algebra, projected};
  Element sq = jordan_product(elem, elem);
  if ((sq.coords - elem.coords).norm() > tol::idempotent * (1.0 + elem.coords.norm()))
    throw ComputeError("make_idempotent: projected element fails c∘c = c");
  return {elem, rank_k};
}

// ---------------------------------------------------------------------------
// Sampling

Element random_element(const AlgebraPtr& a, RngStream& rng) {
  return {a, rng.gauss_vec(a->dim())};
}

Idempotent random_primitive_idempotent(const AlgebraPtr& a, RngStream& rng) {
  switch (a->kind()) {
    case AlgebraKind::RealVectors: {
      VectorXd c = VectorXd::Zero(a->dim());
      c[rng.index(a->dim())] = 1.0;
      return {{a, c}, 1};
    }
    case AlgebraKind::SymMatrices: {
      VectorXd u = rng.unit_vec(a->param_n());
      return {{a, sym_from_matrix(a, u * u.transpose())}, 1};
    }
    case AlgebraKind::HermMatrices: {
      int n = a->param_n();
      Eigen::VectorXcd u(n);
      for (int i = 0; i < n; ++i) u[i] = std::complex<double>(rng.gauss(), rng.gauss());
      u /= u.norm();
      return {{a, herm_from_matrix(a, u * u.adjoint())}, 1};
    }
    case AlgebraKind::SpinAlgebra: {
      int d = a->dim();
      VectorXd w = rng.unit_vec(d - 1);
      VectorXd c(d);
      c[0] = std::sqrt(2.0) * 0.5;
      c.tail(d - 1) = std::sqrt(2.0) * 0.5 * w;
      return {{a, c}, 1};
    }
    case AlgebraKind::DirectSum: {
      // weight parts by rank so frames are sampled uniformly over slots
      const auto& ps = a->parts();
      int pick = rng.index(a->rank());
      int off = 0;
      for (const auto& p : ps) {
        if (pick < p->rank()) {
          Idempotent sub = random_primitive_idempotent(p, rng);
          VectorXd c = VectorXd::Zero(a->dim());
          c.segment(off, p->dim()) = sub.element.coords;
          return {{a, c}, 1};
        }
        pick -= p->rank();
        off += p->dim();
      }
      throw ComputeError("random_primitive_idempotent: unreachable");
    }
  }
  throw ComputeError("random_primitive_idempotent: unknown kind");
}

std::vector<Element> random_jordan_frame(const AlgebraPtr& a, RngStream& rng) {
  std::vector<Element> frame;
  switch (a->kind()) {
    case AlgebraKind::RealVectors: {
      std::vector<int> perm(a->dim());
      std::iota(perm.begin(), perm.end(), 0);
      for (int i = a->dim() - 1; i > 0; --i) std::swap(perm[i], perm[rng.index(i + 1)]);
      for (int i : perm) {
        VectorXd c = VectorXd::Zero(a->dim());
        c[i] = 1.0;
        frame.push_back({a, c});
      }
      return frame;
    }
    case AlgebraKind::SymMatrices: {
      int n = a->param_n();
      MatrixXd g(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = rng.gauss();
      Eigen::HouseholderQR<MatrixXd> qr(g);
      MatrixXd q = qr.householderQ();
      for (int k = 0; k < n; ++k) {
        VectorXd u = q.col(k);
        frame.push_back({a, sym_from_matrix(a, u * u.transpose())});
      }
      return frame;
    }
    case AlgebraKind::HermMatrices: {
      int n = a->param_n();
      Eigen::MatrixXcd g(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = std::complex<double>(rng.gauss(), rng.gauss());
      Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
      Eigen::MatrixXcd q = qr.householderQ();
      for (int k = 0; k < n; ++k) {
        Eigen::VectorXcd u = q.col(k);
        frame.push_back({a, herm_from_matrix(a, u * u.adjoint())});
      }
      return frame;
    }
    case AlgebraKind::SpinAlgebra: {
      int d = a->dim();
      VectorXd w = rng.unit_vec(d - 1);
      for (double sgn : {1.0, -1.0}) {
        VectorXd c(d);
        c[0] = std::sqrt(2.0) * 0.5;
        c.tail(d - 1) = sgn * std::sqrt(2.0) * 0.5 * w;
        frame.push_back({a, c});
      }
      return frame;
    }
    case AlgebraKind::DirectSum: {
      const auto& ps = a->parts();
      int off = 0;
      for (const auto& p : ps) {
        for (const Element& sub : random_jordan_frame(p, rng)) {
          VectorXd c = VectorXd::Zero(a->dim());
          c.segment(off, p->dim()) = sub.coords;
          frame.push_back({a, c});
        }
        off += p->dim();
      }
      // shuffle so split-based samplers mix parts
      for (int i = static_cast<int>(frame.size()) - 1; i > 0; --i)
        std::swap(frame[i], frame[rng.index(i + 1)]);
      return frame;
    }
  }
  throw ComputeError("random_jordan_frame: unknown kind");
}

Element random_element(const AlgebraPtr& a, uint64_t seed) {
  RngStream rng(seed);
  return random_element(a, rng);
}
Idempotent random_primitive_idempotent(const AlgebraPtr& a, uint64_t seed) {
  RngStream rng(seed);
  return random_primitive_idempotent(a, rng);
}
std::vector<Element> random_jordan_frame(const AlgebraPtr& a, uint64_t seed) {
  RngStream rng(seed);
  return random_jordan_frame(a, rng);
}

Element random_interior_point(const AlgebraPtr& a, RngStream& rng, double lo, double hi) {
  std::vector<Element> frame = random_jordan_frame(a, rng);
  VectorXd x = VectorXd::Zero(a->dim());
  for (const Element& f : frame) x += rng.unif(lo, hi) * f.coords;
  return {a, x};
}

// ---------------------------------------------------------------------------
// Matrix packing helpers

MatrixXd sym_to_matrix(const AlgebraPtr& a, const VectorXd& coords) {
  auto* sa = dynamic_cast<const SymAlgebra*>(a.get());
  if (!sa) throw InvalidInput("sym_to_matrix: algebra is not S^n");
  if (coords.size() != a->dim()) throw InvalidInput("sym_to_matrix: bad coordinate length");
  return sa->unpack(coords);
}

VectorXd sym_from_matrix(const AlgebraPtr& a, const MatrixXd& m) {
  auto* sa = dynamic_cast<const SymAlgebra*>(a.get());
  if (!sa) throw InvalidInput("sym_from_matrix: algebra is not S^n");
  if (m.rows() != a->param_n() || m.cols() != a->param_n())
    throw InvalidInput("sym_from_matrix: matrix size mismatch");
  return sa->pack(m);
}

Eigen::MatrixXcd herm_to_matrix(const AlgebraPtr& a, const VectorXd& coords) {
  auto* ha = dynamic_cast<const HermAlgebra*>(a.get());
  if (!ha) throw InvalidInput("herm_to_matrix: algebra is not H^n");
  if (coords.size() != a->dim()) throw InvalidInput("herm_to_matrix: bad coordinate length");
  return ha->unpack(coords);
}

VectorXd herm_from_matrix(const AlgebraPtr& a, const Eigen::MatrixXcd& m) {
  auto* ha = dynamic_cast<const HermAlgebra*>(a.get());
  if (!ha) throw InvalidInput("herm_from_matrix: algebra is not H^n");
  if (m.rows() != a->param_n() || m.cols() != a->param_n())
    throw InvalidInput("herm_from_matrix: matrix size mismatch");
  return ha->pack(m);
}

}  // namespace conegames

#include "conegames/manifolds.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/QR>

namespace conegames {

namespace {

Element embed(const AlgebraPtr& whole, int offset, const Element& part) {
  VectorXd c = VectorXd::Zero(whole->dim());
  c.segment(offset, part.coords.size()) = part.coords;
  return {whole, c};
}

MatrixXd stiefel_from_params(int n, int k, const VectorXd& theta) {
  MatrixXd g(n, k);
  for (int j = 0; j < k; ++j) g.col(j) = theta.segment(j * n, n);
  Eigen::HouseholderQR<MatrixXd> qr(g);
  MatrixXd q = MatrixXd(qr.householderQ()).leftCols(k);
  return q;
}

Eigen::MatrixXcd cstiefel_from_params(int n, int k, const VectorXd& theta) {
  Eigen::MatrixXcd g(n, k);
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < n; ++i)
      g(i, j) = std::complex<double>(theta[2 * (j * n + i)], theta[2 * (j * n + i) + 1]);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = Eigen::MatrixXcd(qr.householderQ()).leftCols(k);
  return q;
}

VectorXd safe_normalize(const VectorXd& v) {
  double n = v.norm();
  if (n < 1e-12) {
    VectorXd w = VectorXd::Zero(v.size());
    w[0] = 1.0;
    return w;
  }
  return v / n;
}

}  // namespace

std::optional<std::vector<Idempotent>> enumerate_primitive_idempotents(const AlgebraPtr& a) {
  switch (a->kind()) {
    case AlgebraKind::RealVectors: {
      std::vector<Idempotent> out;
      for (int i = 0; i < a->dim(); ++i) {
        VectorXd c = VectorXd::Zero(a->dim());
        c[i] = 1.0;
        out.push_back({{a, c}, 1});
      }
      return out;
    }
    case AlgebraKind::DirectSum: {
      std::vector<Idempotent> out;
      int off = 0;
      for (const auto& p : a->parts()) {
        auto sub = enumerate_primitive_idempotents(p);
        if (!sub) return std::nullopt;
        for (const auto& c : *sub) out.push_back({embed(a, off, c.element), 1});
        off += p->dim();
      }
      return out;
    }
    default:
      return std::nullopt;
  }
}

int primitive_param_dim(const AlgebraPtr& a) {
  switch (a->kind()) {
    case AlgebraKind::RealVectors:
      return a->dim();  // argmax pick; searches normally use enumeration
    case AlgebraKind::SymMatrices:
      return a->param_n();
    case AlgebraKind::HermMatrices:
      return 2 * a->param_n();
    case AlgebraKind::SpinAlgebra:
      return a->dim() - 1;
    case AlgebraKind::DirectSum:
      throw InvalidInput("primitive_param_dim: search direct sums per part");
  }
  throw ComputeError("primitive_param_dim: unknown kind");
}

Idempotent primitive_from_params(const AlgebraPtr& a, const VectorXd& theta) {
  switch (a->kind()) {
    case AlgebraKind::RealVectors: {
      int best = 0;
      theta.maxCoeff(&best);
      VectorXd c = VectorXd::Zero(a->dim());
      c[best] = 1.0;
      return {{a, c}, 1};
    }
    case AlgebraKind::SymMatrices: {
      VectorXd u = safe_normalize(theta);
      return {{a, sym_from_matrix(a, u * u.transpose())}, 1};
    }
    case AlgebraKind::HermMatrices: {
      int n = a->param_n();
      Eigen::VectorXcd u(n);
      for (int i = 0; i < n; ++i) u[i] = std::complex<double>(theta[2 * i], theta[2 * i + 1]);
      double nn = u.norm();
      if (nn < 1e-12) {
        u.setZero();
        u[0] = 1.0;
      } else {
        u /= nn;
      }
      return {{a, herm_from_matrix(a, u * u.adjoint())}, 1};
    }
    case AlgebraKind::SpinAlgebra: {
      VectorXd w = safe_normalize(theta);
      VectorXd c(a->dim());
      c[0] = std::sqrt(2.0) * 0.5;
      c.tail(a->dim() - 1) = std::sqrt(2.0) * 0.5 * w;
      return {{a, c}, 1};
    }
    case AlgebraKind::DirectSum:
      throw InvalidInput("primitive_from_params: search direct sums per part");
  }
  throw ComputeError("primitive_from_params: unknown kind");
}

IdempotentSearchResult minimize_over_primitive_idempotents(
    const AlgebraPtr& a, const std::function<double(const Idempotent&)>& objective,
    const SearchBudget& budget) {
  IdempotentSearchResult best;
  bool have = false;
  auto consider = [&](const Idempotent& c, long evals) {
    double v = objective(c);
    best.evaluations += evals;
    if (!have || v < best.value) {
      best.value = v;
      best.argmin = c;
      have = true;
    }
  };

  if (auto finite = enumerate_primitive_idempotents(a)) {
    for (const auto& c : *finite) consider(c, 1);
    return best;
  }

  if (a->kind() == AlgebraKind::DirectSum) {
    int off = 0;
    int ipart = 0;
    for (const auto& p : a->parts()) {
      SearchBudget sub = budget;
      sub.seed = splitmix64(budget.seed ^ (0xABCDULL + static_cast<uint64_t>(ipart)));
      sub.multistarts = std::max(4, budget.multistarts / static_cast<int>(a->parts().size()));
      auto partial = minimize_over_primitive_idempotents(
          p,
          [&](const Idempotent& c) { return objective(Idempotent{embed(a, off, c.element), 1}); },
          sub);
      consider(Idempotent{embed(a, off, partial.argmin.element), 1}, partial.evaluations);
      off += p->dim();
      ++ipart;
    }
    return best;
  }

  int pdim = primitive_param_dim(a);
  SearchResult sr = multistart_minimize(
      pdim, [&](const VectorXd& th) { return objective(primitive_from_params(a, th)); }, budget);
  consider(primitive_from_params(a, sr.argmin), sr.evaluations);
  return best;
}

namespace {

// rank-k idempotents for a single simple kind via parameters
struct RankKParam {
  int dim = 0;
  std::function<Idempotent(const VectorXd&)> build;
};

RankKParam rank_k_param(const AlgebraPtr& a, int k) {
  switch (a->kind()) {
    case AlgebraKind::SymMatrices: {
      int n = a->param_n();
      return {n * k, [a, n, k](const VectorXd& th) {
                MatrixXd v = stiefel_from_params(n, k, th);
                return Idempotent{{a, sym_from_matrix(a, v * v.transpose())}, k};
              }};
    }
    case AlgebraKind::HermMatrices: {
      int n = a->param_n();
      return {2 * n * k, [a, n, k](const VectorXd& th) {
                Eigen::MatrixXcd v = cstiefel_from_params(n, k, th);
                return Idempotent{{a, herm_from_matrix(a, v * v.adjoint())}, k};
              }};
    }
    case AlgebraKind::SpinAlgebra: {
      if (k != 1) throw InvalidInput("rank_k_param: spin algebra has rank 2");
      return {a->dim() - 1, [a](const VectorXd& th) { return primitive_from_params(a, th); }};
    }
    default:
      throw InvalidInput("rank_k_param: unsupported kind");
  }
}

void enumerate_subsets(int n, int k, const std::function<void(const std::vector<int>&)>& emit) {
  std::vector<int> idx(k);
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == k) {
      emit(idx);
      return;
    }
    for (int i = start; i <= n - (k - depth); ++i) {
      idx[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
}

}  // namespace

IdempotentSearchResult minimize_over_rank_k_idempotents(
    const AlgebraPtr& a, int k, const std::function<double(const Idempotent&)>& objective,
    const SearchBudget& budget) {
  if (k <= 0 || k >= a->rank())
    throw InvalidInput("minimize_over_rank_k_idempotents: need 0 < k < rank");
  IdempotentSearchResult best;
  bool have = false;
  auto consider = [&](const Idempotent& c, long evals) {
    double v = objective(c);
    best.evaluations += evals;
    if (!have || v < best.value) {
      best.value = v;
      best.argmin = c;
      have = true;
    }
  };

  switch (a->kind()) {
    case AlgebraKind::RealVectors: {
      // exact: coordinate subsets
      enumerate_subsets(a->dim(), k, [&](const std::vector<int>& subset) {
        VectorXd c = VectorXd::Zero(a->dim());
        for (int i : subset) c[i] = 1.0;
        consider(Idempotent{{a, c}, k}, 1);
      });
      return best;
    }
    case AlgebraKind::SymMatrices:
    case AlgebraKind::HermMatrices:
    case AlgebraKind::SpinAlgebra: {
      RankKParam par = rank_k_param(a, k);
      SearchResult sr = multistart_minimize(
          par.dim, [&](const VectorXd& th) { return objective(par.build(th)); }, budget);
      consider(par.build(sr.argmin), sr.evaluations);
      return best;
    }
    case AlgebraKind::DirectSum: {
      // distribute rank k over the parts; search each composition jointly
      const auto& ps = a->parts();
      int np = static_cast<int>(ps.size());
      std::vector<int> offs(np, 0);
      for (int i = 1; i < np; ++i) offs[i] = offs[i - 1] + ps[i - 1]->dim();

      std::vector<std::vector<int>> compositions;
      std::vector<int> cur(np, 0);
      std::function<void(int, int)> rec = [&](int part, int left) {
        if (compositions.size() > 256) return;
        if (part == np) {
          if (left == 0) compositions.push_back(cur);
          return;
        }
        for (int ki = 0; ki <= std::min(left, ps[part]->rank()); ++ki) {
          cur[part] = ki;
          rec(part + 1, left - ki);
        }
      };
      rec(0, k);

      for (size_t ci = 0; ci < compositions.size(); ++ci) {
        const auto& comp = compositions[ci];
        // parameter vector = concatenation of per-part parameters; parts with
        // k_i = 0 contribute nothing, k_i = rankـi contribute the unit
        std::vector<RankKParam> pars(np);
        std::vector<int> pd(np, 0);
        int total = 0;
        bool feasible = true;
        for (int i = 0; i < np; ++i) {
          if (comp[i] == 0 || comp[i] == ps[i]->rank()) continue;
          if (ps[i]->kind() == AlgebraKind::RealVectors) {
            // small discrete factor: handle by enumeration only when alone
            feasible = false;
            break;
          }
          pars[i] = rank_k_param(ps[i], comp[i]);
          pd[i] = pars[i].dim;
          total += pars[i].dim;
        }
        auto assemble = [&](const VectorXd& th) {
          VectorXd c = VectorXd::Zero(a->dim());
          int pos = 0;
          for (int i = 0; i < np; ++i) {
            if (comp[i] == ps[i]->rank()) {
              c.segment(offs[i], ps[i]->dim()) = ps[i]->unit_coords();
            } else if (comp[i] > 0 && pd[i] > 0) {
              Idempotent sub = pars[i].build(th.segment(pos, pd[i]));
              c.segment(offs[i], ps[i]->dim()) = sub.element.coords;
              pos += pd[i];
            }
            // comp[i] == 0: zero block
          }
          return Idempotent{{a, c}, k};
        };
        if (!feasible) {
          // fall back: recurse splitting the discrete part exactly
          // (R^n factors): enumerate its subsets and recurse on the rest.
          const int ri = [&] {
            for (int i = 0; i < np; ++i)
              if (comp[i] > 0 && comp[i] < ps[i]->rank() &&
                  ps[i]->kind() == AlgebraKind::RealVectors)
                return i;
            return -1;
          }();
          enumerate_subsets(ps[ri]->dim(), comp[ri], [&](const std::vector<int>& subset) {
            VectorXd base = VectorXd::Zero(a->dim());
            for (int s : subset) base[offs[ri] + s] = 1.0;
            // remaining parts handled through a reduced composition with the
            // discrete part fixed
            std::vector<RankKParam> rp(np);
            int rtotal = 0;
            for (int i = 0; i < np; ++i) {
              if (i == ri || comp[i] == 0 || comp[i] == ps[i]->rank()) continue;
              rp[i] = rank_k_param(ps[i], comp[i]);
              rtotal += rp[i].dim;
            }
            auto assemble2 = [&](const VectorXd& th) {
              VectorXd c = base;
              int pos = 0;
              for (int i = 0; i < np; ++i) {
                if (i == ri) continue;
                if (comp[i] == ps[i]->rank())
                  c.segment(offs[i], ps[i]->dim()) = ps[i]->unit_coords();
                else if (comp[i] > 0 && rp[i].dim > 0) {
                  Idempotent sub = rp[i].build(th.segment(pos, rp[i].dim));
                  c.segment(offs[i], ps[i]->dim()) = sub.element.coords;
                  pos += rp[i].dim;
                }
              }
              return Idempotent{{a, c}, k};
            };
            if (rtotal == 0) {
              consider(assemble2(VectorXd()), 1);
            } else {
              SearchBudget sub = budget;
              sub.multistarts = std::max(2, budget.multistarts / 8);
              sub.seed = splitmix64(budget.seed ^ (subset.empty() ? 0u : subset[0] + 1u));
              SearchResult sr = multistart_minimize(
                  rtotal, [&](const VectorXd& th) { return objective(assemble2(th)); }, sub);
              consider(assemble2(sr.argmin), sr.evaluations);
            }
          });
          continue;
        }
        if (total == 0) {
          consider(assemble(VectorXd()), 1);
        } else {
          SearchBudget sub = budget;
          sub.multistarts = std::max(
              2, budget.multistarts / std::max<int>(1, static_cast<int>(compositions.size())));
          sub.seed = splitmix64(budget.seed ^ (0x51ULL + ci));
          SearchResult sr = multistart_minimize(
              total, [&](const VectorXd& th) { return objective(assemble(th)); }, sub);
          consider(assemble(sr.argmin), sr.evaluations);
        }
      }
      return best;
    }
  }
  throw ComputeError("minimize_over_rank_k_idempotents: unknown kind");
}

std::pair<Element, Element> random_complementary_pair(const AlgebraPtr& a, RngStream& rng) {
  if (a->rank() < 2) throw InvalidInput("random_complementary_pair: rank must be >= 2");
  std::vector<Element> frame = random_jordan_frame(a, rng);
  int split = 1 + rng.index(a->rank() - 1);
  VectorXd x = VectorXd::Zero(a->dim()), y = VectorXd::Zero(a->dim());
  for (int i = 0; i < a->rank(); ++i) {
    double w = rng.unif(0.1, 1.0);
    if (i < split)
      x += w * frame[i].coords;
    else
      y += w * frame[i].coords;
  }
  x /= x.norm();
  y /= y.norm();
  return {Element{a, x}, Element{a, y}};
}

Element random_boundary_point(const AlgebraPtr& a, RngStream& rng) {
  if (a->rank() < 2) throw InvalidInput("random_boundary_point: rank must be >= 2");
  std::vector<Element> frame = random_jordan_frame(a, rng);
  int keep = 1 + rng.index(a->rank() - 1);  // strictly fewer than rank
  VectorXd x = VectorXd::Zero(a->dim());
  for (int i = 0; i < keep; ++i) x += rng.unif(0.1, 1.0) * frame[i].coords;
  return {a, x / x.norm()};
}

}  // namespace conegames

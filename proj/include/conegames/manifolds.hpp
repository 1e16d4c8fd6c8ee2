#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "conegames/algebra.hpp"
#include "conegames/search.hpp"

namespace conegames {

// Sphere/Stiefel parametrizations of idempotent manifolds for sampled
// searches. Parameters are unconstrained vectors; construction normalizes.

// Finite list of primitive idempotents when the manifold is discrete (R^n and
// direct sums of R^1 pieces); nullopt otherwise.
std::optional<std::vector<Idempotent>> enumerate_primitive_idempotents(const AlgebraPtr& a);

int primitive_param_dim(const AlgebraPtr& a);
Idempotent primitive_from_params(const AlgebraPtr& a, const VectorXd& theta);

// Searches min of objective over primitive idempotents: exact enumeration when
// available, multistart compass search otherwise. For direct sums each part is
// searched with a proportional share of the budget.
struct IdempotentSearchResult {
  double value = 0;
  Idempotent argmin;
  long evaluations = 0;
};
IdempotentSearchResult minimize_over_primitive_idempotents(
    const AlgebraPtr& a, const std::function<double(const Idempotent&)>& objective,
    const SearchBudget& budget);

// Rank-k idempotents (0 < k < rank). Enumeration for R^n (capped), Stiefel
// parametrization for S^n/H^n, sphere for L^n, composition products for sums.
IdempotentSearchResult minimize_over_rank_k_idempotents(
    const AlgebraPtr& a, int k, const std::function<double(const Idempotent&)>& objective,
    const SearchBudget& budget);

// Complementary boundary pair built from a Jordan frame split: <x,y> = 0 by
// construction, both unit-normalized.
std::pair<Element, Element> random_complementary_pair(const AlgebraPtr& a, RngStream& rng);

// Random boundary point: conic combination of a strict subset of a frame.
Element random_boundary_point(const AlgebraPtr& a, RngStream& rng);

}  // namespace conegames

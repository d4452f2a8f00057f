#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "parfell/group.hpp"
#include "parfell/matrix.hpp"
#include "parfell/partial_action.hpp"
#include "parfell/representation.hpp"

namespace parfell {

using Rng = std::mt19937_64;

/// A valid partial action on at most max_points points. Finite groups:
/// restriction of a union of coset actions G/<h> to a random subset. Free
/// groups: a random partial bijection for every generator.
FinitePartialAction random_action(const GroupSpec& group, std::size_t max_points, Rng& rng);

/// Standard complex Gaussian entries.
ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng);
/// Random matrix scaled to operator norm exactly 1 (zero stays zero).
ComplexMatrix random_contraction(std::size_t d, Rng& rng);
/// Random coefficients on `support`, zero elsewhere.
Function random_function(const std::vector<int>& support, std::size_t n, Rng& rng);

/// v_t + eps * E_t with independent contractions E_t for t != e.
PartialRepFamily add_noise(const PartialRepFamily& v, double eps, Rng& rng);

}  // namespace parfell

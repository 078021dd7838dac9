#pragma once

#include "usea/core.hpp"
#include "usea/rng.hpp"

namespace usea {

// Latin hypercube design of n points: in every dimension each of the n
// equal-width strata holds exactly one point, placed uniformly inside it.
// Returned members carry no fitness.
Population lhs_init(std::size_t n, const Bounds& bounds, RngStream& rng);

} // namespace usea

#pragma once

#include <vector>

#include "tropskel/factor.hpp"

namespace tropskel::detail {

// f over Q, squarefree, degree >= 1; monic irreducible factors.
std::vector<Poly> factor_squarefree_q(const Poly& f);

}  // namespace tropskel::detail

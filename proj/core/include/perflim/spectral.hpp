#pragma once

#include "perflim/rational_matrix.hpp"

namespace perflim {

// Inner-outer split of a stable, tall or square, full-normal-column-rank
// stack: G = inner * outer, with inner^~ inner = I on the axis and outer
// square, stable, minimum phase.
struct InnerOuterPair {
    RationalMatrix inner;
    RationalMatrix outer;
};

// Hurwitz theta with theta(s) theta(-s) = phi(s), for a real para-symmetric
// phi (phi(s) = phi(-s)) that is nonnegative on the axis. Zeros of phi on
// the axis are rejected.
Polynomial spectral_factor_para(const Polynomial& phi);

// lcm of two denominators by root multiset union.
Polynomial den_lcm(const Polynomial& a, const Polynomial& b);

InnerOuterPair inner_outer(const RationalMatrix& G_stack);

} // namespace perflim

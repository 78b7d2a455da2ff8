#pragma once

#include "perflim/allpass.hpp"

namespace perflim {

// X * product(chain)^{-1} = stable_part + sum_i left_i * f_i^{-1}(s) * right_i
// where left_i and right_i are the constant cross-evaluations of the other
// inverse factors at the i-th carried zero. Exact for simple distinct zeros.
struct ExpansionTerm {
    int factor_index;
    Eigen::MatrixXcd left;   // X(z_i) * prod_{k>i} f_k^{-1}(z_i), right-to-left
    Eigen::MatrixXcd right;  // prod_{k<i} f_k^{-1}(z_i), right-to-left
};

struct ChainExpansion {
    RationalMatrix stable_part;
    std::vector<ExpansionTerm> terms;

    // Reassemble stable_part + sum terms at a point (test helper).
    Eigen::MatrixXcd eval(const AllpassChain& chain, Complex s) const;
};

ChainExpansion expand_chain_inverse(const RationalMatrix& X, const AllpassChain& chain);

// Residue of a simple pole: lim_{s->s0} (s - s0) G(s).
Complex residue_at(const Rational& g, Complex s0);
Eigen::MatrixXcd residue_at(const RationalMatrix& G, Complex s0);

} // namespace perflim

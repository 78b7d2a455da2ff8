#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "perflim/rational_matrix.hpp"

namespace perflim {

// Scalar Blaschke block conventions.
//  plain:            b(s) = (s - z) / (s + conj(z))
//  dc_normalized:    b(s) = (conj(z)/z) (z - s) / (conj(z) + s), so b(0) = 1
enum class BlaschkeForm { plain, dc_normalized };

// One degree of an allpass chain: [eta U] diag(b(s), I) [eta U]^H.
struct AllpassFactor {
    Complex point;                 // open-RHP zero being carried
    Eigen::VectorXcd direction;    // unit vector eta
    Eigen::MatrixXcd completion;   // U, [eta U] unitary
    BlaschkeForm form;

    Rational scalar_block() const;
    Rational scalar_block_inverse_minus_one() const;  // 1/b - 1, pole at `point`
    RationalMatrix matrix() const;
    RationalMatrix inverse_matrix() const;
    Eigen::MatrixXcd eval(Complex s) const;
    Eigen::MatrixXcd inverse_eval(Complex s) const;
    Complex scalar_inverse_eval(Complex s) const;     // 1/b(s)
};

// Chain of degree-one allpass factors with the deflated remainder:
// factored object = product(factors) * minimum_phase_part   (left chain)
// factored object = minimum_phase_part * product(factors)   (right chain)
// Factor index runs left-to-right in the product.
struct AllpassChain {
    std::vector<AllpassFactor> factors;
    RationalMatrix minimum_phase_part;
    BlaschkeForm form;
    bool right_sided = false;

    int size() const { return static_cast<int>(factors.size()); }
    RationalMatrix product() const;
    RationalMatrix product_inverse() const;

    // Product of factor inverses evaluated at a point, over index range
    // [from, to) taken right-to-left (the order they act in product^{-1}).
    Eigen::MatrixXcd inverse_eval_range(int from, int to, Complex s) const;

    std::vector<Complex> points() const;
};

// Deflate the open-RHP zeros of a stable G into a left allpass chain,
// one zero at a time: G = L1 L2 ... Ln Gm. Directions come from the left
// null space of the partially deflated matrix. `order`, when given, fixes
// the product order of the carried zeros; the default is ascending |z|
// (ties by ascending argument) with conjugate pairs kept adjacent.
AllpassChain extract_left_chain(const RationalMatrix& G, BlaschkeForm form,
                                const std::optional<std::vector<Complex>>& order = std::nullopt);

// Right-sided variant: G = Gm D1 D2 ... Dn (plain form), built on G^T.
AllpassChain extract_right_chain(const RationalMatrix& G,
                                 const std::optional<std::vector<Complex>>& order = std::nullopt);

// || product(jw)^H product(jw) - I || at a frequency; test helper.
double allpass_defect(const AllpassChain& chain, double omega);

} // namespace perflim

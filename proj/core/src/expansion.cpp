#include "perflim/expansion.hpp"

#include <algorithm>

#include "perflim/errors.hpp"
#include "perflim/spectral.hpp"

namespace perflim {

Eigen::MatrixXcd ChainExpansion::eval(const AllpassChain& chain, Complex s) const {
    Eigen::MatrixXcd acc = stable_part.eval_unchecked(s);
    for (const auto& t : terms) {
        acc += t.left * chain.factors[static_cast<size_t>(t.factor_index)].inverse_eval(s) *
               t.right;
    }
    return acc;
}

ChainExpansion expand_chain_inverse(const RationalMatrix& X, const AllpassChain& chain) {
    const int n = chain.size();
    const int dim = X.cols();

    // a carried zero coinciding with a pole of X has no simple expansion
    for (const auto& f : chain.factors) {
        for (Complex p : X.entry_poles())
            if (std::abs(p - f.point) <= 1e-7 * std::max(1.0, std::abs(p)))
                raise(Errc::expansion_singular, "chain zero coincides with a pole of X");
    }

    ChainExpansion out;
    for (int i = 0; i < n; ++i) {
        const Complex z = chain.factors[static_cast<size_t>(i)].point;
        ExpansionTerm t;
        t.factor_index = i;
        // product^{-1} = f_n^{-1} ... f_1^{-1}; the factors right of f_i^{-1}
        // in that product are indices < i, those left of it are indices > i.
        t.left = X.eval_unchecked(z) * chain.inverse_eval_range(i + 1, n, z);
        t.right = chain.inverse_eval_range(0, i, z);
        out.terms.push_back(t);
    }

    // The stable part is recovered by interpolation against its known
    // denominator (the poles of X); subtracting the carried-pole terms
    // symbolically would have to cancel (s - z_i) factors numerically.
    Polynomial den_all(1.0);
    double rad = 1.0;
    for (int i = 0; i < X.rows(); ++i)
        for (int j = 0; j < X.cols(); ++j) {
            if (X(i, j).den().degree() == 0) continue;
            den_all = den_lcm(den_all, X(i, j).den());
        }
    for (Complex p : den_all.degree() > 0 ? den_all.roots() : std::vector<Complex>{})
        rad = std::max(rad, std::abs(p));
    for (const auto& f : chain.factors) rad = std::max(rad, std::abs(f.point));
    const int deg = den_all.degree();
    const int npts = deg + 1;
    const double r = 2.0 * rad;

    auto sample_S = [&](Complex s) {
        Eigen::MatrixXcd acc = X.eval_unchecked(s) * chain.inverse_eval_range(0, n, s);
        for (const auto& t : out.terms)
            acc -= t.left *
                   chain.factors[static_cast<size_t>(t.factor_index)].inverse_eval(s) * t.right;
        return acc;
    };

    Eigen::MatrixXcd lhs(npts, deg + 1);
    std::vector<Eigen::MatrixXcd> vals;
    for (int k = 0; k < npts; ++k) {
        const double th = 2.0 * M_PI * (k + 0.37) / npts;
        const Complex s = r * Complex(std::cos(th), std::sin(th));
        Complex pw = 1.0;
        for (int j = 0; j <= deg; ++j) {
            lhs(k, j) = pw;
            pw *= s;
        }
        vals.push_back(sample_S(s) * den_all.eval(s));
    }
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(lhs);
    const bool want_real = X.is_real() && den_all.is_real();
    out.stable_part = RationalMatrix(X.rows(), dim);
    for (int i = 0; i < X.rows(); ++i)
        for (int j = 0; j < dim; ++j) {
            Eigen::VectorXcd rhs(npts);
            for (int k = 0; k < npts; ++k) rhs(k) = vals[static_cast<size_t>(k)](i, j);
            Eigen::VectorXcd c = lu.solve(rhs);
            std::vector<Complex> cc(static_cast<size_t>(deg + 1));
            for (int k = 0; k <= deg; ++k) cc[static_cast<size_t>(k)] = c(k);
            Polynomial num(std::move(cc));
            if (want_real && num.is_real(1e-6)) num = num.real_part();
            out.stable_part(i, j) = Rational(num, den_all);
        }
    if (!out.stable_part.is_stable())
        raise(Errc::numerical_inconsistency, "expansion stable part kept an unstable pole");
    return out;
}

Complex residue_at(const Rational& g, Complex s0) {
    if (g.den().degree() == 0) raise(Errc::not_a_pole, "constant denominators have no poles");
    std::vector<Complex> roots = g.poles();
    double scale = 1.0;
    for (auto r : roots) scale = std::max(scale, std::abs(r));
    std::vector<size_t> hits;
    for (size_t k = 0; k < roots.size(); ++k)
        if (std::abs(roots[k] - s0) <= 1e-6 * scale) hits.push_back(k);
    if (hits.empty()) raise(Errc::not_a_pole, "point is not a pole");
    if (hits.size() > 1) raise(Errc::not_simple_pole, "pole is not simple");
    Complex denom = g.den().leading();
    for (size_t k = 0; k < roots.size(); ++k) {
        if (k == hits[0]) continue;
        denom *= (s0 - roots[k]);
    }
    return g.num().eval(s0) / denom;
}

Eigen::MatrixXcd residue_at(const RationalMatrix& G, Complex s0) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(G.rows(), G.cols());
    bool any = false;
    for (int i = 0; i < G.rows(); ++i)
        for (int j = 0; j < G.cols(); ++j) {
            const Rational& g = G(i, j);
            if (g.den().degree() == 0) continue;
            bool has = false;
            for (Complex p : g.poles())
                if (std::abs(p - s0) <= 1e-6 * std::max(1.0, std::abs(p))) has = true;
            if (!has) continue;
            out(i, j) = residue_at(g, s0);
            any = true;
        }
    if (!any) raise(Errc::not_a_pole, "point is not a pole of any entry");
    return out;
}

} // namespace perflim

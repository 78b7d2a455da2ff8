#include "perflim/spectral.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <optional>
#include <cmath>

#include "perflim/errors.hpp"
#include "perflim/state_space.hpp"

namespace perflim {

Polynomial den_lcm(const Polynomial& a, const Polynomial& b) {
    std::vector<Complex> ra = a.degree() > 0 ? a.roots() : std::vector<Complex>{};
    std::vector<Complex> rb = b.degree() > 0 ? b.roots() : std::vector<Complex>{};
    double scale = 1.0;
    for (auto r : ra) scale = std::max(scale, std::abs(r));
    for (auto r : rb) scale = std::max(scale, std::abs(r));
    std::vector<Complex> merged = ra;
    std::vector<bool> taken(ra.size(), false);
    for (Complex r : rb) {
        bool matched = false;
        for (size_t i = 0; i < ra.size(); ++i) {
            if (!taken[i] && std::abs(ra[i] - r) <= tol::root_match * scale) {
                taken[i] = true;
                matched = true;
                break;
            }
        }
        if (!matched) merged.push_back(r);
    }
    Polynomial out = Polynomial::from_roots(merged);
    if (out.is_real(1e-7)) out = out.real_part();
    return out;
}

Polynomial spectral_factor_para(const Polynomial& phi) {
    if (phi.is_zero()) raise(Errc::degenerate_input, "spectral factor of zero");
    if (!phi.is_real(1e-6))
        raise(Errc::spectral_factorization_singular, "spectral density is not real-rational");
    Polynomial p = phi.real_part();
    // para-symmetry: odd coefficients must vanish
    double scale = p.max_abs_coeff();
    std::vector<Complex> cc(p.coeffs());
    for (size_t k = 1; k < cc.size(); k += 2) {
        if (std::abs(cc[k]) > 1e-6 * scale)
            raise(Errc::spectral_factorization_singular, "density is not para-symmetric");
        cc[k] = Complex(0.0);
    }
    p = Polynomial(std::move(cc));
    if (p.degree() == 0) {
        const double c = p.coeff(0).real();
        if (c <= 0.0)
            raise(Errc::spectral_factorization_singular, "constant density not positive");
        return Polynomial(std::sqrt(c));
    }
    if (p.degree() % 2 != 0)
        raise(Errc::spectral_factorization_singular, "odd-degree spectral density");

    // p has only even powers; solving for the roots of p(sqrt(u)) halves the
    // degree and noticeably sharpens clustered roots
    const int m = p.degree() / 2;
    std::vector<Complex> ucoef(static_cast<size_t>(m) + 1);
    for (int k = 0; k <= m; ++k) ucoef[static_cast<size_t>(k)] = p.coeff(2 * k);
    Polynomial pu(std::move(ucoef));

    std::vector<Complex> left;
    for (Complex u : pu.roots()) {
        Complex r = std::sqrt(u);
        if (r.real() > 0.0) r = -r;
        // polish on the full density, but never let the iterate wander to the
        // mirrored root
        const Complex r0 = r;
        Complex cand = r;
        for (int it = 0; it < 10; ++it) {
            const Complex f = p.eval(cand);
            const Complex df = p.eval_derivative(cand);
            if (std::abs(df) < 1e-300) break;
            const Complex step = f / df;
            cand -= step;
            if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(cand))) break;
        }
        if (cand.real() < 0.0 && std::abs(cand - r0) <= 1e-3 * (1.0 + std::abs(r0)) &&
            std::abs(p.eval(cand)) <= std::abs(p.eval(r0)))
            r = cand;
        if (std::abs(r.real()) <= tol::axis * std::max(1.0, std::abs(r)))
            raise(Errc::spectral_factorization_singular, "spectral density has an axis zero");
        left.push_back(r);
    }
    if (static_cast<int>(left.size()) != m)
        raise(Errc::spectral_factorization_singular, "left/right root split is unbalanced");
    // enforce conjugate symmetry of the factor
    {
        Polynomial probe = Polynomial::from_roots(left);
        if (!probe.is_real(1e-5)) {
            // re-pair: keep Re < 0 representatives with positive imaginary
            // part and mirror them
            std::vector<Complex> fixed;
            std::vector<bool> used(left.size(), false);
            for (size_t i = 0; i < left.size(); ++i) {
                if (used[i]) continue;
                if (std::abs(left[i].imag()) <= 1e-9 * std::max(1.0, std::abs(left[i]))) {
                    fixed.push_back(Complex(left[i].real(), 0.0));
                    used[i] = true;
                    continue;
                }
                size_t best = left.size();
                double bd = 1e300;
                for (size_t j = i + 1; j < left.size(); ++j) {
                    if (used[j]) continue;
                    const double d = std::abs(left[j] - std::conj(left[i]));
                    if (d < bd) {
                        bd = d;
                        best = j;
                    }
                }
                if (best == left.size())
                    raise(Errc::spectral_factorization_singular,
                          "factor roots lost conjugate symmetry");
                const Complex avg = 0.5 * (left[i] + std::conj(left[best]));
                fixed.push_back(avg);
                fixed.push_back(std::conj(avg));
                used[i] = used[best] = true;
            }
            left = fixed;
        }
    }

    const double sgn = (m % 2 == 0) ? 1.0 : -1.0;
    const double glead = sgn * p.coeff(p.degree()).real();
    if (glead <= 0.0)
        raise(Errc::spectral_factorization_singular, "density negative at infinity");
    Polynomial theta = Polynomial::from_roots(left, Complex(std::sqrt(glead), 0.0));
    if (!theta.is_real(1e-7))
        raise(Errc::spectral_factorization_singular, "spectral factor not real");
    theta = theta.real_part();

    // Newton refinement on theta(s) theta(-s) = p: solve the linearized
    // theta~ d + theta d~ = p - theta theta~ for the real correction d.
    // Root-built factors lose accuracy when the density has close root
    // pairs; one or two steps push the residual to rounding level.
    for (int pass = 0; pass < 3; ++pass) {
        const Polynomial prod = theta * theta.reflected();
        const Polynomial resid = p - prod;
        if (resid.max_abs_coeff() <= 1e-13 * std::max(1.0, p.max_abs_coeff())) break;
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m + 1, m + 1);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 1);
        // even coefficient rows of theta~ d + theta d~
        for (int col = 0; col <= m; ++col) {
            // d = e_col: theta~ * s^col + theta * (-s)^col
            for (int k = 0; k <= m; ++k) {
                const double tk = theta.coeff(k).real();
                const double sgn_k = (k % 2 == 0) ? 1.0 : -1.0;
                const double sgn_c = (col % 2 == 0) ? 1.0 : -1.0;
                const int pow = k + col;
                if (pow % 2 != 0) continue;
                A(pow / 2, col) += sgn_k * tk + sgn_c * tk;
            }
        }
        for (int k = 0; k <= 2 * m; k += 2) rhs(k / 2) = resid.coeff(k).real();
        Eigen::VectorXd d = A.colPivHouseholderQr().solve(rhs);
        std::vector<Complex> dc(static_cast<size_t>(m) + 1);
        for (int k = 0; k <= m; ++k) dc[static_cast<size_t>(k)] = Complex(d(k), 0.0);
        theta = theta + Polynomial(std::move(dc));
    }
    return theta;
}

namespace {

// Greedy nearest matching of `sub` inside `super`; returns the leftover of
// `super`, or nothing if some element of `sub` has no partner.
std::optional<std::vector<Complex>> multiset_subtract(const std::vector<Complex>& super,
                                                      const std::vector<Complex>& sub,
                                                      double tol_abs) {
    std::vector<bool> used(super.size(), false);
    for (Complex r : sub) {
        size_t best = super.size();
        double bd = tol_abs;
        for (size_t i = 0; i < super.size(); ++i) {
            if (used[i]) continue;
            const double d = std::abs(super[i] - r);
            if (d <= bd) {
                bd = d;
                best = i;
            }
        }
        if (best == super.size()) return std::nullopt;
        used[best] = true;
    }
    std::vector<Complex> left;
    for (size_t i = 0; i < super.size(); ++i)
        if (!used[i]) left.push_back(super[i]);
    return left;
}

// Scalar-column route: all entries over a common denominator; the numerator
// density is a single para-symmetric polynomial. Denominators are combined
// through root multisets so shared (possibly repeated) poles clear exactly.
InnerOuterPair scalar_column(const RationalMatrix& G) {
    const int p = G.rows();
    std::vector<std::vector<Complex>> droots(static_cast<size_t>(p));
    std::vector<Complex> uni;
    double scale = 1.0;
    for (int i = 0; i < p; ++i) {
        if (G(i, 0).is_zero() || G(i, 0).den().degree() == 0) continue;
        droots[static_cast<size_t>(i)] = G(i, 0).poles();
        for (Complex r : droots[static_cast<size_t>(i)]) scale = std::max(scale, std::abs(r));
    }
    const double mtol = 1e-6 * scale;
    for (int i = 0; i < p; ++i) {
        std::vector<bool> used(uni.size(), false);
        for (Complex r : droots[static_cast<size_t>(i)]) {
            size_t best = uni.size();
            double bd = mtol;
            for (size_t k = 0; k < uni.size(); ++k) {
                if (used[k]) continue;
                const double d = std::abs(uni[k] - r);
                if (d <= bd) {
                    bd = d;
                    best = k;
                }
            }
            if (best < uni.size())
                used[best] = true;
            else {
                uni.push_back(r);
                used.push_back(true);
            }
        }
    }
    Polynomial dcom = Polynomial::from_roots(uni);
    if (dcom.is_real(1e-7)) dcom = dcom.real_part();

    std::vector<Polynomial> nums(static_cast<size_t>(p));
    for (int i = 0; i < p; ++i) {
        const Rational& g = G(i, 0);
        if (g.is_zero()) continue;
        auto quot = multiset_subtract(uni, droots[static_cast<size_t>(i)], mtol);
        if (!quot)
            raise(Errc::numerical_inconsistency, "common denominator clearing failed");
        Polynomial q = Polynomial::from_roots(*quot);
        Polynomial a = g.num() * q;
        if (g.den().degree() == 0) a = a.scaled(Complex(1.0) / g.den().coeff(0));
        if (a.is_real(1e-7)) a = a.real_part();
        nums[static_cast<size_t>(i)] = a;
    }
    Polynomial phi;
    for (const auto& a : nums) phi += a * a.conjugated().reflected();
    Polynomial theta = spectral_factor_para(phi);

    InnerOuterPair out;
    out.outer = RationalMatrix(Rational(theta, dcom));
    out.inner = RationalMatrix(p, 1);
    for (int i = 0; i < p; ++i)
        out.inner(i, 0) = Rational(nums[static_cast<size_t>(i)], theta);
    return out;
}

InnerOuterPair diagonal_route(const RationalMatrix& G) {
    const int q = G.cols();
    const int p = G.rows();
    InnerOuterPair out;
    out.outer = RationalMatrix::zero(q, q);
    out.inner = RationalMatrix::zero(p, q);
    for (int j = 0; j < q; ++j) {
        RationalMatrix col(p, 1);
        for (int i = 0; i < p; ++i) col(i, 0) = G(i, j);
        InnerOuterPair piece = scalar_column(col);
        out.outer(j, j) = piece.outer.scalar();
        for (int i = 0; i < p; ++i) out.inner(i, j) = piece.inner(i, 0);
    }
    return out;
}

InnerOuterPair riccati_route(const RationalMatrix& G) {
    StateSpaceModel m = minimal_realization(realize(G));
    const Eigen::MatrixXd DtD = m.D.transpose() * m.D;
    Eigen::LLT<Eigen::MatrixXd> llt(DtD);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(DtD);
    if (llt.info() != Eigen::Success ||
        svd.singularValues()(svd.singularValues().size() - 1) <=
            1e-10 * std::max(1.0, svd.singularValues()(0)))
        raise(Errc::spectral_factorization_singular,
              "stack is rank-deficient at infinity; the Riccati route needs a biproper block");

    const Eigen::MatrixXd X = care_solve(m.A, m.B, m.C.transpose() * m.C, DtD,
                                         m.C.transpose() * m.D);
    const Eigen::MatrixXd W0 = llt.matrixU();  // W0^T W0 = D^T D
    const Eigen::MatrixXd Lw =
        W0.transpose().triangularView<Eigen::Lower>().solve(m.B.transpose() * X +
                                                            m.D.transpose() * m.C);
    StateSpaceModel w{m.A, m.B, Lw, W0};
    InnerOuterPair out;
    out.outer = to_rational(minimal_realization(w));
    out.inner = G * out.outer.inverse();
    return out;
}

} // namespace

InnerOuterPair inner_outer(const RationalMatrix& G) {
    if (G.rows() < G.cols())
        raise(Errc::degenerate_input, "inner-outer expects a tall or square stack");
    if (!G.is_stable())
        raise(Errc::degenerate_input, "inner-outer expects a stable stack");
    if (G.cols() == 1) return scalar_column(G);
    // If the para-Gram G~G is diagonal the columns decouple.
    const RationalMatrix Phi = G.paraconjugate() * G;
    if (Phi.is_diagonal()) return diagonal_route(G);
    return riccati_route(G);
}

} // namespace perflim

#include "perflim/state_space.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>
#include <cmath>
#include <random>

#include "perflim/errors.hpp"
#include "perflim/quadrature.hpp"

namespace perflim {

Eigen::MatrixXcd StateSpaceModel::eval(Complex s) const {
    const int n = order();
    if (n == 0) return D.cast<Complex>();
    Eigen::MatrixXcd res = (s * Eigen::MatrixXcd::Identity(n, n) - A.cast<Complex>())
                               .partialPivLu()
                               .solve(B.cast<Complex>());
    return C.cast<Complex>() * res + D.cast<Complex>();
}

Eigen::MatrixXcd sylvester_solve(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B,
                                 const Eigen::MatrixXcd& C) {
    const int n = static_cast<int>(A.rows());
    const int m = static_cast<int>(B.rows());
    if (n == 0 || m == 0) return Eigen::MatrixXcd::Zero(n, m);

    Eigen::ComplexSchur<Eigen::MatrixXcd> sa(A);
    Eigen::ComplexSchur<Eigen::MatrixXcd> sb(B);
    const Eigen::MatrixXcd& Ta = sa.matrixT();
    const Eigen::MatrixXcd& Ua = sa.matrixU();
    const Eigen::MatrixXcd& Tb = sb.matrixT();
    const Eigen::MatrixXcd& Ub = sb.matrixU();

    // With X = Ua Y Ub^H the equation reduces to Ta Y + Y Tb = -Ua^H C Ub,
    // solved column-wise against the upper triangular Ta, Tb.
    Eigen::MatrixXcd Ct = Ua.adjoint() * C * Ub;
    Eigen::MatrixXcd Y = Eigen::MatrixXcd::Zero(n, m);
    for (int j = 0; j < m; ++j) {
        Eigen::VectorXcd rhs = -Ct.col(j);
        for (int k = 0; k < j; ++k) rhs -= Tb(k, j) * Y.col(k);
        Eigen::MatrixXcd M = Ta + Tb(j, j) * Eigen::MatrixXcd::Identity(n, n);
        // back substitution on upper triangular M
        Eigen::VectorXcd y(n);
        for (int i = n - 1; i >= 0; --i) {
            Complex acc = rhs(i);
            for (int k = i + 1; k < n; ++k) acc -= M(i, k) * y(k);
            if (std::abs(M(i, i)) < 1e-300)
                raise(Errc::degenerate_input, "singular Sylvester operator (shared spectrum)");
            y(i) = acc / M(i, i);
        }
        Y.col(j) = y;
    }
    return Ua * Y * Ub.adjoint();
}

Eigen::MatrixXd lyapunov_continuous(const Eigen::MatrixXd& A, const Eigen::MatrixXd& W) {
    Eigen::MatrixXcd X =
        sylvester_solve(A.cast<Complex>(), A.transpose().cast<Complex>(), W.cast<Complex>());
    return X.real();
}

Eigen::MatrixXd care_solve(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                           const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                           const Eigen::MatrixXd& S, int max_iter) {
    const int n = static_cast<int>(A.rows());
    const Eigen::MatrixXd Rinv = R.inverse();
    const Eigen::MatrixXd A0 = A - B * Rinv * S.transpose();
    const Eigen::MatrixXd Q0 = Q - S * Rinv * S.transpose();
    const Eigen::MatrixXd G = B * Rinv * B.transpose();

    Eigen::MatrixXd H(2 * n, 2 * n);
    H << A0, -G, -Q0, -A0.transpose();

    // matrix sign iteration with determinant scaling
    Eigen::MatrixXd Z = H;
    bool converged = false;
    for (int it = 0; it < max_iter; ++it) {
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(Z);
        const double det = std::abs(lu.determinant());
        if (!(det > 0.0) || !std::isfinite(det))
            raise(Errc::no_stabilizing_solution, "sign iteration broke down");
        const double c = std::pow(det, -1.0 / (2.0 * n));
        Eigen::MatrixXd Zinv = lu.inverse();
        Eigen::MatrixXd Znext = 0.5 * (c * Z + (1.0 / c) * Zinv);
        const double delta = (Znext - Z).norm();
        Z = Znext;
        if (delta <= 1e-13 * std::max(1.0, Z.norm())) {
            converged = true;
            break;
        }
    }
    if (!converged)
        raise(Errc::no_stabilizing_solution, "sign iteration did not converge");

    // (sign(H) + I) [I; X] = 0  =>  [S12; S22 + I] X = -[S11 + I; S21]
    Eigen::MatrixXd lhs(2 * n, n), rhs(2 * n, n);
    lhs.topRows(n) = Z.topRightCorner(n, n);
    lhs.bottomRows(n) = Z.bottomRightCorner(n, n) + Eigen::MatrixXd::Identity(n, n);
    rhs.topRows(n) = -(Z.topLeftCorner(n, n) + Eigen::MatrixXd::Identity(n, n));
    rhs.bottomRows(n) = -Z.bottomLeftCorner(n, n);
    Eigen::MatrixXd X = lhs.colPivHouseholderQr().solve(rhs);
    X = 0.5 * (X + X.transpose()).eval();

    // Newton-Lyapunov polish
    for (int it = 0; it < 5; ++it) {
        Eigen::MatrixXd K = Rinv * (B.transpose() * X + S.transpose());
        Eigen::MatrixXd Ac = A - B * K;
        Eigen::MatrixXd res = A.transpose() * X + X * A -
                              (X * B + S) * Rinv * (B.transpose() * X + S.transpose()) + Q;
        if (res.norm() <= 1e-12 * std::max(1.0, X.norm())) break;
        Eigen::MatrixXcd D = sylvester_solve(Ac.transpose().cast<Complex>(), Ac.cast<Complex>(),
                                             res.cast<Complex>());
        X += D.real();
        X = 0.5 * (X + X.transpose()).eval();
    }

    const Eigen::MatrixXd Ac = A - B * Rinv * (B.transpose() * X + S.transpose());
    Eigen::EigenSolver<Eigen::MatrixXd> es(Ac, false);
    for (int i = 0; i < n; ++i)
        if (es.eigenvalues()(i).real() >= -tol::axis)
            raise(Errc::no_stabilizing_solution, "closed-loop spectrum not in the open LHP");
    return X;
}

Eigen::MatrixXd place_poles(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                            const std::vector<Complex>& targets) {
    const int n = static_cast<int>(A.rows());
    const int m = static_cast<int>(B.cols());
    if (static_cast<int>(targets.size()) != n)
        raise(Errc::degenerate_input, "pole placement needs one target per state");

    if (m == 1) {
        // Ackermann
        Eigen::MatrixXd ctrl(n, n);
        Eigen::VectorXd col = B.col(0);
        for (int k = 0; k < n; ++k) {
            ctrl.col(k) = col;
            col = A * col;
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(ctrl);
        if (lu.rank() < n) raise(Errc::not_stabilizable, "uncontrollable pair in pole placement");
        Polynomial p = Polynomial::from_roots(targets);
        if (!p.is_real()) raise(Errc::degenerate_input, "target set not conjugate symmetric");
        Eigen::MatrixXd pA = Eigen::MatrixXd::Zero(n, n);
        Eigen::MatrixXd Apow = Eigen::MatrixXd::Identity(n, n);
        for (int k = 0; k <= p.degree(); ++k) {
            pA += p.coeff(k).real() * Apow;
            Apow = (Apow * A).eval();
        }
        Eigen::RowVectorXd en = Eigen::RowVectorXd::Zero(n);
        en(n - 1) = 1.0;
        Eigen::RowVectorXd K = en * lu.solve(pA);
        return -K;  // eig(A + B F) = targets
    }

    // Sylvester-based assignment for multi-input B.
    Eigen::MatrixXcd Lambda = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i) Lambda(i, i) = targets[static_cast<size_t>(i)];
    std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
    std::normal_distribution<double> dist(0.0, 1.0);
    for (int attempt = 0; attempt < 10; ++attempt) {
        Eigen::MatrixXd G(m, n);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) G(i, j) = dist(rng);
        // A X - X Lambda = -B G  ->  A X + X (-Lambda) + B G = 0
        Eigen::MatrixXcd X =
            sylvester_solve(A.cast<Complex>(), -Lambda, (B * G).cast<Complex>());
        Eigen::FullPivLU<Eigen::MatrixXcd> lu(X);
        if (lu.rank() < n) continue;
        const double cond = X.jacobiSvd().singularValues()(0) /
                            X.jacobiSvd().singularValues()(n - 1);
        if (!(cond < 1e10)) continue;
        Eigen::MatrixXcd F = G.cast<Complex>() * lu.inverse();
        if (F.imag().cwiseAbs().maxCoeff() > 1e-6 * std::max(1.0, F.real().cwiseAbs().maxCoeff()))
            continue;
        return F.real();
    }
    raise(Errc::not_stabilizable, "multi-input pole placement failed");
}

StateSpaceModel realize_companion(const Rational& g) {
    if (!g.is_real()) raise(Errc::degenerate_input, "realization of a non-real rational");
    if (!g.is_proper()) raise(Errc::improper_plant, "realization of an improper rational");
    const Rational gr = g.real_part();
    const int n = gr.den().degree();
    StateSpaceModel m;
    m.D = Eigen::MatrixXd::Zero(1, 1);
    if (gr.is_zero()) {
        m.A = Eigen::MatrixXd::Zero(0, 0);
        m.B = Eigen::MatrixXd::Zero(0, 1);
        m.C = Eigen::MatrixXd::Zero(1, 0);
        return m;
    }
    // split off the feedthrough if biproper
    Rational strict = gr;
    if (gr.relative_degree() == 0) {
        const double d = gr.at_infinity().real();
        m.D(0, 0) = d;
        strict = gr - Rational(d);
    }
    const int ns = strict.is_zero() ? 0 : strict.den().degree();
    m.A = Eigen::MatrixXd::Zero(ns, ns);
    m.B = Eigen::MatrixXd::Zero(ns, 1);
    m.C = Eigen::MatrixXd::Zero(1, ns);
    if (ns == 0) return m;
    (void)n;
    for (int i = 0; i + 1 < ns; ++i) m.A(i, i + 1) = 1.0;
    for (int j = 0; j < ns; ++j) m.A(ns - 1, j) = -strict.den().coeff(j).real();
    m.B(ns - 1, 0) = 1.0;
    for (int j = 0; j < ns; ++j) m.C(0, j) = strict.num().coeff(j).real();
    return m;
}

StateSpaceModel realize(const RationalMatrix& G) {
    const int p = G.rows(), q = G.cols();
    int total = 0;
    std::vector<StateSpaceModel> sub;
    sub.reserve(static_cast<size_t>(p * q));
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < q; ++j) {
            sub.push_back(realize_companion(G(i, j)));
            total += sub.back().order();
        }
    StateSpaceModel m;
    m.A = Eigen::MatrixXd::Zero(total, total);
    m.B = Eigen::MatrixXd::Zero(total, q);
    m.C = Eigen::MatrixXd::Zero(p, total);
    m.D = Eigen::MatrixXd::Zero(p, q);
    int at = 0;
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < q; ++j) {
            const StateSpaceModel& s = sub[static_cast<size_t>(i * q + j)];
            const int ns = s.order();
            m.A.block(at, at, ns, ns) = s.A;
            m.B.block(at, j, ns, 1) = s.B;
            m.C.block(i, at, 1, ns) = s.C;
            m.D(i, j) += s.D(0, 0);
            at += ns;
        }
    return m;
}

namespace {

// Orthonormal basis of the Krylov reachability space span[B, AB, ...].
Eigen::MatrixXd krylov_basis(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double rel_tol) {
    const int n = static_cast<int>(A.rows());
    if (n == 0) return Eigen::MatrixXd::Zero(0, 0);
    Eigen::MatrixXd K(n, n * B.cols());
    Eigen::MatrixXd blk = B;
    for (int k = 0; k < n; ++k) {
        K.middleCols(k * B.cols(), B.cols()) = blk;
        blk = (A * blk).eval();
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(K, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    const double thresh = rel_tol * std::max(sv(0), 1e-300);
    int r = 0;
    while (r < sv.size() && sv(r) > thresh) ++r;
    return svd.matrixU().leftCols(r);
}

} // namespace

StateSpaceModel minimal_realization(const StateSpaceModel& m, double rel_tol) {
    StateSpaceModel cur = m;
    // controllable part
    {
        Eigen::MatrixXd V = krylov_basis(cur.A, cur.B, rel_tol);
        cur.A = (V.transpose() * cur.A * V).eval();
        cur.B = (V.transpose() * cur.B).eval();
        cur.C = (cur.C * V).eval();
    }
    // observable part
    {
        Eigen::MatrixXd V = krylov_basis(cur.A.transpose(), cur.C.transpose(), rel_tol);
        cur.A = (V.transpose() * cur.A * V).eval();
        cur.B = (V.transpose() * cur.B).eval();
        cur.C = (cur.C * V).eval();
    }
    return cur;
}

RationalMatrix to_rational(const StateSpaceModel& m) {
    const int n = m.order();
    const int p = m.outputs(), q = m.inputs();
    RationalMatrix G(p, q);
    if (n == 0) {
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < q; ++j) G(i, j) = Rational(m.D(i, j));
        return G;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(m.A, false);
    std::vector<Complex> eigs(static_cast<size_t>(n));
    double rho = 0.0;
    for (int i = 0; i < n; ++i) {
        eigs[static_cast<size_t>(i)] = es.eigenvalues()(i);
        rho = std::max(rho, std::abs(es.eigenvalues()(i)));
    }
    Polynomial den = Polynomial::from_roots(eigs);
    if (!den.is_real(1e-7))
        raise(Errc::numerical_inconsistency, "characteristic polynomial not real");
    den = den.real_part();

    // numerators by evaluation-interpolation on a circle enclosing the spectrum
    const double r = 2.0 * std::max(rho, 1.0);
    const int npts = n + 1;
    Eigen::MatrixXcd lhs(npts, n + 1);
    std::vector<Eigen::MatrixXcd> vals;
    vals.reserve(static_cast<size_t>(npts));
    for (int k = 0; k < npts; ++k) {
        const double th = 2.0 * M_PI * (k + 0.25) / npts;
        const Complex s = r * Complex(std::cos(th), std::sin(th));
        Complex pw = 1.0;
        for (int j = 0; j <= n; ++j) {
            lhs(k, j) = pw;
            pw *= s;
        }
        vals.push_back(m.eval(s) * den.eval(s));
    }
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(lhs);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < q; ++j) {
            Eigen::VectorXcd rhs(npts);
            for (int k = 0; k < npts; ++k) rhs(k) = vals[static_cast<size_t>(k)](i, j);
            Eigen::VectorXcd c = lu.solve(rhs);
            std::vector<Complex> cc(static_cast<size_t>(n + 1));
            for (int k = 0; k <= n; ++k) cc[static_cast<size_t>(k)] = c(k);
            Polynomial num = Polynomial(std::move(cc));
            if (!num.is_real(1e-6))
                raise(Errc::numerical_inconsistency, "interpolated numerator not real");
            G(i, j) = Rational(num.real_part(), den);
        }
    return G;
}

StateSpaceModel series(const StateSpaceModel& second, const StateSpaceModel& first) {
    const int n1 = first.order(), n2 = second.order();
    StateSpaceModel m;
    m.A = Eigen::MatrixXd::Zero(n1 + n2, n1 + n2);
    m.A.topLeftCorner(n1, n1) = first.A;
    m.A.bottomLeftCorner(n2, n1) = second.B * first.C;
    m.A.bottomRightCorner(n2, n2) = second.A;
    m.B = Eigen::MatrixXd::Zero(n1 + n2, first.inputs());
    m.B.topRows(n1) = first.B;
    m.B.bottomRows(n2) = second.B * first.D;
    m.C = Eigen::MatrixXd::Zero(second.outputs(), n1 + n2);
    m.C.leftCols(n1) = second.D * first.C;
    m.C.rightCols(n2) = second.C;
    m.D = second.D * first.D;
    return m;
}

StateSpaceModel parallel_sum(const StateSpaceModel& a, const StateSpaceModel& b) {
    const int na = a.order(), nb = b.order();
    StateSpaceModel m;
    m.A = Eigen::MatrixXd::Zero(na + nb, na + nb);
    m.A.topLeftCorner(na, na) = a.A;
    m.A.bottomRightCorner(nb, nb) = b.A;
    m.B = Eigen::MatrixXd::Zero(na + nb, a.inputs());
    m.B.topRows(na) = a.B;
    m.B.bottomRows(nb) = b.B;
    m.C = Eigen::MatrixXd::Zero(a.outputs(), na + nb);
    m.C.leftCols(na) = a.C;
    m.C.rightCols(nb) = b.C;
    m.D = a.D + b.D;
    return m;
}

StateSpaceModel scaled(const StateSpaceModel& m, double alpha) {
    StateSpaceModel out = m;
    out.C *= alpha;
    out.D *= alpha;
    return out;
}

double h2_inner(const StateSpaceModel& a, const StateSpaceModel& b) {
    if (a.D.cwiseAbs().maxCoeff() > 0.0 || b.D.cwiseAbs().maxCoeff() > 0.0)
        raise(Errc::not_in_h2, "state-space inner product needs zero feedthrough");
    if (a.order() == 0 || b.order() == 0) return 0.0;
    Eigen::MatrixXcd X = sylvester_solve(a.A.cast<Complex>(), b.A.transpose().cast<Complex>(),
                                         (a.B * b.B.transpose()).cast<Complex>());
    return (a.C.cast<Complex>() * X * b.C.transpose().cast<Complex>()).real().trace();
}

double h2_norm_squared(const StateSpaceModel& m) { return h2_inner(m, m); }

Eigen::MatrixXd h2_gram(const StateSpaceModel& a, const StateSpaceModel& b) {
    if (a.D.cwiseAbs().maxCoeff() > 0.0 || b.D.cwiseAbs().maxCoeff() > 0.0)
        raise(Errc::not_in_h2, "state-space inner product needs zero feedthrough");
    if (a.order() == 0 || b.order() == 0)
        return Eigen::MatrixXd::Zero(a.outputs(), b.outputs());
    Eigen::MatrixXcd X = sylvester_solve(a.A.cast<Complex>(), b.A.transpose().cast<Complex>(),
                                         (a.B * b.B.transpose()).cast<Complex>());
    return (a.C.cast<Complex>() * X * b.C.transpose().cast<Complex>()).real();
}

// ---------------------------------------------------------------------------
// H2 machinery
// ---------------------------------------------------------------------------

namespace {

void require_h2(const Rational& g, const char* who) {
    if (g.is_zero()) return;
    if (!g.is_stable())
        raise(Errc::not_in_h2, std::string(who) + ": pole in the closed right half-plane");
    if (!g.is_strictly_proper())
        raise(Errc::not_in_h2, std::string(who) + ": relative degree " +
                                   std::to_string(g.relative_degree()) + " (need >= 1)");
}

} // namespace

double h2_inner(const Rational& a, const Rational& b) {
    require_h2(a, "h2_inner");
    require_h2(b, "h2_inner");
    if (a.is_zero() || b.is_zero()) return 0.0;
    StateSpaceModel ma = realize_companion(a);
    StateSpaceModel mb = realize_companion(b);
    Eigen::MatrixXcd X = sylvester_solve(ma.A.cast<Complex>(), mb.A.transpose().cast<Complex>(),
                                         (ma.B * mb.B.transpose()).cast<Complex>());
    const Complex v = (ma.C.cast<Complex>() * X * mb.C.transpose().cast<Complex>())(0, 0);
    return v.real();
}

double h2_norm_squared(const Rational& g) { return h2_inner(g, g); }

double h2_norm_squared(const RationalMatrix& G) {
    double acc = 0.0;
    for (int i = 0; i < G.rows(); ++i)
        for (int j = 0; j < G.cols(); ++j) acc += h2_norm_squared(G(i, j));
    return acc;
}

double h2_norm(const RationalMatrix& G) { return std::sqrt(std::max(0.0, h2_norm_squared(G))); }
double h2_norm(const Rational& g) { return std::sqrt(std::max(0.0, h2_norm_squared(g))); }

double h2_inner(const RationalMatrix& A, const RationalMatrix& B) {
    double acc = 0.0;
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) acc += h2_inner(A(i, j), B(i, j));
    return acc;
}

double h2_norm_squared_quadrature(const RationalMatrix& G, double abs_tol) {
    for (int i = 0; i < G.rows(); ++i)
        for (int j = 0; j < G.cols(); ++j) require_h2(G(i, j), "h2_norm_quadrature");
    return l2_axis_norm_squared(G, abs_tol);
}

double l2_axis_norm_squared(const RationalMatrix& G, double abs_tol) {
    double rho = 1.0;
    for (Complex p : G.entry_poles()) rho = std::max(rho, std::abs(p));
    const auto f = [&](double w) {
        const Eigen::MatrixXcd v = G.eval_unchecked(Complex(0.0, w));
        return v.squaredNorm() / M_PI;
    };
    return integrate_half_line(f, 2.0 * rho, abs_tol);
}

} // namespace perflim

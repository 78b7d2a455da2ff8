#include "perflim/coprime.hpp"

#include <Eigen/Dense>

#include "perflim/errors.hpp"
#include "perflim/state_space.hpp"
#include "perflim/zeros_poles.hpp"

namespace perflim {

double CoprimeData::bezout_residual(Complex s) const {
    const int l = M.cols();
    Eigen::MatrixXcd left(2 * l, 2 * l), right(2 * l, 2 * l);
    left.topLeftCorner(l, l) = Xt.eval_unchecked(s);
    left.topRightCorner(l, l) = -Yt.eval_unchecked(s);
    left.bottomLeftCorner(l, l) = -Nt.eval_unchecked(s);
    left.bottomRightCorner(l, l) = Mt.eval_unchecked(s);
    right.topLeftCorner(l, l) = M.eval_unchecked(s);
    right.topRightCorner(l, l) = Y.eval_unchecked(s);
    right.bottomLeftCorner(l, l) = N.eval_unchecked(s);
    right.bottomRightCorner(l, l) = X.eval_unchecked(s);
    return (left * right - Eigen::MatrixXcd::Identity(2 * l, 2 * l)).norm();
}

namespace {

CoprimeData stable_plant(const RationalMatrix& P) {
    CoprimeData c;
    const int l = P.rows();
    c.N = P;
    c.Nt = P;
    c.M = RationalMatrix::identity(l);
    c.Mt = RationalMatrix::identity(l);
    c.X = RationalMatrix::identity(l);
    c.Xt = RationalMatrix::identity(l);
    c.Y = RationalMatrix::zero(l, l);
    c.Yt = RationalMatrix::zero(l, l);
    return c;
}

CoprimeData siso_diophantine(const Rational& P, double pole_base) {
    const Polynomial& np = P.num();
    const Polynomial& dp = P.den();
    const int n = dp.degree();
    if (np.degree() > n) raise(Errc::improper_plant, "plant is not proper");

    // synthetic poles spaced at -pole_base, -pole_base-1, ... (a repeated
    // root here would poison every later root-matching cancellation)
    std::vector<Complex> hurwitz;
    for (int i = 0; i < n; ++i) hurwitz.push_back(Complex(-pole_base - i, 0.0));
    const Polynomial d = Polynomial::from_roots(hurwitz);

    Rational N(np, d), M(dp, d);

    // x dp - y np = d^2 with deg x <= n, deg y <= n-1: a square linear system,
    // nonsingular exactly when num and den are coprime.
    const Polynomial d2 = d * d;
    const int nx = n + 1, ny = n;
    Eigen::MatrixXd Amat = Eigen::MatrixXd::Zero(2 * n + 1, nx + ny);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(2 * n + 1);
    for (int k = 0; k <= 2 * n; ++k) rhs(k) = d2.coeff(k).real();
    for (int j = 0; j < nx; ++j)
        for (int k = 0; k <= dp.degree(); ++k)
            if (j + k <= 2 * n) Amat(j + k, j) += dp.coeff(k).real();
    for (int j = 0; j < ny; ++j)
        for (int k = 0; k <= np.degree(); ++k)
            if (j + k <= 2 * n) Amat(j + k, nx + j) -= np.coeff(k).real();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(Amat);
    if (lu.rank() < 2 * n + 1)
        raise(Errc::not_stabilizable, "numerator and denominator share a factor");
    Eigen::VectorXd sol = lu.solve(rhs);

    std::vector<double> xc(static_cast<size_t>(nx)), yc(static_cast<size_t>(std::max(ny, 1)), 0.0);
    for (int j = 0; j < nx; ++j) xc[static_cast<size_t>(j)] = sol(j);
    for (int j = 0; j < ny; ++j) yc[static_cast<size_t>(j)] = sol(nx + j);

    Rational X(Polynomial::from_real(xc), d);
    Rational Y(Polynomial::from_real(yc), d);

    CoprimeData c;
    c.N = RationalMatrix(N);
    c.M = RationalMatrix(M);
    c.Nt = c.N;
    c.Mt = c.M;
    c.X = RationalMatrix(X);
    c.Xt = c.X;
    c.Y = RationalMatrix(Y);
    c.Yt = c.Y;
    return c;
}

CoprimeData diagonal_assemble(const RationalMatrix& P, double pole_base) {
    const int l = P.rows();
    CoprimeData c;
    c.N = RationalMatrix(l, l);
    c.M = RationalMatrix(l, l);
    c.Nt = RationalMatrix(l, l);
    c.Mt = RationalMatrix(l, l);
    c.X = RationalMatrix(l, l);
    c.Y = RationalMatrix(l, l);
    c.Xt = RationalMatrix(l, l);
    c.Yt = RationalMatrix(l, l);
    for (int i = 0; i < l; ++i) {
        CoprimeData ci = coprime_factorize(RationalMatrix(P(i, i)), pole_base);
        c.N(i, i) = ci.N.scalar();
        c.M(i, i) = ci.M.scalar();
        c.Nt(i, i) = ci.Nt.scalar();
        c.Mt(i, i) = ci.Mt.scalar();
        c.X(i, i) = ci.X.scalar();
        c.Y(i, i) = ci.Y.scalar();
        c.Xt(i, i) = ci.Xt.scalar();
        c.Yt(i, i) = ci.Yt.scalar();
    }
    return c;
}

RationalMatrix from_quadruple(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                              const Eigen::MatrixXd& C, const Eigen::MatrixXd& D) {
    StateSpaceModel m{A, B, C, D};
    return to_rational(minimal_realization(m));
}

CoprimeData state_space_route(const RationalMatrix& P, double pole_base) {
    StateSpaceModel m = minimal_realization(realize(P));
    const int n = m.order();
    const int l = P.rows();

    // PBH stabilizability / detectability at unstable modes
    Eigen::EigenSolver<Eigen::MatrixXd> es(m.A, true);
    for (int i = 0; i < n; ++i) {
        const Complex lam = es.eigenvalues()(i);
        if (lam.real() < -tol::axis) continue;
        Eigen::MatrixXcd pbh(n, n + m.inputs());
        pbh << (m.A.cast<Complex>() - lam * Eigen::MatrixXcd::Identity(n, n)), m.B.cast<Complex>();
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(pbh);
        if (svd.singularValues()(n - 1) <= 1e-8 * svd.singularValues()(0))
            raise(Errc::not_stabilizable, "unstable mode is uncontrollable");
        Eigen::MatrixXcd pbh2(n + m.outputs(), n);
        pbh2 << (m.A.cast<Complex>() - lam * Eigen::MatrixXcd::Identity(n, n)),
            m.C.cast<Complex>();
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd2(pbh2);
        if (svd2.singularValues()(n - 1) <= 1e-8 * svd2.singularValues()(0))
            raise(Errc::not_stabilizable, "unstable mode is unobservable");
    }

    std::vector<Complex> targets;
    for (int i = 0; i < n; ++i) {
        double t = -pole_base - i;
        // keep targets clear of open-loop eigenvalues (Sylvester assignment
        // needs disjoint spectra)
        bool moved = true;
        while (moved) {
            moved = false;
            for (int k = 0; k < n; ++k)
                if (std::abs(es.eigenvalues()(k) - Complex(t, 0.0)) < 0.05) {
                    t -= 0.37;
                    moved = true;
                }
            for (const Complex& prev : targets)
                if (std::abs(prev - Complex(t, 0.0)) < 0.05) {
                    t -= 0.37;
                    moved = true;
                }
        }
        targets.push_back(Complex(t, 0.0));
    }
    const Eigen::MatrixXd F = place_poles(m.A, m.B, targets);          // A + B F stable
    const Eigen::MatrixXd Lt = place_poles(m.A.transpose(), m.C.transpose(), targets);
    const Eigen::MatrixXd L = Lt.transpose();                          // A + L C stable

    const Eigen::MatrixXd AF = m.A + m.B * F;
    const Eigen::MatrixXd AL = m.A + L * m.C;
    const Eigen::MatrixXd CDF = m.C + m.D * F;
    const Eigen::MatrixXd BLD = m.B + L * m.D;
    const Eigen::MatrixXd Il = Eigen::MatrixXd::Identity(l, l);
    const Eigen::MatrixXd Zl = Eigen::MatrixXd::Zero(l, l);

    CoprimeData c;
    c.M = from_quadruple(AF, m.B, F, Il);
    c.N = from_quadruple(AF, m.B, CDF, m.D);
    c.Mt = from_quadruple(AL, L, m.C, Il);
    c.Nt = from_quadruple(AL, BLD, m.C, m.D);
    c.X = from_quadruple(AF, -L, CDF, Il);
    c.Y = from_quadruple(AF, -L, F, Zl);
    c.Xt = from_quadruple(AL, -BLD, F, Il);
    c.Yt = from_quadruple(AL, -L, F, Zl);
    return c;
}

} // namespace

CoprimeData coprime_factorize(const RationalMatrix& P, double pole_base) {
    if (P.rows() != P.cols())
        raise(Errc::not_right_invertible, "coprime factorization expects a square plant here");
    if (!P.is_proper()) raise(Errc::improper_plant, "plant is not proper");

    if (P.is_stable()) return stable_plant(P);
    if (P.is_scalar()) return siso_diophantine(P.scalar(), pole_base);
    if (P.is_diagonal()) return diagonal_assemble(P, pole_base);
    return state_space_route(P, pole_base);
}

} // namespace perflim

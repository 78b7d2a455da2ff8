#include "perflim/oracle.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "perflim/errors.hpp"

namespace perflim {

OracleProblem make_oracle_problem(const RationalMatrix& plant, const ChannelModel& channel,
                                  double epsilon, double coprime_pole_base) {
    channel.validate();
    if (epsilon < 0.0 || epsilon > 1.0)
        raise(Errc::precondition_violated, "epsilon must lie in [0, 1]");
    OracleProblem p;
    p.plant = plant;
    p.channel = channel;
    p.epsilon = epsilon;
    p.size = plant.rows();
    p.cop = coprime_factorize(plant * channel.F, coprime_pole_base);
    p.N0 = plant * p.cop.M;
    return p;
}

namespace {

Rational one_over_s() { return Rational(Polynomial(1.0), Polynomial({0.0, 1.0})); }

double h2_sq_guarded(const RationalMatrix& G, const char* what) {
    try {
        return h2_norm_squared(G);
    } catch (const Error& e) {
        if (e.code() == Errc::not_in_h2)
            raise(Errc::not_h2_admissible, std::string(what) + ": " + e.what());
        throw;
    }
}

} // namespace

IndexValue j_of_parameters(const OracleProblem& p, const RationalMatrix& Q,
                           const RationalMatrix& R) {
    const int l = p.size;
    if (!Q.is_stable() || !Q.is_proper() || !R.is_stable() || !R.is_proper())
        raise(Errc::not_h2_admissible, "Q and R must be stable and proper");

    const RationalMatrix& N = p.cop.N;
    // tracking interpolation: (I - N Q)(0) = 0
    const Eigen::MatrixXcd T0 =
        Eigen::MatrixXcd::Identity(l, l) - N.eval_unchecked(Complex(0.0)) *
                                               Q.eval_unchecked(Complex(0.0));
    if (T0.norm() > 1e-8 * std::sqrt(double(l)))
        raise(Errc::not_h2_admissible, "reference interpolation constraint violated at dc");

    const double eps = p.epsilon;
    Eigen::MatrixXcd U = Eigen::MatrixXcd::Zero(l, l), V = Eigen::MatrixXcd::Zero(l, l);
    for (int i = 0; i < l; ++i) {
        U(i, i) = p.channel.sigma(i);
        V(i, i) = p.channel.gamma(i);
    }

    const Rational s_inv = one_over_s();
    const RationalMatrix eye = RationalMatrix::identity(l);
    RationalMatrix top = (eye - N * Q) * RationalMatrix::constant(U);
    for (int i = 0; i < l; ++i)
        for (int j = 0; j < l; ++j) top(i, j) = top(i, j) * s_inv * Rational(std::sqrt(1.0 - eps));
    RationalMatrix bottom = (p.channel.F * p.cop.M * Q) * RationalMatrix::constant(U);
    for (int i = 0; i < l; ++i)
        for (int j = 0; j < l; ++j)
            bottom(i, j) = bottom(i, j) * s_inv * Rational(std::sqrt(eps));

    IndexValue out;
    out.j_u = h2_sq_guarded(RationalMatrix::vstack(top, bottom), "tracking part");

    const RationalMatrix XtmRNt = p.cop.Xt - R * p.cop.Nt;
    const RationalMatrix HV = p.channel.H * RationalMatrix::constant(V);
    const RationalMatrix vtop =
        std::sqrt(1.0 - eps) * (p.N0 * XtmRNt * HV);
    const RationalMatrix vbottom = std::sqrt(eps) * (p.cop.M * XtmRNt * HV);
    out.j_v = h2_sq_guarded(RationalMatrix::vstack(vtop, vbottom), "noise part");
    return out;
}

// ---------------------------------------------------------------------------
// finite-basis minimization (scalar loops)
// ---------------------------------------------------------------------------

namespace {

struct QuadraticPiece {
    Eigen::MatrixXd gram;   // G
    Eigen::VectorXd cross;  // f_k = <a_k, r0>
    double offset = 0.0;    // ||r0||^2

    double value(const Eigen::VectorXd& x) const {
        return offset + 2.0 * cross.dot(x) + x.dot(gram * x);
    }
};

// Images of the basis through a scalar weight W(s): the j-th output of the
// returned model is W(s) * c_j(s), where c_j is the j-th chain output
// combination. `chain_C` rows select those combinations.
StateSpaceModel weight_through_chain(const Rational& W, const StateSpaceModel& chain,
                                     const Eigen::MatrixXd& chain_C) {
    StateSpaceModel ch = chain;
    ch.C = chain_C;
    ch.D = Eigen::MatrixXd::Zero(chain_C.rows(), 1);
    StateSpaceModel w = realize_companion(W);
    return series(ch, w);
}

} // namespace

// Orthonormal Laguerre network spanning { (lambda/(s+lambda))^j, j = 1..m }:
// state x_j realizes l_j(s) = sqrt(2 lambda) (s-lambda)^{j-1} / (s+lambda)^j.
// Working in this span keeps the Gram conditioning tied to the plant map
// instead of the near-dependent monomial family.
StateSpaceModel orthonormal_laguerre_chain(double lambda, int m) {
    StateSpaceModel s;
    s.A = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        s.A(i, i) = -lambda;
        for (int j = 0; j < i; ++j) s.A(i, j) = -2.0 * lambda;
    }
    s.B = Eigen::MatrixXd::Constant(m, 1, std::sqrt(2.0 * lambda));
    s.C = Eigen::MatrixXd::Identity(m, m);
    s.D = Eigen::MatrixXd::Zero(m, 1);
    return s;
}

// Rational view of l_j.
Rational laguerre_function(double lambda, int j) {
    Polynomial num(std::sqrt(2.0 * lambda));
    for (int k = 1; k < j; ++k) num = num * Polynomial({-lambda, 1.0});
    Polynomial den(1.0);
    for (int k = 0; k < j; ++k) den = den * Polynomial({lambda, 1.0});
    return Rational(num, den);
}

OracleResult optimize_finite_basis(const OracleProblem& p, int m, double lambda) {
    if (!p.is_scalar())
        raise(Errc::not_siso, "finite-basis certification is implemented for scalar loops");
    if (m < 1 || !(lambda > 0.0)) raise(Errc::degenerate_input, "need m >= 1 and lambda > 0");

    const double eps = p.epsilon;
    const double sig = p.channel.sigma(0);
    const double gam = p.channel.gamma(0);
    const Rational N = p.cop.N.scalar();
    const Rational M = p.cop.M.scalar();
    const Rational F = p.channel.F.scalar();
    const Rational H = p.channel.H.scalar();
    const Rational Xt = p.cop.Xt.scalar();
    const Rational Nt = p.cop.Nt.scalar();
    const Rational N0 = p.N0.scalar();
    const Rational s_inv = one_over_s();

    const Complex n0 = N.eval(Complex(0.0));
    if (std::abs(n0) < 1e-12)
        raise(Errc::not_h2_admissible, "plant numerator vanishes at dc; tracking infeasible");

    const StateSpaceModel chain = orthonormal_laguerre_chain(lambda, m);

    // ---- tracking part: Q = phi_1/n0 + sum y_j (l_j - l_j(0)) ----
    const Rational phi1(Polynomial(lambda), Polynomial({lambda, 1.0}));
    const Rational q_p = (1.0 / n0.real()) * phi1;

    const double w_top = std::sqrt(1.0 - eps) * sig;
    const double w_bot = std::sqrt(eps) * sig;
    const Rational r0_top = w_top * ((Rational(1.0) - N * q_p) * s_inv);
    const Rational r0_bot = w_bot * (F * M * q_p * s_inv);

    // (l_j(s) - l_j(0)) / s realizes on the same chain with output C A^{-1}
    const Eigen::MatrixXd eta_C = chain.A.inverse();

    // basis images: top = -w_top N(s) eta_j(s)/s, bottom = w_bot F M eta_j/s
    StateSpaceModel img_top = weight_through_chain((-w_top) * N, chain, eta_C);
    StateSpaceModel img_bot = weight_through_chain(w_bot * (F * M), chain, eta_C);
    StateSpaceModel off_top = realize_companion(r0_top);
    StateSpaceModel off_bot = realize_companion(r0_bot);

    QuadraticPiece ju;
    ju.gram = h2_gram(img_top, img_top) + h2_gram(img_bot, img_bot);
    ju.cross = (h2_gram(img_top, off_top) + h2_gram(img_bot, off_bot)).col(0);
    ju.offset = h2_norm_squared(off_top) + h2_norm_squared(off_bot);

    // ---- noise part: R = sum_{j=0..m} d_j phi_j ----
    QuadraticPiece jv;
    const bool noise_active = gam > 0.0;
    StateSpaceModel vimg_top, vimg_bot, voff_top, voff_bot;
    if (noise_active) {
        const Rational w1 = std::sqrt(1.0 - eps) * gam * (N0 * Nt * H);
        const Rational w2 = std::sqrt(eps) * gam * (M * Nt * H);
        // j = 0 direction is the constant 1: append the weight itself
        const Eigen::MatrixXd phiC = Eigen::MatrixXd::Identity(m, m);
        StateSpaceModel chain_imgs1 = weight_through_chain(-w1, chain, phiC);
        StateSpaceModel chain_imgs2 = weight_through_chain(-w2, chain, phiC);
        StateSpaceModel w1ss = realize_companion(-w1);
        StateSpaceModel w2ss = realize_companion(-w2);
        // stack [phi_0 image; phi_1..phi_m images] as one (m+1)-output model
        auto stack_first = [](const StateSpaceModel& first, const StateSpaceModel& rest) {
            StateSpaceModel out;
            const int n1 = first.order(), n2 = rest.order();
            out.A = Eigen::MatrixXd::Zero(n1 + n2, n1 + n2);
            out.A.topLeftCorner(n1, n1) = first.A;
            out.A.bottomRightCorner(n2, n2) = rest.A;
            out.B = Eigen::MatrixXd::Zero(n1 + n2, 1);
            out.B.topRows(n1) = first.B;
            out.B.bottomRows(n2) = rest.B;
            out.C = Eigen::MatrixXd::Zero(1 + rest.outputs(), n1 + n2);
            out.C.block(0, 0, 1, n1) = first.C;
            out.C.block(1, n1, rest.outputs(), n2) = rest.C;
            out.D = Eigen::MatrixXd::Zero(1 + rest.outputs(), 1);
            return out;
        };
        vimg_top = stack_first(w1ss, chain_imgs1);
        vimg_bot = stack_first(w2ss, chain_imgs2);
        const Rational vr0_top = std::sqrt(1.0 - eps) * gam * (N0 * Xt * H);
        const Rational vr0_bot = std::sqrt(eps) * gam * (M * Xt * H);
        voff_top = realize_companion(vr0_top);
        voff_bot = realize_companion(vr0_bot);
        jv.gram = h2_gram(vimg_top, vimg_top) + h2_gram(vimg_bot, vimg_bot);
        jv.cross = (h2_gram(vimg_top, voff_top) + h2_gram(vimg_bot, voff_bot)).col(0);
        jv.offset = h2_norm_squared(voff_top) + h2_norm_squared(voff_bot);
    }

    // normalize, check conditioning, and solve each quadratic
    const auto solve_piece = [](QuadraticPiece& piece) {
        const int n = static_cast<int>(piece.gram.rows());
        Eigen::VectorXd scale(n);
        for (int i = 0; i < n; ++i) scale(i) = 1.0 / std::sqrt(std::max(piece.gram(i, i), 1e-300));
        Eigen::MatrixXd Gn = scale.asDiagonal() * piece.gram * scale.asDiagonal();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Gn);
        const double lmax = es.eigenvalues().maxCoeff();
        const double lmin = es.eigenvalues().minCoeff();
        if (!(lmin > 0.0) || lmax / lmin > 1e12)
            raise(Errc::ill_conditioned_basis,
                  "basis Gram condition exceeds 1e12; reduce m or change lambda");
        Eigen::VectorXd rhs = -(scale.asDiagonal() * piece.cross);
        Eigen::VectorXd xn = es.eigenvectors() *
                             (es.eigenvectors().transpose() * rhs).cwiseQuotient(es.eigenvalues());
        return Eigen::VectorXd(scale.asDiagonal() * xn);
    };

    OracleResult out;
    out.order = m;
    out.lambda = lambda;
    out.q_coeffs = solve_piece(ju);
    out.j_u = std::max(0.0, ju.value(out.q_coeffs));
    if (noise_active) {
        out.r_coeffs = solve_piece(jv);
        out.j_v = std::max(0.0, jv.value(out.r_coeffs));
    } else {
        out.r_coeffs = Eigen::VectorXd::Zero(m + 1);
        out.j_v = 0.0;
    }
    out.j_value = out.j_u + out.j_v;
    return out;
}

YoulaParameter youla_from_result(const OracleProblem& p, const OracleResult& r) {
    if (!p.is_scalar())
        raise(Errc::not_siso, "coefficient reconstruction is implemented for scalar loops");
    const double lambda = r.lambda;
    const int m = r.order;
    const Complex n0 = p.cop.N.scalar().eval(Complex(0.0));

    // assemble both numerators over the common denominator (s+lambda)^m;
    // repeated-pole additions through the generic rational path would have
    // to re-identify the multiple root at every step
    const Polynomial up({lambda, 1.0});    // s + lambda
    const Polynomial down({-lambda, 1.0});  // s - lambda
    std::vector<Polynomial> up_pow(static_cast<size_t>(m) + 1, Polynomial(1.0));
    for (int j = 1; j <= m; ++j)
        up_pow[static_cast<size_t>(j)] = up_pow[static_cast<size_t>(j - 1)] * up;
    const Polynomial& D = up_pow[static_cast<size_t>(m)];
    const double root2l = std::sqrt(2.0 * lambda);

    // q_p = (1/n0) lambda / (s+lambda)
    Polynomial qn = (lambda / n0.real()) * up_pow[static_cast<size_t>(m - 1)];
    Polynomial downp(1.0);
    for (int j = 1; j <= m; ++j) {
        // l_j = sqrt(2 lambda) (s-lambda)^{j-1} / (s+lambda)^j
        const Polynomial lj_num = root2l * (downp * up_pow[static_cast<size_t>(m - j)]);
        const double lj0 = root2l * std::pow(-lambda, j - 1) / std::pow(lambda, j);
        qn += r.q_coeffs(j - 1) * (lj_num - lj0 * D);
        downp = downp * down;
    }
    Rational Q(qn, D);

    Polynomial rn = r.r_coeffs(0) * D;
    downp = Polynomial(1.0);
    for (int j = 1; j <= m; ++j) {
        rn += (r.r_coeffs(j) * root2l) * (downp * up_pow[static_cast<size_t>(m - j)]);
        downp = downp * down;
    }
    Rational R(rn, D);
    return YoulaParameter{RationalMatrix(Q), RationalMatrix(R)};
}

} // namespace perflim

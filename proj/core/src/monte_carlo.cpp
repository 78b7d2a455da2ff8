#include "perflim/monte_carlo.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <future>
#include <random>
#include <thread>

#include "perflim/errors.hpp"

namespace perflim {

namespace {

Rational one_over_s() { return Rational(Polynomial(1.0), Polynomial({0.0, 1.0})); }

struct SimSystem {
    Eigen::MatrixXd A, B, C;
    Eigen::MatrixXd sqrt_cov;  // stationary state covariance square root
    double rho = 0.0;          // spectral radius

    void prepare() {
        const int n = static_cast<int>(A.rows());
        if (n == 0) {
            sqrt_cov = Eigen::MatrixXd::Zero(0, 0);
            return;
        }
        Eigen::EigenSolver<Eigen::MatrixXd> es(A, false);
        for (int i = 0; i < n; ++i) {
            if (es.eigenvalues()(i).real() >= -tol::axis)
                raise(Errc::unstable_simulation, "closed loop is not stable");
            rho = std::max(rho, std::abs(es.eigenvalues()(i)));
        }
        Eigen::MatrixXd P = lyapunov_continuous(A, B * B.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ps(0.5 * (P + P.transpose()));
        Eigen::VectorXd ev = ps.eigenvalues().cwiseMax(0.0).cwiseSqrt();
        sqrt_cov = ps.eigenvectors() * ev.asDiagonal();
    }
};

SimSystem from_model(const StateSpaceModel& m) {
    if (m.D.cwiseAbs().maxCoeff() > 1e-12)
        raise(Errc::unstable_simulation, "simulated blocks must be strictly proper");
    SimSystem s;
    s.A = m.A;
    s.B = m.B;
    s.C = m.C;
    s.prepare();
    return s;
}

StateSpaceModel stack_outputs(const StateSpaceModel& a, const StateSpaceModel& b) {
    StateSpaceModel m;
    const int na = a.order(), nb = b.order();
    m.A = Eigen::MatrixXd::Zero(na + nb, na + nb);
    m.A.topLeftCorner(na, na) = a.A;
    m.A.bottomRightCorner(nb, nb) = b.A;
    m.B = Eigen::MatrixXd::Zero(na + nb, a.inputs());
    m.B.topRows(na) = a.B;
    m.B.bottomRows(nb) = b.B;
    m.C = Eigen::MatrixXd::Zero(a.outputs() + b.outputs(), na + nb);
    m.C.topLeftCorner(a.outputs(), na) = a.C;
    m.C.bottomRightCorner(b.outputs(), nb) = b.C;
    m.D = Eigen::MatrixXd::Zero(a.outputs() + b.outputs(), a.inputs());
    return m;
}

MonteCarloStats run_simulation(const SimSystem& g1, const SimSystem& g2,
                               const MonteCarloSettings& st) {
    const double dtrho = st.dt * std::max(g1.rho, g2.rho);
    if (dtrho > 0.1)
        raise(Errc::precondition_violated,
              "dt * fastest pole = " + std::to_string(dtrho) + " exceeds 0.1");

    const int steps = static_cast<int>(std::llround(st.horizon / st.dt));
    const double sdt = std::sqrt(st.dt);

    auto one_run = [&](uint64_t run_seed) {
        std::mt19937_64 rng(run_seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        Eigen::VectorXd x1 = Eigen::VectorXd::Zero(g1.A.rows());
        Eigen::VectorXd x2 = Eigen::VectorXd::Zero(g2.A.rows());
        for (int i = 0; i < x1.size(); ++i) {
            Eigen::VectorXd xi(g1.sqrt_cov.cols());
            break;
        }
        // stationary initial states
        {
            Eigen::VectorXd xi1(x1.size()), xi2(x2.size());
            for (int i = 0; i < xi1.size(); ++i) xi1(i) = gauss(rng);
            for (int i = 0; i < xi2.size(); ++i) xi2(i) = gauss(rng);
            if (x1.size() > 0) x1 = g1.sqrt_cov * xi1;
            if (x2.size() > 0) x2 = g2.sqrt_cov * xi2;
        }
        double acc = 0.0;
        for (int k = 0; k < steps; ++k) {
            const double y1 = x1.size() ? (g1.C * x1).squaredNorm() : 0.0;
            const double y2 = x2.size() ? (g2.C * x2).squaredNorm() : 0.0;
            acc += (y1 + y2) * st.dt;
            if (x1.size()) {
                const double dw = gauss(rng) * sdt;
                x1 += st.dt * (g1.A * x1) + g1.B * dw;
            }
            if (x2.size()) {
                const double dn = gauss(rng) * sdt;
                x2 += st.dt * (g2.A * x2) + g2.B * dn;
            }
            if ((x1.size() && x1.norm() > 1e9) || (x2.size() && x2.norm() > 1e9))
                raise(Errc::unstable_simulation, "state norm exceeded 1e9");
        }
        return acc / st.horizon;
    };

    std::vector<double> values(static_cast<size_t>(st.runs));
    int jobs = st.jobs > 0 ? st.jobs : static_cast<int>(std::thread::hardware_concurrency());
    jobs = std::max(1, std::min(jobs, st.runs));
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= st.runs) break;
            const uint64_t run_seed =
                st.seed + 0x9e3779b97f4a7c15ull * static_cast<uint64_t>(i + 1);
            values[static_cast<size_t>(i)] = one_run(run_seed);
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    MonteCarloStats out;
    out.runs = st.runs;
    out.horizon = st.horizon;
    out.dt = st.dt;
    out.seed = st.seed;
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= st.runs;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= std::max(1, st.runs - 1);
    out.estimate = mean;
    out.standard_error = std::sqrt(var / st.runs);
    return out;
}

} // namespace

MonteCarloStats monte_carlo_j(const OracleProblem& p, const YoulaParameter& param,
                              const MonteCarloSettings& st) {
    const int l = p.size;
    const double eps = p.epsilon;
    Eigen::MatrixXcd U = Eigen::MatrixXcd::Zero(l, l), V = Eigen::MatrixXcd::Zero(l, l);
    for (int i = 0; i < l; ++i) {
        U(i, i) = p.channel.sigma(i);
        V(i, i) = p.channel.gamma(i);
    }
    const Rational s_inv = one_over_s();
    const RationalMatrix eye = RationalMatrix::identity(l);
    RationalMatrix top = (eye - p.cop.N * param.Q) * RationalMatrix::constant(U);
    RationalMatrix bottom = (p.channel.F * p.cop.M * param.Q) * RationalMatrix::constant(U);
    for (int i = 0; i < l; ++i)
        for (int j = 0; j < l; ++j) {
            top(i, j) = top(i, j) * s_inv * Rational(std::sqrt(1.0 - eps));
            bottom(i, j) = bottom(i, j) * s_inv * Rational(std::sqrt(eps));
        }
    RationalMatrix G1 = RationalMatrix::vstack(top, bottom);
    const RationalMatrix XtmRNt = p.cop.Xt - param.R * p.cop.Nt;
    const RationalMatrix HV = p.channel.H * RationalMatrix::constant(V);
    RationalMatrix G2 = RationalMatrix::vstack(std::sqrt(1.0 - eps) * (p.N0 * XtmRNt * HV),
                                               std::sqrt(eps) * (p.cop.M * XtmRNt * HV));
    SimSystem s1 = from_model(realize(G1));
    SimSystem s2 = from_model(realize(G2));
    return run_simulation(s1, s2, st);
}

MonteCarloStats monte_carlo_j(const OracleProblem& p, const OracleResult& r,
                              const MonteCarloSettings& st) {
    if (!p.is_scalar())
        raise(Errc::not_siso, "structured simulation is implemented for scalar loops");
    const double eps = p.epsilon;
    const double sig = p.channel.sigma(0);
    const double gam = p.channel.gamma(0);
    const int m = r.order;
    const double lambda = r.lambda;
    const Rational N = p.cop.N.scalar();
    const Rational M = p.cop.M.scalar();
    const Rational F = p.channel.F.scalar();
    const Rational H = p.channel.H.scalar();
    const Rational Xt = p.cop.Xt.scalar();
    const Rational Nt = p.cop.Nt.scalar();
    const Rational N0 = p.N0.scalar();
    const Rational s_inv = one_over_s();
    const Complex n0 = N.eval(Complex(0.0));
    const Rational phi1(Polynomial(lambda), Polynomial({lambda, 1.0}));
    const Rational q_p = (1.0 / n0.real()) * phi1;

    const double w_top = std::sqrt(1.0 - eps) * sig;
    const double w_bot = std::sqrt(eps) * sig;

    const StateSpaceModel chain = orthonormal_laguerre_chain(lambda, m);
    // combined output row: sum_j y_j (l_j - l_j(0))/s = (y^T A^{-1}) states
    Eigen::MatrixXd chiC = (r.q_coeffs.transpose() * chain.A.inverse()).eval();

    auto weighted = [&](const Rational& W, const Eigen::MatrixXd& C1) {
        StateSpaceModel ch = chain;
        ch.C = C1;
        ch.D = Eigen::MatrixXd::Zero(1, 1);
        return series(ch, realize_companion(W));
    };

    StateSpaceModel y1 = parallel_sum(realize_companion(w_top * ((Rational(1.0) - N * q_p) * s_inv)),
                                      weighted((-w_top) * N, chiC));
    StateSpaceModel y2 = parallel_sum(realize_companion(w_bot * (F * M * q_p * s_inv)),
                                      weighted(w_bot * (F * M), chiC));
    SimSystem s1 = from_model(stack_outputs(y1, y2));

    SimSystem s2;
    if (gam > 0.0) {
        Eigen::MatrixXd phiC = Eigen::MatrixXd::Zero(1, m);
        for (int j = 1; j <= m; ++j) phiC(0, j - 1) = r.r_coeffs(j);
        const double d0 = r.r_coeffs(0);
        const Rational w1 = std::sqrt(1.0 - eps) * gam * (N0 * Nt * H);
        const Rational w2 = std::sqrt(eps) * gam * (M * Nt * H);
        const Rational vr1 = std::sqrt(1.0 - eps) * gam * (N0 * Xt * H) - d0 * w1;
        const Rational vr2 = std::sqrt(eps) * gam * (M * Xt * H) - d0 * w2;
        StateSpaceModel v1 = parallel_sum(realize_companion(vr1), weighted(-w1, phiC));
        StateSpaceModel v2 = parallel_sum(realize_companion(vr2), weighted(-w2, phiC));
        s2 = from_model(stack_outputs(v1, v2));
    } else {
        StateSpaceModel zero;
        zero.A = Eigen::MatrixXd::Zero(0, 0);
        zero.B = Eigen::MatrixXd::Zero(0, 1);
        zero.C = Eigen::MatrixXd::Zero(1, 0);
        zero.D = Eigen::MatrixXd::Zero(1, 1);
        s2 = from_model(zero);
    }
    return run_simulation(s1, s2, st);
}

} // namespace perflim

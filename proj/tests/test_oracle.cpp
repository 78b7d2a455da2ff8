#include <doctest.h>

#include "perflim/errors.hpp"
#include "perflim/monte_carlo.hpp"
#include "perflim/oracle.hpp"
#include "perflim/performance.hpp"

using namespace perflim;

namespace {

Rational mk(std::initializer_list<double> n, std::initializer_list<double> d) {
    return Rational(Polynomial(n), Polynomial(d));
}

ChannelModel lowpass_channel(double f, double h, double sigma, double gamma) {
    ChannelModel ch;
    ch.F = RationalMatrix(mk({f}, {f, 1.0}));
    ch.H = RationalMatrix(mk({h}, {h, 1.0}));
    ch.sigma = Eigen::VectorXd::Constant(1, sigma);
    ch.gamma = Eigen::VectorXd::Constant(1, gamma);
    return ch;
}

OracleProblem reference_problem(double eps = 0.5) {
    Rational P = mk({-2.0, 1.0}, {0.0, 1.0, 1.0});
    return make_oracle_problem(RationalMatrix(P), lowpass_channel(3.0, 4.0, 1.0, 0.8), eps);
}

} // namespace

TEST_SUITE("oracle") {

TEST_CASE("upper bound and monotone decrease toward the closed form") {
    OracleProblem prob = reference_problem();
    Rational P = mk({-2.0, 1.0}, {0.0, 1.0, 1.0});
    PerfBreakdown closed =
        tracking_performance(RationalMatrix(P), lowpass_channel(3.0, 4.0, 1.0, 0.8), 0.5);
    double prev = 1e300;
    for (int m = 2; m <= 12; m += 2) {
        OracleResult r = optimize_finite_basis(prob, m, 1.0);
        CHECK(r.j_value >= closed.j_star - 1e-9);
        CHECK(r.j_value <= prev + 1e-12);
        prev = r.j_value;
    }
}

TEST_CASE("exact index at reconstructed optimizer parameters") {
    OracleProblem prob = reference_problem();
    for (int m : {4, 8}) {
        OracleResult r = optimize_finite_basis(prob, m, 1.0);
        YoulaParameter yp = youla_from_result(prob, r);
        IndexValue iv = j_of_parameters(prob, yp.Q, yp.R);
        CHECK(iv.j() == doctest::Approx(r.j_value).epsilon(1e-8));
        CHECK(iv.j_u == doctest::Approx(r.j_u).epsilon(1e-7));
        CHECK(iv.j_v == doctest::Approx(r.j_v).epsilon(1e-7));
    }
}

TEST_CASE("constraint violation is rejected") {
    OracleProblem prob = reference_problem();
    CHECK_THROWS_AS((void)j_of_parameters(prob, RationalMatrix(Rational(0.0)),
                                          RationalMatrix(Rational(0.0))),
                    Error);
}

TEST_CASE("unstable or improper parameters are rejected") {
    OracleProblem prob = reference_problem();
    RationalMatrix bad_q(mk({1.0}, {-1.0, 1.0}));
    CHECK_THROWS_AS((void)j_of_parameters(prob, bad_q, RationalMatrix(Rational(0.0))), Error);
    RationalMatrix improper(mk({0.0, 0.0, 1.0}, {1.0, 1.0}));
    CHECK_THROWS_AS((void)j_of_parameters(prob, RationalMatrix(Rational(1.0)), improper),
                    Error);
}

TEST_CASE("perfect inversion: biproper minimum-phase plant, eps 0") {
    RationalMatrix P(mk({2.0, 1.0}, {1.0, 1.0}));  // (s+2)/(s+1)
    ChannelModel ch = ChannelModel::unity(1, Eigen::VectorXd::Constant(1, 1.0),
                                          Eigen::VectorXd::Zero(1));
    OracleProblem prob = make_oracle_problem(P, ch, 0.0);
    // Q = N^{-1} is proper here and zeroes the tracking part exactly
    RationalMatrix Q(mk({1.0, 1.0}, {2.0, 1.0}));
    IndexValue iv = j_of_parameters(prob, Q, RationalMatrix(Rational(0.0)));
    CHECK(std::abs(iv.j_u) <= 1e-12);
    CHECK(iv.j_v == 0.0);
    // and the optimizer drives toward zero fast
    OracleResult r = optimize_finite_basis(prob, 10, 1.0);
    CHECK(r.j_value <= 1e-4);
}

TEST_CASE("finite-basis certification rejects multi-loop problems") {
    RationalMatrix P(2, 2);
    P(0, 0) = mk({-2.0, 1.0}, {0.0, 1.0, 1.0});
    P(1, 1) = mk({-3.0, 1.0}, {0.0, 1.0, 1.0});
    ChannelModel ch = ChannelModel::unity(2, Eigen::VectorXd::Constant(2, 1.0),
                                          Eigen::VectorXd::Zero(2));
    OracleProblem prob = make_oracle_problem(P, ch, 0.0);
    CHECK_THROWS_AS((void)optimize_finite_basis(prob, 4, 1.0), Error);
}

TEST_CASE("time step versus fastest pole is guarded") {
    OracleProblem prob = reference_problem();
    OracleResult r = optimize_finite_basis(prob, 4, 1.0);
    MonteCarloSettings st;
    st.runs = 2;
    st.horizon = 1.0;
    st.dt = 0.5;
    CHECK_THROWS_AS((void)monte_carlo_j(prob, r, st), Error);
}

TEST_CASE("monte carlo is reproducible and consistent with the exact index") {
    OracleProblem prob = reference_problem();
    OracleResult r = optimize_finite_basis(prob, 8, 1.0);
    MonteCarloSettings st;
    st.runs = 48;
    st.horizon = 60.0;
    st.dt = 1e-3;
    st.seed = 424242;
    st.jobs = 2;
    MonteCarloStats a = monte_carlo_j(prob, r, st);
    MonteCarloStats b = monte_carlo_j(prob, r, st);
    CHECK(a.estimate == b.estimate);
    CHECK(a.standard_error == b.standard_error);
    CHECK(std::abs(a.estimate - r.j_value) <= 4.0 * a.standard_error);
}

TEST_CASE("rational-parameter monte carlo on a low-order controller") {
    OracleProblem prob = reference_problem();
    OracleResult r = optimize_finite_basis(prob, 3, 1.0);
    YoulaParameter yp = youla_from_result(prob, r);
    IndexValue iv = j_of_parameters(prob, yp.Q, yp.R);
    MonteCarloSettings st;
    st.runs = 48;
    st.horizon = 60.0;
    st.dt = 1e-3;
    st.seed = 7;
    st.jobs = 2;
    MonteCarloStats mc = monte_carlo_j(prob, yp, st);
    CHECK(std::abs(mc.estimate - iv.j()) <= 4.0 * mc.standard_error);
}

TEST_CASE("zero noise and zero reference simulate to exactly zero") {
    Rational P = mk({-2.0, 1.0}, {0.0, 1.0, 1.0});
    ChannelModel ch = lowpass_channel(3.0, 4.0, 1.0, 0.8);
    ch.sigma = Eigen::VectorXd::Zero(1);
    ch.gamma = Eigen::VectorXd::Zero(1);
    OracleProblem prob = make_oracle_problem(RationalMatrix(P), ch, 0.5);
    OracleResult stub;
    stub.order = 2;
    stub.lambda = 1.0;
    stub.q_coeffs = Eigen::VectorXd::Zero(2);
    stub.r_coeffs = Eigen::VectorXd::Zero(3);
    MonteCarloSettings st;
    st.runs = 4;
    st.horizon = 5.0;
    st.seed = 3;
    st.jobs = 1;
    MonteCarloStats mc = monte_carlo_j(prob, stub, st);
    CHECK(mc.estimate == 0.0);
    CHECK(mc.standard_error == 0.0);
}

TEST_CASE("doubling the runs shrinks the error near the CLT rate") {
    OracleProblem prob = reference_problem();
    OracleResult r = optimize_finite_basis(prob, 6, 1.0);
    MonteCarloSettings st;
    st.runs = 64;
    st.horizon = 40.0;
    st.dt = 2e-3;
    st.seed = 99;
    st.jobs = 2;
    MonteCarloStats a = monte_carlo_j(prob, r, st);
    st.runs = 128;
    MonteCarloStats b = monte_carlo_j(prob, r, st);
    const double ratio = b.standard_error / a.standard_error;
    CHECK(ratio >= 0.707 * 0.7);
    CHECK(ratio <= 0.707 * 1.3);
}

} // TEST_SUITE

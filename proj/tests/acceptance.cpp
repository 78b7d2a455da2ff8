// Acceptance suite: every criterion runs at its stated tolerance and prints
// one PASS/FAIL line. The process exits with the number of failed criteria.
#include <chrono>
#include <cstdio>
#include <random>
#include <sstream>
#include <vector>

#include "perflim/allpass.hpp"
#include "perflim/coprime.hpp"
#include "perflim/errors.hpp"
#include "perflim/expansion.hpp"
#include "perflim/monte_carlo.hpp"
#include "perflim/oracle.hpp"
#include "perflim/performance.hpp"
#include "perflim/snr.hpp"
#include "perflim/spectral.hpp"
#include "perflim/sweep.hpp"
#include "perflim/zeros_poles.hpp"

using namespace perflim;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
    std::printf("criterion %d [%s] %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

Rational mk(std::initializer_list<double> n, std::initializer_list<double> d) {
    return Rational(Polynomial(n), Polynomial(d));
}

Rational lowpass(double c) { return mk({c}, {c, 1.0}); }

Rational reference_plant(double k) { return mk({-k, 1.0}, {0.0, 1.0, 1.0}); }

ChannelModel scalar_channel(const Rational& F, const Rational& H, double sigma, double gamma) {
    ChannelModel ch;
    ch.F = RationalMatrix(F);
    ch.H = RationalMatrix(H);
    ch.sigma = Eigen::VectorXd::Constant(1, sigma);
    ch.gamma = Eigen::VectorXd::Constant(1, gamma);
    return ch;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------

void criterion_1() {
    const double f = 3.0, h = 4.0, sig = 1.0, gam = 0.8;
    double worst_gap = 0.0, worst_time = 0.0;
    bool upper_bound_ok = true, time_ok = true;
    std::ostringstream points;
    for (double k : {1.0, 2.0, 5.0, 10.0}) {
        for (double eps : {0.1, 0.5, 0.9}) {
            const auto t0 = std::chrono::steady_clock::now();
            ChannelModel ch = scalar_channel(lowpass(f), lowpass(h), sig, gam);
            RationalMatrix P(reference_plant(k));
            PerfBreakdown closed = tracking_performance(P, ch, eps);
            OracleProblem prob = make_oracle_problem(P, ch, eps);
            OracleResult r = optimize_finite_basis(prob, 20, 1.0);
            const double elapsed = seconds_since(t0);
            const double gap = (r.j_value - closed.j_star) / closed.j_star;
            if (r.j_value < closed.j_star - 1e-9) upper_bound_ok = false;
            if (elapsed > 60.0) time_ok = false;
            worst_gap = std::max(worst_gap, gap);
            worst_time = std::max(worst_time, elapsed);
            points << "  k=" << k << " eps=" << eps << ": j*=" << closed.j_star
                   << " oracle=" << r.j_value << " relgap=" << gap << " (" << elapsed
                   << " s)\n";
        }
    }
    const bool pass = upper_bound_ok && time_ok && worst_gap <= 1e-3;
    std::ostringstream msg;
    msg << "oracle certification at m=20, lambda=1 on the 12 reference points: "
        << (upper_bound_ok ? "upper bound held everywhere" : "UPPER BOUND VIOLATED")
        << ", max relative gap " << worst_gap << " vs tolerance 1e-3, max runtime "
        << worst_time << " s (limit 60 s)";
    if (!pass && upper_bound_ok && time_ok)
        msg << " -- the order-20 span cannot close the gap: the index-optimal parameters "
               "are improper, so finite proper bases converge like m^(-1/2); the bound "
               "decreases monotonically toward the closed form (see notes)";
    report(1, pass, msg.str());
    std::fputs(points.str().c_str(), stdout);
}

void criterion_2() {
    RationalMatrix P(mk({2.0, 1.0}, {1.0, 1.0}));  // minimum-phase stable, biproper
    ChannelModel ch = ChannelModel::unity(1, Eigen::VectorXd::Constant(1, 1.0),
                                          Eigen::VectorXd::Zero(1));
    PerfBreakdown b = tracking_performance(P, ch, 0.0);
    OracleProblem prob = make_oracle_problem(P, ch, 0.0);
    OracleResult r = optimize_finite_basis(prob, 10, 1.0);
    const bool pass = std::abs(b.j_star) <= 1e-10 && r.j_value <= 1e-4;
    std::ostringstream msg;
    msg << "degenerate zero: j* = " << b.j_star << " (tol 1e-10), oracle(m=10) = "
        << r.j_value << " (tol 1e-4)";
    report(2, pass, msg.str());
}

void criterion_3() {
    const double bound =
        required_snr_for_stabilization(mk({1.0}, {-1.0, 1.0}), Rational(1.0), Rational(1.0));
    const bool pass = std::abs(bound - 2.0) <= 1e-10;
    std::ostringstream msg;
    msg << "classical stabilizability bound for 1/(s-1): " << bound << " vs 2 (tol 1e-10)";
    report(3, pass, msg.str());
}

void criterion_4() {
    auto sweep_cfg = [](const std::string& param, double lo, double hi) {
        RunConfig cfg;
        cfg.plant.kind = PlantSpec::Kind::gain_zero_integrator;
        cfg.plant.k = 2.0;
        cfg.f.kind = FilterSpec::Kind::lowpass1;
        cfg.f.cutoff = 3.0;
        cfg.h.kind = FilterSpec::Kind::lowpass1;
        cfg.h.cutoff = 4.0;
        cfg.sigma = {1.0};
        cfg.gamma = {0.8};
        cfg.epsilon = 0.5;
        SweepSpec s;
        s.param = param;
        for (int i = 0; i < 20; ++i) s.grid.push_back(lo + (hi - lo) * i / 19.0);
        cfg.sweeps = {s};
        return cfg;
    };
    bool pass = true;
    std::ostringstream msg;
    msg << "monotone trends on 20-point grids:";
    struct Case {
        const char* param;
        double lo, hi;
    } cases[] = {{"f", 0.5, 10.0}, {"h", 0.5, 10.0}, {"sigma", 0.25, 5.0}, {"gamma", 0.05, 2.0}};
    for (const auto& c : cases) {
        RunConfig cfg = sweep_cfg(c.param, c.lo, c.hi);
        SweepResult r = run_sweep(cfg, 2);
        std::ostringstream csv;
        write_csv(r, csv);
        std::istringstream in(csv.str());
        TrendReport rep = check_trend(in, c.param);
        if (r.any_error || !rep.pass) pass = false;
        msg << ' ' << c.param << (rep.pass && !r.any_error ? ":ok" : ":VIOLATION");
    }
    report(4, pass, msg.str());
}

struct BatchStats {
    double allpass = 0.0, bezout = 0.0, inner = 0.0, expansion_err = 0.0, f0 = 0.0;
    double inv_pole = 0.0, inv_order = 0.0;

    void fold(const BatchStats& o) {
        allpass = std::max(allpass, o.allpass);
        bezout = std::max(bezout, o.bezout);
        inner = std::max(inner, o.inner);
        expansion_err = std::max(expansion_err, o.expansion_err);
        f0 = std::max(f0, o.f0);
        inv_pole = std::max(inv_pole, o.inv_pole);
        inv_order = std::max(inv_order, o.inv_order);
    }
};

std::vector<double> log_grid() {
    std::vector<double> w;
    for (int i = 0; i < 50; ++i) w.push_back(std::pow(10.0, -3.0 + 6.0 * i / 49.0));
    return w;
}

BatchStats check_instance(const RationalMatrix& plant, const ChannelModel& ch, double eps,
                          bool with_order_swap) {
    BatchStats st;
    CoprimeData cop = coprime_factorize(plant * ch.F);
    for (Complex s : {Complex(0.37, 1.21), Complex(1.53, -0.42), Complex(0.08, 3.1)})
        st.bezout = std::max(st.bezout, cop.bezout_residual(s));

    AllpassChain chain = extract_left_chain(cop.N, BlaschkeForm::dc_normalized);
    for (double w : log_grid()) st.allpass = std::max(st.allpass, allpass_defect(chain, w));

    // inner identity on the synthesis stack
    if (eps > 0.0 && eps < 1.0) {
        const int l = plant.rows();
        RationalMatrix c_fm = plant.is_scalar()
                                  ? RationalMatrix(scalar_reflect_rhp_zeros(
                                        (ch.F * cop.M).scalar()).first)
                                  : extract_left_chain(ch.F * cop.M, BlaschkeForm::plain)
                                        .minimum_phase_part;
        RationalMatrix stack = RationalMatrix::vstack(
            std::sqrt(1.0 - eps) * chain.minimum_phase_part, std::sqrt(eps) * c_fm);
        InnerOuterPair io = inner_outer(stack);
        for (double w : {0.1, 1.0, 10.0}) {
            Eigen::MatrixXcd v = io.inner.eval_unchecked(Complex(0.0, w));
            st.inner = std::max(
                st.inner,
                (v.adjoint() * v - Eigen::MatrixXcd::Identity(l, l)).norm());
        }
        GainProfile prof =
            build_gain_profile(chain.minimum_phase_part, io.outer, ch.sigma, eps);
        st.f0 = std::abs(prof.dc_value - ch.sigma.squaredNorm()) /
                std::max(1.0, ch.sigma.squaredNorm());
    }

    // carried-zero expansion reconstruction
    if (chain.size() > 0) {
        AllpassChain plain_chain = extract_left_chain(cop.N, BlaschkeForm::plain);
        ChainExpansion ex = expand_chain_inverse(cop.X, plain_chain);
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> re(0.05, 2.5), im(-2.5, 2.5);
        for (int t = 0; t < 8; ++t) {
            const Complex s(re(rng), im(rng));
            Eigen::MatrixXcd lhs =
                cop.X.eval_unchecked(s) * plain_chain.inverse_eval_range(0, plain_chain.size(), s);
            Eigen::MatrixXcd rhs = ex.eval(plain_chain, s);
            st.expansion_err = std::max(st.expansion_err, (lhs - rhs).norm() / (1.0 + lhs.norm()));
        }
    }

    // invariance of the optimal index to factorization choices
    PerfBreakdown a = tracking_performance(plant, ch, eps);
    PerfOptions far;
    far.coprime_pole_base = 3.0;
    PerfBreakdown b = tracking_performance(plant, ch, eps, far);
    st.inv_pole = std::abs(a.j_star - b.j_star) / std::max(1e-12, std::abs(a.j_star));
    if (with_order_swap && chain.size() == 2) {
        PerfOptions swapped;
        swapped.zero_order = std::vector<Complex>{chain.factors[1].point,
                                                  chain.factors[0].point};
        PerfBreakdown c = tracking_performance(plant, ch, eps, swapped);
        st.inv_order = std::abs(a.j_star - c.j_star) / std::max(1e-12, std::abs(a.j_star));
    }
    return st;
}

void criterion_5() {
    std::mt19937_64 rng(20260808);
    std::uniform_real_distribution<double> zd(0.6, 5.0), pd(0.4, 3.0), fd(0.8, 6.0),
        gd(0.2, 1.5), ed(0.1, 0.9), sd(0.5, 1.8);
    BatchStats worst;
    bool ran_ok = true;
    std::string first_error;

    for (int t = 0; t < 50 && ran_ok; ++t) {
        try {
            const bool two_zeros = (t % 2 == 0);
            Rational P;
            if (two_zeros) {
                double z1 = zd(rng), z2 = zd(rng);
                while (std::abs(z1 - z2) < 0.3) z2 = zd(rng);
                P = Rational(Polynomial::from_roots({Complex(z1), Complex(z2)}),
                             Polynomial::from_roots({Complex(0.0), Complex(-pd(rng)),
                                                     Complex(-pd(rng) - 1.5)}));
            } else {
                P = mk({-zd(rng), 1.0}, {0.0, 1.0, 1.0}) * mk({1.0}, {pd(rng), 1.0});
            }
            ChannelModel ch = scalar_channel(lowpass(fd(rng)), lowpass(fd(rng)), sd(rng),
                                             gd(rng));
            worst.fold(check_instance(RationalMatrix(P), ch, ed(rng), two_zeros));
        } catch (const std::exception& e) {
            ran_ok = false;
            first_error = e.what();
        }
    }

    for (int t = 0; t < 20 && ran_ok; ++t) {
        try {
            // diagonal two-loop plant with distinct carried zeros
            double z1 = zd(rng), z2 = zd(rng) + 5.5;
            Rational P1 = mk({-z1, 1.0}, {0.0, 1.0, 1.0});
            Rational P2 = mk({-z2, 1.0}, {0.0, 1.0, 1.0}) * mk({1.0}, {pd(rng), 1.0});
            RationalMatrix P(2, 2);
            P(0, 0) = P1;
            P(1, 1) = P2;
            const double f = fd(rng), h = fd(rng);
            ChannelModel ch;
            ch.F = RationalMatrix::diagonal({lowpass(f), lowpass(f)});
            ch.H = RationalMatrix::diagonal({lowpass(h), lowpass(h)});
            ch.sigma = Eigen::VectorXd(2);
            ch.sigma << sd(rng), sd(rng);
            ch.gamma = Eigen::VectorXd(2);
            ch.gamma << gd(rng), gd(rng);
            worst.fold(check_instance(P, ch, ed(rng), false));

            // rotated biproper stack through the Riccati route
            Eigen::Matrix2d Rot;
            const double th = 0.3 + 0.1 * t;
            Rot << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
            CoprimeData cop = coprime_factorize(P);
            RationalMatrix N_m =
                extract_left_chain(cop.N, BlaschkeForm::dc_normalized).minimum_phase_part;
            RationalMatrix M_m = extract_left_chain(cop.M, BlaschkeForm::plain)
                                     .minimum_phase_part;
            RationalMatrix stack =
                RationalMatrix::vstack(std::sqrt(0.6) * N_m, std::sqrt(0.4) * M_m) *
                Rot.cast<Complex>();
            InnerOuterPair io = inner_outer(stack);
            for (double w : {0.1, 1.0, 10.0}) {
                Eigen::MatrixXcd v = io.inner.eval_unchecked(Complex(0.0, w));
                worst.inner = std::max(
                    worst.inner,
                    (v.adjoint() * v - Eigen::MatrixXcd::Identity(2, 2)).norm());
            }
        } catch (const std::exception& e) {
            ran_ok = false;
            first_error = e.what();
        }
    }

    const bool pass = ran_ok && worst.allpass <= 1e-8 && worst.bezout <= 1e-8 &&
                      worst.inner <= 1e-8 && worst.expansion_err <= 1e-8 && worst.f0 <= 1e-6 &&
                      worst.inv_pole <= 1e-7 && worst.inv_order <= 1e-7;
    std::ostringstream msg;
    msg << "structural batch (50 scalar + 20 two-loop instances): allpass " << worst.allpass
        << ", bezout " << worst.bezout << ", inner " << worst.inner << ", expansion "
        << worst.expansion_err << ", profile dc " << worst.f0 << ", pole-placement invariance "
        << worst.inv_pole << ", order invariance " << worst.inv_order;
    if (!ran_ok) msg << " -- instance failed: " << first_error;
    report(5, pass, msg.str());
}

void criterion_6() {
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> zd(0.6, 5.0), pd(0.4, 3.0), fd(0.8, 6.0),
        gd(0.2, 1.5), ed(0.1, 0.9), sd(0.5, 1.8);
    double worst_c1 = 0.0, worst_c2 = 0.0, worst_c3 = 0.0;
    bool ran_ok = true;
    std::string first_error;
    for (int t = 0; t < 20 && ran_ok; ++t) {
        try {
            Rational P = mk({-zd(rng), 1.0}, {0.0, 1.0, 1.0}) * mk({1.0}, {pd(rng), 1.0});
            const double sg = sd(rng), gm = gd(rng), eps = ed(rng);
            Rational F = lowpass(fd(rng)), H = lowpass(fd(rng));
            ChannelModel ch = scalar_channel(F, H, sg, gm);

            PerfBreakdown tg = tracking_performance(RationalMatrix(P), ch, eps);
            PerfBreakdown c1 = tracking_performance_siso(P, F, H, sg, gm, eps);
            worst_c1 = std::max(worst_c1,
                                std::abs(tg.j_star - c1.j_star) / std::abs(tg.j_star));

            ChannelModel unity = ChannelModel::unity(1, ch.sigma, ch.gamma);
            PerfBreakdown tu = tracking_performance(RationalMatrix(P), unity, eps);
            PerfBreakdown c2 = tracking_performance_awgn(
                RationalMatrix(P), ch.sigma, ch.gamma, eps);
            worst_c2 = std::max(worst_c2,
                                std::abs(tu.j_star - c2.j_star) / std::abs(tu.j_star));

            ChannelModel quiet = scalar_channel(F, H, sg, 0.0);
            PerfBreakdown ju = ju_star(RationalMatrix(P), quiet, eps);
            PerfBreakdown c3 = tracking_performance_noise_free(
                RationalMatrix(P), quiet.F, quiet.sigma, eps);
            worst_c3 = std::max(worst_c3, std::abs(ju.ju_star - c3.j_star));
        } catch (const std::exception& e) {
            ran_ok = false;
            first_error = e.what();
        }
    }
    const bool pass = ran_ok && worst_c1 <= 1e-9 && worst_c2 <= 1e-9 && worst_c3 == 0.0;
    std::ostringstream msg;
    msg << "cross-formula consistency on 20 instances: scalar route " << worst_c1
        << " (tol 1e-9), unity-channel route " << worst_c2
        << " (tol 1e-9), noise-free vs tracking part " << worst_c3 << " (exact)";
    if (!ran_ok) msg << " -- instance failed: " << first_error;
    report(6, pass, msg.str());
}

void criterion_7() {
    const auto t0 = std::chrono::steady_clock::now();
    ChannelModel ch = scalar_channel(lowpass(3.0), lowpass(4.0), 1.0, 0.8);
    RationalMatrix P(reference_plant(2.0));
    OracleProblem prob = make_oracle_problem(P, ch, 0.5);
    OracleResult r = optimize_finite_basis(prob, 20, 1.0);
    MonteCarloSettings st;
    st.runs = 200;
    st.horizon = 200.0;
    st.dt = 1e-3;
    st.seed = 20260808;
    MonteCarloStats mc = monte_carlo_j(prob, r, st);
    const double elapsed = seconds_since(t0);
    const double dev = std::abs(mc.estimate - r.j_value);
    const double rel_err = mc.standard_error / mc.estimate;
    const bool pass =
        dev <= 3.0 * mc.standard_error && rel_err <= 0.05 && elapsed <= 300.0;
    std::ostringstream msg;
    msg << "time-domain estimate " << mc.estimate << " +- " << mc.standard_error
        << " vs exact index at the same parameters " << r.j_value << " (|dev| = " << dev
        << " <= 3 se), relative se " << rel_err << " (tol 0.05), runtime " << elapsed
        << " s (limit 300 s)";
    report(7, pass, msg.str());
}

void criterion_8() {
    GainProfile profile;
    profile.f = mk({1.0, 0.5}, {1.0, 1.0});  // |f(jw)/f(0)|^2 = (1 + w^2/4)/(1 + w^2)
    profile.dc_value = 1.0;
    profile.min_phase_part = profile.f;
    const double v = poisson_log_integral(profile);
    const bool pass = std::abs(v - (-0.25)) <= 1e-8;
    std::ostringstream msg;
    msg << "reference log integral: " << v << " vs -0.25 (tol 1e-8)";
    report(8, pass, msg.str());
}

} // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    std::printf("acceptance: %d of 8 criteria passed (%.1f s total)\n", 8 - failures,
                seconds_since(t0));
    return failures;
}

#include <doctest.h>

#include <random>

#include "perflim/allpass.hpp"
#include "perflim/coprime.hpp"
#include "perflim/errors.hpp"
#include "perflim/performance.hpp"
#include "perflim/spectral.hpp"
#include "perflim/state_space.hpp"

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

Rational reference_plant(double k) {
    return mk({-k, 1.0}, {0.0, 1.0, 1.0});  // (s - k) / (s (s + 1))
}

Rational over_s() { return Rational(Polynomial(1.0), Polynomial({0.0, 1.0})); }

// random scalar plant with an integrator, one stable pole, one RHP zero
Rational random_siso_plant(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> zr(0.6, 6.0), pr(0.4, 3.0);
    return mk({-zr(rng), 1.0}, {0.0, 1.0, 1.0}) * mk({1.0}, {pr(rng), 1.0}) *
           Rational(Polynomial({pr(rng), 1.0}));
}

} // namespace

TEST_SUITE("gain_profile") {

TEST_CASE("reference integral: two-pole magnitude profile gives -1/4") {
    GainProfile profile;
    profile.f = mk({1.0, 0.5}, {1.0, 1.0});  // (s+2)/(2(s+1)), dc value 1
    profile.dc_value = 1.0;
    profile.min_phase_part = profile.f;
    CHECK(poisson_log_integral(profile) == doctest::Approx(-0.25).epsilon(1e-8));
}

TEST_CASE("constant profile integrates to zero") {
    GainProfile profile;
    profile.f = Rational(3.7);
    profile.dc_value = 3.7;
    profile.min_phase_part = profile.f;
    CHECK(poisson_log_integral(profile) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("allpass-shaped profile integrates to zero, zeros carry the cost") {
    GainProfile profile;
    profile.f = mk({-2.0, 1.0}, {2.0, 1.0});  // (s-2)/(s+2): |f| = 1 on the axis
    profile.dc_value = -1.0;
    profile.min_phase_part = Rational(1.0);
    profile.rhp_zeros = {Complex(2.0, 0.0)};
    CHECK(std::abs(poisson_log_integral(profile)) <= 1e-10);
}

TEST_CASE("profile dc value equals the intensity total") {
    // reference configuration: k = 2, f = 3, eps = 0.5, sigma = 1
    Rational P = reference_plant(2.0);
    ChannelModel ch = lowpass_channel(3.0, 4.0, 1.0, 0.8);
    CoprimeData cop = coprime_factorize(RationalMatrix(P) * ch.F);
    AllpassChain chain = extract_left_chain(cop.N, BlaschkeForm::dc_normalized);
    Rational c_fm = scalar_reflect_rhp_zeros((ch.F * cop.M).scalar()).first;
    RationalMatrix stack(2, 1);
    stack(0, 0) = std::sqrt(0.5) * chain.minimum_phase_part.scalar();
    stack(1, 0) = std::sqrt(0.5) * c_fm;
    InnerOuterPair io = inner_outer(stack);
    GainProfile profile = build_gain_profile(chain.minimum_phase_part, io.outer,
                                             Eigen::VectorXd::Constant(1, 1.0), 0.5);
    CHECK(profile.dc_value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(profile.rhp_zeros.empty());  // scalar profiles inherit only stable zeros
}

TEST_CASE("profile zeros are found for hand-built inputs") {
    // feed a non-minimum-phase N_m directly: the zero scan must report it
    RationalMatrix N_m(mk({-1.0, 1.0}, {2.0, 1.0}));  // (s-1)/(s+2)
    RationalMatrix Theta_o(mk({2.0, 1.0}, {2.0, 1.0}));
    Eigen::VectorXd sg = Eigen::VectorXd::Constant(1, 1.0);
    // f = (s-1)/(s+2) * value(0): dc kept consistent by scaling N_m
    // dc consistency fails here, so expect the guard to fire
    CHECK_THROWS_AS((void)build_gain_profile(N_m, Theta_o, sg, 0.3), Error);
}

} // TEST_SUITE

TEST_SUITE("tracking_performance") {

TEST_CASE("independent quadrature identities on the reference configuration") {
    const double eps = 0.5, sig = 1.0;
    Rational P = reference_plant(2.0);
    ChannelModel ch = lowpass_channel(3.0, 4.0, sig, 0.8);
    PerfBreakdown b = ju_star(RationalMatrix(P), ch, eps);

    CoprimeData cop = coprime_factorize(RationalMatrix(P) * ch.F);
    auto [n_hat_m, zs] = scalar_reflect_rhp_zeros(cop.N.scalar());
    Rational c_fm = scalar_reflect_rhp_zeros((ch.F * cop.M).scalar()).first;
    RationalMatrix stack(2, 1);
    stack(0, 0) = std::sqrt(1.0 - eps) * n_hat_m;
    stack(1, 0) = std::sqrt(eps) * c_fm;
    Rational theta_o = inner_outer(stack).outer.scalar();

    // the projection-residual route must reproduce szero + log-integral terms
    Rational A1 = -(1.0 - eps) * (n_hat_m.paraconjugate() * theta_o.paraconjugate().inverse());
    const Complex A10 = A1.eval(Complex(0.0));
    Rational Wr = n_hat_m * theta_o.inverse();
    Rational A2_top =
        -std::sqrt(1.0 - eps) * (Rational(1.0) - (1.0 - eps) * Wr * Wr.paraconjugate());
    Rational A2_bot =
        -(1.0 - eps) * std::sqrt(eps) * (c_fm * theta_o.inverse()) * Wr.paraconjugate();
    RationalMatrix parts(3, 1);
    parts(0, 0) = (A1 - Rational(A10)) * over_s() * Rational(sig);
    parts(1, 0) = A2_top * over_s() * Rational(sig);
    parts(2, 0) = A2_bot * over_s() * Rational(sig);
    const double quad = l2_axis_norm_squared(parts, 1e-11);
    CHECK(quad == doctest::Approx(b.ju_szero_term + b.ju_log_integral_term).epsilon(1e-9));

    // the carried-zero direction term equals the chain-deflation norm
    AllpassChain lch = extract_left_chain(cop.N, BlaschkeForm::dc_normalized);
    RationalMatrix arg(1, 1);
    arg(0, 0) = (lch.product_inverse() - RationalMatrix::identity(1))(0, 0) * over_s() *
                Rational(sig);
    const double zq = l2_axis_norm_squared(arg, 1e-11);
    CHECK((1.0 - eps) * zq == doctest::Approx(b.ju_zero_direction_term).epsilon(1e-9));
}

TEST_CASE("scalar and general routes coincide") {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> ed(0.05, 0.95), fd(0.5, 6.0), gd(0.1, 2.0);
    for (int t = 0; t < 8; ++t) {
        Rational P = random_siso_plant(rng);
        const double f = fd(rng), h = fd(rng), sg = 0.5 + gd(rng), gm = gd(rng),
                     eps = ed(rng);
        ChannelModel ch = lowpass_channel(f, h, sg, gm);
        PerfBreakdown a = tracking_performance(RationalMatrix(P), ch, eps);
        PerfBreakdown b =
            tracking_performance_siso(P, ch.F.scalar(), ch.H.scalar(), sg, gm, eps);
        CHECK(a.j_star == doctest::Approx(b.j_star).epsilon(1e-9));
        CHECK(a.ju_star == doctest::Approx(b.ju_star).epsilon(1e-9));
        CHECK(a.jv_star == doctest::Approx(b.jv_star).epsilon(1e-9));
    }
}

TEST_CASE("minimum-phase stable plant, unity channel, eps 0, noise-free gives zero") {
    RationalMatrix P(mk({2.0, 1.0}, {1.0, 1.0}));  // (s+2)/(s+1), biproper MP
    ChannelModel ch = ChannelModel::unity(1, Eigen::VectorXd::Constant(1, 1.0),
                                          Eigen::VectorXd::Zero(1));
    PerfBreakdown b = tracking_performance(P, ch, 0.0);
    CHECK(std::abs(b.j_star) <= 1e-10);
}

TEST_CASE("gain-zero plant at eps 0: zero-direction term is 2 sigma^2 / k") {
    const double k = 2.0, sig = 1.3;
    ChannelModel ch = lowpass_channel(3.0, 4.0, sig, 0.0);
    PerfBreakdown b = ju_star(RationalMatrix(reference_plant(k)), ch, 0.0);
    CHECK(b.ju_zero_direction_term == doctest::Approx(2.0 * sig * sig / k).epsilon(1e-10));
    CHECK(b.ju_szero_term == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::abs(b.ju_log_integral_term) <= 1e-9);
}

TEST_CASE("noise-free route equals the tracking part") {
    Rational P = reference_plant(2.0);
    ChannelModel ch = lowpass_channel(3.0, 4.0, 1.0, 0.0);
    PerfBreakdown full = tracking_performance(RationalMatrix(P), ch, 0.5);
    PerfBreakdown nf = tracking_performance_noise_free(
        RationalMatrix(P), ch.F, Eigen::VectorXd::Constant(1, 1.0), 0.5);
    CHECK(nf.jv_star == 0.0);
    CHECK(nf.j_star == doctest::Approx(full.ju_star).epsilon(1e-12));
    ChannelModel noisy = lowpass_channel(3.0, 4.0, 1.0, 0.8);
    CHECK(jv_star(RationalMatrix(P), noisy, 0.5) > 0.0);
}

TEST_CASE("unity-channel route equals the general route at F = H = I") {
    std::mt19937_64 rng(55);
    for (int t = 0; t < 6; ++t) {
        Rational P = random_siso_plant(rng);
        Eigen::VectorXd sg = Eigen::VectorXd::Constant(1, 1.0);
        Eigen::VectorXd gm = Eigen::VectorXd::Constant(1, 0.6);
        ChannelModel ch = ChannelModel::unity(1, sg, gm);
        PerfBreakdown a = tracking_performance(RationalMatrix(P), ch, 0.4);
        PerfBreakdown b = tracking_performance_awgn(RationalMatrix(P), sg, gm, 0.4);
        CHECK(a.j_star == doctest::Approx(b.j_star).epsilon(1e-9));
    }
}

TEST_CASE("invariance to synthetic pole placement") {
    Rational P = reference_plant(2.0);
    ChannelModel ch = lowpass_channel(3.0, 4.0, 1.0, 0.8);
    PerfOptions near;
    near.coprime_pole_base = 1.0;
    PerfOptions far;
    far.coprime_pole_base = 3.0;
    PerfBreakdown a = tracking_performance(RationalMatrix(P), ch, 0.5, near);
    PerfBreakdown b = tracking_performance(RationalMatrix(P), ch, 0.5, far);
    CHECK(a.j_star == doctest::Approx(b.j_star).epsilon(1e-7));
    CHECK(a.ju_star == doctest::Approx(b.ju_star).epsilon(1e-7));
    CHECK(a.jv_star == doctest::Approx(b.jv_star).epsilon(1e-7));
}

TEST_CASE("invariance to the carried-zero extraction order") {
    // two RHP zeros
    Rational P = mk({3.0, -4.0, 1.0}, {0.0, 2.0, 3.0, 1.0});  // (s-1)(s-3)/(s(s+1)(s+2))
    ChannelModel ch = lowpass_channel(3.0, 4.0, 1.0, 0.8);
    PerfBreakdown a = tracking_performance(RationalMatrix(P), ch, 0.5);
    PerfOptions swapped;
    swapped.zero_order = std::vector<Complex>{Complex(3.0, 0.0), Complex(1.0, 0.0)};
    PerfBreakdown b = tracking_performance(RationalMatrix(P), ch, 0.5, swapped);
    CHECK(a.j_star == doctest::Approx(b.j_star).epsilon(1e-7));
}

TEST_CASE("noise part is nondecreasing in the noise intensity") {
    Rational P = reference_plant(2.0);
    double prev = -1.0;
    for (double g : {0.1, 0.4, 0.8, 1.6, 3.2}) {
        ChannelModel ch = lowpass_channel(3.0, 4.0, 1.0, g);
        const double jv = jv_star(RationalMatrix(P), ch, 0.5);
        CHECK(jv >= prev - 1e-12);
        prev = jv;
    }
}

TEST_CASE("tracking part fades as the control weight saturates") {
    Rational P = reference_plant(2.0);
    double prev = 1e300;
    for (double eps : {0.9, 0.99, 0.999}) {
        ChannelModel ch = lowpass_channel(3.0, 4.0, 1.0, 0.0);
        PerfBreakdown b = ju_star(RationalMatrix(P), ch, eps);
        CHECK(b.ju_zero_direction_term <= 2.0 * (1.0 - eps) * 1.0 / 2.0 + 1e-12);
        CHECK(b.ju_zero_direction_term < prev);
        prev = b.ju_zero_direction_term;
    }
}

TEST_CASE("decoupled diagonal loops add per-channel values") {
    Rational P1 = reference_plant(2.0);
    Rational P2 = reference_plant(5.0) * mk({1.0}, {1.5, 1.0});
    RationalMatrix P(2, 2);
    P(0, 0) = P1;
    P(1, 1) = P2;
    const double f = 3.0, h = 4.0, eps = 0.4;
    Rational Fr = mk({f}, {f, 1.0});
    Rational Hr = mk({h}, {h, 1.0});
    ChannelModel ch;
    ch.F = RationalMatrix::diagonal({Fr, Fr});
    ch.H = RationalMatrix::diagonal({Hr, Hr});
    ch.sigma = Eigen::VectorXd(2);
    ch.sigma << 1.0, 1.4;
    ch.gamma = Eigen::VectorXd(2);
    ch.gamma << 0.8, 0.5;
    PerfBreakdown whole = tracking_performance(P, ch, eps);
    PerfBreakdown a = tracking_performance_siso(P1, Fr, Hr, 1.0, 0.8, eps);
    PerfBreakdown b = tracking_performance_siso(P2, Fr, Hr, 1.4, 0.5, eps);
    CHECK(whole.j_star == doctest::Approx(a.j_star + b.j_star).epsilon(1e-7));
}

TEST_CASE("stable plant with eps > 0 trips the dc consistency guard") {
    RationalMatrix P(mk({1.0}, {1.0, 1.0}));
    ChannelModel ch = lowpass_channel(3.0, 4.0, 1.0, 0.0);
    CHECK_THROWS_AS((void)ju_star(P, ch, 0.5), Error);
}

} // TEST_SUITE

#include <doctest.h>

#include "perflim/coprime.hpp"
#include "perflim/errors.hpp"
#include "perflim/expansion.hpp"
#include "perflim/performance.hpp"
#include "perflim/snr.hpp"
#include "perflim/state_space.hpp"

using namespace perflim;

namespace {

Rational mk(std::initializer_list<double> n, std::initializer_list<double> d) {
    return Rational(Polynomial(n), Polynomial(d));
}

} // namespace

TEST_SUITE("snr") {

TEST_CASE("classical one-pole bound is exactly 2") {
    Rational P = mk({1.0}, {-1.0, 1.0});
    const double b = required_snr_for_stabilization(P, Rational(1.0), Rational(1.0));
    CHECK(b == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("stable plant needs no stabilization power") {
    Rational P = mk({1.0}, {1.0, 1.0});
    CHECK(required_snr_for_stabilization(P, Rational(1.0), Rational(1.0)) == 0.0);
}

TEST_CASE("two-pole bound matches the deflation-term norm") {
    Rational P = mk({1.0}, {2.0, -3.0, 1.0});  // 1/((s-1)(s-2))
    const Rational one(1.0);
    const double bound = required_snr_for_stabilization(P, one, one);

    // direct route: || sum_i A_i (Bt_i^{-1} - 1) ||^2 on the axis
    CoprimeData cop = coprime_factorize(RationalMatrix(P));
    Rational N = cop.N.scalar();
    Rational N0 = P * cop.M.scalar();
    Rational N_om = scalar_reflect_rhp_zeros(N0).first;
    const std::vector<Complex> poles{Complex(1.0), Complex(2.0)};
    Rational bt_inv(1.0);
    for (Complex p : poles)
        bt_inv = bt_inv * Rational(Polynomial({std::conj(p), Complex(1.0)}),
                                   Polynomial({-p, Complex(1.0)}));
    RationalMatrix sum_term(1, 1);
    Rational acc;
    for (Complex p : poles) {
        const Complex cross = residue_at(bt_inv, p) / (2.0 * p.real());
        const Complex a = N_om.eval(p) / N.eval(p) * cross;
        // (s + conj p)/(s - p) - 1 = 2 Re p / (s - p)
        acc += Rational(a * 2.0 * p.real()) *
               Rational(Polynomial(1.0), Polynomial({-p, Complex(1.0)}));
    }
    sum_term(0, 0) = acc;
    const double direct = l2_axis_norm_squared(sum_term, 1e-11);
    CHECK(bound == doctest::Approx(direct).epsilon(1e-7));
    CHECK(bound == doctest::Approx(6.0).epsilon(1e-9));
}

TEST_CASE("penalty for the classical plant is 2 and the total exceeds the bound") {
    Rational P = mk({1.0}, {-1.0, 1.0});
    const double stab = required_snr_for_stabilization(P, Rational(1.0), Rational(1.0));
    const double pad = tracking_snr_penalty(P, Rational(1.0), Rational(1.0));
    CHECK(pad == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(stab + pad > stab);
}

TEST_CASE("penalty is deterministic at the default factorization") {
    Rational P = mk({1.0}, {-1.0, 1.0});
    const double a = tracking_snr_penalty(P, Rational(1.0), Rational(1.0));
    const double b = tracking_snr_penalty(P, Rational(1.0), Rational(1.0));
    CHECK(a == b);
    CHECK(a == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("penalty argument under a strictly proper bandwidth block is improper") {
    Rational P = mk({-2.0, 1.0}, {0.0, 1.0, 1.0});
    Rational F = mk({3.0}, {3.0, 1.0});
    Rational H = mk({4.0}, {4.0, 1.0});
    CHECK_THROWS_AS((void)tracking_snr_penalty(P, F, H), Error);
    SnrReport rep = snr_report(P, F, H, 1.0, 0.8, 10.0);
    CHECK(std::isinf(rep.tracking_penalty));
    CHECK(rep.admissible.has_value());
    CHECK(*rep.admissible == false);
}

TEST_CASE("simplified index: noise-free single zero") {
    Rational P = mk({-2.0, 1.0}, {0.0, 1.0, 1.0});
    const double j =
        simplified_tracking_performance(P, Rational(1.0), Rational(1.0), 1.0, 0.0);
    CHECK(j == doctest::Approx(2.0 * 1.0 / 2.0).epsilon(1e-10));
}

TEST_CASE("simplified index vanishes for minimum-phase plant and channel") {
    Rational P = mk({2.0, 1.0}, {0.0, 1.0, 1.0});  // (s+2)/(s(s+1))
    const double j =
        simplified_tracking_performance(P, Rational(1.0), Rational(1.0), 1.0, 0.7);
    CHECK(std::abs(j) <= 1e-12);
}

TEST_CASE("simplified index agrees with the scalar formula at eps = 0") {
    Rational P = mk({-2.0, 1.0}, {0.0, 1.0, 1.0});
    Rational F = mk({3.0}, {3.0, 1.0});
    Rational H = mk({4.0}, {4.0, 1.0});
    const double simplified = simplified_tracking_performance(P, F, H, 1.0, 0.8);
    PerfBreakdown c = tracking_performance_siso(P, F, H, 1.0, 0.8, 0.0);
    CHECK(simplified == doctest::Approx(c.j_star).epsilon(1e-9));
}

TEST_CASE("axis poles away from the origin are rejected") {
    Rational P(Polynomial(1.0), Polynomial({1.0, 0.0, 1.0}));  // 1/(s^2+1)
    CHECK_THROWS_AS((void)required_snr_for_stabilization(P, Rational(1.0), Rational(1.0)),
                    Error);
}

TEST_CASE("repeated unstable poles are rejected") {
    Rational P(Polynomial(1.0), Polynomial::from_roots({Complex(1.0), Complex(1.0)}));
    CHECK_THROWS_AS((void)required_snr_for_stabilization(P, Rational(1.0), Rational(1.0)),
                    Error);
}

} // TEST_SUITE

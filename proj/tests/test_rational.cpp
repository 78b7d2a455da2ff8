#include <doctest.h>

#include <random>

#include "perflim/errors.hpp"
#include "perflim/rational_matrix.hpp"

using namespace perflim;

namespace {

Rational make(std::initializer_list<double> num, std::initializer_list<double> den) {
    return Rational(Polynomial(num), Polynomial(den));
}

} // namespace

TEST_SUITE("rational") {

TEST_CASE("evaluation of (s-2)/(s(s+1)) at j") {
    Rational g = make({-2.0, 1.0}, {0.0, 1.0, 1.0});
    const Complex s(0.0, 1.0);
    const Complex expect = (s - 2.0) / (s * (s + 1.0));
    CHECK(std::abs(g.eval(s) - expect) <= 1e-14);
}

TEST_CASE("low-pass with unity DC gain") {
    Rational f = make({3.0}, {3.0, 1.0});
    CHECK(std::abs(f.eval(Complex(0.0)) - Complex(1.0)) <= 1e-14);
}

TEST_CASE("evaluation at a pole raises") {
    Rational g = make({1.0}, {0.0, 1.0});
    CHECK_THROWS_AS((void)g.eval(Complex(0.0)), Error);
}

TEST_CASE("identity matrix evaluates to identity") {
    RationalMatrix I = RationalMatrix::identity(2);
    auto v = I.eval(Complex(1.3, -0.2));
    CHECK((v - Eigen::MatrixXcd::Identity(2, 2)).norm() <= 1e-15);
}

TEST_CASE("common factors cancel") {
    // (s+1)(s+2) / (s+1)(s+3) -> (s+2)/(s+3)
    Polynomial num = Polynomial::from_roots({Complex(-1.0), Complex(-2.0)});
    Polynomial den = Polynomial::from_roots({Complex(-1.0), Complex(-3.0)});
    Rational g(num, den);
    CHECK(g.num().degree() == 1);
    CHECK(g.den().degree() == 1);
    CHECK(std::abs(g.eval(Complex(1.0)) - Complex(3.0 / 4.0)) <= 1e-12);
}

TEST_CASE("paraconjugate is an involution and mirrors the axis value") {
    Rational g = make({-2.0, 1.0}, {3.0, 1.0});  // (s-2)/(s+3)
    Rational gp = g.paraconjugate();
    CHECK(std::abs(gp.eval(Complex(1.0)) - Complex((-1.0 - 2.0) / (-1.0 + 3.0))) <= 1e-14);
    Rational gpp = gp.paraconjugate();
    const Complex s(0.4, 0.9);
    CHECK(std::abs(gpp.eval(s) - g.eval(s)) <= 1e-12);
    // on the axis the paraconjugate is the complex conjugate
    const Complex jw(0.0, 2.2);
    CHECK(std::abs(gp.eval(jw) - std::conj(g.eval(jw))) <= 1e-12);
}

TEST_CASE("arithmetic keeps degrees under control") {
    Rational a = make({1.0}, {1.0, 1.0});
    Rational sum;
    for (int k = 0; k < 6; ++k) sum += a;
    CHECK(sum.den().degree() == 1);
    CHECK(std::abs(sum.eval(Complex(1.0)) - Complex(3.0)) <= 1e-12);
}

TEST_CASE("matrix inverse of a 2x2 rational matrix") {
    RationalMatrix G(2, 2);
    G(0, 0) = make({1.0}, {1.0, 1.0});
    G(0, 1) = make({1.0}, {2.0, 1.0});
    G(1, 0) = Rational(0.0);
    G(1, 1) = make({1.0, 1.0}, {3.0, 1.0});
    RationalMatrix Gi = G.inverse();
    const Complex s(0.7, 0.31);
    Eigen::MatrixXcd prod = G.eval(s) * Gi.eval(s);
    CHECK((prod - Eigen::MatrixXcd::Identity(2, 2)).norm() <= 1e-10);
}

TEST_CASE("stability classification treats axis poles as unstable") {
    Rational integ = make({-2.0, 1.0}, {0.0, 1.0, 1.0});  // (s-2)/(s(s+1))
    CHECK(!integ.is_stable());
    Rational st = make({1.0}, {1.0, 1.0});
    CHECK(st.is_stable());
}

} // TEST_SUITE

#include <doctest.h>

#include <algorithm>
#include <random>

#include "perflim/errors.hpp"
#include "perflim/polynomial.hpp"

using namespace perflim;

namespace {

bool contains_root(const std::vector<Complex>& roots, Complex r, double tol = 1e-9) {
    return std::any_of(roots.begin(), roots.end(),
                       [&](Complex x) { return std::abs(x - r) <= tol; });
}

} // namespace

TEST_SUITE("polynomial") {

TEST_CASE("roots of s^2 - 3s + 2") {
    Polynomial p{2.0, -3.0, 1.0};
    auto r = p.roots();
    REQUIRE(r.size() == 2);
    CHECK(contains_root(r, Complex(1.0)));
    CHECK(contains_root(r, Complex(2.0)));
}

TEST_CASE("roots of s") {
    Polynomial p{0.0, 1.0};
    auto r = p.roots();
    REQUIRE(r.size() == 1);
    CHECK(std::abs(r[0]) <= 1e-12);
}

TEST_CASE("roots of s^2 + 1 are an exact conjugate pair") {
    Polynomial p{1.0, 0.0, 1.0};
    auto r = p.roots();
    REQUIRE(r.size() == 2);
    CHECK(contains_root(r, Complex(0.0, 1.0), 1e-10));
    CHECK(contains_root(r, Complex(0.0, -1.0), 1e-10));
    CHECK(r[0] == std::conj(r[1]));
}

TEST_CASE("zero polynomial has no roots") {
    Polynomial z;
    CHECK_THROWS_AS((void)z.roots(), Error);
}

TEST_CASE("monic reconstruction from roots reproduces coefficients") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
        const int deg = 1 + int(rng() % 8);
        std::vector<Complex> c(size_t(deg) + 1);
        for (auto& x : c) x = Complex(dist(rng), 0.0);
        c.back() = Complex(1.0);
        Polynomial p{std::vector<Complex>(c)};
        if (p.degree() != deg) continue;
        Polynomial q = Polynomial::from_roots(p.roots());
        for (int k = 0; k <= deg; ++k)
            CHECK(std::abs(q.coeff(k) - p.coeff(k)) <= 1e-8 * (1.0 + p.max_abs_coeff()));
    }
}

TEST_CASE("deflate_root divides exactly") {
    Polynomial p = Polynomial::from_roots({Complex(1.0), Complex(-2.0), Complex(0.5)});
    Polynomial q = p.deflate_root(Complex(1.0));
    auto r = q.roots();
    REQUIRE(r.size() == 2);
    CHECK(contains_root(r, Complex(-2.0)));
    CHECK(contains_root(r, Complex(0.5)));
}

TEST_CASE("reflected and conjugated") {
    Polynomial p{1.0, 2.0, 3.0};  // 1 + 2s + 3s^2
    Polynomial q = p.reflected();  // 1 - 2s + 3s^2
    CHECK(q.coeff(0) == Complex(1.0));
    CHECK(q.coeff(1) == Complex(-2.0));
    CHECK(q.coeff(2) == Complex(3.0));
    CHECK(p.eval(Complex(0, 2.0)) == q.eval(Complex(0, -2.0)));
}

} // TEST_SUITE

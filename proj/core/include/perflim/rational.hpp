#pragma once

#include <atomic>
#include <vector>

#include "perflim/polynomial.hpp"

namespace perflim {

// Scalar real- or complex-rational function num/den.
// Normal form: den monic, shared roots cancelled (within tol::cancel,
// judged by |num(r)| against the local coefficient scale).
class Rational {
public:
    Rational() : num_(), den_(1.0) {}
    Rational(double c) : num_(c), den_(1.0) {}
    Rational(Complex c) : num_(c), den_(1.0) {}
    Rational(Polynomial num) : num_(std::move(num)), den_(1.0) {}
    Rational(Polynomial num, Polynomial den);

    static Rational variable() { return Rational(Polynomial::variable()); }

    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    int relative_degree() const { return den_.degree() - num_.degree(); }
    bool is_proper() const { return num_.is_zero() || relative_degree() >= 0; }
    bool is_strictly_proper() const { return num_.is_zero() || relative_degree() >= 1; }
    bool is_constant() const { return num_.degree() == 0 && den_.degree() == 0; }

    Complex eval(Complex s) const;            // raises pole_evaluation near a pole
    Complex eval_unchecked(Complex s) const { return num_.eval(s) / den_.eval(s); }
    Complex at_infinity() const;              // 0 if strictly proper, raises if improper

    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    Rational operator/(const Rational& o) const;
    Rational operator-() const;
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational inverse() const;

    Rational paraconjugate() const;  // G~(s): conj coefficients, s -> -s
    Rational derivative() const;

    std::vector<Complex> poles() const { return den_.roots(); }
    std::vector<Complex> zeros() const;

    bool is_stable(double axis_tol = tol::axis) const;   // all poles in the open LHP
    bool is_real(double rel_tol = tol::imag_real) const;
    Rational real_part() const { return Rational(num_.real_part(), den_.real_part()); }

    // Count of cancellations performed by normalization since startup.
    static size_t cancellation_count() { return cancel_count_.load(); }

private:
    void normalize();
    Polynomial num_, den_;
    static std::atomic<size_t> cancel_count_;
};

Rational operator*(double a, const Rational& r);
Rational operator*(Complex a, const Rational& r);

} // namespace perflim

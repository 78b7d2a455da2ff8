#pragma once

#include <complex>
#include <initializer_list>
#include <vector>

namespace perflim {

using Complex = std::complex<double>;

// Numerical tolerances shared across the algebra layer.
namespace tol {
inline constexpr double coeff_trim = 1e-11;    // relative, trailing-coefficient cleanup
inline constexpr double cancel = 1e-8;         // relative, pole/zero cancellation
inline constexpr double axis = 1e-9;           // |Re| below this counts as imaginary axis
inline constexpr double root_match = 1e-7;     // relative, root clustering
inline constexpr double imag_real = 1e-9;      // relative, "is this real-rational" checks
} // namespace tol

// Univariate polynomial with complex coefficients, ascending degree.
// Trailing near-zero coefficients are trimmed on construction, so degree()
// reflects the numerically meaningful leading coefficient.
class Polynomial {
public:
    Polynomial() : coef_(1, Complex(0.0, 0.0)) {}
    Polynomial(double c) : coef_(1, Complex(c, 0.0)) {}
    Polynomial(Complex c) : coef_(1, c) {}
    explicit Polynomial(std::vector<Complex> coeffs);
    Polynomial(std::initializer_list<double> coeffs);

    static Polynomial variable();                                  // s
    static Polynomial from_real(const std::vector<double>& c);
    static Polynomial from_roots(const std::vector<Complex>& roots, Complex lead = 1.0);

    int degree() const { return static_cast<int>(coef_.size()) - 1; }
    bool is_zero() const;
    bool is_one() const;

    Complex coeff(int k) const;
    const std::vector<Complex>& coeffs() const { return coef_; }
    Complex leading() const { return coef_.back(); }

    Complex eval(Complex s) const;       // Horner
    Complex eval_derivative(Complex s) const;
    Polynomial derivative() const;

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial operator-() const;
    Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
    Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }
    Polynomial scaled(Complex a) const;

    Polynomial reflected() const;        // p(-s)
    Polynomial conjugated() const;       // conjugate coefficients
    Polynomial monic() const;

    double max_abs_coeff() const;
    bool is_real(double rel_tol = tol::imag_real) const;
    Polynomial real_part() const;        // drop imaginary parts of coefficients

    // Divide out a single root by synthetic division. The remainder is
    // discarded; callers are expected to have verified |eval(r)| is small.
    Polynomial deflate_root(Complex r) const;

    // Roots with multiplicity, via a balanced companion matrix, polished by
    // Newton iteration. When the polynomial is real-rational, roots are
    // symmetrized into exact conjugate pairs.
    std::vector<Complex> roots() const;

private:
    void trim();
    std::vector<Complex> coef_;
};

Polynomial operator*(Complex a, const Polynomial& p);
Polynomial operator*(double a, const Polynomial& p);

// Magnitude scale of p near the point s; used for relative smallness tests.
double eval_scale(const Polynomial& p, Complex s);

} // namespace perflim

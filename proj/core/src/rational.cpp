#include "perflim/rational.hpp"

#include <cmath>

#include "perflim/errors.hpp"

namespace perflim {

std::atomic<size_t> Rational::cancel_count_{0};

Rational::Rational(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) raise(Errc::degenerate_input, "rational with zero denominator");
    normalize();
}

void Rational::normalize() {
    if (num_.is_zero()) {
        den_ = Polynomial(1.0);
        return;
    }
    // Cancel numerator/denominator root pairs within relative distance
    // tol::cancel of each other; each side is deflated by its own root so
    // the surviving factors keep their accuracy.
    if (den_.degree() > 0 && num_.degree() > 0) {
        std::vector<Complex> droots = den_.roots();
        std::vector<Complex> nroots = num_.roots();
        std::vector<bool> nused(nroots.size(), false);
        for (Complex r : droots) {
            size_t best = nroots.size();
            double bd = tol::cancel * std::max(1.0, std::abs(r));
            for (size_t k = 0; k < nroots.size(); ++k) {
                if (nused[k]) continue;
                const double dd = std::abs(nroots[k] - r);
                if (dd <= bd) {
                    bd = dd;
                    best = k;
                }
            }
            if (best == nroots.size()) continue;
            nused[best] = true;
            num_ = num_.deflate_root(nroots[best]);
            den_ = den_.deflate_root(r);
            cancel_count_.fetch_add(1, std::memory_order_relaxed);
            if (num_.degree() == 0 || den_.degree() == 0) break;
        }
    }
    const Complex lead = den_.leading();
    den_ = den_.scaled(Complex(1.0) / lead);
    num_ = num_.scaled(Complex(1.0) / lead);
    // Keep real-rational data exactly real; tiny imaginary dust from complex
    // intermediate steps otherwise contaminates downstream conjugacy checks.
    if (num_.is_real() && den_.is_real()) {
        num_ = num_.real_part();
        den_ = den_.real_part();
    }
}

Complex Rational::eval(Complex s) const {
    const Complex d = den_.eval(s);
    const double dscale = eval_scale(den_, s);
    if (std::abs(d) <= 1e-12 * dscale)
        raise(Errc::pole_evaluation, "evaluation at or near a pole");
    return num_.eval(s) / d;
}

Complex Rational::at_infinity() const {
    if (is_zero()) return Complex(0.0);
    const int rd = relative_degree();
    if (rd > 0) return Complex(0.0);
    if (rd == 0) return num_.leading() / den_.leading();
    raise(Errc::not_in_h2, "improper rational has no finite value at infinity");
}

namespace {

bool same_poly(const Polynomial& a, const Polynomial& b) {
    if (a.degree() != b.degree()) return false;
    const double scale = std::max(a.max_abs_coeff(), b.max_abs_coeff());
    for (int k = 0; k <= a.degree(); ++k)
        if (std::abs(a.coeff(k) - b.coeff(k)) > 1e-12 * std::max(scale, 1.0)) return false;
    return true;
}

// High-multiplicity roots may come back as wide clusters; only trust a root
// list that actually reproduces its polynomial.
bool roots_reliable(const Polynomial& p, const std::vector<Complex>& roots) {
    Polynomial rebuilt = Polynomial::from_roots(roots, p.leading());
    if (rebuilt.degree() != p.degree()) return false;
    const double scale = std::max(p.max_abs_coeff(), 1e-300);
    for (int k = 0; k <= p.degree(); ++k)
        if (std::abs(rebuilt.coeff(k) - p.coeff(k)) > 1e-9 * scale) return false;
    return true;
}

} // namespace

Rational Rational::operator+(const Rational& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    if (same_poly(den_, o.den_)) return Rational(num_ + o.num_, den_);
    if (den_.degree() == 0 || o.den_.degree() == 0)
        return Rational(num_ * o.den_ + o.num_ * den_, den_ * o.den_);

    // Common denominator by root-multiset union, so shared factors do not
    // stack multiplicity across repeated additions.
    std::vector<Complex> r1 = den_.roots();
    std::vector<Complex> r2 = o.den_.roots();
    if (!roots_reliable(den_, r1) || !roots_reliable(o.den_, r2))
        return Rational(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
    double scale = 1.0;
    for (auto r : r1) scale = std::max(scale, std::abs(r));
    for (auto r : r2) scale = std::max(scale, std::abs(r));
    std::vector<bool> used1(r1.size(), false);
    std::vector<Complex> extra2;
    std::vector<bool> matched2(r2.size(), false);
    for (size_t j = 0; j < r2.size(); ++j) {
        size_t best = r1.size();
        double bd = 1e-6 * scale;
        for (size_t i = 0; i < r1.size(); ++i) {
            if (used1[i]) continue;
            const double d = std::abs(r1[i] - r2[j]);
            if (d <= bd) {
                bd = d;
                best = i;
            }
        }
        if (best < r1.size()) {
            used1[best] = true;
            matched2[j] = true;
        } else {
            extra2.push_back(r2[j]);
        }
    }
    std::vector<Complex> q2roots;  // L / den2 = unmatched part of den1
    for (size_t i = 0; i < r1.size(); ++i)
        if (!used1[i]) q2roots.push_back(r1[i]);
    std::vector<Complex> lroots = r1;
    lroots.insert(lroots.end(), extra2.begin(), extra2.end());

    Polynomial q1 = Polynomial::from_roots(extra2);   // L / den1
    Polynomial q2 = Polynomial::from_roots(q2roots);  // L / den2
    Polynomial L = Polynomial::from_roots(lroots);
    Polynomial snum = num_ * q1 + o.num_ * q2;
    if (num_.is_real() && o.num_.is_real() && den_.is_real() && o.den_.is_real()) {
        if (L.is_real(1e-6)) L = L.real_part();
        if (snum.is_real(1e-6)) snum = snum.real_part();
    }
    return Rational(snum, L);
}

Rational Rational::operator-(const Rational& o) const { return *this + (-o); }

Rational Rational::operator*(const Rational& o) const {
    if (is_zero() || o.is_zero()) return Rational();
    return Rational(num_ * o.num_, den_ * o.den_);
}

Rational Rational::operator/(const Rational& o) const {
    if (o.is_zero()) raise(Errc::degenerate_input, "division by the zero rational");
    if (is_zero()) return Rational();
    return Rational(num_ * o.den_, den_ * o.num_);
}

Rational Rational::operator-() const { return Rational(-num_, den_); }

Rational Rational::inverse() const {
    if (is_zero()) raise(Errc::degenerate_input, "inverse of the zero rational");
    return Rational(den_, num_);
}

Rational Rational::paraconjugate() const {
    return Rational(num_.conjugated().reflected(), den_.conjugated().reflected());
}

Rational Rational::derivative() const {
    return Rational(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
}

std::vector<Complex> Rational::zeros() const {
    if (num_.is_zero()) return {};
    return num_.roots();
}

bool Rational::is_stable(double axis_tol) const {
    if (den_.degree() == 0) return true;
    for (Complex p : poles())
        if (p.real() >= -axis_tol) return false;
    return true;
}

bool Rational::is_real(double rel_tol) const {
    return num_.is_real(rel_tol) && den_.is_real(rel_tol);
}

Rational operator*(double a, const Rational& r) { return Rational(a) * r; }
Rational operator*(Complex a, const Rational& r) { return Rational(a) * r; }

} // namespace perflim

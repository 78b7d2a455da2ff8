#include "perflim/polynomial.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "perflim/errors.hpp"

namespace perflim {

Polynomial::Polynomial(std::vector<Complex> coeffs) : coef_(std::move(coeffs)) {
    if (coef_.empty()) coef_.assign(1, Complex(0.0));
    trim();
}

Polynomial::Polynomial(std::initializer_list<double> coeffs) {
    coef_.reserve(coeffs.size());
    for (double c : coeffs) coef_.push_back(Complex(c, 0.0));
    if (coef_.empty()) coef_.assign(1, Complex(0.0));
    trim();
}

Polynomial Polynomial::variable() {
    Polynomial p;
    p.coef_ = {Complex(0.0), Complex(1.0)};
    return p;
}

Polynomial Polynomial::from_real(const std::vector<double>& c) {
    std::vector<Complex> cc(c.begin(), c.end());
    return Polynomial(std::move(cc));
}

Polynomial Polynomial::from_roots(const std::vector<Complex>& roots, Complex lead) {
    // build with descending coefficients, then flip to ascending
    std::vector<Complex> c{lead};
    for (Complex r : roots) {
        c.push_back(Complex(0.0));
        for (int k = static_cast<int>(c.size()) - 1; k > 0; --k)
            c[static_cast<size_t>(k)] -= r * c[static_cast<size_t>(k - 1)];
    }
    std::reverse(c.begin(), c.end());
    return Polynomial(std::move(c));
}

bool Polynomial::is_zero() const {
    return coef_.size() == 1 && coef_[0] == Complex(0.0);
}

bool Polynomial::is_one() const {
    return coef_.size() == 1 && std::abs(coef_[0] - Complex(1.0)) == 0.0;
}

Complex Polynomial::coeff(int k) const {
    if (k < 0 || k > degree()) return Complex(0.0);
    return coef_[static_cast<size_t>(k)];
}

Complex Polynomial::eval(Complex s) const {
    Complex y = coef_.back();
    for (int k = degree() - 1; k >= 0; --k) y = y * s + coef_[static_cast<size_t>(k)];
    return y;
}

Complex Polynomial::eval_derivative(Complex s) const {
    if (degree() == 0) return Complex(0.0);
    Complex y = Complex(double(degree())) * coef_.back();
    for (int k = degree() - 1; k >= 1; --k)
        y = y * s + Complex(double(k)) * coef_[static_cast<size_t>(k)];
    return y;
}

Polynomial Polynomial::derivative() const {
    if (degree() == 0) return Polynomial();
    std::vector<Complex> c(static_cast<size_t>(degree()));
    for (int k = 1; k <= degree(); ++k)
        c[static_cast<size_t>(k - 1)] = Complex(double(k)) * coef_[static_cast<size_t>(k)];
    return Polynomial(std::move(c));
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    std::vector<Complex> c(std::max(coef_.size(), o.coef_.size()), Complex(0.0));
    for (size_t k = 0; k < coef_.size(); ++k) c[k] += coef_[k];
    for (size_t k = 0; k < o.coef_.size(); ++k) c[k] += o.coef_[k];
    return Polynomial(std::move(c));
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (-o); }

Polynomial Polynomial::operator-() const {
    std::vector<Complex> c(coef_);
    for (auto& x : c) x = -x;
    return Polynomial(std::move(c));
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    if (is_zero() || o.is_zero()) return Polynomial();
    std::vector<Complex> c(coef_.size() + o.coef_.size() - 1, Complex(0.0));
    for (size_t i = 0; i < coef_.size(); ++i)
        for (size_t j = 0; j < o.coef_.size(); ++j) c[i + j] += coef_[i] * o.coef_[j];
    return Polynomial(std::move(c));
}

Polynomial Polynomial::scaled(Complex a) const {
    std::vector<Complex> c(coef_);
    for (auto& x : c) x *= a;
    return Polynomial(std::move(c));
}

Polynomial Polynomial::reflected() const {
    std::vector<Complex> c(coef_);
    for (size_t k = 1; k < c.size(); k += 2) c[k] = -c[k];
    return Polynomial(std::move(c));
}

Polynomial Polynomial::conjugated() const {
    std::vector<Complex> c(coef_);
    for (auto& x : c) x = std::conj(x);
    return Polynomial(std::move(c));
}

Polynomial Polynomial::monic() const {
    if (is_zero()) return *this;
    return scaled(Complex(1.0) / coef_.back());
}

double Polynomial::max_abs_coeff() const {
    double m = 0.0;
    for (const auto& c : coef_) m = std::max(m, std::abs(c));
    return m;
}

bool Polynomial::is_real(double rel_tol) const {
    const double scale = std::max(max_abs_coeff(), 1e-300);
    for (const auto& c : coef_)
        if (std::abs(c.imag()) > rel_tol * scale) return false;
    return true;
}

Polynomial Polynomial::real_part() const {
    std::vector<Complex> c(coef_);
    for (auto& x : c) x = Complex(x.real(), 0.0);
    return Polynomial(std::move(c));
}

Polynomial Polynomial::deflate_root(Complex r) const {
    const int n = degree();
    if (n == 0) return Polynomial();
    std::vector<Complex> q(static_cast<size_t>(n), Complex(0.0));
    Complex carry = coef_[static_cast<size_t>(n)];
    for (int k = n - 1; k >= 0; --k) {
        q[static_cast<size_t>(k)] = carry;
        carry = coef_[static_cast<size_t>(k)] + r * carry;
    }
    return Polynomial(std::move(q));
}

void Polynomial::trim() {
    double m = 0.0;
    for (const auto& c : coef_) m = std::max(m, std::abs(c));
    if (m == 0.0) {
        coef_.assign(1, Complex(0.0));
        return;
    }
    // Trailing coefficients are cancellation dust only when they are tiny
    // both against the whole polynomial and against their neighbours; a
    // small leading coefficient next to comparable ones is legitimate
    // (spread-root products have wide coefficient ranges).
    size_t last = coef_.size();
    while (last > 1) {
        const double lead = std::abs(coef_[last - 1]);
        double local = std::abs(coef_[last - 2]);
        if (last >= 3) local = std::max(local, std::abs(coef_[last - 3]));
        if (lead <= tol::coeff_trim * m && lead <= 1e-6 * local)
            --last;
        else
            break;
    }
    coef_.resize(last);
    for (auto& c : coef_)
        if (std::abs(c) <= 1e-300) c = Complex(0.0);
}

namespace {

// Collapse eigenvalue clusters that represent a multiple root. The cluster
// centroid is first-order accurate; Newton on the (g-1)-th derivative then
// polishes it to machine precision. Genuinely distinct roots closer than
// ~1e-4 relative will be merged by this pass; the domains served here keep
// distinct dynamics separated far more than that.
std::vector<Complex> refine_multiplicities(const Polynomial& p, std::vector<Complex> roots) {
    const size_t n = roots.size();
    if (n < 2) return roots;
    double scale = 1.0;
    for (auto r : roots) scale = std::max(scale, std::abs(r));

    // single-linkage clustering
    std::vector<int> group(n, -1);
    int ngroups = 0;
    const double link = 5e-4 * scale;
    for (size_t i = 0; i < n; ++i) {
        if (group[i] >= 0) continue;
        group[i] = ngroups;
        bool grew = true;
        while (grew) {
            grew = false;
            for (size_t a = 0; a < n; ++a) {
                if (group[a] != ngroups) continue;
                for (size_t b = 0; b < n; ++b) {
                    if (group[b] >= 0) continue;
                    if (std::abs(roots[a] - roots[b]) <= link) {
                        group[b] = ngroups;
                        grew = true;
                    }
                }
            }
        }
        ++ngroups;
    }

    std::vector<Complex> out;
    out.reserve(n);
    for (int g = 0; g < ngroups; ++g) {
        std::vector<Complex> members;
        for (size_t i = 0; i < n; ++i)
            if (group[i] == g) members.push_back(roots[i]);
        const int mult = static_cast<int>(members.size());
        if (mult == 1) {
            out.push_back(members[0]);
            continue;
        }
        Complex c(0.0);
        for (auto r : members) c += r;
        c /= double(mult);
        // polish on the (mult-1)-th derivative where the root is simple
        Polynomial d = p;
        for (int k = 1; k < mult; ++k) d = d.derivative();
        for (int it = 0; it < 40; ++it) {
            const Complex f = d.eval(c);
            const Complex df = d.eval_derivative(c);
            if (std::abs(df) < 1e-300) break;
            const Complex step = f / df;
            c -= step;
            if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(c))) break;
        }
        if (p.is_real() && std::abs(c.imag()) <= 1e-7 * std::max(1.0, std::abs(c)))
            c = Complex(c.real(), 0.0);
        // accept the merge only if the point really annihilates p
        if (std::abs(p.eval(c)) <= 1e-9 * eval_scale(p, c)) {
            for (int k = 0; k < mult; ++k) out.push_back(c);
        } else {
            for (auto r : members) out.push_back(r);
        }
    }
    return out;
}

// Pair roots of a real polynomial into exact conjugate pairs; near-real
// roots collapse onto the axis.
std::vector<Complex> symmetrize_conjugates(std::vector<Complex> roots) {
    const size_t n = roots.size();
    double scale = 0.0;
    for (auto r : roots) scale = std::max(scale, std::abs(r));
    scale = std::max(scale, 1.0);

    std::vector<bool> used(n, false);
    std::vector<Complex> out;
    out.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        if (used[i]) continue;
        used[i] = true;
        Complex r = roots[i];
        if (std::abs(r.imag()) <= tol::root_match * scale) {
            out.push_back(Complex(r.real(), 0.0));
            continue;
        }
        // find closest unused candidate to conj(r)
        size_t best = n;
        double best_d = std::numeric_limits<double>::max();
        for (size_t j = 0; j < n; ++j) {
            if (used[j]) continue;
            double d = std::abs(roots[j] - std::conj(r));
            if (d < best_d) {
                best_d = d;
                best = j;
            }
        }
        if (best < n && best_d <= 1e-4 * scale) {
            used[best] = true;
            Complex avg = 0.5 * (r + std::conj(roots[best]));
            out.push_back(avg);
            out.push_back(std::conj(avg));
        } else {
            // no partner found; keep as-is (caller may reject later)
            out.push_back(r);
        }
    }
    return out;
}

} // namespace

std::vector<Complex> Polynomial::roots() const {
    if (is_zero()) raise(Errc::degenerate_input, "roots of the zero polynomial");
    const int n = degree();
    if (n == 0) return {};
    if (n == 1) return {-coef_[0] / coef_[1]};

    const Polynomial m = monic();
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) companion(i, i - 1) = Complex(1.0);
    for (int i = 0; i < n; ++i) companion(i, n - 1) = -m.coeff(i);

    // balance by diagonal similarity to reduce norm spread
    Eigen::VectorXd d = Eigen::VectorXd::Ones(n);
    for (int pass = 0; pass < 4; ++pass) {
        for (int i = 0; i < n; ++i) {
            double rnorm = 0.0, cnorm = 0.0;
            for (int j = 0; j < n; ++j) {
                if (j != i) {
                    rnorm += std::abs(companion(i, j));
                    cnorm += std::abs(companion(j, i));
                }
            }
            if (rnorm == 0.0 || cnorm == 0.0) continue;
            const double f = std::sqrt(rnorm / cnorm);
            if (f > 2.0 || f < 0.5) {
                const double g = std::clamp(f, 1e-8, 1e8);
                d(i) *= g;
                for (int j = 0; j < n; ++j) {
                    companion(i, j) /= g;
                    companion(j, i) *= g;
                }
            }
        }
    }

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(companion, false);
    std::vector<Complex> rts(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) rts[static_cast<size_t>(i)] = es.eigenvalues()(i);

    // Newton polish on the original coefficients
    for (auto& r : rts) {
        for (int it = 0; it < 20; ++it) {
            const Complex p = eval(r);
            const Complex dp = eval_derivative(r);
            if (std::abs(dp) < 1e-300) break;
            const Complex step = p / dp;
            r -= step;
            if (std::abs(step) <= 1e-14 * std::max(1.0, std::abs(r))) break;
        }
    }

    rts = refine_multiplicities(*this, std::move(rts));
    if (is_real()) rts = symmetrize_conjugates(std::move(rts));

    std::sort(rts.begin(), rts.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return rts;
}

Polynomial operator*(Complex a, const Polynomial& p) { return p.scaled(a); }
Polynomial operator*(double a, const Polynomial& p) { return p.scaled(Complex(a, 0.0)); }

double eval_scale(const Polynomial& p, Complex s) {
    const double x = std::abs(s);
    double scale = 0.0;
    double pw = 1.0;
    for (int k = 0; k <= p.degree(); ++k) {
        scale += std::abs(p.coeff(k)) * pw;
        pw *= x;
    }
    return std::max(scale, 1e-300);
}

} // namespace perflim

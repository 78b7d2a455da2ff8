#include "perflim/allpass.hpp"

#include <algorithm>

#include "perflim/errors.hpp"
#include "perflim/zeros_poles.hpp"

namespace perflim {

Rational AllpassFactor::scalar_block() const {
    const Complex z = point;
    if (form == BlaschkeForm::plain)
        return Rational(Polynomial({-z, Complex(1.0)}), Polynomial({std::conj(z), Complex(1.0)}));
    const Complex r = std::conj(z) / z;
    return Rational(Polynomial({r * z, -r}), Polynomial({std::conj(z), Complex(1.0)}));
}

Rational AllpassFactor::scalar_block_inverse_minus_one() const {
    const Complex z = point;
    const Complex twore = z + std::conj(z);
    if (form == BlaschkeForm::plain)
        return Rational(Polynomial(twore), Polynomial({-z, Complex(1.0)}));
    // (z/conj(z)) (conj(z)+s)/(z-s) - 1 = s (z + conj(z)) / (conj(z) (z - s))
    return Rational(Polynomial({Complex(0.0), twore / std::conj(z)}),
                    Polynomial({z, Complex(-1.0)}));
}

RationalMatrix AllpassFactor::matrix() const {
    const int n = static_cast<int>(direction.size());
    const Eigen::MatrixXcd uu = completion * completion.adjoint();
    const Eigen::MatrixXcd ee = direction * direction.adjoint();
    RationalMatrix out = RationalMatrix::constant(uu);
    const Rational b = scalar_block();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out(i, j) += Rational(ee(i, j)) * b;
    return out;
}

RationalMatrix AllpassFactor::inverse_matrix() const {
    const int n = static_cast<int>(direction.size());
    const Eigen::MatrixXcd ee = direction * direction.adjoint();
    RationalMatrix out = RationalMatrix::constant(Eigen::MatrixXcd(Eigen::MatrixXcd::Identity(n, n)));
    const Rational c = scalar_block_inverse_minus_one();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out(i, j) += Rational(ee(i, j)) * c;
    return out;
}

Eigen::MatrixXcd AllpassFactor::eval(Complex s) const {
    const int n = static_cast<int>(direction.size());
    const Complex b = scalar_block().eval_unchecked(s);
    return completion * completion.adjoint() + b * (direction * direction.adjoint());
}

Eigen::MatrixXcd AllpassFactor::inverse_eval(Complex s) const {
    const int n = static_cast<int>(direction.size());
    const Complex binv = scalar_inverse_eval(s);
    return completion * completion.adjoint() + binv * (direction * direction.adjoint());
}

Complex AllpassFactor::scalar_inverse_eval(Complex s) const {
    const Complex z = point;
    if (form == BlaschkeForm::plain) return (s + std::conj(z)) / (s - z);
    return (z / std::conj(z)) * (std::conj(z) + s) / (z - s);
}

RationalMatrix AllpassChain::product() const {
    if (factors.empty()) {
        const int n = std::max(minimum_phase_part.rows(), 1);
        return RationalMatrix::identity(n);
    }
    RationalMatrix p = factors.front().matrix();
    for (size_t k = 1; k < factors.size(); ++k) p = p * factors[k].matrix();
    return p;
}

RationalMatrix AllpassChain::product_inverse() const {
    if (factors.empty()) {
        const int n = std::max(minimum_phase_part.rows(), 1);
        return RationalMatrix::identity(n);
    }
    RationalMatrix p = factors.back().inverse_matrix();
    for (int k = static_cast<int>(factors.size()) - 2; k >= 0; --k)
        p = p * factors[static_cast<size_t>(k)].inverse_matrix();
    return p;
}

Eigen::MatrixXcd AllpassChain::inverse_eval_range(int from, int to, Complex s) const {
    const int n = static_cast<int>(factors.empty() ? 1 : factors[0].direction.size());
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(n, n);
    for (int k = to - 1; k >= from; --k)
        acc = acc * factors[static_cast<size_t>(k)].inverse_eval(s);
    return acc;
}

std::vector<Complex> AllpassChain::points() const {
    std::vector<Complex> out;
    for (const auto& f : factors) out.push_back(f.point);
    return out;
}

namespace {

// Default product order: ascending |z|, ties by ascending argument,
// conjugate pairs adjacent (positive imaginary part first).
std::vector<Complex> default_order(std::vector<Complex> zs) {
    // collapse conjugate pairs into representatives with Im >= 0
    std::vector<Complex> reps;
    std::vector<bool> used(zs.size(), false);
    double scale = 1.0;
    for (auto z : zs) scale = std::max(scale, std::abs(z));
    for (size_t i = 0; i < zs.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        if (std::abs(zs[i].imag()) <= tol::axis * scale) {
            reps.push_back(Complex(zs[i].real(), 0.0));
            continue;
        }
        for (size_t j = i + 1; j < zs.size(); ++j) {
            if (!used[j] && std::abs(zs[j] - std::conj(zs[i])) <= 1e-6 * scale) {
                used[j] = true;
                break;
            }
        }
        reps.push_back(zs[i].imag() > 0 ? zs[i] : std::conj(zs[i]));
    }
    std::sort(reps.begin(), reps.end(), [](Complex a, Complex b) {
        if (std::abs(a) != std::abs(b)) return std::abs(a) < std::abs(b);
        return std::arg(a) < std::arg(b);
    });
    std::vector<Complex> out;
    for (Complex r : reps) {
        out.push_back(r);
        if (r.imag() != 0.0) out.push_back(std::conj(r));
    }
    return out;
}

void check_conjugacy(const std::vector<Complex>& zs, bool input_real) {
    if (!input_real) return;
    double scale = 1.0;
    for (auto z : zs) scale = std::max(scale, std::abs(z));
    for (size_t i = 0; i < zs.size(); ++i) {
        if (std::abs(zs[i].imag()) <= tol::axis * scale) continue;
        bool partner = false;
        for (size_t j = 0; j < zs.size(); ++j)
            if (j != i && std::abs(zs[j] - std::conj(zs[i])) <= 1e-6 * scale) partner = true;
        if (!partner)
            raise(Errc::conjugacy_violation,
                  "complex zero lacks its conjugate partner in a real-rational input");
    }
}

} // namespace

AllpassChain extract_left_chain(const RationalMatrix& G, BlaschkeForm form,
                                const std::optional<std::vector<Complex>>& order) {
    const bool real_input = G.is_real();
    ZeroPoleData zp = zeros_poles(G);
    std::vector<Complex> zs = zp.zeros_in(HalfPlane::open_right);
    check_conjugacy(zs, real_input);
    std::vector<Complex> seq = order ? *order : default_order(zs);
    if (seq.size() != zs.size())
        raise(Errc::degenerate_input, "zero order list does not match the zero set");

    AllpassChain chain;
    chain.form = form;
    chain.right_sided = false;

    RationalMatrix cur = G;
    int pending_conj = 0;  // nonzero while inside a complex-conjugate pair
    for (size_t k = 0; k < seq.size(); ++k) {
        const Complex z = seq[k];
        AllpassFactor f;
        f.point = z;
        f.direction = left_null_direction(cur, z);
        Eigen::MatrixXcd full = unitary_completion(f.direction);
        f.completion = full.rightCols(full.cols() - 1);
        f.form = form;
        chain.factors.push_back(f);

        // cur <- f^{-1} cur = cur + eta (eta^H cur) (1/b - 1)
        const Rational c = f.scalar_block_inverse_minus_one();
        RationalMatrix next = cur;
        for (int j = 0; j < cur.cols(); ++j) {
            Rational row_proj;
            for (int i = 0; i < cur.rows(); ++i)
                row_proj += Rational(std::conj(f.direction(i))) * cur(i, j);
            const Rational corr = row_proj * c;
            for (int i = 0; i < cur.rows(); ++i)
                next(i, j) += Rational(f.direction(i)) * corr;
        }
        cur = next;

        if (real_input) {
            if (std::abs(z.imag()) > tol::axis * std::max(1.0, std::abs(z)))
                pending_conj ^= 1;
            if (pending_conj == 0) {
                if (!cur.is_real(1e-6))
                    raise(Errc::conjugacy_violation,
                          "deflated remainder failed to return to real coefficients");
                cur = cur.real_part();
            }
        }
    }
    chain.minimum_phase_part = cur;
    return chain;
}

AllpassChain extract_right_chain(const RationalMatrix& G,
                                 const std::optional<std::vector<Complex>>& order) {
    std::optional<std::vector<Complex>> rev;
    if (order) rev = std::vector<Complex>(order->rbegin(), order->rend());
    AllpassChain left = extract_left_chain(G.transpose(), BlaschkeForm::plain, rev);

    AllpassChain out;
    out.form = BlaschkeForm::plain;
    out.right_sided = true;
    out.minimum_phase_part = left.minimum_phase_part.transpose();
    for (auto it = left.factors.rbegin(); it != left.factors.rend(); ++it) {
        AllpassFactor f = *it;
        f.direction = it->direction.conjugate();
        f.completion = it->completion.conjugate();
        out.factors.push_back(f);
    }
    return out;
}

double allpass_defect(const AllpassChain& chain, double omega) {
    const Complex s(0.0, omega);
    const int n = chain.factors.empty() ? std::max(chain.minimum_phase_part.rows(), 1)
                                        : static_cast<int>(chain.factors[0].direction.size());
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Identity(n, n);
    for (const auto& f : chain.factors) p = p * f.eval(s);
    return (p.adjoint() * p - Eigen::MatrixXcd::Identity(n, n)).norm();
}

} // namespace perflim

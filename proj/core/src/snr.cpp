#include "perflim/snr.hpp"

#include <cmath>
#include <limits>

#include "perflim/coprime.hpp"
#include "perflim/errors.hpp"
#include "perflim/expansion.hpp"
#include "perflim/state_space.hpp"
#include "perflim/zeros_poles.hpp"

namespace perflim {

namespace {

struct SnrEngine {
    Rational P, F, H;
    Rational PF;
    Rational N, M, X, Y;
    Rational N0, N_om, M_m, n_hat_m;
    std::vector<Complex> rhp_poles;  // p_i
    std::vector<Complex> rhp_zeros;  // z_i (carried by N)
    Rational bt_inv;                 // prod (s + conj p)/(s - p)
    Rational lhat_inv;               // prod (s + conj z)/(s - z)

    SnrEngine(const Rational& plant, const Rational& f, const Rational& h,
              const SnrOptions& opts)
        : P(plant), F(f), H(h) {
        if (!H.is_stable() || !F.is_stable())
            raise(Errc::degenerate_input, "channel blocks must be stable");
        for (Complex p : P.den().degree() > 0 ? P.poles() : std::vector<Complex>{}) {
            const double margin = tol::axis * std::max(1.0, std::abs(p));
            if (p.real() > margin)
                rhp_poles.push_back(p);
            else if (p.real() >= -margin && std::abs(p) > 1e-7)
                raise(Errc::marginal_pole,
                      "imaginary-axis pole away from the origin; bound undefined");
        }
        for (size_t i = 0; i < rhp_poles.size(); ++i)
            for (size_t j = i + 1; j < rhp_poles.size(); ++j)
                if (std::abs(rhp_poles[i] - rhp_poles[j]) <=
                    1e-6 * std::max(1.0, std::abs(rhp_poles[i])))
                    raise(Errc::precondition_violated, "unstable poles must be distinct");

        PF = P * F;
        CoprimeData cop = coprime_factorize(RationalMatrix(PF), opts.coprime_pole_base);
        N = cop.N.scalar();
        M = cop.M.scalar();
        X = cop.X.scalar();
        Y = cop.Y.scalar();
        N0 = P * M;
        N_om = scalar_reflect_rhp_zeros(N0).first;
        M_m = scalar_reflect_rhp_zeros(M).first;
        auto [nm, zs] = scalar_reflect_rhp_zeros(N);
        n_hat_m = nm;
        rhp_zeros = zs;

        bt_inv = Rational(1.0);
        for (Complex p : rhp_poles)
            bt_inv = bt_inv * Rational(Polynomial({std::conj(p), Complex(1.0)}),
                                       Polynomial({-p, Complex(1.0)}));
        lhat_inv = Rational(1.0);
        for (Complex z : rhp_zeros)
            lhat_inv = lhat_inv * Rational(Polynomial({std::conj(z), Complex(1.0)}),
                                           Polynomial({-z, Complex(1.0)}));
    }

    std::vector<Complex> pole_residues() const {
        std::vector<Complex> r;
        for (Complex p : rhp_poles)
            r.push_back(N_om.eval(p) / N.eval(p) * H.eval(p) * residue_at(bt_inv, p));
        return r;
    }

    double stabilizability() const {
        if (rhp_poles.empty()) return 0.0;
        std::vector<Complex> r = pole_residues();
        Complex acc(0.0);
        for (size_t i = 0; i < r.size(); ++i)
            for (size_t j = 0; j < r.size(); ++j)
                acc += std::conj(r[i]) * r[j] / (std::conj(rhp_poles[i]) + rhp_poles[j]);
        if (std::abs(acc.imag()) > 1e-9 * (1.0 + std::abs(acc.real())))
            raise(Errc::numerical_inconsistency, "stabilizability bound came out non-real");
        return std::max(0.0, acc.real());
    }

    double penalty() const {
        // pole-side constants; the N^{-1}(p_i) form is the one whose value
        // at infinity cancels against the zero-side expansion (the Bezout
        // complement satisfies Y(p_i) = -1/N(p_i), flipped sign)
        Complex pole_sum(0.0);
        for (Complex p : rhp_poles) {
            const Complex cross = residue_at(bt_inv, p) / (2.0 * p.real());
            pole_sum += N_om.eval(p) / N.eval(p) * H.eval(p) * cross;
        }

        // zero-side expansion of N_om X H against the carried-zero chain
        Rational R1;
        if (rhp_zeros.empty()) {
            R1 = N_om * X * H;
        } else {
            AllpassChain chain =
                extract_left_chain(RationalMatrix(N), BlaschkeForm::plain);
            ChainExpansion ex =
                expand_chain_inverse(RationalMatrix(N_om * X * H), chain);
            R1 = ex.stable_part.scalar();
            for (const auto& t : ex.terms) R1 += Rational(t.left(0, 0) * t.right(0, 0));
        }

        const Rational Z = Rational(pole_sum) - R1 * n_hat_m.inverse() * M_m;
        if (!Z.is_zero() && Z.relative_degree() < 1)
            raise(Errc::not_in_h2, "penalty argument has relative degree " +
                                       std::to_string(Z.relative_degree()) + " (need >= 1)");
        Rational Zr = Z.is_real(1e-6) ? Z.real_part() : Z;
        return h2_norm_squared(Zr);
    }

    double jstar_simplified(double sigma, double gamma) const {
        double zero_term = 0.0;
        for (Complex z : rhp_zeros) zero_term += z.real() / std::norm(z);
        double noise = 0.0;
        if (gamma > 0.0 && !rhp_zeros.empty()) {
            std::vector<Complex> r;
            for (Complex z : rhp_zeros)
                r.push_back(N_om.eval(z) / M.eval(z) * H.eval(z) * residue_at(lhat_inv, z));
            Complex acc(0.0);
            for (size_t i = 0; i < r.size(); ++i)
                for (size_t j = 0; j < r.size(); ++j)
                    acc += std::conj(r[i]) * r[j] / (std::conj(rhp_zeros[i]) + rhp_zeros[j]);
            if (std::abs(acc.imag()) > 1e-9 * (1.0 + std::abs(acc.real())))
                raise(Errc::numerical_inconsistency, "noise sum came out non-real");
            noise = acc.real();
        }
        return 2.0 * sigma * sigma * zero_term + gamma * gamma * noise;
    }
};

} // namespace

double required_snr_for_stabilization(const Rational& plant, const Rational& F,
                                      const Rational& H, const SnrOptions& opts) {
    return SnrEngine(plant, F, H, opts).stabilizability();
}

double tracking_snr_penalty(const Rational& plant, const Rational& F, const Rational& H,
                            const SnrOptions& opts) {
    return SnrEngine(plant, F, H, opts).penalty();
}

double simplified_tracking_performance(const Rational& plant, const Rational& F,
                                       const Rational& H, double sigma, double gamma,
                                       const SnrOptions& opts) {
    return SnrEngine(plant, F, H, opts).jstar_simplified(sigma, gamma);
}

SnrReport snr_report(const Rational& plant, const Rational& F, const Rational& H, double sigma,
                     double gamma, std::optional<double> power_threshold,
                     const SnrOptions& opts) {
    SnrEngine e(plant, F, H, opts);
    SnrReport out;
    out.stabilizability_snr = e.stabilizability();
    try {
        out.tracking_penalty = e.penalty();
    } catch (const Error& err) {
        // a biproper or improper mismatch means no finite extra power
        // achieves the optimum; report the bound as infinite
        if (err.code() != Errc::not_in_h2) throw;
        out.tracking_penalty = std::numeric_limits<double>::infinity();
    }
    out.jstar_simplified = e.jstar_simplified(sigma, gamma);
    out.power_threshold = power_threshold;
    if (power_threshold) {
        const double g2 = std::max(gamma * gamma, 1e-300);
        out.admissible = (*power_threshold / g2) > (out.stabilizability_snr + out.tracking_penalty);
    }
    return out;
}

} // namespace perflim

#include "perflim/performance.hpp"

#include <cmath>

#include "perflim/errors.hpp"
#include "perflim/expansion.hpp"
#include "perflim/quadrature.hpp"
#include "perflim/spectral.hpp"
#include "perflim/zeros_poles.hpp"

namespace perflim {

ChannelModel ChannelModel::unity(int l, const Eigen::VectorXd& sigma,
                                 const Eigen::VectorXd& gamma) {
    ChannelModel c;
    c.F = RationalMatrix::identity(l);
    c.H = RationalMatrix::identity(l);
    c.sigma = sigma;
    c.gamma = gamma;
    return c;
}

void ChannelModel::validate() const {
    const int l = F.rows();
    if (F.cols() != l || H.rows() != l || H.cols() != l)
        raise(Errc::degenerate_input, "channel blocks must be square and same-sized");
    if (sigma.size() != l || gamma.size() != l)
        raise(Errc::degenerate_input, "intensity vectors must match the channel size");
    if (!F.is_diagonal())
        raise(Errc::degenerate_input, "bandwidth block F must be diagonal");
    for (int i = 1; i < l; ++i) {
        for (Complex s : {Complex(0.33, 0.71), Complex(1.9, -0.4)}) {
            const Complex a = F(0, 0).eval_unchecked(s);
            const Complex b = F(i, i).eval_unchecked(s);
            if (std::abs(a - b) > 1e-9 * (1.0 + std::abs(a)))
                raise(Errc::degenerate_input, "F must have identical diagonal entries");
        }
    }
    if (!F.is_stable()) raise(Errc::degenerate_input, "F must be stable");
    if (!H.is_stable()) raise(Errc::degenerate_input, "H must be stable");
    for (int i = 0; i < l; ++i) {
        if (sigma(i) < 0.0) raise(Errc::degenerate_input, "sigma entries must be nonnegative");
        if (gamma(i) < 0.0) raise(Errc::degenerate_input, "gamma entries must be nonnegative");
    }
}

std::pair<Rational, std::vector<Complex>> scalar_reflect_rhp_zeros(const Rational& g) {
    if (g.is_zero()) return {g, {}};
    std::vector<Complex> zs;
    std::vector<Complex> flipped;
    for (Complex z : g.num().degree() > 0 ? g.zeros() : std::vector<Complex>{}) {
        if (z.real() > tol::axis * std::max(1.0, std::abs(z))) {
            zs.push_back(z);
            flipped.push_back(-std::conj(z));
        } else {
            flipped.push_back(z);
        }
    }
    Polynomial num = Polynomial::from_roots(flipped, g.num().leading());
    if (g.is_real() && num.is_real(1e-7)) num = num.real_part();
    return {Rational(num, g.den()), zs};
}

// ---------------------------------------------------------------------------
// gain profile and its log integral
// ---------------------------------------------------------------------------

GainProfile build_gain_profile(const RationalMatrix& N_m, const RationalMatrix& Theta_o,
                               const Eigen::VectorXd& sigma, double epsilon) {
    if (epsilon < 0.0 || epsilon >= 1.0)
        raise(Errc::precondition_violated, "epsilon must lie in [0, 1) for the gain profile");
    const int l = N_m.rows();
    const RationalMatrix W = N_m * Theta_o.inverse();
    const Eigen::MatrixXcd W0 = W.eval(Complex(0.0));

    Rational f;
    for (int j = 0; j < l; ++j) {
        Rational row;
        for (int k = 0; k < l; ++k) row += W(j, k) * Rational(W0(j, k));
        f += (sigma(j) * sigma(j)) * row;
    }
    f = (1.0 - epsilon) * f;
    if (f.is_real(1e-7)) f = f.real_part();

    GainProfile out;
    out.f = f;
    out.dc_value = f.eval(Complex(0.0)).real();
    const double expect = sigma.squaredNorm();
    if (std::abs(out.dc_value - expect) > 1e-6 * std::max(1.0, expect))
        raise(Errc::consistency_failure,
              "profile dc value " + std::to_string(out.dc_value) +
                  " does not match the reference intensity total " + std::to_string(expect));

    for (Complex z : f.num().degree() > 0 ? f.zeros() : std::vector<Complex>{})
        if (z.real() > tol::axis * std::max(1.0, std::abs(z))) out.rhp_zeros.push_back(z);

    Rational fm = f;
    for (Complex z : out.rhp_zeros) {
        // divide out (conj z / z)(z - s)/(conj z + s)
        fm = fm * Rational(Polynomial({std::conj(z), Complex(1.0)}),
                           Polynomial({z, Complex(-1.0)})) *
             Rational(z / std::conj(z));
    }
    if (fm.is_real(1e-6)) fm = fm.real_part();
    out.min_phase_part = fm;
    return out;
}

double poisson_log_integral(const GainProfile& profile) {
    const Rational& f = profile.f;
    const double f0 = profile.dc_value;
    if (std::abs(f0) < 1e-12) raise(Errc::degenerate_input, "profile vanishes at dc");

    // |f(jw)|^2 - f0^2 has a double zero at w = 0; factoring s^2 out keeps
    // the integrand accurate near dc through log1p.
    const Rational ff = f * f.paraconjugate();
    Polynomial delta_num = ff.num() - Polynomial(f0 * f0) * ff.den();
    const double dscale = std::max(delta_num.max_abs_coeff(), 1e-300);
    std::vector<Complex> dc(delta_num.coeffs());
    if (std::abs(dc[0]) > 1e-7 * dscale || (dc.size() > 1 && std::abs(dc[1]) > 1e-7 * dscale))
        raise(Errc::numerical_inconsistency, "profile density lacks its double zero at dc");
    dc.erase(dc.begin(), dc.begin() + std::min<size_t>(2, dc.size()));
    if (dc.empty()) return 0.0;  // constant profile
    const Rational q(Polynomial(std::move(dc)), ff.den());

    double rad = 1.0;
    for (Complex p : f.den().degree() > 0 ? f.poles() : std::vector<Complex>{})
        rad = std::max(rad, std::abs(p));
    for (Complex z : f.num().degree() > 0 ? f.zeros() : std::vector<Complex>{})
        rad = std::max(rad, std::abs(z));

    const double f0sq = f0 * f0;
    const auto integrand = [&](double w) {
        const Complex s(0.0, w);
        const double qv = q.eval_unchecked(s).real();
        if (w < 1e-12) return -qv / (2.0 * f0sq);
        const double x = -w * w * qv / f0sq;  // |f/f0|^2 - 1
        double lg;
        if (x > -0.5) {
            lg = std::log1p(x);
        } else {
            const double m2 = std::norm(f.eval_unchecked(s)) / f0sq;
            if (!(m2 > 0.0))
                raise(Errc::quadrature_failure, "profile magnitude hit zero on the axis");
            lg = std::log(m2);
        }
        return lg / (2.0 * w * w);
    };
    return integrate_half_line(integrand, 2.0 * rad, 1e-9) / M_PI;
}

// ---------------------------------------------------------------------------
// shared synthesis engine
// ---------------------------------------------------------------------------

namespace {

RationalMatrix scaled_stack(const RationalMatrix& top, const RationalMatrix& bottom,
                            double epsilon) {
    return RationalMatrix::vstack(std::sqrt(1.0 - epsilon) * top, std::sqrt(epsilon) * bottom);
}

// Outer factor of [sqrt(1-eps) top; sqrt(eps) bottom] with the degenerate
// weights collapsing onto the surviving minimum-phase block.
RationalMatrix outer_of_stack(const RationalMatrix& top, const RationalMatrix& bottom,
                              double epsilon) {
    if (epsilon <= 0.0) return top;
    if (epsilon >= 1.0) return bottom;
    return inner_outer(scaled_stack(top, bottom, epsilon)).outer;
}

RationalMatrix matrix_min_phase(const RationalMatrix& G) {
    if (G.is_scalar()) return RationalMatrix(scalar_reflect_rhp_zeros(G.scalar()).first);
    return extract_left_chain(G, BlaschkeForm::plain).minimum_phase_part;
}

struct Engine {
    RationalMatrix plant;
    ChannelModel channel;
    double epsilon;
    PerfOptions opts;

    RationalMatrix PF;
    CoprimeData cop;
    AllpassChain l_chain;  // dc-normalized chain of N, carries the directions

    Engine(const RationalMatrix& plant_, const ChannelModel& channel_, double eps,
           const PerfOptions& o)
        : plant(plant_), channel(channel_), epsilon(eps), opts(o) {
        channel.validate();
        if (plant.rows() != plant.cols())
            raise(Errc::not_right_invertible, "plant must be square");
        if (plant.rows() != channel.size())
            raise(Errc::degenerate_input, "plant and channel sizes differ");
        if (epsilon < 0.0 || epsilon > 1.0)
            raise(Errc::precondition_violated, "epsilon must lie in [0, 1]");
        if (!plant.is_proper())
            raise(Errc::improper_plant, "plant must be proper");
        for (int i = 0; i < channel.sigma.size(); ++i)
            if (!(channel.sigma(i) > 0.0))
                raise(Errc::degenerate_input, "reference intensities must be positive here");
        PF = plant * channel.F;
        cop = coprime_factorize(PF, opts.coprime_pole_base);
        l_chain = extract_left_chain(cop.N, BlaschkeForm::dc_normalized, opts.zero_order);
    }

    PerfBreakdown compute_ju() const {
        PerfBreakdown out;
        out.epsilon = epsilon;
        const int l = plant.rows();

        double zero_term = 0.0;
        for (const auto& f : l_chain.factors) {
            ZeroDiagnostics d;
            d.location = f.point;
            d.direction = f.direction;
            d.cos2 = Eigen::VectorXd(l);
            double weighted = 0.0;
            for (int j = 0; j < l; ++j) {
                d.cos2(j) = std::norm(f.direction(j));
                weighted += channel.sigma(j) * channel.sigma(j) * d.cos2(j);
            }
            zero_term += f.point.real() / std::norm(f.point) * weighted;
            out.zero_diagnostics.push_back(std::move(d));
        }
        out.ju_zero_direction_term = 2.0 * (1.0 - epsilon) * zero_term;

        if (epsilon >= 1.0) {
            out.ju_star = 0.0;
            out.j_star = out.jv_star = 0.0;
            out.ju_zero_direction_term = 0.0;
            return out;
        }

        const RationalMatrix& N_m = l_chain.minimum_phase_part;
        RationalMatrix Theta_o;
        if (epsilon <= 0.0) {
            Theta_o = N_m;
        } else {
            const RationalMatrix C_FM = matrix_min_phase(channel.F * cop.M);
            Theta_o = outer_of_stack(N_m, C_FM, epsilon);
        }
        const GainProfile profile = build_gain_profile(N_m, Theta_o, channel.sigma, epsilon);

        double szero = 0.0;
        for (Complex s : profile.rhp_zeros) szero += s.real() / std::norm(s);
        const double integ = poisson_log_integral(profile);
        const double ssum = channel.sigma_sq_sum();

        out.ju_szero_term = 2.0 * (1.0 - epsilon) * ssum * szero;
        out.ju_log_integral_term = -2.0 * (1.0 - epsilon) * ssum * integ;
        out.ju_star =
            out.ju_zero_direction_term + out.ju_szero_term + out.ju_log_integral_term;
        if (out.ju_star < -1e-9)
            raise(Errc::numerical_inconsistency, "negative tracking part");
        out.j_star = out.ju_star;
        return out;
    }

    double compute_jv() const {
        const int l = plant.rows();
        if (channel.gamma.norm() == 0.0) return 0.0;
        for (int i = 0; i < l; ++i)
            if (channel.gamma(i) == 0.0)
                raise(Errc::precondition_violated,
                      "noise intensities must be all zero or all positive");

        const RationalMatrix N0 = plant * cop.M;
        const RationalMatrix N_om = matrix_min_phase(N0);
        const RationalMatrix M_m = matrix_min_phase(cop.M);
        const RationalMatrix Delta0 = outer_of_stack(N_om, M_m, epsilon);

        Eigen::MatrixXcd V = Eigen::MatrixXcd::Zero(l, l);
        for (int i = 0; i < l; ++i) V(i, i) = channel.gamma(i);
        const RationalMatrix W = cop.Nt * channel.H * RationalMatrix::constant(V);
        const AllpassChain d_chain = extract_right_chain(W, opts.zero_order);
        const int n = d_chain.size();
        if (n == 0) return 0.0;

        std::vector<Eigen::VectorXcd> u(static_cast<size_t>(n)), v(static_cast<size_t>(n));
        std::vector<Complex> zs(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) {
            const auto& fac = d_chain.factors[static_cast<size_t>(i)];
            const Complex z = fac.point;
            zs[static_cast<size_t>(i)] = z;
            Eigen::MatrixXcd Mz = cop.M.eval_unchecked(z);
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Mz, Eigen::ComputeThinU | Eigen::ComputeThinV);
            if (svd.singularValues()(l - 1) <= 1e-10 * std::max(1.0, svd.singularValues()(0)))
                raise(Errc::evaluation_collision, "carried zero collides with a plant pole");
            const Eigen::MatrixXcd O =
                Delta0.eval_unchecked(z) * Mz.inverse() * channel.H.eval_unchecked(z);
            u[static_cast<size_t>(i)] =
                O * V * d_chain.inverse_eval_range(i + 1, n, z) * fac.direction;
            v[static_cast<size_t>(i)] =
                d_chain.inverse_eval_range(0, i, z).adjoint() * fac.direction;
        }
        Complex acc(0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const Complex zi = zs[static_cast<size_t>(i)], zj = zs[static_cast<size_t>(j)];
                const Complex gain =
                    (2.0 * zi.real()) * (2.0 * zj.real()) / (std::conj(zi) + zj);
                const Complex uu = u[static_cast<size_t>(i)].adjoint() * u[static_cast<size_t>(j)];
                const Complex vv = v[static_cast<size_t>(j)].adjoint() * v[static_cast<size_t>(i)];
                acc += gain * uu * vv;
            }
        if (std::abs(acc.imag()) > 1e-9 * (1.0 + std::abs(acc.real())))
            raise(Errc::numerical_inconsistency, "noise part came out non-real");
        if (acc.real() < -1e-9)
            raise(Errc::numerical_inconsistency, "noise part came out negative");
        return std::max(0.0, acc.real());
    }
};

} // namespace

PerfBreakdown ju_star(const RationalMatrix& plant, const ChannelModel& channel, double epsilon,
                      const PerfOptions& opts) {
    return Engine(plant, channel, epsilon, opts).compute_ju();
}

double jv_star(const RationalMatrix& plant, const ChannelModel& channel, double epsilon,
               const PerfOptions& opts) {
    return Engine(plant, channel, epsilon, opts).compute_jv();
}

PerfBreakdown tracking_performance(const RationalMatrix& plant, const ChannelModel& channel,
                                   double epsilon, const PerfOptions& opts) {
    Engine e(plant, channel, epsilon, opts);
    PerfBreakdown out = e.compute_ju();
    out.jv_star = e.compute_jv();
    out.j_star = out.ju_star + out.jv_star;
    return out;
}

PerfBreakdown tracking_performance_noise_free(const RationalMatrix& plant,
                                              const RationalMatrix& F,
                                              const Eigen::VectorXd& sigma, double epsilon,
                                              const PerfOptions& opts) {
    ChannelModel ch;
    ch.F = F;
    ch.H = RationalMatrix::identity(F.rows());
    ch.sigma = sigma;
    ch.gamma = Eigen::VectorXd::Zero(F.rows());
    PerfBreakdown out = ju_star(plant, ch, epsilon, opts);
    out.jv_star = 0.0;
    out.j_star = out.ju_star;
    return out;
}

// ---------------------------------------------------------------------------
// scalar route
// ---------------------------------------------------------------------------

PerfBreakdown tracking_performance_siso(const Rational& plant, const Rational& F,
                                        const Rational& H, double sigma, double gamma,
                                        double epsilon, const PerfOptions& opts) {
    if (epsilon < 0.0 || epsilon > 1.0)
        raise(Errc::precondition_violated, "epsilon must lie in [0, 1]");
    const Rational PF = plant * F;
    CoprimeData cop = coprime_factorize(RationalMatrix(PF), opts.coprime_pole_base);
    const Rational N = cop.N.scalar();
    const Rational M = cop.M.scalar();

    auto [n_hat_m, zs] = scalar_reflect_rhp_zeros(N);

    PerfBreakdown out;
    out.epsilon = epsilon;
    double zero_term = 0.0;
    for (Complex z : zs) zero_term += z.real() / std::norm(z);
    out.ju_zero_direction_term = 2.0 * (1.0 - epsilon) * sigma * sigma * zero_term;

    if (epsilon < 1.0) {
        Rational theta_o;
        if (epsilon <= 0.0) {
            theta_o = n_hat_m;
        } else {
            const Rational c_fm = scalar_reflect_rhp_zeros(F * M).first;
            theta_o = outer_of_stack(RationalMatrix(n_hat_m), RationalMatrix(c_fm), epsilon)
                          .scalar();
        }
        Eigen::VectorXd sg(1);
        sg(0) = sigma;
        const GainProfile profile =
            build_gain_profile(RationalMatrix(n_hat_m), RationalMatrix(theta_o), sg, epsilon);
        double szero = 0.0;
        for (Complex s : profile.rhp_zeros) szero += s.real() / std::norm(s);
        const double integ = poisson_log_integral(profile);
        out.ju_szero_term = 2.0 * (1.0 - epsilon) * sigma * sigma * szero;
        out.ju_log_integral_term = -2.0 * (1.0 - epsilon) * sigma * sigma * integ;
    } else {
        out.ju_zero_direction_term = 0.0;
    }
    out.ju_star = out.ju_zero_direction_term + out.ju_szero_term + out.ju_log_integral_term;

    // noise part through plain residue arithmetic
    if (gamma > 0.0 && !zs.empty()) {
        const Rational N0 = plant * M;
        const Rational N_om = scalar_reflect_rhp_zeros(N0).first;
        const Rational M_m = scalar_reflect_rhp_zeros(M).first;
        const Rational delta_o =
            outer_of_stack(RationalMatrix(N_om), RationalMatrix(M_m), epsilon).scalar();
        Rational lhat_inv(1.0);
        for (Complex z : zs)
            lhat_inv = lhat_inv * Rational(Polynomial({std::conj(z), Complex(1.0)}),
                                           Polynomial({-z, Complex(1.0)}));
        std::vector<Complex> r(zs.size());
        for (size_t i = 0; i < zs.size(); ++i) {
            const Complex z = zs[i];
            const Complex o =
                delta_o.eval(z) * H.eval(z) / M.eval(z);
            r[i] = o * residue_at(lhat_inv, z);
        }
        Complex acc(0.0);
        for (size_t i = 0; i < zs.size(); ++i)
            for (size_t j = 0; j < zs.size(); ++j)
                acc += std::conj(r[i]) * r[j] / (std::conj(zs[i]) + zs[j]);
        out.jv_star = gamma * gamma * acc.real();
        if (std::abs(acc.imag()) > 1e-9 * (1.0 + std::abs(acc.real())))
            raise(Errc::numerical_inconsistency, "noise part came out non-real");
    }
    out.j_star = out.ju_star + out.jv_star;
    return out;
}

// Unity-channel route assembled directly from the plant's coprime data:
// stack [sqrt(1-eps) N_m; sqrt(eps) M_m], noise chain from Nt V.
PerfBreakdown tracking_performance_awgn(const RationalMatrix& plant,
                                        const Eigen::VectorXd& sigma,
                                        const Eigen::VectorXd& gamma, double epsilon,
                                        const PerfOptions& opts) {
    if (epsilon < 0.0 || epsilon > 1.0)
        raise(Errc::precondition_violated, "epsilon must lie in [0, 1]");
    const int l = plant.rows();
    if (sigma.size() != l || gamma.size() != l)
        raise(Errc::degenerate_input, "intensity vectors must match the plant size");

    CoprimeData cop = coprime_factorize(plant, opts.coprime_pole_base);
    AllpassChain l_chain =
        extract_left_chain(cop.N, BlaschkeForm::dc_normalized, opts.zero_order);

    PerfBreakdown out;
    out.epsilon = epsilon;
    double zero_term = 0.0;
    for (const auto& f : l_chain.factors) {
        ZeroDiagnostics d;
        d.location = f.point;
        d.direction = f.direction;
        d.cos2 = Eigen::VectorXd(l);
        double weighted = 0.0;
        for (int j = 0; j < l; ++j) {
            d.cos2(j) = std::norm(f.direction(j));
            weighted += sigma(j) * sigma(j) * d.cos2(j);
        }
        zero_term += f.point.real() / std::norm(f.point) * weighted;
        out.zero_diagnostics.push_back(std::move(d));
    }
    out.ju_zero_direction_term = 2.0 * (1.0 - epsilon) * zero_term;

    const RationalMatrix& N_m = l_chain.minimum_phase_part;
    const RationalMatrix M_m = matrix_min_phase(cop.M);
    RationalMatrix Lambda_o;
    if (epsilon < 1.0) {
        Lambda_o = outer_of_stack(N_m, M_m, epsilon);
        const GainProfile profile = build_gain_profile(N_m, Lambda_o, sigma, epsilon);
        double szero = 0.0;
        for (Complex s : profile.rhp_zeros) szero += s.real() / std::norm(s);
        const double integ = poisson_log_integral(profile);
        const double ssum = sigma.squaredNorm();
        out.ju_szero_term = 2.0 * (1.0 - epsilon) * ssum * szero;
        out.ju_log_integral_term = -2.0 * (1.0 - epsilon) * ssum * integ;
    } else {
        Lambda_o = M_m;
        out.ju_zero_direction_term = 0.0;
    }
    out.ju_star = out.ju_zero_direction_term + out.ju_szero_term + out.ju_log_integral_term;

    if (gamma.norm() > 0.0) {
        for (int i = 0; i < l; ++i)
            if (gamma(i) == 0.0)
                raise(Errc::precondition_violated,
                      "noise intensities must be all zero or all positive");
        Eigen::MatrixXcd V = Eigen::MatrixXcd::Zero(l, l);
        for (int i = 0; i < l; ++i) V(i, i) = gamma(i);
        const RationalMatrix W = cop.Nt * RationalMatrix::constant(V);
        const AllpassChain d_chain = extract_right_chain(W, opts.zero_order);
        const int n = d_chain.size();
        Complex acc(0.0);
        std::vector<Eigen::VectorXcd> u(static_cast<size_t>(n)), v(static_cast<size_t>(n));
        std::vector<Complex> zs(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) {
            const auto& fac = d_chain.factors[static_cast<size_t>(i)];
            const Complex z = fac.point;
            zs[static_cast<size_t>(i)] = z;
            Eigen::MatrixXcd Mz = cop.M.eval_unchecked(z);
            const Eigen::MatrixXcd O = Lambda_o.eval_unchecked(z) * Mz.inverse();
            u[static_cast<size_t>(i)] =
                O * V * d_chain.inverse_eval_range(i + 1, n, z) * fac.direction;
            v[static_cast<size_t>(i)] =
                d_chain.inverse_eval_range(0, i, z).adjoint() * fac.direction;
        }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const Complex zi = zs[static_cast<size_t>(i)], zj = zs[static_cast<size_t>(j)];
                const Complex gain =
                    (2.0 * zi.real()) * (2.0 * zj.real()) / (std::conj(zi) + zj);
                const Complex uu = u[static_cast<size_t>(i)].adjoint() * u[static_cast<size_t>(j)];
                const Complex vv = v[static_cast<size_t>(j)].adjoint() * v[static_cast<size_t>(i)];
                acc += gain * uu * vv;
            }
        if (std::abs(acc.imag()) > 1e-9 * (1.0 + std::abs(acc.real())))
            raise(Errc::numerical_inconsistency, "noise part came out non-real");
        out.jv_star = std::max(0.0, acc.real());
    }
    out.j_star = out.ju_star + out.jv_star;
    return out;
}

} // namespace perflim

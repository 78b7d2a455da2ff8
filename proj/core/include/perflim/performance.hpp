#pragma once

#include <optional>

#include "perflim/allpass.hpp"
#include "perflim/coprime.hpp"
#include "perflim/rational_matrix.hpp"

namespace perflim {

// Measurement-loop model: the control signal traverses a bandwidth
// limitation F (diagonal, equal entries) and picks up noise colored by H.
// sigma are per-channel reference intensities (> 0), gamma noise
// intensities (>= 0).
struct ChannelModel {
    RationalMatrix F;
    RationalMatrix H;
    Eigen::VectorXd sigma;
    Eigen::VectorXd gamma;

    int size() const { return F.rows(); }
    static ChannelModel unity(int l, const Eigen::VectorXd& sigma, const Eigen::VectorXd& gamma);
    void validate() const;
    double sigma_sq_sum() const { return sigma.squaredNorm(); }
};

// The scalar gain profile f(s) whose dc-normalized log integral and
// right-half-plane zeros carry the bandwidth cost of the tracking index.
struct GainProfile {
    Rational f;
    double dc_value = 0.0;            // f(0), equals sum sigma_i^2
    std::vector<Complex> rhp_zeros;   // s_i
    Rational min_phase_part;          // f with the s_i reflected
};

struct ZeroDiagnostics {
    Complex location;
    Eigen::VectorXcd direction;
    Eigen::VectorXd cos2;  // |<eta, e_j>|^2 per channel
};

struct PerfBreakdown {
    double epsilon = 0.0;
    double ju_zero_direction_term = 0.0;
    double ju_szero_term = 0.0;
    double ju_log_integral_term = 0.0;
    double ju_star = 0.0;
    double jv_star = 0.0;
    double j_star = 0.0;
    std::vector<ZeroDiagnostics> zero_diagnostics;
};

struct PerfOptions {
    double coprime_pole_base = 1.0;
    std::optional<std::vector<Complex>> zero_order;
};

// f(s) = (1-eps) tr{ U^T N_m(s) Theta_o^{-1}(s) Theta_o^{-T}(0) N_m^T(0) U },
// assembled as one scalar rational; its dc value must come out as
// sum sigma_i^2 (consistency_failure otherwise).
GainProfile build_gain_profile(const RationalMatrix& N_m, const RationalMatrix& Theta_o,
                               const Eigen::VectorXd& sigma, double epsilon);

// (1/pi) Int_0^inf log|f(jw)/f(0)| / w^2 dw, absolute tolerance 1e-9.
double poisson_log_integral(const GainProfile& profile);

// Reference-tracking part of the optimal index.
PerfBreakdown ju_star(const RationalMatrix& plant, const ChannelModel& channel, double epsilon,
                      const PerfOptions& opts = {});

// Noise part of the optimal index (Hermitian residue form, >= 0).
double jv_star(const RationalMatrix& plant, const ChannelModel& channel, double epsilon,
               const PerfOptions& opts = {});

// Full optimal index J* = J_U* + J_V*.
PerfBreakdown tracking_performance(const RationalMatrix& plant, const ChannelModel& channel,
                                   double epsilon, const PerfOptions& opts = {});

// Scalar specialization evaluated through independent scalar arithmetic.
PerfBreakdown tracking_performance_siso(const Rational& plant, const Rational& F,
                                        const Rational& H, double sigma, double gamma,
                                        double epsilon, const PerfOptions& opts = {});

// Unity-channel specialization (F = H = I), assembled from the plant's own
// coprime data without the product pipeline.
PerfBreakdown tracking_performance_awgn(const RationalMatrix& plant,
                                        const Eigen::VectorXd& sigma,
                                        const Eigen::VectorXd& gamma, double epsilon,
                                        const PerfOptions& opts = {});

// Noise-free channel: requires gamma = 0, returns the ju-only breakdown.
PerfBreakdown tracking_performance_noise_free(const RationalMatrix& plant,
                                              const RationalMatrix& F,
                                              const Eigen::VectorXd& sigma, double epsilon,
                                              const PerfOptions& opts = {});

// Reflect the open-RHP zeros of a scalar rational across the axis
// ((s - z) -> (s + conj z)); returns the minimum phase part and the zeros.
std::pair<Rational, std::vector<Complex>> scalar_reflect_rhp_zeros(const Rational& g);

} // namespace perflim

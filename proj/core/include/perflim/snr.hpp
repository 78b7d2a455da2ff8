#pragma once

#include <optional>

#include "perflim/performance.hpp"

namespace perflim {

struct SnrReport {
    double stabilizability_snr = 0.0;  // sum conj(r_i) r_j / (conj(p_i) + p_j)
    double tracking_penalty = 0.0;     // additional power for optimal tracking
    double jstar_simplified = 0.0;     // optimal index without the control-energy weight
    std::optional<double> power_threshold;
    std::optional<bool> admissible;    // threshold / gamma^2 > snr + penalty
};

struct SnrOptions {
    double coprime_pole_base = 1.0;
};

// Minimal channel SNR for stabilizability of a scalar plant over the noisy
// channel; zero when the plant has no open-RHP poles. Axis poles other
// than the tracked integrator make the bound undefined.
double required_snr_for_stabilization(const Rational& plant, const Rational& F,
                                      const Rational& H, const SnrOptions& opts = {});

// Extra channel power demanded by optimal tracking on top of bare
// stabilization; an H2 norm of the mismatch between the pole- and
// zero-side expansions.
double tracking_snr_penalty(const Rational& plant, const Rational& F, const Rational& H,
                            const SnrOptions& opts = {});

// Optimal value of the simplified index (tracking error + noise energy,
// no control-energy weight).
double simplified_tracking_performance(const Rational& plant, const Rational& F,
                                       const Rational& H, double sigma, double gamma,
                                       const SnrOptions& opts = {});

SnrReport snr_report(const Rational& plant, const Rational& F, const Rational& H, double sigma,
                     double gamma, std::optional<double> power_threshold = std::nullopt,
                     const SnrOptions& opts = {});

} // namespace perflim

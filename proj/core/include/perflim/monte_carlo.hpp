#pragma once

#include "perflim/oracle.hpp"

namespace perflim {

struct MonteCarloSettings {
    double horizon = 200.0;
    double dt = 1e-3;
    int runs = 200;
    uint64_t seed = 12345;
    int jobs = 0;  // 0: hardware concurrency
};

// Euler-Maruyama estimate of the index at the given parameters: the two
// closed-loop blocks are driven by Brownian reference increments and white
// channel-noise increments, started from stationary state samples.
// Identical seeds give bit-identical estimates.
MonteCarloStats monte_carlo_j(const OracleProblem& problem, const YoulaParameter& param,
                              const MonteCarloSettings& settings);

// Structured variant for finite-basis optimizer output (avoids forming
// high-order rational coefficients).
MonteCarloStats monte_carlo_j(const OracleProblem& problem, const OracleResult& result,
                              const MonteCarloSettings& settings);

} // namespace perflim

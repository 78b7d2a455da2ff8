#pragma once

#include <optional>

#include "perflim/coprime.hpp"
#include "perflim/performance.hpp"
#include "perflim/state_space.hpp"

namespace perflim {

// Free stabilizing-controller parameters over the basis
// phi_j(s) = (lambda/(s+lambda))^j.
struct YoulaParameter {
    RationalMatrix Q;
    RationalMatrix R;
};

struct MonteCarloStats {
    double estimate = 0.0;
    double standard_error = 0.0;
    int runs = 0;
    double horizon = 0.0;
    double dt = 0.0;
    uint64_t seed = 0;
};

struct OracleResult {
    double j_value = 0.0;
    double j_u = 0.0;
    double j_v = 0.0;
    int order = 0;
    double lambda = 1.0;
    Eigen::VectorXd q_coeffs;  // for psi_j = phi_j - 1, j = 1..m
    Eigen::VectorXd r_coeffs;  // for phi_j, j = 0..m
    std::optional<double> certificate_gap;  // j_value - closed_form, set by callers
    std::optional<MonteCarloStats> monte_carlo;
};

// Precomputed synthesis data for evaluating the exact index at admissible
// parameters and minimizing it over finite bases.
struct OracleProblem {
    RationalMatrix plant;
    ChannelModel channel;
    double epsilon = 0.0;
    CoprimeData cop;       // of plant * F
    RationalMatrix N0;     // plant * M
    int size = 1;

    bool is_scalar() const { return size == 1; }
};

OracleProblem make_oracle_problem(const RationalMatrix& plant, const ChannelModel& channel,
                                  double epsilon, double coprime_pole_base = 1.0);

// Exact index at given stable proper (Q, R); the reference-tracking
// interpolation constraint N(0) Q(0) = I must hold.
struct IndexValue {
    double j_u = 0.0;
    double j_v = 0.0;
    double j() const { return j_u + j_v; }
};
IndexValue j_of_parameters(const OracleProblem& problem, const RationalMatrix& Q,
                           const RationalMatrix& R);

// Convex minimization of the index over order-m basis coefficients
// (a positive-semidefinite least-squares problem with the tracking
// constraint eliminated exactly). Scalar loops.
OracleResult optimize_finite_basis(const OracleProblem& problem, int m, double lambda);

// Rebuild the rational (Q, R) described by an OracleResult.
YoulaParameter youla_from_result(const OracleProblem& problem, const OracleResult& r);

// Orthonormal network spanning { (lambda/(s+lambda))^j, j = 1..m }; state j
// realizes l_j(s) = sqrt(2 lambda) (s-lambda)^{j-1} / (s+lambda)^j.
StateSpaceModel orthonormal_laguerre_chain(double lambda, int m);
Rational laguerre_function(double lambda, int j);

} // namespace perflim

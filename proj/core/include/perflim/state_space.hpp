#pragma once

#include <Eigen/Dense>

#include "perflim/rational_matrix.hpp"

namespace perflim {

// Real state-space quadruple: y = C x + D u, x' = A x + B u.
struct StateSpaceModel {
    Eigen::MatrixXd A, B, C, D;

    int order() const { return static_cast<int>(A.rows()); }
    int inputs() const { return static_cast<int>(B.cols()); }
    int outputs() const { return static_cast<int>(C.rows()); }

    Eigen::MatrixXcd eval(Complex s) const;
};

// Solve A X + X B + C = 0 by Schur reduction (complex Bartels-Stewart).
Eigen::MatrixXcd sylvester_solve(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B,
                                 const Eigen::MatrixXcd& C);

// Solve A X + X A' + W = 0 for real stable A (controllability-Gramian form).
Eigen::MatrixXd lyapunov_continuous(const Eigen::MatrixXd& A, const Eigen::MatrixXd& W);

// Stabilizing solution of A'X + XA - (XB + S)R^{-1}(B'X + S') + Q = 0
// via the matrix sign function, polished by Newton-Lyapunov steps.
Eigen::MatrixXd care_solve(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                           const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                           const Eigen::MatrixXd& S, int max_iter = 200);

// State feedback F with eig(A + B F) at the requested locations.
// Single-input uses Ackermann; multi-input a Sylvester-based assignment.
Eigen::MatrixXd place_poles(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                            const std::vector<Complex>& targets);

// Controllable-canonical realization of a strictly proper scalar rational.
StateSpaceModel realize_companion(const Rational& g);

// Block-diagonal joint realization of all entries (not minimal).
StateSpaceModel realize(const RationalMatrix& G);

// Numerically minimal realization: orthogonal controllability/observability
// truncation of the given model.
StateSpaceModel minimal_realization(const StateSpaceModel& m, double rel_tol = 1e-9);

// Transfer function of a realization, entry by entry. The denominator comes
// from the eigenvalues of A, numerators from evaluation-interpolation.
RationalMatrix to_rational(const StateSpaceModel& m);

// Composition helpers (series: u -> first -> second).
StateSpaceModel series(const StateSpaceModel& second, const StateSpaceModel& first);
StateSpaceModel parallel_sum(const StateSpaceModel& a, const StateSpaceModel& b);
StateSpaceModel scaled(const StateSpaceModel& m, double alpha);

// <a, b> entrywise over matching output/input dimensions; both models must
// be stable with zero feedthrough.
double h2_inner(const StateSpaceModel& a, const StateSpaceModel& b);
double h2_norm_squared(const StateSpaceModel& m);

// All pairwise inner products between output rows: (i, j) -> <a_i, b_j>,
// in one Sylvester solve.
Eigen::MatrixXd h2_gram(const StateSpaceModel& a, const StateSpaceModel& b);

// H2 machinery. Arguments must be stable; strictly proper where a finite
// norm is required.
double h2_norm_squared(const Rational& g);
double h2_norm_squared(const RationalMatrix& G);
double h2_norm(const RationalMatrix& G);
double h2_norm(const Rational& g);

// <a, b> = (1/2pi) Int conj(a(jw)) b(jw) dw for stable strictly proper a, b.
double h2_inner(const Rational& a, const Rational& b);
double h2_inner(const RationalMatrix& A, const RationalMatrix& B);

// Independent frequency-domain route (adaptive quadrature), for cross-checks.
double h2_norm_squared_quadrature(const RationalMatrix& G, double abs_tol = 1e-10);

// L2 norm over the axis for possibly-unstable G (same integral, no
// analyticity requirement); quadrature only.
double l2_axis_norm_squared(const RationalMatrix& G, double abs_tol = 1e-10);

} // namespace perflim

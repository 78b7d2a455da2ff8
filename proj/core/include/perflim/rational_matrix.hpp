#pragma once

#include <Eigen/Dense>
#include <vector>

#include "perflim/rational.hpp"

namespace perflim {

// Dense matrix of scalar rational functions. Small dimensions throughout
// (channel counts), so entrywise arithmetic with Laplace-expansion
// determinants is adequate.
class RationalMatrix {
public:
    RationalMatrix() : rows_(0), cols_(0) {}
    RationalMatrix(int rows, int cols);
    RationalMatrix(const Rational& scalar);  // 1x1

    static RationalMatrix identity(int n);
    static RationalMatrix zero(int rows, int cols);
    static RationalMatrix diagonal(const std::vector<Rational>& d);
    static RationalMatrix constant(const Eigen::MatrixXd& m);
    static RationalMatrix constant(const Eigen::MatrixXcd& m);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool is_scalar() const { return rows_ == 1 && cols_ == 1; }

    Rational& operator()(int i, int j);
    const Rational& operator()(int i, int j) const;
    const Rational& scalar() const;  // requires 1x1

    Eigen::MatrixXcd eval(Complex s) const;
    Eigen::MatrixXcd eval_unchecked(Complex s) const;

    RationalMatrix operator+(const RationalMatrix& o) const;
    RationalMatrix operator-(const RationalMatrix& o) const;
    RationalMatrix operator*(const RationalMatrix& o) const;
    RationalMatrix operator*(const Rational& r) const;
    RationalMatrix operator-() const;

    RationalMatrix transpose() const;
    RationalMatrix paraconjugate() const;  // G~(s) = G(-s)^H as a rational object
    Rational determinant() const;
    RationalMatrix inverse() const;

    // Stack rows: [top; bottom]
    static RationalMatrix vstack(const RationalMatrix& top, const RationalMatrix& bottom);

    bool is_stable(double axis_tol = tol::axis) const;
    bool is_proper() const;
    bool is_strictly_proper() const;
    bool is_real(double rel_tol = tol::imag_real) const;
    RationalMatrix real_part() const;
    bool is_diagonal() const;

    // All denominator roots over all entries (with per-entry multiplicity).
    std::vector<Complex> entry_poles() const;

private:
    int rows_, cols_;
    std::vector<Rational> e_;
};

RationalMatrix operator*(double a, const RationalMatrix& m);
RationalMatrix operator*(const Rational& r, const RationalMatrix& m);

// Left/right multiplication by constant matrices.
RationalMatrix operator*(const Eigen::MatrixXcd& a, const RationalMatrix& m);
RationalMatrix operator*(const RationalMatrix& m, const Eigen::MatrixXcd& a);

} // namespace perflim

#include "perflim/rational_matrix.hpp"

#include "perflim/errors.hpp"

namespace perflim {

RationalMatrix::RationalMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), e_(static_cast<size_t>(rows * cols)) {}

RationalMatrix::RationalMatrix(const Rational& scalar) : rows_(1), cols_(1), e_{scalar} {}

RationalMatrix RationalMatrix::identity(int n) {
    RationalMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = Rational(1.0);
    return m;
}

RationalMatrix RationalMatrix::zero(int rows, int cols) { return RationalMatrix(rows, cols); }

RationalMatrix RationalMatrix::diagonal(const std::vector<Rational>& d) {
    RationalMatrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (int i = 0; i < m.rows(); ++i) m(i, i) = d[static_cast<size_t>(i)];
    return m;
}

RationalMatrix RationalMatrix::constant(const Eigen::MatrixXd& c) {
    RationalMatrix m(static_cast<int>(c.rows()), static_cast<int>(c.cols()));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) m(i, j) = Rational(c(i, j));
    return m;
}

RationalMatrix RationalMatrix::constant(const Eigen::MatrixXcd& c) {
    RationalMatrix m(static_cast<int>(c.rows()), static_cast<int>(c.cols()));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) m(i, j) = Rational(c(i, j));
    return m;
}

Rational& RationalMatrix::operator()(int i, int j) {
    return e_[static_cast<size_t>(i * cols_ + j)];
}

const Rational& RationalMatrix::operator()(int i, int j) const {
    return e_[static_cast<size_t>(i * cols_ + j)];
}

const Rational& RationalMatrix::scalar() const {
    if (!is_scalar()) raise(Errc::degenerate_input, "scalar() on a non-1x1 rational matrix");
    return e_[0];
}

Eigen::MatrixXcd RationalMatrix::eval(Complex s) const {
    Eigen::MatrixXcd m(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j).eval(s);
    return m;
}

Eigen::MatrixXcd RationalMatrix::eval_unchecked(Complex s) const {
    Eigen::MatrixXcd m(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j).eval_unchecked(s);
    return m;
}

RationalMatrix RationalMatrix::operator+(const RationalMatrix& o) const {
    RationalMatrix m(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j) + o(i, j);
    return m;
}

RationalMatrix RationalMatrix::operator-(const RationalMatrix& o) const {
    RationalMatrix m(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j) - o(i, j);
    return m;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& o) const {
    if (cols_ != o.rows_) raise(Errc::degenerate_input, "rational matrix product dimension mismatch");
    RationalMatrix m(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < o.cols_; ++j) {
            Rational acc;
            for (int k = 0; k < cols_; ++k) acc += (*this)(i, k) * o(k, j);
            m(i, j) = acc;
        }
    return m;
}

RationalMatrix RationalMatrix::operator*(const Rational& r) const {
    RationalMatrix m(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j) * r;
    return m;
}

RationalMatrix RationalMatrix::operator-() const {
    RationalMatrix m(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) m(i, j) = -(*this)(i, j);
    return m;
}

RationalMatrix RationalMatrix::transpose() const {
    RationalMatrix m(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
    return m;
}

RationalMatrix RationalMatrix::paraconjugate() const {
    RationalMatrix m(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j).paraconjugate();
    return m;
}

Rational RationalMatrix::determinant() const {
    if (rows_ != cols_) raise(Errc::degenerate_input, "determinant of a non-square matrix");
    const int n = rows_;
    if (n == 1) return (*this)(0, 0);
    if (n == 2) return (*this)(0, 0) * (*this)(1, 1) - (*this)(0, 1) * (*this)(1, 0);
    Rational det;
    for (int i = 0; i < n; ++i) {
        RationalMatrix minor(n - 1, n - 1);
        for (int r = 0, mr = 0; r < n; ++r) {
            if (r == i) continue;
            for (int c = 1; c < n; ++c) minor(mr, c - 1) = (*this)(r, c);
            ++mr;
        }
        Rational term = (*this)(i, 0) * minor.determinant();
        det = (i % 2 == 0) ? det + term : det - term;
    }
    return det;
}

RationalMatrix RationalMatrix::inverse() const {
    if (rows_ != cols_) raise(Errc::degenerate_input, "inverse of a non-square matrix");
    const int n = rows_;
    const Rational det = determinant();
    if (det.is_zero()) raise(Errc::degenerate_input, "inverse of a singular rational matrix");
    if (n == 1) return RationalMatrix(det.inverse());
    RationalMatrix adj(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            RationalMatrix minor(n - 1, n - 1);
            for (int r = 0, mr = 0; r < n; ++r) {
                if (r == i) continue;
                for (int c = 0, mc = 0; c < n; ++c) {
                    if (c == j) continue;
                    minor(mr, mc) = (*this)(r, c);
                    ++mc;
                }
                ++mr;
            }
            Rational cof = minor.determinant();
            if ((i + j) % 2 == 1) cof = -cof;
            adj(j, i) = cof;  // adjugate transposes the cofactor
        }
    RationalMatrix inv(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inv(i, j) = adj(i, j) / det;
    return inv;
}

RationalMatrix RationalMatrix::vstack(const RationalMatrix& top, const RationalMatrix& bottom) {
    if (top.cols() != bottom.cols())
        raise(Errc::degenerate_input, "vstack column mismatch");
    RationalMatrix m(top.rows() + bottom.rows(), top.cols());
    for (int i = 0; i < top.rows(); ++i)
        for (int j = 0; j < top.cols(); ++j) m(i, j) = top(i, j);
    for (int i = 0; i < bottom.rows(); ++i)
        for (int j = 0; j < bottom.cols(); ++j) m(top.rows() + i, j) = bottom(i, j);
    return m;
}

bool RationalMatrix::is_stable(double axis_tol) const {
    for (const auto& r : e_)
        if (!r.is_stable(axis_tol)) return false;
    return true;
}

bool RationalMatrix::is_proper() const {
    for (const auto& r : e_)
        if (!r.is_proper()) return false;
    return true;
}

bool RationalMatrix::is_strictly_proper() const {
    for (const auto& r : e_)
        if (!r.is_strictly_proper()) return false;
    return true;
}

bool RationalMatrix::is_real(double rel_tol) const {
    for (const auto& r : e_)
        if (!r.is_real(rel_tol)) return false;
    return true;
}

RationalMatrix RationalMatrix::real_part() const {
    RationalMatrix m(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j).real_part();
    return m;
}

bool RationalMatrix::is_diagonal() const {
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            if (i != j && !(*this)(i, j).is_zero()) return false;
    return true;
}

std::vector<Complex> RationalMatrix::entry_poles() const {
    std::vector<Complex> out;
    for (const auto& r : e_) {
        if (r.den().degree() == 0) continue;
        auto p = r.poles();
        out.insert(out.end(), p.begin(), p.end());
    }
    return out;
}

RationalMatrix operator*(double a, const RationalMatrix& m) { return m * Rational(a); }
RationalMatrix operator*(const Rational& r, const RationalMatrix& m) { return m * r; }

RationalMatrix operator*(const Eigen::MatrixXcd& a, const RationalMatrix& m) {
    RationalMatrix out(static_cast<int>(a.rows()), m.cols());
    for (int i = 0; i < out.rows(); ++i)
        for (int j = 0; j < out.cols(); ++j) {
            Rational acc;
            for (int k = 0; k < m.rows(); ++k) acc += Rational(a(i, k)) * m(k, j);
            out(i, j) = acc;
        }
    return out;
}

RationalMatrix operator*(const RationalMatrix& m, const Eigen::MatrixXcd& a) {
    RationalMatrix out(m.rows(), static_cast<int>(a.cols()));
    for (int i = 0; i < out.rows(); ++i)
        for (int j = 0; j < out.cols(); ++j) {
            Rational acc;
            for (int k = 0; k < m.cols(); ++k) acc += m(i, k) * Rational(a(k, j));
            out(i, j) = acc;
        }
    return out;
}

} // namespace perflim

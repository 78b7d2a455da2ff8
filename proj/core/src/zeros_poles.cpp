#include "perflim/zeros_poles.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "perflim/errors.hpp"

namespace perflim {

HalfPlane classify(Complex s, double axis_tol) {
    if (s.real() > axis_tol) return HalfPlane::open_right;
    if (s.real() < -axis_tol) return HalfPlane::open_left;
    return HalfPlane::axis;
}

std::vector<Complex> ZeroPoleData::zeros_in(HalfPlane h) const {
    std::vector<Complex> out;
    for (const auto& z : zeros)
        if (z.region == h) out.push_back(z.location);
    return out;
}

std::vector<Complex> ZeroPoleData::poles_in(HalfPlane h) const {
    std::vector<Complex> out;
    for (const auto& p : poles)
        if (p.region == h) out.push_back(p.location);
    return out;
}

Eigen::VectorXcd left_null_direction(const RationalMatrix& G, Complex z, bool reject_degenerate) {
    const Eigen::MatrixXcd V = G.eval_unchecked(z);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(V, Eigen::ComputeFullU);
    const auto& sv = svd.singularValues();
    const int k = static_cast<int>(sv.size());
    const double smax = std::max(sv(0), 1e-300);
    if (reject_degenerate && k >= 2 && sv(k - 2) <= 1e-6 * smax)
        raise(Errc::repeated_nmp_zeros, "left null space at the zero is not one-dimensional");
    Eigen::VectorXcd eta = svd.matrixU().col(static_cast<int>(V.rows()) - 1);
    // fix the phase: make the largest component real positive
    int imax = 0;
    for (int i = 1; i < eta.size(); ++i)
        if (std::abs(eta(i)) > std::abs(eta(imax))) imax = i;
    const Complex ph = eta(imax) / std::abs(eta(imax));
    eta /= ph;
    return eta;
}

Eigen::MatrixXcd unitary_completion(const Eigen::VectorXcd& eta) {
    const int n = static_cast<int>(eta.size());
    Eigen::MatrixXcd M(n, n);
    M.col(0) = eta;
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(M.leftCols(1));
    Eigen::MatrixXcd Q = qr.householderQ();
    // rotate so the first column equals eta exactly
    const Complex ph = (Q.col(0).adjoint() * eta)(0, 0);
    Q.col(0) *= ph / std::abs(ph);
    // orthogonal complement is invariant under that phase change
    Eigen::MatrixXcd out(n, n);
    out.col(0) = eta;
    if (n > 1) out.rightCols(n - 1) = Q.rightCols(n - 1);
    return out;
}

namespace {

// Cluster roots within a relative tolerance; returns representatives with
// multiplicities.
std::vector<std::pair<Complex, int>> cluster(const std::vector<Complex>& roots, double rel_tol) {
    double scale = 1.0;
    for (auto r : roots) scale = std::max(scale, std::abs(r));
    std::vector<std::pair<Complex, int>> out;
    for (Complex r : roots) {
        bool merged = false;
        for (auto& [rep, mult] : out) {
            if (std::abs(rep - r) <= rel_tol * scale) {
                rep = (rep * double(mult) + r) / double(mult + 1);
                ++mult;
                merged = true;
                break;
            }
        }
        if (!merged) out.emplace_back(r, 1);
    }
    return out;
}

} // namespace

ZeroPoleData zeros_poles(const RationalMatrix& G) {
    const int p = G.rows(), q = G.cols();

    // normal-rank check at a benign probe point
    {
        const Complex probe(0.731, 1.279);
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(G.eval_unchecked(probe));
        const auto& sv = svd.singularValues();
        if (sv(0) <= 0.0 || sv(std::min(p, q) - 1) <= 1e-10 * sv(0) || p > q)
            raise(Errc::not_right_invertible, "matrix does not have full normal row rank");
    }

    ZeroPoleData out;

    // poles: union of entry denominator roots, clustered
    std::vector<Complex> praw = G.entry_poles();
    for (auto& [rep, mult] : cluster(praw, tol::root_match)) {
        for (int k = 0; k < mult; ++k) {
            PoleInfo pi;
            pi.location = rep;
            pi.region = classify(rep);
            pi.input_direction = Eigen::VectorXcd::Ones(1);
            out.poles.push_back(pi);
        }
    }
    // deduplicate multiplicity inflation: an entry-wise union overcounts a
    // pole shared by several entries of a row/column only when the minimal
    // order is lower; the det() view below audits zeros, poles keep the
    // conservative count for classification purposes.

    std::vector<Complex> zraw;
    if (p == q) {
        const Rational det = G.determinant();
        if (det.is_zero()) raise(Errc::not_right_invertible, "identically singular matrix");
        zraw = det.zeros();
    } else {
        raise(Errc::not_right_invertible, "non-square systems are out of scope here");
    }

    // drop determinant zeros that are actually surviving poles of G
    std::vector<Complex> zclean;
    for (Complex z : zraw) {
        bool is_pole = false;
        for (const auto& pi : out.poles)
            if (std::abs(pi.location - z) <= tol::root_match * std::max(1.0, std::abs(z)))
                is_pole = true;
        if (!is_pole) zclean.push_back(z);
    }

    // reject repeated open-RHP zeros
    for (size_t i = 0; i < zclean.size(); ++i)
        for (size_t j = i + 1; j < zclean.size(); ++j) {
            if (classify(zclean[i]) != HalfPlane::open_right) continue;
            if (std::abs(zclean[i] - zclean[j]) <= 1e-6 * std::max(1.0, std::abs(zclean[i])))
                raise(Errc::repeated_nmp_zeros, "repeated right-half-plane zeros");
        }

    for (Complex z : zclean) {
        ZeroInfo zi;
        zi.location = z;
        zi.region = classify(z);
        if (zi.region == HalfPlane::open_right)
            zi.output_direction = left_null_direction(G, z);
        else
            zi.output_direction = Eigen::VectorXcd::Zero(p);
        out.zeros.push_back(zi);
    }

    // simple-pole input directions from the residue range (MIMO diagnostics)
    for (auto& pi : out.poles) {
        if (p == 1 && q == 1) {
            pi.input_direction = Eigen::VectorXcd::Ones(1);
            continue;
        }
        Eigen::MatrixXcd R = Eigen::MatrixXcd::Zero(p, q);
        bool ok = true;
        for (int i = 0; i < p && ok; ++i)
            for (int j = 0; j < q && ok; ++j) {
                const Rational& g = G(i, j);
                bool has = false;
                for (Complex r : g.den().degree() > 0 ? g.poles() : std::vector<Complex>{})
                    if (std::abs(r - pi.location) <= tol::root_match * std::max(1.0, std::abs(r)))
                        has = true;
                if (!has) {
                    R(i, j) = Complex(0.0);
                    continue;
                }
                Polynomial d = g.den();
                Complex acc = g.num().eval(pi.location);
                Polynomial rest = d;
                // remove the closest den root once and evaluate the rest
                auto roots = d.roots();
                size_t best = 0;
                double bd = 1e300;
                for (size_t k = 0; k < roots.size(); ++k) {
                    const double dd = std::abs(roots[k] - pi.location);
                    if (dd < bd) {
                        bd = dd;
                        best = k;
                    }
                }
                rest = d.deflate_root(roots[best]);
                const Complex dv = rest.eval(pi.location);
                if (std::abs(dv) < 1e-12) {
                    ok = false;
                    break;
                }
                R(i, j) = acc / dv;
            }
        if (!ok || R.norm() == 0.0) {
            pi.input_direction = Eigen::VectorXcd::Zero(q);
            continue;
        }
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(R, Eigen::ComputeFullV);
        pi.input_direction = svd.matrixV().col(0);
    }

    std::sort(out.zeros.begin(), out.zeros.end(), [](const ZeroInfo& a, const ZeroInfo& b) {
        if (std::abs(a.location) != std::abs(b.location))
            return std::abs(a.location) < std::abs(b.location);
        return std::arg(a.location) < std::arg(b.location);
    });
    return out;
}

} // namespace perflim

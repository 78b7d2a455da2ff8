#pragma once

#include <Eigen/Dense>
#include <vector>

#include "perflim/rational_matrix.hpp"

namespace perflim {

enum class HalfPlane { open_left, axis, open_right };

HalfPlane classify(Complex s, double axis_tol = tol::axis);

struct ZeroInfo {
    Complex location;
    Eigen::VectorXcd output_direction;  // unit eta with eta^H G(z) = 0
    HalfPlane region;
};

struct PoleInfo {
    Complex location;
    Eigen::VectorXcd input_direction;  // unit w aligned with the residue range
    HalfPlane region;
};

struct ZeroPoleData {
    std::vector<ZeroInfo> zeros;
    std::vector<PoleInfo> poles;

    std::vector<Complex> zeros_in(HalfPlane h) const;
    std::vector<Complex> poles_in(HalfPlane h) const;
};

// Transmission zeros and poles of a right-invertible rational matrix.
// Square systems go through det(G); zero directions come from the left
// null space of G at each open-RHP zero. Repeated open-RHP zeros within
// 1e-6 of each other are rejected.
ZeroPoleData zeros_poles(const RationalMatrix& G);

// Left null direction of G at the point z (unit vector, eta^H G(z) = 0).
Eigen::VectorXcd left_null_direction(const RationalMatrix& G, Complex z,
                                     bool reject_degenerate = true);

// Unitary completion: returns U such that [eta U] is unitary.
Eigen::MatrixXcd unitary_completion(const Eigen::VectorXcd& eta);

} // namespace perflim

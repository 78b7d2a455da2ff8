#pragma once

#include "perflim/rational_matrix.hpp"

namespace perflim {

// Right and left coprime factors of a proper plant, P = N M^{-1} = Mt^{-1} Nt,
// together with the Bezout complements:
//
//   [ Xt -Yt ] [ M  Y ]
//   [ -Nt Mt ] [ N  X ] = I
//
// All eight members are stable and proper.
struct CoprimeData {
    RationalMatrix N, M, Nt, Mt, X, Y, Xt, Yt;

    // || [Xt -Yt; -Nt Mt](s) [M Y; N X](s) - I ||_F at a test point.
    double bezout_residual(Complex s) const;
};

// Synthetic dynamics for the factors sit at -pole_base (SISO denominator
// (s + pole_base)^n; state-space gains place poles at -pole_base, -pole_base-1, ...).
CoprimeData coprime_factorize(const RationalMatrix& P, double pole_base = 1.0);

} // namespace perflim

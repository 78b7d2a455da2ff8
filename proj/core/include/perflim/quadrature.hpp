#pragma once

#include <functional>

namespace perflim {

// Adaptive Gauss-Kronrod 15(7) on a finite interval.
// Raises quadrature_failure if the tolerance cannot be met.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, int max_depth = 60);

// Integral over [0, inf): splits at `knee` and maps the tail by t = knee/w.
double integrate_half_line(const std::function<double(double)>& f, double knee,
                           double abs_tol);

} // namespace perflim

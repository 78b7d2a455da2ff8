#include "perflim/quadrature.hpp"

#include <cmath>

#include "perflim/errors.hpp"

namespace perflim {

namespace {

// Gauss-Kronrod 15-point nodes/weights on [-1, 1] (embedded Gauss-7).
constexpr double kron_x[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
constexpr double kron_w[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double gauss_w[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct Segment {
    double value;
    double error;
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * kron_x[i]);
        fv[14 - i] = f(c + h * kron_x[i]);
    }
    fv[7] = f(c);
    double kron = 0.0;
    for (int i = 0; i < 7; ++i) kron += kron_w[i] * (fv[i] + fv[14 - i]);
    kron += kron_w[7] * fv[7];
    double gauss = gauss_w[3] * fv[7];
    for (int i = 0; i < 3; ++i) gauss += gauss_w[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
    kron *= h;
    gauss *= h;
    return {kron, std::abs(kron - gauss)};
}

double adapt(const std::function<double(double)>& f, double a, double b, double abs_tol,
             int depth, int max_depth) {
    const Segment s = gk15(f, a, b);
    const double floor = 1e-15 * (1.0 + std::abs(s.value));
    if (s.error <= std::max(abs_tol, floor) || !(std::isfinite(s.error))) {
        if (!std::isfinite(s.value))
            raise(Errc::quadrature_failure, "non-finite integrand segment");
        return s.value;
    }
    if (depth >= max_depth)
        raise(Errc::quadrature_failure,
              "adaptive quadrature did not converge; partial value " + std::to_string(s.value) +
                  ", error estimate " + std::to_string(s.error));
    const double m = 0.5 * (a + b);
    return adapt(f, a, m, 0.5 * abs_tol, depth + 1, max_depth) +
           adapt(f, m, b, 0.5 * abs_tol, depth + 1, max_depth);
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                 int max_depth) {
    if (a == b) return 0.0;
    return adapt(f, a, b, abs_tol, 0, max_depth);
}

double integrate_half_line(const std::function<double(double)>& f, double knee,
                           double abs_tol) {
    const double head = integrate(f, 0.0, knee, 0.5 * abs_tol);
    // w = knee / t maps (0, 1] onto [knee, inf); dw = knee / t^2 dt
    const auto tail_integrand = [&](double t) {
        if (t <= 0.0) return 0.0;
        const double w = knee / t;
        return f(w) * knee / (t * t);
    };
    const double tail = integrate(tail_integrand, 0.0, 1.0, 0.5 * abs_tol);
    return head + tail;
}

} // namespace perflim

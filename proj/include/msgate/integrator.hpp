// integrator.hpp — adaptive Dormand–Prince 5(4) for the Schrödinger equation
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace msgate {

struct IntegrationStats {
    long steps_accepted = 0;
    long steps_rejected = 0;
    double max_norm_error = 0.0;  // largest per-step deviation of ||psi|| from 1
};

// Integrates y' = f(t, y) from t0 to t1 with local error control; hard break
// times (envelope/phase discontinuities) are never stepped across. The state
// is renormalized after each accepted step (the dynamics are unitary); the
// pre-renormalization drift is reported in the stats.
template <typename Deriv, typename StepObserver>
Eigen::VectorXcd integrate_schrodinger(Eigen::VectorXcd y, double t0, double t1,
                                       double tol, Deriv f,
                                       const std::vector<double>& break_times,
                                       IntegrationStats& stats,
                                       StepObserver observe) {
    using Eigen::VectorXcd;

    // Dormand–Prince coefficients
    static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                        c5 = 8.0 / 9;
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                        a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                        a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                        e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                        e6 = 22.0 / 525, e7 = -1.0 / 40;

    const double merge_tol = (t1 - t0) * 1e-12;
    std::vector<double> breaks;
    for (double b : break_times)
        if (b > t0 + merge_tol && b < t1 - merge_tol) breaks.push_back(b);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end(),
                             [&](double a, double b) {
                                 return b - a < merge_tol;
                             }),
                 breaks.end());
    std::size_t next_break = 0;

    double t = t0;
    const double span = t1 - t0;
    double h = span / 256.0;
    const double h_min = span * 1e-14;

    VectorXcd k1 = f(t, y);
    while (t < t1) {
        while (next_break < breaks.size() && breaks[next_break] <= t)
            ++next_break;
        const double t_event =
            next_break < breaks.size() ? breaks[next_break] : t1;
        bool lands_on_event = false;
        if (h >= t_event - t - h_min) {
            h = t_event - t;
            lands_on_event = true;
        }
        if (h < h_min)
            throw std::runtime_error("integrator step size underflow");

        const VectorXcd k2 = f(t + c2 * h, y + h * (a21 * k1));
        const VectorXcd k3 = f(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
        const VectorXcd k4 =
            f(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const VectorXcd k5 = f(
            t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const VectorXcd k6 =
            f(t + h,
              y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const VectorXcd y5 =
            y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const VectorXcd k7 = f(t + h, y5);
        const VectorXcd err_vec =
            h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        const double err = err_vec.norm() / tol;
        if (err <= 1.0) {
            t = lands_on_event ? t_event : t + h;
            y = y5;
            k1 = k7;  // FSAL
            const double norm = y.norm();
            stats.max_norm_error =
                std::max(stats.max_norm_error, std::abs(norm - 1.0));
            if (std::abs(norm - 1.0) > 1e-6)
                throw std::runtime_error(
                    "integrator lost normalization; tolerance too loose");
            y /= norm;
            ++stats.steps_accepted;
            observe(t, y);
        } else {
            ++stats.steps_rejected;
        }
        const double scale =
            0.9 * std::pow(std::max(err, 1e-10), -0.2);
        h *= std::clamp(scale, 0.2, 5.0);
    }
    return y;
}

}  // namespace msgate

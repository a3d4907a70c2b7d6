// walsh.hpp — Paley-ordered Walsh sign sequences for decoupling-tone modulation
//
// Orders 2^r − 1 are products of the first r Rademacher functions; order
// 2^r − 1 cancels every drive-drift moment integral t^m s(t), m <= r − 1.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace msgate {

inline constexpr std::array<int, 5> supported_walsh_orders{0, 1, 3, 7, 15};

inline bool walsh_order_supported(int order) {
    for (int k : supported_walsh_orders)
        if (k == order) return true;
    return false;
}

// Piecewise ±1 sign function on [0, duration]. The dyadic grid splits the
// interval into 2^r equal segments; the sign only flips at a subset of the
// grid points (e.g. Walsh 7 flips at {1,3,4,5,7}·T/8).
class WalshSequence {
public:
    WalshSequence(int order, double duration)
        : order_(order), duration_(duration) {
        if (!walsh_order_supported(order))
            throw std::invalid_argument(
                "walsh order " + std::to_string(order) +
                " not supported; allowed orders are 0, 1, 3, 7, 15");
        if (!(duration > 0.0))
            throw std::invalid_argument("walsh duration must be positive");

        int r = 0;
        while ((1 << r) <= order) ++r;  // order = 2^r − 1
        segments_ = 1 << r;

        // Product of the first r Rademacher functions evaluated on segment j:
        // R_m is ±1 alternating over 2^m half-periods, i.e. bit (r−m) of j.
        signs_.resize(segments_);
        for (int j = 0; j < segments_; ++j) {
            int sign = 1;
            for (int m = 1; m <= r; ++m)
                if ((j >> (r - m)) & 1) sign = -sign;
            signs_[j] = sign;
        }

        const double h = duration_ / segments_;
        for (int j = 1; j < segments_; ++j) {
            grid_.push_back(j * h);
            if (signs_[j] != signs_[j - 1]) switch_times_.push_back(j * h);
        }
    }

    int order() const { return order_; }
    double duration() const { return duration_; }
    int segment_count() const { return segments_; }

    // Interior dyadic grid points j·T/2^r, j = 1..2^r−1 (equal partition).
    const std::vector<double>& dyadic_grid() const { return grid_; }
    // Grid points where the sign actually changes.
    const std::vector<double>& switch_times() const { return switch_times_; }
    const std::vector<int>& segment_signs() const { return signs_; }

    // Right-continuous sign; s(duration) is the left limit.
    int sign_at(double t) const {
        if (t < 0.0 || t > duration_)
            throw std::out_of_range("walsh sign_at: t outside [0, duration]");
        int j = static_cast<int>(std::floor(t / duration_ * segments_));
        if (j >= segments_) j = segments_ - 1;  // t == duration
        return signs_[j];
    }

    // ∫_0^T t^m s(t) dt, exact piecewise-polynomial integration.
    double moment_integral(int m) const {
        if (m < 0) throw std::invalid_argument("moment order must be >= 0");
        const double h = duration_ / segments_;
        double total = 0.0;
        for (int j = 0; j < segments_; ++j) {
            const double a = j * h;
            const double b = (j + 1) * h;
            total += signs_[j] *
                     (std::pow(b, m + 1) - std::pow(a, m + 1)) / (m + 1);
        }
        return total;
    }

private:
    int order_;
    double duration_;
    int segments_;
    std::vector<int> signs_;
    std::vector<double> grid_;
    std::vector<double> switch_times_;
};

inline WalshSequence make_walsh(int order, double duration) {
    return WalshSequence(order, duration);
}

}  // namespace msgate

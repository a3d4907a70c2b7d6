// envelope.hpp — piecewise pulse envelopes (sin² ramps, flat tops) with
// closed-form integrals, plus piecewise-constant phase tracks
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "msgate/constants.hpp"

namespace msgate {

enum class SegmentKind { Zero, Const, Sin2Rise, Sin2Fall };

inline const char* segment_kind_name(SegmentKind k) {
    switch (k) {
        case SegmentKind::Zero: return "zero";
        case SegmentKind::Const: return "const";
        case SegmentKind::Sin2Rise: return "sin2_rise";
        case SegmentKind::Sin2Fall: return "sin2_fall";
    }
    return "?";
}

struct EnvelopeSegment {
    double t0 = 0.0;
    double t1 = 0.0;
    SegmentKind kind = SegmentKind::Zero;
    double peak = 0.0;  // plateau value reached by a rise / left by a fall

    double value_at(double t) const {
        switch (kind) {
            case SegmentKind::Zero: return 0.0;
            case SegmentKind::Const: return peak;
            case SegmentKind::Sin2Rise: {
                const double s = std::sin(0.5 * pi * (t - t0) / (t1 - t0));
                return peak * s * s;
            }
            case SegmentKind::Sin2Fall: {
                const double c = std::cos(0.5 * pi * (t - t0) / (t1 - t0));
                return peak * c * c;
            }
        }
        return 0.0;
    }

    // ∫_a^b over [a,b] ⊆ [t0,t1]; sin² pieces use the exact antiderivative.
    double integral(double a, double b) const {
        switch (kind) {
            case SegmentKind::Zero: return 0.0;
            case SegmentKind::Const: return peak * (b - a);
            case SegmentKind::Sin2Rise:
            case SegmentKind::Sin2Fall: {
                const double len = t1 - t0;
                const double w = pi / len;  // sin²(w(t−t0)/... ) argument rate
                auto anti_rise = [&](double t) {
                    const double x = t - t0;
                    return 0.5 * x - std::sin(w * x) / (2.0 * w);
                };
                double val = anti_rise(b) - anti_rise(a);
                if (kind == SegmentKind::Sin2Fall) val = (b - a) - val;
                return peak * val;
            }
        }
        return 0.0;
    }
};

class PiecewiseEnvelope {
public:
    PiecewiseEnvelope() = default;

    void append(SegmentKind kind, double duration, double peak) {
        if (duration < 0.0)
            throw std::invalid_argument("envelope segment duration must be >= 0");
        if (duration == 0.0) return;
        const double t0 = end_time();
        segments_.push_back({t0, t0 + duration, kind, peak});
    }

    const std::vector<EnvelopeSegment>& segments() const { return segments_; }
    double end_time() const {
        return segments_.empty() ? 0.0 : segments_.back().t1;
    }

    double value_at(double t) const {
        if (segments_.empty() || t < segments_.front().t0 || t > end_time())
            return 0.0;
        return segments_[find_segment(t)].value_at(t);
    }

    double integral() const {
        double sum = 0.0;
        for (const auto& s : segments_) sum += s.integral(s.t0, s.t1);
        return sum;
    }

    double integral(double a, double b) const {
        double sum = 0.0;
        for (const auto& s : segments_) {
            const double lo = std::max(a, s.t0);
            const double hi = std::min(b, s.t1);
            if (hi > lo) sum += s.integral(lo, hi);
        }
        return sum;
    }

    double max_value() const {
        double m = 0.0;
        for (const auto& s : segments_) m = std::max(m, std::abs(s.peak));
        return m;
    }

    // Segment boundaries, for integrator step alignment.
    std::vector<double> breakpoints() const {
        std::vector<double> pts;
        for (const auto& s : segments_) pts.push_back(s.t0);
        if (!segments_.empty()) pts.push_back(segments_.back().t1);
        return pts;
    }

private:
    std::size_t find_segment(double t) const {
        std::size_t lo = 0, hi = segments_.size() - 1;
        while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (t < segments_[mid].t1)
                hi = mid;
            else
                lo = mid + 1;
        }
        return lo;
    }

    std::vector<EnvelopeSegment> segments_;
};

// sin² rise over [0,rise], flat plateau, mirrored fall; A(0) = A(end) = 0.
inline PiecewiseEnvelope sin2_envelope(double rise, double flat, double peak) {
    if (rise < 0.0 || flat < 0.0)
        throw std::invalid_argument("sin2_envelope: negative duration");
    if (peak < 0.0)
        throw std::invalid_argument("sin2_envelope: negative peak");
    PiecewiseEnvelope env;
    env.append(SegmentKind::Sin2Rise, rise, peak);
    env.append(SegmentKind::Const, flat, peak);
    env.append(SegmentKind::Sin2Fall, rise, peak);
    return env;
}

// Piecewise-constant phase: value i applies on [times[i-1], times[i]).
class PiecewisePhase {
public:
    PiecewisePhase() : values_{0.0} {}
    explicit PiecewisePhase(double value) : values_{value} {}

    void add_jump(double t, double new_value) {
        if (!jumps_.empty() && t <= jumps_.back())
            throw std::invalid_argument("phase jumps must be strictly ordered");
        jumps_.push_back(t);
        values_.push_back(new_value);
    }

    double value_at(double t) const {
        std::size_t i = 0;
        while (i < jumps_.size() && t >= jumps_[i]) ++i;
        return values_[i];
    }

    const std::vector<double>& jump_times() const { return jumps_; }
    const std::vector<double>& values() const { return values_; }

private:
    std::vector<double> jumps_;
    std::vector<double> values_;
};

}  // namespace msgate

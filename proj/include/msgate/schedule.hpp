// schedule.hpp — compile GateParams into concrete sideband/decoupling tones
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "msgate/envelope.hpp"
#include "msgate/params.hpp"
#include "msgate/walsh.hpp"

namespace msgate {

enum class ToneRole { RedSideband, BlueSideband, Decoupling, Dummy };

inline const char* tone_role_name(ToneRole r) {
    switch (r) {
        case ToneRole::RedSideband: return "red_sideband";
        case ToneRole::BlueSideband: return "blue_sideband";
        case ToneRole::Decoupling: return "decoupling";
        case ToneRole::Dummy: return "dummy";
    }
    return "?";
}

// Instantaneous global qubit rotation (used by the pi_y comparison mode).
struct InstantPulse {
    double time;
    char axis;     // 'x', 'y' or 'z'
    double angle;  // radians, per qubit
};

struct Tone {
    ToneRole role;
    double frequency = 0.0;  // rad/s (0 for the effective resonant tone)
    PiecewiseEnvelope amplitude;  // Rabi rate [rad/s]
    PiecewisePhase phase;         // radians
};

struct PulseSchedule {
    std::vector<Tone> tones;
    std::vector<InstantPulse> instant_pulses;
    double total_duration = 0.0;
    double gate_start = 0.0;  // start of the nominal t_g window
    double gate_end = 0.0;

    const Tone* find(ToneRole role) const {
        for (const auto& t : tones)
            if (t.role == role) return &t;
        return nullptr;
    }

    // Line-based text export: one row per envelope segment.
    void export_text(std::ostream& os) const {
        char buf[256];
        os << "# msgate pulse schedule v1\n";
        os << "# columns: tone_id role frequency_rad_s t_start t_end "
              "segment_kind peak_rad_s phase_rad\n";
        std::snprintf(buf, sizeof buf,
                      "# total_duration %.17g gate_window %.17g %.17g\n",
                      total_duration, gate_start, gate_end);
        os << buf;
        for (std::size_t i = 0; i < tones.size(); ++i) {
            const Tone& tone = tones[i];
            for (const auto& seg : tone.amplitude.segments()) {
                std::snprintf(buf, sizeof buf,
                              "%zu %s %.17g %.17g %.17g %s %.17g %.17g\n", i,
                              tone_role_name(tone.role), tone.frequency,
                              seg.t0, seg.t1, segment_kind_name(seg.kind),
                              seg.peak, tone.phase.value_at(seg.t0));
                os << buf;
            }
        }
        for (const auto& p : instant_pulses) {
            std::snprintf(buf, sizeof buf, "pulse %c %.17g %.17g\n", p.axis,
                          p.time, p.angle);
            os << buf;
        }
    }

    std::string export_text() const {
        std::ostringstream ss;
        export_text(ss);
        return ss.str();
    }
};

namespace detail {

// Decoupling tone: on/off ramps of length flip_ramp at the window edges and a
// symmetric dip to zero around each Walsh sign change (half flip_ramp falling,
// phase change at the zero crossing, half flip_ramp rising).
inline Tone build_dd_tone(const GateParams& p, double gate_start) {
    Tone tone;
    tone.role = ToneRole::Decoupling;
    tone.frequency = p.qubit_freq;  // resonant carrier

    double dd_rabi = p.dd_rabi;
    if (p.dd_mode == DdMode::Calibrated) {
        // snap to the nearest Omega_dd whose integrated rotation is 2·M·pi;
        // the on/off ramps remove one flip_ramp_time of pulse area
        const double area_time = p.duration - p.flip_ramp_time;
        const double m =
            std::max(1.0, std::round(p.dd_rabi * area_time / two_pi));
        dd_rabi = two_pi * m / area_time;
    }

    std::vector<double> flips;
    if (p.dd_mode == DdMode::Walsh && p.walsh_order > 0) {
        WalshSequence seq(p.walsh_order, p.duration);
        flips = seq.switch_times();  // relative to gate_start
    }

    const double fr = p.flip_ramp_time;
    if (fr > 0.0 && !flips.empty()) {
        double prev = 0.0;
        for (double f : flips) {
            if (f - prev < fr)
                throw std::invalid_argument(
                    "flip-ramp windows overlap: walsh order too high for this "
                    "gate duration");
            prev = f;
        }
        if (flips.front() < 1.5 * fr || p.duration - flips.back() < 1.5 * fr)
            throw std::invalid_argument(
                "flip ramp collides with the decoupling on/off ramp");
    }

    auto& amp = tone.amplitude;
    amp.append(SegmentKind::Zero, gate_start, 0.0);
    double cursor = 0.0;  // time within the gate window
    if (fr > 0.0) {
        amp.append(SegmentKind::Sin2Rise, fr, dd_rabi);
        cursor = fr;
    }
    int sign = +1;
    for (double f : flips) {
        if (fr > 0.0) {
            amp.append(SegmentKind::Const, f - 0.5 * fr - cursor, dd_rabi);
            amp.append(SegmentKind::Sin2Fall, 0.5 * fr, dd_rabi);
            amp.append(SegmentKind::Sin2Rise, 0.5 * fr, dd_rabi);
            cursor = f + 0.5 * fr;
        } else {
            amp.append(SegmentKind::Const, f - cursor, dd_rabi);
            cursor = f;
        }
        sign = -sign;
        tone.phase.add_jump(gate_start + f, sign > 0 ? 0.0 : pi);
    }
    if (fr > 0.0) {
        amp.append(SegmentKind::Const, p.duration - fr - cursor, dd_rabi);
        amp.append(SegmentKind::Sin2Fall, fr, dd_rabi);
    } else {
        amp.append(SegmentKind::Const, p.duration - cursor, dd_rabi);
    }
    return tone;
}

}  // namespace detail

// Two sideband tones at omega_q ± (omega_m + delta_g) with equal amplitudes
// and sin² ramps prepended/appended outside the nominal t_g window, plus the
// optional decoupling tone. Deterministic: equal params give equal schedules.
inline PulseSchedule build_gate_schedule(const GateParams& p,
                                         const ModeParams& mode,
                                         bool dd_enabled) {
    p.validate();
    (void)mode;

    PulseSchedule sched;
    const double tau = p.ramp_time;
    sched.gate_start = tau;
    sched.gate_end = tau + p.duration;
    sched.total_duration = p.duration + 2.0 * tau;

    const double sideband_det = p.mode_freq + p.detuning;
    for (int sb = 0; sb < 2; ++sb) {
        Tone tone;
        tone.role = sb == 0 ? ToneRole::RedSideband : ToneRole::BlueSideband;
        tone.frequency =
            p.qubit_freq + (sb == 0 ? -sideband_det : +sideband_det);
        tone.amplitude = sin2_envelope(tau, p.duration, p.gate_rabi);
        sched.tones.push_back(std::move(tone));
    }

    if (dd_enabled && p.dd_enabled()) {
        if (p.dd_mode == DdMode::PiY) {
            if (p.loops % 2 != 0)
                throw std::invalid_argument(
                    "pi_y mode needs an even loop count so the half-gate "
                    "closes a phase-space loop");
            Tone tone;
            tone.role = ToneRole::Decoupling;
            tone.frequency = p.qubit_freq;
            const double fr = p.flip_ramp_time;
            tone.amplitude.append(SegmentKind::Zero, sched.gate_start, 0.0);
            tone.amplitude.append(SegmentKind::Sin2Rise, fr, p.dd_rabi);
            tone.amplitude.append(SegmentKind::Const, p.duration - 2.0 * fr,
                                  p.dd_rabi);
            tone.amplitude.append(SegmentKind::Sin2Fall, fr, p.dd_rabi);
            sched.tones.push_back(std::move(tone));
            sched.instant_pulses.push_back(
                {sched.gate_start + 0.5 * p.duration, 'y', pi});
        } else {
            sched.tones.push_back(detail::build_dd_tone(p, sched.gate_start));
        }
        // the commutation argument needs flips clear of the sideband ramps
        for (const Tone& t : sched.tones) {
            if (t.role != ToneRole::Decoupling) continue;
            for (double jump : t.phase.jump_times())
                if (jump < sched.gate_start || jump > sched.gate_end)
                    throw std::logic_error(
                        "decoupling flip outside the gate window");
        }
    }
    return sched;
}

// Residual single-qubit rotation angle about x driven by the decoupling tone:
// ∫ s(t)·Omega_dd(t) dt with s = cos(phase). Envelope segments are integrated
// in closed form; the optional drift polynomial is integrated with
// Gauss-Legendre panels, exact for polynomial × constant segments.
inline double net_dd_rotation(const PulseSchedule& sched,
                              const GateParams& params) {
    const Tone* dd = sched.find(ToneRole::Decoupling);
    if (!dd)
        throw std::invalid_argument("schedule has no decoupling tone");

    const bool with_drift =
        params.dd_drift_a1 != 0.0 || params.dd_drift_a2 != 0.0;

    // a pi_y pulse conjugates S_x, flipping the sense of later rotation
    auto pulse_sign = [&](double t) {
        int s = +1;
        for (const auto& ip : sched.instant_pulses)
            if (ip.axis == 'y' && ip.time <= t) s = -s;
        return s;
    };

    double angle = 0.0;
    for (const auto& seg : dd->amplitude.segments()) {
        // split at phase jumps / instant pulses inside the segment (jumps sit
        // at segment boundaries in practice)
        std::vector<double> cuts{seg.t0, seg.t1};
        for (double j : dd->phase.jump_times())
            if (j > seg.t0 && j < seg.t1) cuts.push_back(j);
        for (const auto& ip : sched.instant_pulses)
            if (ip.time > seg.t0 && ip.time < seg.t1) cuts.push_back(ip.time);
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            const double a = cuts[i], b = cuts[i + 1];
            const double sgn = std::cos(dd->phase.value_at(0.5 * (a + b))) *
                               pulse_sign(0.5 * (a + b));
            if (!with_drift) {
                angle += sgn * seg.integral(a, b);
            } else {
                // 20-point Gauss-Legendre per piece
                static const double gl_x[10] = {
                    0.0765265211334973, 0.2277858511416451, 0.3737060887154195,
                    0.5108670019508271, 0.6360536807265150, 0.7463319064601508,
                    0.8391169718222188, 0.9122344282513259, 0.9639719272779138,
                    0.9931285991850949};
                static const double gl_w[10] = {
                    0.1527533871307258, 0.1491729864726037, 0.1420961093183820,
                    0.1316886384491766, 0.1181945319615184, 0.1019301198172404,
                    0.0832767415767048, 0.0626720483341091, 0.0406014298003869,
                    0.0176140071391521};
                const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
                double sum = 0.0;
                for (int k = 0; k < 10; ++k) {
                    for (double s : {-gl_x[k], gl_x[k]}) {
                        const double t = mid + half * s;
                        const double x =
                            (t - sched.gate_start) / params.duration;
                        sum += gl_w[k] * seg.value_at(t) *
                               params.dd_drift_factor(x);
                    }
                }
                angle += sgn * half * sum;
            }
        }
    }
    return angle;
}

// Moment-integral route for polynomial drive drifts (flip ramps ignored):
// Omega_0 ∫ s(t)·(1 + a1·t/T + a2·(t/T)²) dt over the Walsh window.
inline double net_dd_rotation_poly(const WalshSequence& seq, double dd_rabi,
                                   double a1, double a2) {
    const double T = seq.duration();
    return dd_rabi * (seq.moment_integral(0) + a1 / T * seq.moment_integral(1) +
                      a2 / (T * T) * seq.moment_integral(2));
}

}  // namespace msgate

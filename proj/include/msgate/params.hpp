// params.hpp — gate and motional-mode parameter sets, closure conditions,
// and the operating points used in the measurements this code models
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "msgate/constants.hpp"
#include "msgate/walsh.hpp"

namespace msgate {

// How the decoupling tone avoids a net qubit rotation at the end of the gate.
enum class DdMode {
    Off,         // no decoupling tone
    Walsh,       // sign of the tone follows a Walsh sequence
    PiY,         // constant tone + pi_y pulse at the half-gate loop closure
    Calibrated,  // Omega_dd snapped to the nearest 2·M·pi / t_g
};

inline const char* dd_mode_name(DdMode m) {
    switch (m) {
        case DdMode::Off: return "off";
        case DdMode::Walsh: return "walsh";
        case DdMode::PiY: return "pi_y";
        case DdMode::Calibrated: return "calibrated";
    }
    return "?";
}

inline DdMode dd_mode_from_name(const std::string& s) {
    if (s == "off") return DdMode::Off;
    if (s == "walsh") return DdMode::Walsh;
    if (s == "pi_y") return DdMode::PiY;
    if (s == "calibrated") return DdMode::Calibrated;
    throw std::invalid_argument("unknown dd_mode '" + s +
                                "' (expected off|walsh|pi_y|calibrated)");
}

struct GateParams {
    double gate_rabi = 0.0;       // Omega_g [rad/s]
    int loops = 1;                // N
    double detuning = 0.0;        // delta_g [rad/s]
    double duration = 0.0;        // t_g [s]
    double mode_freq = 0.0;       // omega_m [rad/s]
    double carrier_rabi = 0.0;    // Omega [rad/s], lab model only
    double qubit_freq = 0.0;      // omega_q [rad/s], lab model only
    double zeeman_shift = 0.0;    // Delta [rad/s], signed miscalibration
    double dd_rabi = 0.0;         // Omega_dd [rad/s]
    int walsh_order = 0;
    DdMode dd_mode = DdMode::Walsh;
    double ramp_time = 0.0;       // sideband sin² rise/fall [s]
    double flip_ramp_time = 0.0;  // decoupling sign-change ramp [s]
    int fock_cutoff = 12;         // n_max

    // error-injection / sweep axes
    double motional_offset = 0.0;  // added to delta_g during evolution [rad/s]
    double dd_drift_a1 = 0.0;      // Omega_dd(t) = Omega_dd·(1 + a1·t/t_g + a2·(t/t_g)²)
    double dd_drift_a2 = 0.0;
    double initial_nbar = 0.0;     // thermal occupation of the gate mode

    void validate() const {
        if (fock_cutoff < 2)
            throw std::invalid_argument("fock_cutoff must be >= 2");
        if (gate_rabi <= 0.0)
            throw std::invalid_argument("gate_rabi must be positive");
        if (loops < 1) throw std::invalid_argument("loops must be >= 1");
        if (detuning <= 0.0)
            throw std::invalid_argument("detuning must be positive");
        if (duration <= 0.0)
            throw std::invalid_argument("duration must be positive");
        if (mode_freq <= 0.0)
            throw std::invalid_argument("mode_freq must be positive");
        if (carrier_rabi < 0.0 || qubit_freq < 0.0)
            throw std::invalid_argument(
                "carrier_rabi and qubit_freq must be >= 0");
        if (dd_rabi < 0.0)
            throw std::invalid_argument("dd_rabi must be >= 0");
        if (ramp_time < 0.0 || flip_ramp_time < 0.0)
            throw std::invalid_argument("ramp times must be >= 0");
        if (initial_nbar < 0.0)
            throw std::invalid_argument("initial_nbar must be >= 0");
        if (!walsh_order_supported(walsh_order))
            throw std::invalid_argument(
                "walsh order " + std::to_string(walsh_order) +
                " not supported; allowed orders are 0, 1, 3, 7, 15");
    }

    bool dd_enabled() const { return dd_mode != DdMode::Off && dd_rabi > 0.0; }

    // Omega_dd drift profile, x = t/t_g in [0,1].
    double dd_drift_factor(double x) const {
        return 1.0 + dd_drift_a1 * x + dd_drift_a2 * x * x;
    }
};

struct Closure {
    double detuning;  // delta_g = 2·Omega_g·sqrt(N)
    double duration;  // t_g = 2·pi·N / delta_g
};

// 2·Omega_g·sqrt(N) = delta_g and t_g·delta_g = 2·pi·N; substituted
// algebraically so both identities hold exactly.
inline Closure solve_closure(double gate_rabi, int loops) {
    if (gate_rabi <= 0.0)
        throw std::invalid_argument("solve_closure: gate_rabi must be positive");
    if (loops < 1)
        throw std::invalid_argument("solve_closure: loops must be >= 1");
    Closure c;
    c.detuning = 2.0 * gate_rabi * std::sqrt(static_cast<double>(loops));
    c.duration = two_pi * loops / c.detuning;
    return c;
}

inline bool closure_satisfied(const GateParams& p, double rel_tol = 1e-12) {
    const double want_det = 2.0 * p.gate_rabi * std::sqrt(double(p.loops));
    const double ok_det = std::abs(p.detuning - want_det) <= rel_tol * want_det;
    const double ok_dur =
        std::abs(p.duration * p.detuning - two_pi * p.loops) <=
        rel_tol * two_pi * p.loops;
    return ok_det && ok_dur;
}

inline void apply_closure(GateParams& p) {
    const Closure c = solve_closure(p.gate_rabi, p.loops);
    p.detuning = c.detuning;
    p.duration = c.duration;
}

struct ModeParams {
    double ion_mass = mass_ca43;             // kg
    double mode_freq = 0.0;                  // omega_m [rad/s]
    double zpf = 0.0;                        // x_zpf [m]
    double eigenvector_factor = 1.0 / std::sqrt(2.0);  // two-ion rocking mode

    static double zpf_from(double mass, double omega_m) {
        return std::sqrt(hbar / (2.0 * mass * omega_m));
    }

    static ModeParams rocking_mode(double omega_m, double mass = mass_ca43) {
        ModeParams m;
        m.ion_mass = mass;
        m.mode_freq = omega_m;
        m.zpf = zpf_from(mass, omega_m);
        return m;
    }

    void validate(double rel_tol = 1e-12) const {
        if (ion_mass <= 0.0 || mode_freq <= 0.0)
            throw std::invalid_argument("mode params must be positive");
        const double want = zpf_from(ion_mass, mode_freq);
        if (std::abs(zpf - want) > rel_tol * want)
            throw std::invalid_argument(
                "stored x_zpf inconsistent with sqrt(hbar/2·m·omega_m)");
    }

    // Field gradient reproducing the effective gate Rabi rate Omega_g; the
    // mode-eigenvector factor is part of the spin-motion coupling, so it
    // divides out here to keep the lab and interaction models consistent.
    double gradient_for(double gate_rabi) const {
        return gate_rabi / (zpf * eigenvector_factor);
    }
};

// Operating points from the measurements this simulator models.
// Fast gates: N = 1 (154 us) and N = 2 (217 us), no decoupling.
inline GateParams fast_gate_preset(int loops = 1) {
    GateParams p;
    p.gate_rabi = khz_to_rad(3.3);
    p.loops = loops;
    apply_closure(p);
    p.mode_freq = mhz_to_rad(4.0);
    p.carrier_rabi = mhz_to_rad(1.81);
    p.ramp_time = us_to_s(2.8);
    p.dd_mode = DdMode::Off;
    p.fock_cutoff = 12;
    return p;
}

// Slow gate: N = 2 (331 us) with the Walsh-7 modulated decoupling tone.
inline GateParams slow_dd_gate_preset() {
    GateParams p;
    p.gate_rabi = khz_to_rad(2.1);
    p.loops = 2;
    apply_closure(p);
    p.mode_freq = mhz_to_rad(5.6);
    p.dd_rabi = khz_to_rad(180.0);
    p.walsh_order = 7;
    p.dd_mode = DdMode::Walsh;
    p.ramp_time = us_to_s(1.0);
    p.flip_ramp_time = us_to_s(0.24);
    p.fock_cutoff = 12;
    return p;
}

// a.c. Zeeman shifts calibrated in the experiment, kept as references for
// injecting miscalibrations (zeeman_shift itself defaults to 0 = calibrated).
inline constexpr double fast_gate_ac_zeeman_ref() { return khz_to_rad(46.0); }
inline constexpr double slow_gate_ac_zeeman_ref() { return khz_to_rad(26.0); }

}  // namespace msgate

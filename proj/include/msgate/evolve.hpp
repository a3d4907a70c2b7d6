// evolve.hpp — evolve a state through a PulseSchedule in the interaction
// picture (Eq.-2-level model) or the lab frame (opt-in, expensive)
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "msgate/hamiltonian.hpp"
#include "msgate/integrator.hpp"
#include "msgate/operators.hpp"
#include "msgate/schedule.hpp"

namespace msgate {

struct EvolveResult {
    VectorXcd state;
    bool leakage_flag = false;       // population in the top two Fock levels
    double max_top_population = 0.0; // worst value along the trajectory
    IntegrationStats stats;
};

namespace detail {

inline double top_fock_population(const VectorXcd& psi, int n_max) {
    double pop = 0.0;
    for (int s = 0; s < 4; ++s)
        for (int n = n_max - 2; n < n_max; ++n)
            pop += std::norm(psi(s * n_max + n));
    return pop;
}

// Signed decoupling amplitude s(t)·Omega_dd(t) from the tone's envelope and
// 0/pi phase track, including any injected drive drift.
inline double dd_signed_amplitude(const Tone& dd, double t,
                                  const GateParams& p, double gate_start) {
    const double amp = dd.amplitude.value_at(t);
    if (amp == 0.0) return 0.0;
    const double x = (t - gate_start) / p.duration;
    return amp * std::cos(dd.phase.value_at(t)) * p.dd_drift_factor(x);
}

}  // namespace detail

// Solves i·dpsi/dt = H(t)·psi over the whole schedule. Deterministic for a
// fixed tolerance; leakage into the top two Fock levels is tracked along the
// trajectory and flagged above 1e-6 (raise n_max when that happens).
inline EvolveResult evolve(const VectorXcd& psi0, const PulseSchedule& sched,
                           const GateParams& params, const OperatorSet& ops,
                           double tolerance = 1e-10) {
    if (std::abs(psi0.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("evolve: initial state is not normalized");
    if (!(tolerance > 0.0))
        throw std::invalid_argument("evolve: tolerance must be positive");
    if (psi0.size() != ops.dim())
        throw std::invalid_argument("evolve: state/operator dimension mismatch");

    const Tone* red = sched.find(ToneRole::RedSideband);
    const Tone* dd = sched.find(ToneRole::Decoupling);
    const double delta = params.detuning + params.motional_offset;
    const double t_origin = sched.gate_start;

    // H(t) = env(t)/2 · (SA·e^{−i d (t−t0)} + SA†·e^{+i d (t−t0)})
    //      + s(t)·Omega_dd(t)/2 · S_x+ + Delta/2 · S_z
    const MatrixXcd sa = ops.sx_minus * ops.a;
    const MatrixXcd sa_dag = sa.adjoint();
    const MatrixXcd& sxp = ops.sx_plus;
    const Eigen::VectorXd sz_diag = ops.sz.diagonal().real();

    auto deriv = [&](double t, const VectorXcd& psi) -> VectorXcd {
        VectorXcd h_psi = VectorXcd::Zero(psi.size());
        if (red) {
            const double env = red->amplitude.value_at(t);
            if (env != 0.0) {
                const cplx ph = std::exp(cplx(0.0, delta * (t - t_origin)));
                h_psi.noalias() += (0.5 * env * std::conj(ph)) * (sa * psi);
                h_psi.noalias() += (0.5 * env * ph) * (sa_dag * psi);
            }
        }
        if (dd) {
            const double s_amp =
                detail::dd_signed_amplitude(*dd, t, params, t_origin);
            if (s_amp != 0.0) h_psi.noalias() += (0.5 * s_amp) * (sxp * psi);
        }
        if (params.zeeman_shift != 0.0)
            h_psi.array() +=
                (0.5 * params.zeeman_shift) * sz_diag.array() * psi.array();
        return cplx(0.0, -1.0) * h_psi;
    };

    // break times: envelope segment boundaries, phase flips, instant pulses
    std::vector<double> breaks;
    for (const Tone& tone : sched.tones) {
        for (double b : tone.amplitude.breakpoints()) breaks.push_back(b);
        for (double b : tone.phase.jump_times()) breaks.push_back(b);
    }
    for (const auto& ip : sched.instant_pulses) breaks.push_back(ip.time);
    std::sort(breaks.begin(), breaks.end());

    EvolveResult result;
    auto observer = [&](double, const VectorXcd& psi) {
        result.max_top_population = std::max(
            result.max_top_population, detail::top_fock_population(psi, ops.n_max));
    };

    VectorXcd psi = psi0;
    double t_cursor = 0.0;
    auto pulses = sched.instant_pulses;
    std::sort(pulses.begin(), pulses.end(),
              [](const InstantPulse& a, const InstantPulse& b) {
                  return a.time < b.time;
              });
    for (const auto& ip : pulses) {
        psi = integrate_schrodinger(psi, t_cursor, ip.time, tolerance, deriv,
                                    breaks, result.stats, observer);
        psi = global_qubit_rotation(ip.axis, ip.angle, ops.n_max) * psi;
        t_cursor = ip.time;
    }
    psi = integrate_schrodinger(psi, t_cursor, sched.total_duration, tolerance,
                                deriv, breaks, result.stats, observer);

    result.state = std::move(psi);
    result.leakage_flag = result.max_top_population > 1e-6;
    return result;
}

// Lab-frame evolution of the same schedule (both sideband tones as real
// cos(w t) drives with their sin² envelopes). Only used for cross-checks;
// carrier-frequency resolution makes it orders of magnitude slower.
inline EvolveResult evolve_lab(const VectorXcd& psi0,
                               const PulseSchedule& sched,
                               const GateParams& params,
                               const ModeParams& mode, const OperatorSet& ops,
                               double tolerance = 1e-10) {
    if (std::abs(psi0.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("evolve: initial state is not normalized");

    const Tone* red = sched.find(ToneRole::RedSideband);
    const Tone* blue = sched.find(ToneRole::BlueSideband);
    if (!red || !blue)
        throw std::invalid_argument("lab evolution needs both sideband tones");
    if (params.qubit_freq <= 0.0)
        throw std::invalid_argument(
            "lab evolution needs qubit_freq_mhz set (the tones sit at "
            "omega_q +- (omega_m + delta))");

    const double grad = mode.gradient_for(params.gate_rabi);
    const double spin_motion = mode.eigenvector_factor * grad * mode.zpf;
    const double rabi_scale = params.carrier_rabi / params.gate_rabi;

    const MatrixXcd x_sm = (ops.a + ops.a_dag) * ops.sx_minus;
    const Eigen::VectorXd h0_diag =
        (params.mode_freq * ops.number + 0.5 * params.qubit_freq * ops.sz)
            .diagonal()
            .real();

    auto deriv = [&](double t, const VectorXcd& psi) -> VectorXcd {
        VectorXcd h_psi = h0_diag.array() * psi.array();
        const double env_red = red->amplitude.value_at(t);
        const double env_blue = blue->amplitude.value_at(t);
        const double drive = env_red * std::cos(red->frequency * t) +
                             env_blue * std::cos(blue->frequency * t);
        if (drive != 0.0) {
            // envelopes carry the gate-rate scale; rescale to the carrier Rabi
            h_psi.noalias() +=
                (drive * rabi_scale) * (ops.sx_plus * psi);
            h_psi.noalias() +=
                (drive * spin_motion / params.gate_rabi) * (x_sm * psi);
        }
        return cplx(0.0, -1.0) * h_psi;
    };

    std::vector<double> breaks;
    for (const Tone& tone : sched.tones)
        for (double b : tone.amplitude.breakpoints()) breaks.push_back(b);
    std::sort(breaks.begin(), breaks.end());

    EvolveResult result;
    auto observer = [&](double, const VectorXcd& psi) {
        result.max_top_population = std::max(
            result.max_top_population, detail::top_fock_population(psi, ops.n_max));
    };
    result.state = integrate_schrodinger(psi0, 0.0, sched.total_duration,
                                         tolerance, deriv, breaks,
                                         result.stats, observer);
    result.leakage_flag = result.max_top_population > 1e-6;
    return result;
}

}  // namespace msgate

// hamiltonian.hpp — interaction-picture MS Hamiltonian (the default model)
// and the lab-frame two-tone Rabi Hamiltonian (opt-in, expensive)
#pragma once

#include <stdexcept>

#include "msgate/envelope.hpp"
#include "msgate/operators.hpp"
#include "msgate/params.hpp"

namespace msgate {

// H(t)/hbar = (env(t)/2)·S_x−·(a·e^{−i·delta·t} + a†·e^{+i·delta·t})
//           + dd_sign·(Omega_dd(t)/2)·S_x+ + (Delta/2)·S_z
// with the detuning phase referenced to the start of the gate window.
inline MatrixXcd build_ms_hamiltonian(double t, const GateParams& p,
                                      const OperatorSet& ops,
                                      const PiecewiseEnvelope& envelope,
                                      int dd_sign, double t_phase_origin = 0.0) {
    const double delta = p.detuning + p.motional_offset;
    const cplx phase = std::exp(cplx(0.0, delta * (t - t_phase_origin)));
    const double env = envelope.value_at(t);

    MatrixXcd h = (0.5 * env) *
                  (ops.sx_minus * (ops.a * std::conj(phase) + ops.a_dag * phase));
    if (dd_sign != 0 && p.dd_rabi != 0.0) {
        const double x = (t - t_phase_origin) / p.duration;
        h += (0.5 * dd_sign * p.dd_rabi * p.dd_drift_factor(x)) * ops.sx_plus;
    }
    if (p.zeeman_shift != 0.0) h += (0.5 * p.zeeman_shift) * ops.sz;

    if (!h.isApprox(h.adjoint(), 1e-12))
        throw std::logic_error("MS Hamiltonian is not Hermitian");
    return h;
}

// Lab-frame Rabi Hamiltonian, both sideband tones at omega_q ± (omega_m +
// delta_g):
// H/hbar = omega_m·a†a + (omega_q/2)·S_z
//        + [Omega·S_x+ + f·(dOmega/dx)·x_zpf·(a + a†)·S_x−]·sum_tones cos(w t)
// The gradient is set so the rotating-wave limit reproduces the gate rate
// Omega_g of the interaction-picture model (mode eigenvector factor f folded
// into the calibration).
inline MatrixXcd build_lab_hamiltonian(double t, const GateParams& p,
                                       const ModeParams& mode,
                                       const OperatorSet& ops) {
    if (p.qubit_freq <= 0.0 || p.mode_freq <= 0.0 || p.carrier_rabi < 0.0)
        throw std::invalid_argument(
            "lab model needs qubit_freq and mode_freq set");

    const double grad = mode.gradient_for(p.gate_rabi);
    const double spin_motion =
        mode.eigenvector_factor * grad * mode.zpf;  // = Omega_g by construction
    const double w_red = p.qubit_freq - (p.mode_freq + p.detuning);
    const double w_blue = p.qubit_freq + (p.mode_freq + p.detuning);
    const double drive = std::cos(w_red * t) + std::cos(w_blue * t);

    MatrixXcd h = p.mode_freq * ops.number + (0.5 * p.qubit_freq) * ops.sz;
    h += drive * (p.carrier_rabi * ops.sx_plus +
                  spin_motion * ((ops.a + ops.a_dag) * ops.sx_minus));
    if (!h.isApprox(h.adjoint(), 1e-12))
        throw std::logic_error("lab Hamiltonian is not Hermitian");
    return h;
}

// Interaction picture of the lab Hamiltonian with respect to
// H0 = omega_m·a†a + (omega_q/2)·S_z; averaging this over the fast periods
// leaves the MS Hamiltonian.
inline MatrixXcd lab_interaction_picture(double t, const GateParams& p,
                                         const ModeParams& mode,
                                         const OperatorSet& ops) {
    const MatrixXcd h_lab = build_lab_hamiltonian(t, p, mode, ops);
    const MatrixXcd h0 =
        p.mode_freq * ops.number + (0.5 * p.qubit_freq) * ops.sz;
    // H0 is diagonal: exponentiate elementwise
    VectorXcd u0 = VectorXcd::Zero(ops.dim());
    for (int i = 0; i < ops.dim(); ++i)
        u0(i) = std::exp(cplx(0.0, -h0(i, i).real() * t));
    return u0.conjugate().asDiagonal() * (h_lab - h0) * u0.asDiagonal();
}

// 2.8 us ramps against 2·pi/sqrt(omega_m² + Omega²): adiabatic suppression of
// the off-resonantly driven qubit rotation.
inline double adiabatic_ramp_ratio(const GateParams& p) {
    const double w_eff =
        std::sqrt(p.mode_freq * p.mode_freq + p.carrier_rabi * p.carrier_rabi);
    return p.ramp_time / (two_pi / w_eff);
}

}  // namespace msgate

// ms_analytic.hpp — closed-form MS propagator, the independent oracle for the
// numerical evolution (rectangular envelope, no decoupling, no Zeeman error)
//
// U(t) = D(alpha(t)·S_x−) · exp(i·Phi(t)·S_x−²)
//   alpha(t) = (Omega_g / 2 delta)·(1 − e^{i delta t})
//   Phi(t)   = (Omega_g / 2 delta)²·(delta·t − sin(delta·t))
// Conventions fixed against direct numerical exponentiation (second-order
// Magnus terminates exactly for this Hamiltonian).
#pragma once

#include <Eigen/Eigenvalues>

#include "msgate/operators.hpp"
#include "msgate/params.hpp"

namespace msgate {

struct MsPhases {
    cplx alpha;
    double phi;
};

inline MsPhases ms_analytic_phases(double gate_rabi, double detuning,
                                   double t) {
    const double r = 0.5 * gate_rabi / detuning;
    MsPhases out;
    out.alpha = r * (1.0 - std::exp(cplx(0.0, detuning * t)));
    out.phi = r * r * (detuning * t - std::sin(detuning * t));
    return out;
}

// exp(M) for anti-Hermitian M via eigendecomposition of i·M.
inline MatrixXcd exp_anti_hermitian(const MatrixXcd& m) {
    const MatrixXcd h = cplx(0.0, 1.0) * m;  // Hermitian
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h);
    const auto& lambda = es.eigenvalues();
    MatrixXcd diag = MatrixXcd::Zero(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < lambda.size(); ++i)
        diag(i, i) = std::exp(cplx(0.0, -lambda(i)));
    return es.eigenvectors() * diag * es.eigenvectors().adjoint();
}

inline MatrixXcd ms_analytic_propagator(const GateParams& p, double t,
                                        const OperatorSet& ops) {
    if (p.ramp_time != 0.0)
        throw std::invalid_argument(
            "analytic propagator requires a rectangular envelope");
    if (p.zeeman_shift != 0.0 || p.dd_enabled() || p.motional_offset != 0.0)
        throw std::invalid_argument(
            "analytic propagator is only valid for the bare MS interaction");

    const MsPhases ph = ms_analytic_phases(p.gate_rabi, p.detuning, t);
    const MatrixXcd displace = ph.alpha * (ops.sx_minus * ops.a_dag) -
                               std::conj(ph.alpha) * (ops.sx_minus * ops.a);
    const MatrixXcd sxm2 = ops.sx_minus * ops.sx_minus;
    return exp_anti_hermitian(displace) *
           exp_anti_hermitian(cplx(0.0, 1.0) * ph.phi * sxm2);
}

// Geometric phase at loop closure: pi/8, the maximally entangling value.
inline double ms_closure_phase(int loops) {
    (void)loops;
    return pi / 8.0;
}

}  // namespace msgate

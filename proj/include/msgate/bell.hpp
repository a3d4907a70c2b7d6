// bell.hpp — Bell-state fidelity of simulated states (motional mode traced out)
#pragma once

#include "msgate/operators.hpp"

namespace msgate {

// Two-qubit reduced density matrix, Fock index traced out.
inline Matrix4cd reduce_to_qubits(const VectorXcd& psi, int n_max) {
    Matrix4cd rho = Matrix4cd::Zero();
    for (int s = 0; s < 4; ++s)
        for (int r = 0; r < 4; ++r)
            for (int n = 0; n < n_max; ++n)
                rho(s, r) += psi(s * n_max + n) * std::conj(psi(r * n_max + n));
    return rho;
}

// max over gamma of ⟨Bell(gamma)|rho|Bell(gamma)⟩ with
// Bell(gamma) = (|00⟩ + e^{i gamma}|11⟩)/sqrt(2):
// (rho_00,00 + rho_11,11)/2 + |rho_00,11|.
inline double bell_fidelity(const Matrix4cd& rho_2q) {
    return 0.5 * (rho_2q(0, 0).real() + rho_2q(3, 3).real()) +
           std::abs(rho_2q(0, 3));
}

inline double bell_fidelity_exact(const VectorXcd& psi, int n_max) {
    if (std::abs(psi.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("bell_fidelity_exact: state not normalized");
    return bell_fidelity(reduce_to_qubits(psi, n_max));
}

inline double bell_error_exact(const VectorXcd& psi, int n_max) {
    return 1.0 - bell_fidelity_exact(psi, n_max);
}

// Boltzmann weights for a thermal gate-mode occupation, truncated at n_max.
inline std::vector<double> thermal_weights(double nbar, int n_max) {
    std::vector<double> w(n_max, 0.0);
    if (nbar <= 0.0) {
        w[0] = 1.0;
        return w;
    }
    double total = 0.0;
    for (int n = 0; n < n_max; ++n) {
        w[n] = std::pow(nbar / (1.0 + nbar), n) / (1.0 + nbar);
        total += w[n];
    }
    for (double& x : w) x /= total;
    return w;
}

}  // namespace msgate

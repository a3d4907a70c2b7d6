// operators.hpp — spin and motional operators on qubit ⊗ qubit ⊗ Fock(n_max)
//
// Basis convention: index = (q1·2 + q2)·n_max + n, qubit-major, Fock-minor;
// q = 0 is the sigma_z = +1 state, so |00,n=0⟩ is the first basis vector.
#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "msgate/constants.hpp"

namespace msgate {

using Eigen::Matrix2cd;
using Eigen::Matrix4cd;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

inline MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b) {
    MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
                a(i, j) * b;
    return out;
}

inline Matrix2cd pauli_x() {
    Matrix2cd m;
    m << 0, 1, 1, 0;
    return m;
}
inline Matrix2cd pauli_y() {
    Matrix2cd m;
    m << 0, cplx(0, -1), cplx(0, 1), 0;
    return m;
}
inline Matrix2cd pauli_z() {
    Matrix2cd m;
    m << 1, 0, 0, -1;
    return m;
}

// sigma rotated into the equatorial direction phi: cos(phi)·x + sin(phi)·y
inline Matrix2cd pauli_phi(double phi) {
    return std::cos(phi) * pauli_x() + std::sin(phi) * pauli_y();
}

struct OperatorSet {
    int n_max = 0;  // Fock cutoff; full dimension is 4·n_max

    MatrixXcd sx_plus;   // sigma_x1 + sigma_x2
    MatrixXcd sx_minus;  // sigma_x1 − sigma_x2
    MatrixXcd sz;        // sigma_z1 + sigma_z2
    MatrixXcd a;         // mode annihilation
    MatrixXcd a_dag;
    MatrixXcd number;
    MatrixXcd id;

    int dim() const { return 4 * n_max; }

    static OperatorSet build(int n_max) {
        if (n_max < 2) throw std::invalid_argument("fock cutoff must be >= 2");
        OperatorSet ops;
        ops.n_max = n_max;

        MatrixXcd a_f = MatrixXcd::Zero(n_max, n_max);
        for (int n = 1; n < n_max; ++n) a_f(n - 1, n) = std::sqrt(double(n));
        const MatrixXcd id_f = MatrixXcd::Identity(n_max, n_max);
        const MatrixXcd id2 = MatrixXcd::Identity(2, 2);

        auto spin_full = [&](const Matrix2cd& s1, const Matrix2cd& s2) {
            return kron(kron(MatrixXcd(s1), MatrixXcd(s2)), id_f);
        };
        const MatrixXcd x1 = spin_full(pauli_x(), id2);
        const MatrixXcd x2 = spin_full(id2, pauli_x());
        ops.sx_plus = x1 + x2;
        ops.sx_minus = x1 - x2;
        ops.sz = spin_full(pauli_z(), id2) + spin_full(id2, pauli_z());
        ops.a = kron(MatrixXcd(MatrixXcd::Identity(4, 4)), a_f);
        ops.a_dag = ops.a.adjoint();
        ops.number = ops.a_dag * ops.a;
        ops.id = MatrixXcd::Identity(ops.dim(), ops.dim());
        return ops;
    }
};

// |q1 q2⟩ ⊗ |n⟩ basis vector
inline VectorXcd basis_state(int q1, int q2, int n, int n_max) {
    if (q1 < 0 || q1 > 1 || q2 < 0 || q2 > 1 || n < 0 || n >= n_max)
        throw std::out_of_range("basis_state: index out of range");
    VectorXcd v = VectorXcd::Zero(4 * n_max);
    v((q1 * 2 + q2) * n_max + n) = 1.0;
    return v;
}

// Global single-qubit rotation exp(−i·angle/2·(sigma_axis,1 + sigma_axis,2))
// extended over the motional mode.
inline MatrixXcd global_qubit_rotation(char axis, double angle, int n_max) {
    Matrix2cd s;
    switch (axis) {
        case 'x': s = pauli_x(); break;
        case 'y': s = pauli_y(); break;
        case 'z': s = pauli_z(); break;
        default: throw std::invalid_argument("rotation axis must be x, y or z");
    }
    const Matrix2cd u = std::cos(0.5 * angle) * Matrix2cd::Identity() -
                        cplx(0, 1) * std::sin(0.5 * angle) * s;
    return kron(kron(MatrixXcd(u), MatrixXcd(u)),
                MatrixXcd(MatrixXcd::Identity(n_max, n_max)));
}

}  // namespace msgate

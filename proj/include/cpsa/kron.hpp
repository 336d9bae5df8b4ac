#pragma once

#include "cpsa/descriptor.hpp"

namespace cpsa {

/// Nonsingular system obtained by eliminating the algebraic states:
///   x1' = A_til x1 + B_til u,   y = C_til x1 + D_til u,
///   x2  = recovery_state x1 + recovery_input u.
/// Blocked coordinates are those of `partition`.
struct KronReducedSystem {
    Matrix A_til;           // n1 x n1
    Matrix B_til;           // n1 x k
    Matrix C_til;           // p x n1
    Matrix D_til;           // p x k
    Matrix recovery_state;  // n2 x n1  (-A22^{-1} A21)
    Matrix recovery_input;  // n2 x k   (-A22^{-1} B2)
    StatePartition partition;
    double a22_condition = 0.0;
    bool ill_conditioned = false;  // cond(A22) > 1e12; result kept, flagged

    Index n1() const { return A_til.rows(); }
    Index n2() const { return recovery_state.rows(); }
    Index k() const { return B_til.cols(); }
    Index p() const { return C_til.rows(); }
};

KronReducedSystem kron_reduce(const DescriptorSystem& sys, const AttackSignature& sig,
                              double tol = -1.0);

/// x2 from the dynamic state and the current input value.
Vector recover_algebraic(const KronReducedSystem& kron, const Vector& x1, const Vector& u);

/// Transfer matrix G(s) = D_K + C (sE - A)^{-1} B_K of the descriptor system.
CMatrix transfer_at(const DescriptorSystem& sys, const AttackSignature& sig, Complex s);

/// Transfer matrix of the Kron-reduced system: D_til + C_til (sI - A_til)^{-1} B_til.
CMatrix transfer_at(const KronReducedSystem& kron, Complex s);

/// The nonsingular system that treats x2 as an extra input and the algebraic
/// constraint as an extra output:
///   x1' = E11^{-1} A11 x1 + [E11^{-1} A12, E11^{-1} B1] [x2; u]
///   y~  = [A21; C1] x1 + [[A22, B2], [C2, D_K]] [x2; u].
/// Distinct from kron_reduce: no elimination happens, the input/output spaces
/// grow instead. Its invariant zeros match the descriptor zeros whenever the
/// descriptor system is left-invertible.
struct AssociatedNonsingular {
    Matrix A;  // n1 x n1
    Matrix B;  // n1 x (n2 + k)
    Matrix C;  // (n2 + p) x n1
    Matrix D;  // (n2 + p) x (n2 + k)
    StatePartition partition;
};
AssociatedNonsingular associated_nonsingular(const DescriptorSystem& sys,
                                             const AttackSignature& sig, double tol = -1.0);

/// Columns span the consistent initial conditions of the unforced system
/// (x with x2 = recovery_state * x1), in original coordinates.
Matrix consistent_basis(const DescriptorSystem& sys, double tol = -1.0);

}  // namespace cpsa

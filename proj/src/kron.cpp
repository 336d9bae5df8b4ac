#include "cpsa/kron.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <cmath>

namespace cpsa {

namespace {

struct Blocks {
    Matrix A11, A12, A21, A22, B1, B2, C1, C2;
    StatePartition part;
};

Blocks split(const DescriptorSystem& sys, const AttackSignature& sig, double tol) {
    Blocks b;
    b.part = partition_index_one(sys, tol);
    const Index n1 = b.part.n1();
    const Index n2 = b.part.n2();
    Matrix Ab = b.part.blocked(sys.A);
    Matrix Bb = b.part.blocked_input(sig.B_K);
    Matrix Cb = b.part.blocked_output(sys.C);
    b.A11 = Ab.topLeftCorner(n1, n1);
    b.A12 = Ab.topRightCorner(n1, n2);
    b.A21 = Ab.bottomLeftCorner(n2, n1);
    b.A22 = Ab.bottomRightCorner(n2, n2);
    b.B1 = Bb.topRows(n1);
    b.B2 = Bb.bottomRows(n2);
    b.C1 = Cb.leftCols(n1);
    b.C2 = Cb.rightCols(n2);
    return b;
}

}  // namespace

KronReducedSystem kron_reduce(const DescriptorSystem& sys, const AttackSignature& sig,
                              double tol) {
    Blocks b = split(sys, sig, tol);
    const Index n2 = b.part.n2();

    KronReducedSystem kr;
    kr.partition = b.part;

    if (n2 == 0) {
        Eigen::PartialPivLU<Matrix> e11(b.part.E11);
        kr.A_til = e11.solve(b.A11);
        kr.B_til = e11.solve(b.B1);
        kr.C_til = b.C1;
        kr.D_til = sig.D_K;
        kr.recovery_state = Matrix(0, b.part.n1());
        kr.recovery_input = Matrix(0, sig.B_K.cols());
        kr.a22_condition = 1.0;
        return kr;
    }

    // Factor A22 once; all four Schur products reuse the factorization.
    Eigen::PartialPivLU<Matrix> a22(b.A22);
    Matrix A22iA21 = a22.solve(b.A21);
    Matrix A22iB2 = a22.solve(b.B2);

    RankInfo a22_rank = numeric_rank(b.A22);
    kr.a22_condition = a22_rank.sigma_min > 0 ? a22_rank.sigma_max / a22_rank.sigma_min
                                              : std::numeric_limits<double>::infinity();
    kr.ill_conditioned = kr.a22_condition > 1e12;

    Eigen::PartialPivLU<Matrix> e11(b.part.E11);
    kr.A_til = e11.solve(Matrix(b.A11 - b.A12 * A22iA21));
    kr.B_til = e11.solve(Matrix(b.B1 - b.A12 * A22iB2));
    kr.C_til = b.C1 - b.C2 * A22iA21;
    kr.D_til = sig.D_K - b.C2 * A22iB2;
    kr.recovery_state = -A22iA21;
    kr.recovery_input = -A22iB2;
    return kr;
}

Vector recover_algebraic(const KronReducedSystem& kron, const Vector& x1, const Vector& u) {
    if (x1.size() != kron.n1()) throw DimensionError("x1 size mismatch");
    if (u.size() != kron.k()) throw DimensionError("u size mismatch");
    return kron.recovery_state * x1 + kron.recovery_input * u;
}

CMatrix transfer_at(const DescriptorSystem& sys, const AttackSignature& sig, Complex s) {
    CMatrix P = s * sys.E.cast<Complex>() - sys.A.cast<Complex>();
    RankInfo info = numeric_rank(P);
    if (info.rank < sys.n())
        throw SingularAtSError("sE - A is singular at the requested point");
    Eigen::PartialPivLU<CMatrix> lu(P);
    return sig.D_K.cast<Complex>() + sys.C.cast<Complex>() * lu.solve(sig.B_K.cast<Complex>());
}

CMatrix transfer_at(const KronReducedSystem& kron, Complex s) {
    CMatrix P = s * CMatrix::Identity(kron.n1(), kron.n1()) - kron.A_til.cast<Complex>();
    RankInfo info = numeric_rank(P);
    if (info.rank < kron.n1())
        throw SingularAtSError("sI - A_til is singular at the requested point");
    Eigen::PartialPivLU<CMatrix> lu(P);
    return kron.D_til.cast<Complex>() + kron.C_til.cast<Complex>() * lu.solve(kron.B_til.cast<Complex>());
}

AssociatedNonsingular associated_nonsingular(const DescriptorSystem& sys,
                                             const AttackSignature& sig, double tol) {
    Blocks b = split(sys, sig, tol);
    const Index n1 = b.part.n1();
    const Index n2 = b.part.n2();
    const Index k = sig.B_K.cols();
    const Index p = sys.p();

    Eigen::PartialPivLU<Matrix> e11(b.part.E11);

    AssociatedNonsingular an;
    an.partition = b.part;
    an.A = e11.solve(b.A11);
    an.B = Matrix(n1, n2 + k);
    an.B << e11.solve(b.A12), e11.solve(b.B1);
    an.C = Matrix(n2 + p, n1);
    an.C << b.A21, b.C1;
    an.D = Matrix(n2 + p, n2 + k);
    an.D << b.A22, b.B2, b.C2, sig.D_K;
    return an;
}

Matrix consistent_basis(const DescriptorSystem& sys, double tol) {
    AttackSet empty;
    AttackSignature sig;
    sig.origin = empty;
    sig.B_K = Matrix(sys.n(), 0);
    sig.D_K = Matrix(sys.p(), 0);
    KronReducedSystem kr = kron_reduce(sys, sig, tol);
    const Index n1 = kr.n1();
    Matrix basis_blocked(sys.n(), n1);
    basis_blocked.topRows(n1) = Matrix::Identity(n1, n1);
    basis_blocked.bottomRows(kr.n2()) = kr.recovery_state;
    return kr.partition.T_right * basis_blocked;
}

}  // namespace cpsa

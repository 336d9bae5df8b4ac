#include "cpsa/descriptor.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace cpsa {

bool DescriptorSystem::is_canonical_attack_form() const {
    if (m() != n() + p()) return false;
    Matrix Bc(n(), n() + p());
    Bc << Matrix::Identity(n(), n()), Matrix::Zero(n(), p());
    Matrix Dc(p(), n() + p());
    Dc << Matrix::Zero(p(), n()), Matrix::Identity(p(), p());
    return B == Bc && D == Dc;
}

DescriptorSystem DescriptorSystem::make(Matrix E, Matrix A, Matrix B, Matrix C, Matrix D) {
    if (E.rows() != E.cols()) throw DimensionError("E must be square");
    if (A.rows() != E.rows() || A.cols() != E.cols())
        throw DimensionError("A must match E in size");
    if (B.rows() != E.rows()) throw DimensionError("B must have n rows");
    if (C.cols() != E.rows()) throw DimensionError("C must have n columns");
    if (D.rows() != C.rows() || D.cols() != B.cols())
        throw DimensionError("D must be p x m");
    DescriptorSystem sys;
    sys.E = std::move(E);
    sys.A = std::move(A);
    sys.B = std::move(B);
    sys.C = std::move(C);
    sys.D = std::move(D);
    return sys;
}

DescriptorSystem canonical_attack_form(const Matrix& E, const Matrix& A, const Matrix& C) {
    if (E.rows() != E.cols()) throw DimensionError("E must be square");
    if (A.rows() != E.rows() || A.cols() != E.cols())
        throw DimensionError("A must match E in size");
    if (C.cols() != E.rows()) throw DimensionError("C must have n columns");
    const Index n = E.rows();
    const Index p = C.rows();
    Matrix B(n, n + p);
    B << Matrix::Identity(n, n), Matrix::Zero(n, p);
    Matrix D(p, n + p);
    D << Matrix::Zero(p, n), Matrix::Identity(p, p);
    return DescriptorSystem::make(E, A, B, C, D);
}

AttackSet AttackSet::of(std::vector<int> idx) {
    std::sort(idx.begin(), idx.end());
    for (size_t i = 0; i + 1 < idx.size(); ++i)
        if (idx[i] == idx[i + 1]) throw DimensionError("attack set indices must be unique");
    if (!idx.empty() && idx.front() < 1) throw DimensionError("attack set indices are 1-based");
    AttackSet K;
    K.indices = std::move(idx);
    return K;
}

bool AttackSet::contains(int i) const {
    return std::binary_search(indices.begin(), indices.end(), i);
}

AttackSignature signature(const DescriptorSystem& sys, const AttackSet& K) {
    const Index m = sys.m();
    AttackSignature sig;
    sig.origin = K;
    sig.B_K = Matrix(sys.n(), static_cast<Index>(K.k()));
    sig.D_K = Matrix(sys.p(), static_cast<Index>(K.k()));
    sig.is_state_attack.resize(K.k());
    for (size_t j = 0; j < K.k(); ++j) {
        const int idx = K.indices[j];
        if (idx < 1 || idx > m) {
            std::ostringstream os;
            os << "attack index " << idx << " out of range [1, " << m << "]";
            throw DimensionError(os.str());
        }
        sig.B_K.col(static_cast<Index>(j)) = sys.B.col(idx - 1);
        sig.D_K.col(static_cast<Index>(j)) = sys.D.col(idx - 1);
        sig.is_state_attack[j] = sys.is_canonical_attack_form() ? (idx <= sys.n())
                                                                : (sig.D_K.col(static_cast<Index>(j)).isZero(0.0));
    }
    return sig;
}

bool check_regular(const Matrix& E, const Matrix& A, int trials, std::uint64_t rng_seed) {
    if (trials < 1) throw DimensionError("check_regular needs trials >= 1");
    const Index n = E.rows();
    if (n == 0) return true;
    Rng rng(rng_seed);
    const double scale = pencil_probe_scale(E, A);
    for (int t = 0; t < trials; ++t) {
        const Complex s = rng.complex_point(scale);
        CMatrix P = s * E.cast<Complex>() - A.cast<Complex>();
        if (numeric_rank(P).rank == n) return true;
    }
    return false;
}

bool check_regular(const DescriptorSystem& sys, int trials, std::uint64_t rng_seed) {
    return check_regular(sys.E, sys.A, trials, rng_seed);
}

Matrix StatePartition::blocked(const Matrix& state_matrix) const {
    return T_left * state_matrix * T_right;
}

Matrix StatePartition::blocked_input(const Matrix& input_matrix) const {
    return T_left * input_matrix;
}

Matrix StatePartition::blocked_output(const Matrix& output_matrix) const {
    return output_matrix * T_right;
}

Vector StatePartition::to_blocked(const Vector& x) const {
    // T_right is orthogonal (permutation or SVD factor), so inverse = transpose.
    return T_right.transpose() * x;
}

StatePartition partition_index_one(const DescriptorSystem& sys, double tol) {
    if (!check_regular(sys)) throw NotRegularError("pencil (E, A) is singular");
    const Index n = sys.n();
    const Matrix& E = sys.E;

    const double escale = E.cwiseAbs().maxCoeff();
    const double zero_tol = tol > 0 ? tol : default_rank_tol(n, n, std::max(escale, 1.0));

    StatePartition part;

    // Try the cheap path first: states whose E row and column are both zero.
    std::vector<Index> dyn, alg;
    for (Index i = 0; i < n; ++i) {
        const bool zero_row = E.row(i).cwiseAbs().maxCoeff() <= zero_tol;
        const bool zero_col = E.col(i).cwiseAbs().maxCoeff() <= zero_tol;
        if (zero_row && zero_col)
            alg.push_back(i);
        else
            dyn.push_back(i);
    }
    const Index n1 = static_cast<Index>(dyn.size());
    Matrix E11(n1, n1);
    for (Index i = 0; i < n1; ++i)
        for (Index j = 0; j < n1; ++j) E11(i, j) = E(dyn[static_cast<size_t>(i)], dyn[static_cast<size_t>(j)]);

    const bool separable = n1 == 0 || numeric_rank(E11).rank == n1;
    if (separable) {
        part.dynamic = dyn;
        part.algebraic = alg;
        part.transformed = false;
        Matrix P = Matrix::Zero(n, n);  // permutation: z = [x_dyn; x_alg]
        Index row = 0;
        for (Index i : dyn) P(row++, i) = 1.0;
        for (Index i : alg) P(row++, i) = 1.0;
        part.T_left = P;
        part.T_right = P.transpose();
        part.E11 = E11;
    } else {
        // General E: orthogonal rank factorization E = U S V^T, then
        // U^T E V = blkdiag(S_r, 0) with S_r nonsingular diagonal.
        Eigen::JacobiSVD<Matrix> svd(E, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        const double t = tol > 0 ? tol : default_rank_tol(n, n, sv.size() ? sv(0) : 0.0);
        Index r = 0;
        for (Index i = 0; i < sv.size(); ++i)
            if (sv(i) > t) ++r;
        part.transformed = true;
        part.T_left = svd.matrixU().transpose();
        part.T_right = svd.matrixV();
        part.E11 = Matrix(sv.head(r).asDiagonal());
        part.dynamic.resize(static_cast<size_t>(r));
        part.algebraic.resize(static_cast<size_t>(n - r));
        std::iota(part.dynamic.begin(), part.dynamic.end(), Index{0});
        std::iota(part.algebraic.begin(), part.algebraic.end(), r);
    }

    // Certify index one: A22 (algebraic-algebraic block) nonsingular.
    const Index n2 = part.n2();
    if (n2 > 0) {
        Matrix Ab = part.blocked(sys.A);
        Matrix A22 = Ab.bottomRightCorner(n2, n2);
        if (numeric_rank(A22).rank != n2)
            throw NotIndexOneError("A22 is numerically singular: system index exceeds one");
    }
    part.certified_index_one = true;
    return part;
}

bool check_consistent_initial(const DescriptorSystem& sys, const Vector& x0, const Vector& u0,
                              double tol) {
    if (x0.size() != sys.n()) throw DimensionError("x0 must have n entries");
    if (u0.size() != sys.m()) throw DimensionError("u0 must have m entries");
    Matrix W = left_null_space(sys.E);
    if (W.cols() == 0) return true;
    Vector v = sys.A * x0 + sys.B * u0;
    const double scale = 1.0 + v.norm();
    const double t = tol > 0 ? tol : 1e-9;
    return (W.transpose() * v).norm() <= t * scale;
}

}  // namespace cpsa

#pragma once

#include "cpsa/descriptor.hpp"
#include "cpsa/poly.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <functional>

namespace cpsa::testing {

/// Random index-one descriptor system in canonical attack form, blocked as
/// E = blkdiag(E11, 0) with well-conditioned E11 and A22. `stable` shifts the
/// reduced dynamics into the open left half plane (for simulation tests).
inline DescriptorSystem random_index_one(Rng& rng, Index n1, Index n2, Index p,
                                         bool stable = false) {
    const Index n = n1 + n2;
    Matrix Q1 = rng.orthonormal_rows(n1, n1);
    Vector d1(n1);
    for (Index i = 0; i < n1; ++i) d1(i) = rng.uniform(0.5, 2.0);
    Matrix E = Matrix::Zero(n, n);
    E.topLeftCorner(n1, n1) = Q1.transpose() * d1.asDiagonal() * Q1;

    Matrix A = rng.gaussian_matrix(n, n);
    // Keep A22 comfortably nonsingular.
    Matrix Q2 = rng.orthonormal_rows(n2, n2);
    Vector d2(n2);
    for (Index i = 0; i < n2; ++i) d2(i) = rng.uniform(0.7, 1.8) * (rng.uniform(0, 1) < 0.5 ? -1 : 1);
    A.bottomRightCorner(n2, n2) = Q2.transpose() * d2.asDiagonal() * Q2;

    if (stable) {
        // Shift the Kron-reduced dynamics left of -0.2.
        Matrix A22 = A.bottomRightCorner(n2, n2);
        Matrix Ared = A.topLeftCorner(n1, n1) -
                      A.topRightCorner(n1, n2) * A22.partialPivLu().solve(A.bottomLeftCorner(n2, n1));
        Matrix E11 = E.topLeftCorner(n1, n1);
        Eigen::EigenSolver<Matrix> es(E11.partialPivLu().solve(Ared), false);
        double remax = -1e9;
        for (Index i = 0; i < es.eigenvalues().size(); ++i)
            remax = std::max(remax, es.eigenvalues()(i).real());
        if (remax > -0.2) A.topLeftCorner(n1, n1) -= (remax + 0.4) * E.topLeftCorner(n1, n1);
    }

    Matrix C = rng.gaussian_matrix(p, n);
    return canonical_attack_form(E, A, C);
}

/// Random attack set of size k over the n+p canonical channels.
inline AttackSet random_attack_set(Rng& rng, Index n, Index p, int k) {
    std::vector<int> all(static_cast<size_t>(n + p));
    for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i + 1);
    for (size_t i = all.size(); i > 1; --i)
        std::swap(all[i - 1], all[static_cast<size_t>(rng.uniform_int(0, static_cast<int>(i) - 1))]);
    all.resize(static_cast<size_t>(k));
    return AttackSet::of(all);
}

/// det(s E - A) as a polynomial, reconstructed by interpolation at scaled
/// roots of unity. Independent of the rank-probe path used by check_regular
/// and of the QZ path used by the zeros engine.
inline Poly pencil_det_poly(const Matrix& E, const Matrix& A) {
    const Index n = E.rows();
    const int m = static_cast<int>(n) + 1;  // degree <= n
    const double r = std::max(1.0, pencil_probe_scale(E, A));
    std::vector<Complex> pts(static_cast<size_t>(m)), vals(static_cast<size_t>(m));
    for (int j = 0; j < m; ++j) {
        const double a = 2.0 * M_PI * j / m;
        Complex s(r * std::cos(a), r * std::sin(a));
        pts[static_cast<size_t>(j)] = s;
        CMatrix P = s * E.cast<Complex>() - A.cast<Complex>();
        vals[static_cast<size_t>(j)] = Eigen::PartialPivLU<CMatrix>(P).determinant();
    }
    // Coefficients from the inverse DFT relation c_k = (1/m) sum v_j w^{-jk} r^{-k}.
    std::vector<double> coeffs(static_cast<size_t>(m));
    for (int k = 0; k < m; ++k) {
        Complex acc(0, 0);
        for (int j = 0; j < m; ++j) {
            const double a = -2.0 * M_PI * j * k / m;
            acc += vals[static_cast<size_t>(j)] * Complex(std::cos(a), std::sin(a));
        }
        coeffs[static_cast<size_t>(k)] = (acc / static_cast<double>(m)).real() / std::pow(r, k);
    }
    Poly p(std::move(coeffs));
    p.trim(1e-10);
    return p;
}

/// Implicit-Euler integration of the raw descriptor system (oracle for the
/// Kron-reduced RK4 path): (E - h A) x_{k+1} = E x_k + h B u(t_{k+1}).
inline Matrix implicit_euler_descriptor(const DescriptorSystem& sys, const Vector& x0,
                                        const Matrix& B_K,
                                        const std::function<Vector(double)>& u, double horizon,
                                        double h) {
    const Index steps = static_cast<Index>(std::llround(horizon / h)) + 1;
    Matrix X(steps, sys.n());
    Vector x = x0;
    X.row(0) = x.transpose();
    Matrix M = sys.E - h * sys.A;
    Eigen::PartialPivLU<Matrix> lu(M);
    for (Index i = 1; i < steps; ++i) {
        const double t = static_cast<double>(i) * h;
        x = lu.solve(Vector(sys.E * x + h * B_K * u(t)));
        X.row(i) = x.transpose();
    }
    return X;
}

}  // namespace cpsa::testing

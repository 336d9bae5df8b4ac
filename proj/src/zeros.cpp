#include "cpsa/zeros.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace cpsa {

RosenbrockPencil RosenbrockPencil::build(const DescriptorSystem& sys, const AttackSignature& sig) {
    const Index n = sys.n();
    const Index p = sys.p();
    const Index k = sig.B_K.cols();
    RosenbrockPencil P;
    P.n = n;
    P.p = p;
    P.k = k;
    P.P0 = Matrix(n + p, n + k);
    P.P0 << -sys.A, -sig.B_K, sys.C, sig.D_K;
    P.P1 = Matrix::Zero(n + p, n + k);
    P.P1.topLeftCorner(n, n) = sys.E;
    return P;
}

RosenbrockPencil RosenbrockPencil::state_space(const Matrix& A, const Matrix& B, const Matrix& C,
                                               const Matrix& D) {
    const Index n = A.rows();
    const Index p = C.rows();
    const Index k = B.cols();
    RosenbrockPencil P;
    P.n = n;
    P.p = p;
    P.k = k;
    P.P0 = Matrix(n + p, n + k);
    P.P0 << -A, -B, C, D;
    P.P1 = Matrix::Zero(n + p, n + k);
    P.P1.topLeftCorner(n, n) = Matrix::Identity(n, n);
    return P;
}

double zero_residual(const RosenbrockPencil& P, Complex s, const CVector& x, const CVector& g) {
    CVector v(P.cols());
    v << x, g;
    const double nv = v.norm();
    if (nv == 0.0) return std::numeric_limits<double>::infinity();
    return (P.at(s) * v).norm() / nv;
}

namespace {

double probe_scale(const RosenbrockPencil& P) {
    return pencil_probe_scale(P.P1, P.P0);
}

Index max_rank_at_probes(const RosenbrockPencil& P, const ZeroOptions& opts) {
    Rng rng(opts.seed ^ 0x9e3779b97f4a7c15ull);
    const double scale = probe_scale(P);
    Index best = 0;
    for (int t = 0; t < opts.rank_probe_points; ++t) {
        const Complex s = rng.complex_point(scale);
        best = std::max(best, numeric_rank(P.at(s), opts.rank_tol).rank);
    }
    return best;
}

/// One refinement pass: alternate the optimal s for the current direction
/// (least-squares over P0 v + s P1 v = 0) with the smallest singular vector
/// of P(s).
void refine_zero(const RosenbrockPencil& P, Complex& s, CVector& v, int iters) {
    const CMatrix P0 = P.P0.cast<Complex>();
    const CMatrix P1 = P.P1.cast<Complex>();
    for (int it = 0; it < iters; ++it) {
        CVector p1v = P1 * v;
        const double denom = p1v.squaredNorm();
        if (denom > 0) {
            Complex step = -(p1v.adjoint() * (P0 * v))(0) / denom;
            s = step;
        }
        auto [sigma, vec] = smallest_singular_pair(P0 + s * P1);
        (void)sigma;
        v = vec;
    }
}

}  // namespace

bool pencil_left_invertible(const RosenbrockPencil& P, const ZeroOptions& opts) {
    if (P.cols() > P.rows()) return false;
    return max_rank_at_probes(P, opts) == P.cols();
}

std::vector<InvariantZero> invariant_zeros(const RosenbrockPencil& P, const ZeroOptions& opts) {
    const Index nc = P.cols();
    if (!pencil_left_invertible(P, opts))
        throw NotLeftInvertibleError(
            "pencil is column rank deficient for almost all s; no isolated zeros");

    // Square the pencil with a random orthonormal-row left factor, solve the
    // generalized eigenproblem, then certify candidates on the original pencil.
    // The compression cannot create zeros that survive certification.
    Rng rng(opts.seed);
    Matrix W = (P.rows() == nc) ? Matrix::Identity(nc, nc) : rng.orthonormal_rows(nc, P.rows());
    Matrix Q0 = W * P.P0;
    Matrix Q1 = W * P.P1;

    // (Q0 + s Q1) v = 0  <=>  -Q0 v = s Q1 v.
    Eigen::GeneralizedEigenSolver<Matrix> ges;
    ges.compute(-Q0, Q1, false);
    const auto& alphas = ges.alphas();
    const auto& betas = ges.betas();

    const double scale = probe_scale(P);
    std::vector<InvariantZero> out;
    for (Index i = 0; i < alphas.size(); ++i) {
        const Complex a = alphas(i);
        const double b = betas(i);
        if (std::abs(b) <= 1e-12 * std::max(1.0, std::abs(a))) continue;  // infinite eigenvalue
        Complex s = a / b;
        if (std::abs(s) > 1e8 * scale) continue;  // numerically infinite

        CMatrix Ps = P.at(s);
        auto [sigma, v] = smallest_singular_pair(Ps);
        RankInfo info = numeric_rank(Ps, opts.rank_tol);
        if (sigma > opts.cert_rel_tol * std::max(info.sigma_max, 1e-300)) continue;

        refine_zero(P, s, v, opts.refine_iters);

        CVector x = v.head(P.n);
        CVector g = v.tail(P.k);
        const double res = zero_residual(P, s, x, g);
        if (res > opts.residual_tol) continue;
        if (x.norm() <= opts.x_rel_tol * v.norm()) continue;  // not an invariant zero

        out.push_back({s, x, g, res});
    }

    std::sort(out.begin(), out.end(), [](const InvariantZero& a, const InvariantZero& b) {
        if (a.s.real() != b.s.real()) return a.s.real() < b.s.real();
        return a.s.imag() < b.s.imag();
    });
    // Drop exact duplicates produced by clustered eigenvalues collapsing onto
    // the same refined point. True multiple zeros refine to distinct clusters
    // only up to dedupe_tol, which is kept far below any matching tolerance.
    std::vector<InvariantZero> dedup;
    for (auto& z : out) {
        if (!dedup.empty() && std::abs(z.s - dedup.back().s) <= opts.dedupe_tol * (1.0 + std::abs(z.s)))
            continue;
        dedup.push_back(std::move(z));
    }
    return dedup;
}

std::vector<InvariantZero> invariant_zeros(const DescriptorSystem& sys, const AttackSignature& sig,
                                           const ZeroOptions& opts) {
    if (!check_regular(sys)) throw NotRegularError("pencil (E, A) is singular");
    return invariant_zeros(RosenbrockPencil::build(sys, sig), opts);
}

std::vector<InvariantZero> invariant_zeros(const KronReducedSystem& kron, const ZeroOptions& opts) {
    return invariant_zeros(
        RosenbrockPencil::state_space(kron.A_til, kron.B_til, kron.C_til, kron.D_til), opts);
}

ZeroComparison compare_zero_sets(const std::vector<InvariantZero>& a,
                                 const std::vector<InvariantZero>& b) {
    ZeroComparison cmp;
    std::vector<bool> used(b.size(), false);
    for (const auto& za : a) {
        double best = std::numeric_limits<double>::infinity();
        size_t best_j = b.size();
        for (size_t j = 0; j < b.size(); ++j) {
            if (used[j]) continue;
            const double d = std::abs(za.s - b[j].s);
            if (d < best) {
                best = d;
                best_j = j;
            }
        }
        if (best_j == b.size()) {
            ++cmp.unmatched_left;
            continue;
        }
        used[best_j] = true;
        cmp.matched.emplace_back(za.s, b[best_j].s);
        cmp.max_mismatch = std::max(cmp.max_mismatch, best);
    }
    for (bool u : used)
        if (!u) ++cmp.unmatched_right;
    return cmp;
}

ZeroEquivalenceReport descriptor_vs_nonsingular_zeros(const DescriptorSystem& sys,
                                                      const AttackSignature& sig,
                                                      const ZeroOptions& opts) {
    ZeroEquivalenceReport rep;
    rep.descriptor_zeros = invariant_zeros(sys, sig, opts);
    AssociatedNonsingular an = associated_nonsingular(sys, sig);
    rep.nonsingular_zeros =
        invariant_zeros(RosenbrockPencil::state_space(an.A, an.B, an.C, an.D), opts);
    rep.comparison = compare_zero_sets(rep.descriptor_zeros, rep.nonsingular_zeros);
    return rep;
}

}  // namespace cpsa

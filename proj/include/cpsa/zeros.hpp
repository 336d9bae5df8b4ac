#pragma once

#include "cpsa/kron.hpp"

#include <optional>
#include <vector>

namespace cpsa {

/// Rosenbrock system pencil P(s) = P0 + s P1 with
///   P0 = [[-A, -B_K], [C, D_K]],  P1 = [[E, 0], [0, 0]],
/// of size (n+p) x (n+k). s is an invariant zero when P(s) loses column rank
/// with a null vector [x; g], x != 0.
struct RosenbrockPencil {
    Matrix P0;
    Matrix P1;
    Index n = 0;  // state block size (leading columns / rows)
    Index p = 0;
    Index k = 0;

    static RosenbrockPencil build(const DescriptorSystem& sys, const AttackSignature& sig);
    static RosenbrockPencil state_space(const Matrix& A, const Matrix& B, const Matrix& C,
                                        const Matrix& D);

    Index rows() const { return P0.rows(); }
    Index cols() const { return P0.cols(); }
    CMatrix at(Complex s) const { return P0.cast<Complex>() + s * P1.cast<Complex>(); }
};

struct InvariantZero {
    Complex s;
    CVector x;        // state-zero direction, nonzero
    CVector g;        // input-zero direction
    double residual;  // ||P(s) [x; g]|| / ||[x; g]||
};

struct ZeroOptions {
    std::uint64_t seed = 0xc0ffee;
    double rank_tol = -1.0;        // -1: scale-aware default
    int rank_probe_points = 3;     // normal-rank sampling
    double cert_rel_tol = 1e-6;    // sigma_min/sigma_max acceptance before refinement
    int refine_iters = 4;
    double residual_tol = 1e-8;    // keep zeros with refined residual below this
    double x_rel_tol = 1e-8;       // ||x|| below this times ||[x;g]|| counts as x = 0
    double dedupe_tol = 1e-10;
};

/// Full column normal rank probe at random points (max over probes).
bool pencil_left_invertible(const RosenbrockPencil& P, const ZeroOptions& opts = {});

/// All finite invariant zeros of a left-invertible pencil, refined and sorted
/// by (Re, Im). Throws NotLeftInvertibleError when the pencil is column rank
/// deficient for almost all s (use dynamic_undetectable for that case).
/// An empty result means "no finite zeros" and is valid.
std::vector<InvariantZero> invariant_zeros(const RosenbrockPencil& P, const ZeroOptions& opts = {});
std::vector<InvariantZero> invariant_zeros(const DescriptorSystem& sys, const AttackSignature& sig,
                                           const ZeroOptions& opts = {});
std::vector<InvariantZero> invariant_zeros(const KronReducedSystem& kron,
                                           const ZeroOptions& opts = {});

/// Greedy nearest matching of two zero sets.
struct ZeroComparison {
    std::vector<std::pair<Complex, Complex>> matched;
    double max_mismatch = 0.0;
    size_t unmatched_left = 0;
    size_t unmatched_right = 0;
};
ZeroComparison compare_zero_sets(const std::vector<InvariantZero>& a,
                                 const std::vector<InvariantZero>& b);

/// Zeros of the descriptor pencil vs the associated nonsingular construction.
struct ZeroEquivalenceReport {
    std::vector<InvariantZero> descriptor_zeros;
    std::vector<InvariantZero> nonsingular_zeros;
    ZeroComparison comparison;
};
ZeroEquivalenceReport descriptor_vs_nonsingular_zeros(const DescriptorSystem& sys,
                                                      const AttackSignature& sig,
                                                      const ZeroOptions& opts = {});

/// Residual of a candidate zero triple on a pencil (independent re-check).
double zero_residual(const RosenbrockPencil& P, Complex s, const CVector& x, const CVector& g);

}  // namespace cpsa

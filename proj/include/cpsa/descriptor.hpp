#pragma once

#include "cpsa/numeric.hpp"
#include "cpsa/types.hpp"

#include <string>
#include <vector>

namespace cpsa {

/// Linear descriptor system  E x' = A x + B u,  y = C x + D u  with possibly
/// singular E. Immutable after construction; all analysis operations are pure.
struct DescriptorSystem {
    Matrix E;  // n x n
    Matrix A;  // n x n
    Matrix B;  // n x m
    Matrix C;  // p x n
    Matrix D;  // p x m

    std::vector<std::string> state_labels;   // optional, size n when present
    std::vector<std::string> output_labels;  // optional, size p when present

    Index n() const { return E.rows(); }
    Index m() const { return B.cols(); }
    Index p() const { return C.rows(); }

    /// True when B = [I_n 0] and D = [0 I_p] (every state and output channel
    /// independently attackable, m = n + p).
    bool is_canonical_attack_form() const;

    static DescriptorSystem make(Matrix E, Matrix A, Matrix B, Matrix C, Matrix D);
};

/// System with B = [I_n 0], D = [0 I_p]; input channel j <= n drives state j,
/// channel n+i drives output i.
DescriptorSystem canonical_attack_form(const Matrix& E, const Matrix& A, const Matrix& C);

/// Attack set K: strictly increasing 1-based input-channel indices.
/// For canonical-form systems the range is {1..n+p}; in general {1..m}.
struct AttackSet {
    std::vector<int> indices;

    static AttackSet of(std::vector<int> idx);
    size_t k() const { return indices.size(); }
    bool contains(int i) const;
    bool operator==(const AttackSet& o) const { return indices == o.indices; }
};

/// Column selection (B_K, D_K) for an attack set.
struct AttackSignature {
    Matrix B_K;  // n x k
    Matrix D_K;  // p x k
    AttackSet origin;
    std::vector<bool> is_state_attack;  // per selected channel (canonical form: index <= n)
};

AttackSignature signature(const DescriptorSystem& sys, const AttackSet& K);

/// Probabilistic regularity test: det(sE - A) is not identically zero iff the
/// pencil has full rank at some sample point; a nonzero polynomial vanishes at
/// `trials` random complex points with probability 0.
bool check_regular(const DescriptorSystem& sys, int trials = 5, std::uint64_t rng_seed = 0x5eed);
bool check_regular(const Matrix& E, const Matrix& A, int trials = 5, std::uint64_t rng_seed = 0x5eed);

/// Result of bringing E to blkdiag(E11, 0) form. blocked matrices are
/// M' = T_left * M * T_right (states), C' = C * T_right; x = T_right * z.
/// For E that is zero-row/column separable the transforms are permutations and
/// `dynamic`/`algebraic` list original state indices; otherwise they are the
/// orthogonal factors of a rank factorization of E and the index lists refer
/// to transformed coordinates.
struct StatePartition {
    std::vector<Index> dynamic;    // size n1
    std::vector<Index> algebraic;  // size n2
    Matrix T_left;                 // n x n
    Matrix T_right;                // n x n
    bool transformed = false;      // true when a non-permutation change was needed
    Matrix E11;                    // n1 x n1, nonsingular
    bool certified_index_one = false;

    Index n1() const { return static_cast<Index>(dynamic.size()); }
    Index n2() const { return static_cast<Index>(algebraic.size()); }

    Matrix blocked(const Matrix& state_matrix) const;       // T_left * M * T_right
    Matrix blocked_input(const Matrix& input_matrix) const; // T_left * M
    Matrix blocked_output(const Matrix& output_matrix) const; // M * T_right
    Vector to_original(const Vector& z) const { return T_right * z; }
    Vector to_blocked(const Vector& x) const;  // inverse state change (transpose for orthogonal T)
};

/// Certify index one: E ~ blkdiag(E11, 0) with A22 nonsingular.
/// Throws NotIndexOneError when A22 is numerically singular.
StatePartition partition_index_one(const DescriptorSystem& sys, double tol = -1.0);

/// (A) x0 + B u0 must be orthogonal to Ker(E^T) for a consistent start.
bool check_consistent_initial(const DescriptorSystem& sys, const Vector& x0, const Vector& u0,
                              double tol = -1.0);

}  // namespace cpsa

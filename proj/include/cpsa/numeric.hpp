#pragma once

#include "cpsa/types.hpp"

#include <optional>
#include <random>
#include <vector>

namespace cpsa {

/// Scale-aware rank threshold: max(rows, cols) * eps * sigma_max.
/// Every rank decision in the library goes through this unless a caller
/// overrides the tolerance explicitly (tol > 0).
double default_rank_tol(Index rows, Index cols, double sigma_max);

struct RankInfo {
    Index rank = 0;
    double sigma_max = 0.0;
    double sigma_min = 0.0;  // smallest singular value (0 if fewer than min-dim)
    double tol = 0.0;
};

RankInfo numeric_rank(const Matrix& M, double tol = -1.0);
RankInfo numeric_rank(const CMatrix& M, double tol = -1.0);

/// Orthonormal basis of the (right) null space; empty (cols()==0) when trivial.
Matrix null_space(const Matrix& M, double tol = -1.0);
CMatrix null_space(const CMatrix& M, double tol = -1.0);

/// Orthonormal basis of Ker(M^T) (left null space).
Matrix left_null_space(const Matrix& M, double tol = -1.0);

/// Smallest singular value and the corresponding right singular vector.
std::pair<double, CVector> smallest_singular_pair(const CMatrix& M);

/// dim( Im(A) ∩ Im(B) ) = rank(A) + rank(B) - rank([A B]).
Index image_intersection_dim(const Matrix& A, const Matrix& B, double tol = -1.0);

/// Basis of Im(A) ∩ Im(B); empty matrix when the intersection is trivial.
Matrix image_intersection(const Matrix& A, const Matrix& B, double tol = -1.0);

/// Deterministic seeded random source for the handful of randomized
/// algorithms (regularity probing, pencil compression, realization sampling).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform(double lo, double hi);
    double gaussian();
    int uniform_int(int lo, int hi);  // inclusive
    Matrix gaussian_matrix(Index rows, Index cols);
    Vector gaussian_vector(Index n);
    /// Random complex point with magnitude about `scale` (away from 0).
    Complex complex_point(double scale = 1.0);
    /// Matrix with orthonormal rows (rows <= cols), from a Gaussian QR.
    Matrix orthonormal_rows(Index rows, Index cols);

    std::mt19937_64& raw() { return gen_; }

private:
    std::mt19937_64 gen_;
};

/// Magnitude used to scale random probe points s for a pencil (E, A).
double pencil_probe_scale(const Matrix& E, const Matrix& A);

}  // namespace cpsa

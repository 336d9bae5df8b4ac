#include "cpsa/numeric.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>

namespace cpsa {

double default_rank_tol(Index rows, Index cols, double sigma_max) {
    const double eps = std::numeric_limits<double>::epsilon();
    return static_cast<double>(std::max(rows, cols)) * eps * sigma_max;
}

namespace {

template <typename Mat>
RankInfo rank_impl(const Mat& M, double tol) {
    RankInfo info;
    if (M.rows() == 0 || M.cols() == 0) return info;
    Eigen::JacobiSVD<Mat> svd(M);
    const auto& sv = svd.singularValues();
    info.sigma_max = sv(0);
    info.sigma_min = sv(sv.size() - 1);
    info.tol = tol > 0 ? tol : default_rank_tol(M.rows(), M.cols(), info.sigma_max);
    info.rank = 0;
    for (Index i = 0; i < sv.size(); ++i)
        if (sv(i) > info.tol) ++info.rank;
    return info;
}

template <typename Mat>
Mat null_space_impl(const Mat& M, double tol) {
    if (M.cols() == 0) return Mat(0, 0);
    if (M.rows() == 0) {
        Mat id = Mat::Identity(M.cols(), M.cols());
        return id;
    }
    Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() ? sv(0) : 0.0;
    const double t = tol > 0 ? tol : default_rank_tol(M.rows(), M.cols(), smax);
    Index rank = 0;
    for (Index i = 0; i < sv.size(); ++i)
        if (sv(i) > t) ++rank;
    const Index dim = M.cols() - rank;
    return svd.matrixV().rightCols(dim);
}

}  // namespace

RankInfo numeric_rank(const Matrix& M, double tol) { return rank_impl(M, tol); }
RankInfo numeric_rank(const CMatrix& M, double tol) { return rank_impl(M, tol); }

Matrix null_space(const Matrix& M, double tol) { return null_space_impl(M, tol); }
CMatrix null_space(const CMatrix& M, double tol) { return null_space_impl(M, tol); }

Matrix left_null_space(const Matrix& M, double tol) {
    Matrix Mt = M.transpose();
    return null_space(Mt, tol);
}

std::pair<double, CVector> smallest_singular_pair(const CMatrix& M) {
    Eigen::JacobiSVD<CMatrix> svd(M, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const Index last = sv.size() - 1;
    return {sv(last), svd.matrixV().col(last)};
}

Index image_intersection_dim(const Matrix& A, const Matrix& B, double tol) {
    if (A.cols() == 0 || B.cols() == 0) return 0;
    Matrix AB(A.rows(), A.cols() + B.cols());
    AB << A, B;
    return numeric_rank(A, tol).rank + numeric_rank(B, tol).rank - numeric_rank(AB, tol).rank;
}

Matrix image_intersection(const Matrix& A, const Matrix& B, double tol) {
    const Index dim = image_intersection_dim(A, B, tol);
    if (dim <= 0) return Matrix(A.rows(), 0);
    // v in Im(A) ∩ Im(B)  <=>  v = A a = B b for the kernel elements of [A -B].
    Matrix AB(A.rows(), A.cols() + B.cols());
    AB << A, -B;
    Matrix ker = null_space(AB, tol);
    Matrix cand = A * ker.topRows(A.cols());
    // Orthonormalize and keep the `dim` leading directions.
    Eigen::ColPivHouseholderQR<Matrix> qr(cand);
    Matrix Q = qr.householderQ() * Matrix::Identity(A.rows(), std::min<Index>(dim, cand.cols()));
    return Q;
}

double Rng::uniform(double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    return d(gen_);
}

double Rng::gaussian() {
    std::normal_distribution<double> d(0.0, 1.0);
    return d(gen_);
}

int Rng::uniform_int(int lo, int hi) {
    std::uniform_int_distribution<int> d(lo, hi);
    return d(gen_);
}

Matrix Rng::gaussian_matrix(Index rows, Index cols) {
    Matrix M(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) M(i, j) = gaussian();
    return M;
}

Vector Rng::gaussian_vector(Index n) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = gaussian();
    return v;
}

Complex Rng::complex_point(double scale) {
    // Magnitude in [0.3, 1.3]*scale, uniform angle; avoids accidental ~0 points.
    const double r = scale * uniform(0.3, 1.3);
    const double a = uniform(0.0, 2.0 * M_PI);
    return Complex(r * std::cos(a), r * std::sin(a));
}

Matrix Rng::orthonormal_rows(Index rows, Index cols) {
    Matrix G = gaussian_matrix(cols, rows);
    Eigen::HouseholderQR<Matrix> qr(G);
    Matrix Q = qr.householderQ() * Matrix::Identity(cols, rows);
    return Q.transpose();
}

double pencil_probe_scale(const Matrix& E, const Matrix& A) {
    const double ne = E.norm();
    const double na = A.norm();
    if (ne <= 0.0) return std::max(1.0, na);
    return std::max(1.0, na / std::max(1.0, ne));
}

}  // namespace cpsa

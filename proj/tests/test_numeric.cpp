#include "cpsa/numeric.hpp"
#include "cpsa/poly.hpp"

#include <doctest.h>

#include <algorithm>

using namespace cpsa;

TEST_CASE("numeric rank is scale aware") {
    Matrix M(3, 3);
    M << 1, 0, 0, 0, 1e-3, 0, 0, 0, 0;
    CHECK(numeric_rank(M).rank == 2);
    CHECK(numeric_rank(Matrix(1e8 * M)).rank == 2);
    CHECK(numeric_rank(Matrix(Matrix::Zero(4, 4))).rank == 0);
}

TEST_CASE("null space basis is orthonormal and annihilates") {
    Rng rng(7);
    Matrix M = rng.gaussian_matrix(3, 5);
    Matrix N = null_space(M);
    REQUIRE(N.cols() == 2);
    CHECK((M * N).norm() < 1e-12);
    CHECK((N.transpose() * N - Matrix::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("image intersection dimension and basis") {
    Matrix A(3, 2), B(3, 2);
    A << 1, 0, 0, 1, 0, 0;
    B << 0, 1, 0, 0, 1, 0;  // Im(B) = span(e3, e1)
    CHECK(image_intersection_dim(A, B) == 1);
    Matrix V = image_intersection(A, B);
    REQUIRE(V.cols() == 1);
    // intersection is span(e1)
    CHECK(std::abs(V(1, 0)) < 1e-12);
    CHECK(std::abs(V(2, 0)) < 1e-12);
    CHECK(std::abs(V(0, 0)) == doctest::Approx(1.0));
}

TEST_CASE("rng is deterministic per seed") {
    Rng a(42), b(42), c(43);
    Matrix ma = a.gaussian_matrix(3, 3), mb = b.gaussian_matrix(3, 3), mc = c.gaussian_matrix(3, 3);
    CHECK((ma - mb).norm() == 0.0);
    CHECK((ma - mc).norm() > 0.0);
}

TEST_CASE("orthonormal rows") {
    Rng rng(11);
    Matrix W = rng.orthonormal_rows(3, 7);
    CHECK((W * W.transpose() - Matrix::Identity(3, 3)).norm() < 1e-12);
}

TEST_CASE("poly roots and reconstruction") {
    // (s+1)(s+2)(s^2+2s+5): roots -1, -2, -1+-2i
    Poly p = Poly({1.0, 1.0}) * Poly({2.0, 1.0}) * Poly({5.0, 2.0, 1.0});
    auto roots = p.roots();
    REQUIRE(roots.size() == 4);
    std::vector<double> re;
    for (auto r : roots) re.push_back(r.real());
    std::sort(re.begin(), re.end());
    CHECK(re[0] == doctest::Approx(-2.0));
    Poly q = Poly::from_roots(roots, p.lead());
    for (int i = 0; i <= p.degree(); ++i) CHECK(q.coeff(i) == doctest::Approx(p.coeff(i)).epsilon(1e-9));
}

TEST_CASE("faddeev-leverrier matches eigenvalue char poly") {
    Rng rng(3);
    Matrix A = rng.gaussian_matrix(5, 5);
    CharPolyAdjugate fl = charpoly_adjugate(A);
    // charpoly evaluated at eigenvalues must vanish
    Eigen::EigenSolver<Matrix> es(A, false);
    for (Index i = 0; i < 5; ++i)
        CHECK(std::abs(fl.charpoly.eval(Complex(es.eigenvalues()(i)))) < 1e-8);
    // adj(sI - A) * (sI - A) = charpoly(s) I at a sample point
    Complex s(0.37, 1.1);
    CMatrix adj = CMatrix::Zero(5, 5);
    for (int q = 0; q < 5; ++q) adj += std::pow(s, q) * fl.adj[static_cast<size_t>(q)].cast<Complex>();
    CMatrix lhs = adj * (s * CMatrix::Identity(5, 5) - A.cast<Complex>());
    CMatrix rhs = fl.charpoly.eval(s) * CMatrix::Identity(5, 5);
    CHECK((lhs - rhs).norm() < 1e-8 * rhs.norm());
}

TEST_CASE("rational simplification cancels shared roots") {
    Poly shared({3.0, 1.0});  // s + 3
    RationalFunction rf{Poly({2.0, 1.0}) * shared, Poly({5.0, 1.0}) * shared};
    RationalFunction s = rf.simplified();
    CHECK(s.num.degree() == 1);
    CHECK(s.den.degree() == 1);
    CHECK(std::abs(s.eval(Complex(0.3, 0.2)) - rf.eval(Complex(0.3, 0.2))) < 1e-10);
    CHECK(s.den.lead() == doctest::Approx(1.0));
}

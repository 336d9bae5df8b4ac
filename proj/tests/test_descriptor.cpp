#include "cpsa/descriptor.hpp"
#include "cpsa/kron.hpp"
#include "cpsa/models.hpp"

#include <doctest.h>

#include "support.hpp"

using namespace cpsa;
using namespace cpsa::testing;

TEST_CASE("canonical attack form layout") {
    Matrix E = Matrix::Identity(1, 1), A(1, 1), C(1, 1);
    A << -1;
    C << 1;
    DescriptorSystem sys = canonical_attack_form(E, A, C);
    CHECK(sys.m() == 2);
    CHECK(sys.B(0, 0) == 1.0);
    CHECK(sys.B(0, 1) == 0.0);
    CHECK(sys.D(0, 0) == 0.0);
    CHECK(sys.D(0, 1) == 1.0);
    CHECK(sys.is_canonical_attack_form());
}

TEST_CASE("wssc demo is a 12-state 2-output canonical system") {
    PowerModel model = wssc_demo(WsscOutputs::Delta1Omega1);
    CHECK(model.sys.n() == 12);
    CHECK(model.sys.p() == 2);
    CHECK(model.sys.m() == 14);
    CHECK(model.sys.is_canonical_attack_form());
}

TEST_CASE("construction imposes no pencil condition") {
    Matrix E = Matrix::Zero(2, 2);
    Matrix A = Matrix::Zero(2, 2);
    Matrix C = Matrix::Identity(1, 2);
    DescriptorSystem sys = canonical_attack_form(E, A, C);  // accepted
    CHECK_FALSE(check_regular(sys));
}

TEST_CASE("dimension mismatches are rejected") {
    CHECK_THROWS_AS(canonical_attack_form(Matrix::Zero(2, 3), Matrix::Zero(2, 2), Matrix::Zero(1, 2)),
                    DimensionError);
    CHECK_THROWS_AS(canonical_attack_form(Matrix::Zero(2, 2), Matrix::Zero(3, 3), Matrix::Zero(1, 2)),
                    DimensionError);
    CHECK_THROWS_AS(canonical_attack_form(Matrix::Zero(2, 2), Matrix::Zero(2, 2), Matrix::Zero(1, 3)),
                    DimensionError);
}

TEST_CASE("regularity: nonsingular E is always regular") {
    Rng rng(5);
    Matrix A = rng.gaussian_matrix(4, 4);
    CHECK(check_regular(Matrix::Identity(4, 4), A));
}

TEST_CASE("regularity: zero pencil is singular") {
    CHECK_FALSE(check_regular(Matrix::Zero(1, 1), Matrix::Zero(1, 1)));
}

TEST_CASE("wssc pencil regular, against the determinant-polynomial oracle") {
    PowerModel model = wssc_demo(WsscOutputs::Delta1Omega1);
    CHECK(check_regular(model.sys));
    Poly det = pencil_det_poly(model.sys.E, model.sys.A);
    CHECK(det.degree() >= 0);  // not identically zero
    double mag = 0.0;
    for (double c : det.coeffs()) mag = std::max(mag, std::abs(c));
    CHECK(mag > 1e-12);
}

TEST_CASE("regularity verdict invariant under left scaling") {
    Rng rng(21);
    DescriptorSystem sys = random_index_one(rng, 3, 2, 2);
    const bool base = check_regular(sys);
    for (int t = 0; t < 50; ++t) {
        Matrix T = rng.gaussian_matrix(5, 5);
        while (numeric_rank(T).rank < 5) T = rng.gaussian_matrix(5, 5);
        CHECK(check_regular(Matrix(T * sys.E), Matrix(T * sys.A)) == base);
    }
}

TEST_CASE("partition: nonsingular E is all dynamic") {
    Rng rng(9);
    Matrix A = rng.gaussian_matrix(3, 3);
    DescriptorSystem sys = canonical_attack_form(Matrix::Identity(3, 3), A, Matrix::Identity(1, 3));
    StatePartition part = partition_index_one(sys);
    CHECK(part.n1() == 3);
    CHECK(part.n2() == 0);
    CHECK(part.certified_index_one);
    CHECK_FALSE(part.transformed);
}

TEST_CASE("partition: wssc splits into machine and bus states") {
    PowerModel model = wssc_demo(WsscOutputs::Delta1Omega1);
    StatePartition part = partition_index_one(model.sys);
    REQUIRE(part.n1() == 6);
    REQUIRE(part.n2() == 6);
    for (Index i = 0; i < 6; ++i) {
        CHECK(part.dynamic[static_cast<size_t>(i)] == i);
        CHECK(part.algebraic[static_cast<size_t>(i)] == i + 6);
    }
    // A22 = -Lll is negative definite for a connected graph
    Matrix Ab = part.blocked(model.sys.A);
    Matrix A22 = Ab.bottomRightCorner(6, 6);
    Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix(0.5 * (A22 + A22.transpose())));
    CHECK(es.eigenvalues().maxCoeff() < 0.0);
}

TEST_CASE("partition: general E goes through a rank factorization") {
    Matrix E(2, 2), A = Matrix::Identity(2, 2);
    E << 1, 1, 0, 0;
    DescriptorSystem sys = canonical_attack_form(E, A, Matrix::Identity(1, 2));
    StatePartition part = partition_index_one(sys);
    CHECK(part.transformed);
    CHECK(part.n1() == 1);
    CHECK(part.n2() == 1);
    // round trip: T_left^T * blocked * T_right^T reproduces the originals
    Matrix Eb = part.blocked(sys.E);
    Matrix Ab = part.blocked(sys.A);
    CHECK((part.T_left.transpose() * Eb * part.T_right.transpose() - sys.E).norm() <
          1e-12 * (1 + sys.E.norm()));
    CHECK((part.T_left.transpose() * Ab * part.T_right.transpose() - sys.A).norm() <
          1e-12 * (1 + sys.A.norm()));
    CHECK(Eb.bottomRows(1).norm() < 1e-12);
    CHECK(Eb.rightCols(1).norm() < 1e-12);
}

TEST_CASE("partition round trip on random blocked systems") {
    Rng rng(33);
    for (int t = 0; t < 10; ++t) {
        DescriptorSystem sys = random_index_one(rng, 3, 2, 2);
        StatePartition part = partition_index_one(sys);
        Matrix Eb = part.blocked(sys.E);
        Matrix Ab = part.blocked(sys.A);
        Matrix E_back = part.T_left.transpose().partialPivLu().solve(Eb) ;
        // permutation path: T_left orthogonal, reconstruct directly
        CHECK((part.T_left.transpose() * Eb * part.T_right.transpose() - sys.E).norm() <
              1e-12 * (1 + sys.E.norm()));
        CHECK((part.T_left.transpose() * Ab * part.T_right.transpose() - sys.A).norm() <
              1e-12 * (1 + sys.A.norm()));
        (void)E_back;
    }
}

TEST_CASE("index-two systems are rejected") {
    // E nilpotent block with A22 singular after partition
    Matrix E(2, 2), A(2, 2);
    E << 0, 1, 0, 0;  // not zero-row/col separable, rank 1
    A << 1, 0, 0, 0;  // A22 in transformed coordinates is singular
    DescriptorSystem sys = canonical_attack_form(E, A, Matrix::Identity(1, 2));
    if (check_regular(sys)) CHECK_THROWS_AS(partition_index_one(sys), NotIndexOneError);
}

TEST_CASE("signature selects columns and classifies channels") {
    PowerModel model = wssc_demo(WsscOutputs::Delta1Omega1);
    AttackSignature sig = signature(model.sys, AttackSet::of({8, 9}));
    CHECK(sig.B_K.col(0) == Vector(Vector::Unit(12, 7)));
    CHECK(sig.B_K.col(1) == Vector(Vector::Unit(12, 8)));
    CHECK(sig.D_K.norm() == 0.0);
    CHECK(sig.is_state_attack[0]);
    CHECK(sig.is_state_attack[1]);

    AttackSignature out = signature(model.sys, AttackSet::of({13}));
    CHECK(out.D_K.col(0) == Vector(Vector::Unit(2, 0)));
    CHECK_FALSE(out.is_state_attack[0]);

    AttackSignature empty = signature(model.sys, AttackSet{});
    CHECK(empty.B_K.cols() == 0);

    CHECK_THROWS_AS(signature(model.sys, AttackSet::of({15})), DimensionError);
}

TEST_CASE("signature columns span |K| dimensions in canonical form") {
    Rng rng(14);
    DescriptorSystem sys = random_index_one(rng, 3, 2, 3);
    for (int t = 0; t < 10; ++t) {
        AttackSet K = random_attack_set(rng, sys.n(), sys.p(), 4);
        AttackSignature sig = signature(sys, K);
        Matrix stacked(sys.n() + sys.p(), 4);
        stacked << sig.B_K, sig.D_K;
        CHECK(numeric_rank(stacked).rank == 4);
    }
}

TEST_CASE("attack sets validate their indices") {
    CHECK_THROWS_AS(AttackSet::of({2, 2}), DimensionError);
    CHECK_THROWS_AS(AttackSet::of({0}), DimensionError);
    CHECK(AttackSet::of({3, 1}).indices == std::vector<int>{1, 3});
}

TEST_CASE("consistent initials") {
    Rng rng(8);
    SUBCASE("nonsingular E accepts everything") {
        DescriptorSystem sys = random_index_one(rng, 4, 0, 2);
        CHECK(check_consistent_initial(sys, rng.gaussian_vector(4), rng.gaussian_vector(6)));
    }
    SUBCASE("algebraic constraint decides") {
        DescriptorSystem sys = random_index_one(rng, 3, 2, 2);
        StatePartition part = partition_index_one(sys);
        Matrix Ab = part.blocked(sys.A);
        Matrix A21 = Ab.bottomLeftCorner(2, 3);
        Matrix A22 = Ab.bottomRightCorner(2, 2);
        Vector x1 = rng.gaussian_vector(3);
        Vector u0 = Vector::Zero(sys.m());
        Vector x2 = -A22.partialPivLu().solve(A21 * x1);
        Vector x0(5);
        x0 << x1, x2;  // blocked == original here (permutation is identity)
        CHECK(check_consistent_initial(sys, x0, u0));
        x0(3) += 1.0;
        CHECK_FALSE(check_consistent_initial(sys, x0, u0));
    }
}
